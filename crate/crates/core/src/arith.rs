//! Integer helpers shared by the ring implementations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Removes from `x` every prime factor it shares with `a`.
///
/// Returns the largest divisor of `x` coprime to `a`. `strip_common(x, 0)` is 1.
pub fn strip_common(x: &BigInt, a: &BigInt) -> BigInt {
    let mut rest = x.abs();
    if rest.is_zero() {
        return rest;
    }
    loop {
        let g = rest.gcd(a);
        if g.is_one() {
            return rest;
        }
        rest /= &g;
    }
}

/// Product of the distinct primes dividing `a` (by trial division). `radical(0) = 0`.
pub fn radical(a: &BigInt) -> BigInt {
    let mut rest = a.abs();
    if rest.is_zero() {
        return rest;
    }
    let mut rad = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        if (&rest % &p).is_zero() {
            rad *= &p;
            while (&rest % &p).is_zero() {
                rest /= &p;
            }
        }
        p += 1;
    }
    if rest > BigInt::one() {
        rad *= rest;
    }
    rad
}

/// `true` when every prime factor of `x` divides `r`.
pub fn primes_divide(x: &BigInt, r: &BigInt) -> bool {
    !x.is_zero() && strip_common(x, r).is_one()
}

/// Inverse of `x` modulo `m`, if it exists. Every residue is invertible mod 1.
pub fn mod_inverse(x: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = x.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Solves `x = a (mod m)`, `x = b (mod n)` for possibly non-coprime moduli.
///
/// Returns the solution modulo `lcm(m, n)`, or `None` when `a` and `b`
/// disagree modulo `gcd(m, n)`.
pub fn crt_pair(a: &BigInt, m: &BigInt, b: &BigInt, n: &BigInt) -> Option<BigInt> {
    let e = m.extended_gcd(n);
    let g = e.gcd;
    let diff = b - a;
    if !(&diff % &g).is_zero() {
        return None;
    }
    let l = m / &g * n;
    // x = a + m * ((b - a)/g * inv(m/g mod n/g))
    let x = a + m * (&diff / &g * e.x);
    Some(x.mod_floor(&l))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn radicals() {
        assert_eq!(radical(&b(12)), b(6));
        assert_eq!(radical(&b(-36)), b(6));
        assert_eq!(radical(&b(1)), b(1));
        assert_eq!(radical(&b(97)), b(97));
        assert_eq!(radical(&b(0)), b(0));
    }

    #[test]
    fn stripping() {
        assert_eq!(strip_common(&b(12), &b(3)), b(4));
        assert_eq!(strip_common(&b(12), &b(2)), b(3));
        assert_eq!(strip_common(&b(12), &b(6)), b(1));
        assert_eq!(strip_common(&b(12), &b(0)), b(1));
        assert!(primes_divide(&b(-8), &b(6)));
        assert!(!primes_divide(&b(10), &b(6)));
    }

    #[test]
    fn crt_non_coprime() {
        assert_eq!(crt_pair(&b(1), &b(4), &b(2), &b(3)), Some(b(5)));
        assert_eq!(crt_pair(&b(1), &b(6), &b(3), &b(4)), Some(b(7)));
        assert_eq!(crt_pair(&b(1), &b(6), &b(2), &b(4)), None);
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(&b(5), &b(12)), Some(b(5)));
        assert_eq!(mod_inverse(&b(4), &b(12)), None);
        assert_eq!(mod_inverse(&b(7), &b(1)), Some(b(0)));
    }
}
