//! Commutative unital rings with exact arithmetic and canonical element forms.
//!
//! A [`Ring`] is a cheap, shareable descriptor. Elements are bare [`Elem`]
//! payloads interpreted by the ring that owns them; [`RingElement`] pairs the
//! two for callers that want mixed-ring checks on every operation.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::FreeRankNAlgebra;
use crate::arith;
use crate::error::{Error, Result};
use crate::hom::RingHom;
use crate::poly::{Monomial, Poly};

/// Upper bound on the size of a ring that [`Ring::elements`] will enumerate.
pub const ENUMERATION_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    /// Integers, and residues in `[0, m)` for `Z/m`.
    Int(BigInt),
    /// `num / radical^exp` in `Z[1/radical]` with `exp` minimal.
    Frac { num: BigInt, exp: u32 },
    Poly(Poly),
    /// Components of a product ring.
    Tuple(Vec<Elem>),
    /// Coordinates in the basis of a free algebra.
    Coords(Vec<Elem>),
}

#[derive(Debug, PartialEq, Eq)]
pub enum RingKind {
    Integers,
    Modular(BigInt),
    Polynomial { base: Ring, vars: Vec<String> },
    Product(Vec<Ring>),
    /// `Z[1/radical]` with `radical > 1` squarefree.
    Fractions { radical: BigInt },
    /// Localization at an idempotent `e`, realized as the ideal `eR` with unit `e`.
    Idempotent { base: Ring, idempotent: Elem },
    /// A free algebra viewed as a ring in its own right.
    Algebra(Arc<FreeRankNAlgebra>),
}

#[derive(Clone)]
pub struct Ring(Arc<RingKind>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({self})")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            RingKind::Integers => f.write_str("Z"),
            RingKind::Modular(m) => write!(f, "Z/{m}"),
            RingKind::Polynomial { base, vars } => write!(f, "{base}[{}]", vars.join(",")),
            RingKind::Product(fs) => {
                f.write_str("(")?;
                for (i, r) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" x ")?;
                    }
                    write!(f, "{r}")?;
                }
                f.write_str(")")
            }
            RingKind::Fractions { radical } => write!(f, "Z[1/{radical}]"),
            RingKind::Idempotent { base, idempotent } => {
                write!(f, "{base}_{{{idempotent:?}}}")
            }
            RingKind::Algebra(a) => write!(f, "Alg{}({})", a.rank(), a.base()),
        }
    }
}

fn int(x: &Elem) -> &BigInt {
    match x {
        Elem::Int(v) => v,
        other => panic!("expected an integer payload, got {other:?}"),
    }
}

fn frac(x: &Elem) -> (&BigInt, u32) {
    match x {
        Elem::Frac { num, exp } => (num, *exp),
        other => panic!("expected a fraction payload, got {other:?}"),
    }
}

fn poly(x: &Elem) -> &Poly {
    match x {
        Elem::Poly(p) => p,
        other => panic!("expected a polynomial payload, got {other:?}"),
    }
}

fn parts(x: &Elem) -> &[Elem] {
    match x {
        Elem::Tuple(v) | Elem::Coords(v) => v,
        other => panic!("expected a tuple payload, got {other:?}"),
    }
}

impl Ring {
    fn from_kind(kind: RingKind) -> Ring {
        Ring(Arc::new(kind))
    }

    pub fn kind(&self) -> &RingKind {
        &self.0
    }

    pub fn integers() -> Ring {
        Ring::from_kind(RingKind::Integers)
    }

    /// `Z/m`. The modulus 1 gives the zero ring.
    pub fn modular(m: impl Into<BigInt>) -> Result<Ring> {
        let m = m.into();
        if m < BigInt::one() {
            return Err(Error::InvalidRing(format!("modulus {m} must be positive")));
        }
        Ok(Ring::from_kind(RingKind::Modular(m)))
    }

    pub fn product(factors: Vec<Ring>) -> Result<Ring> {
        if factors.is_empty() {
            return Err(Error::InvalidRing("a product needs at least one factor".into()));
        }
        Ok(Ring::from_kind(RingKind::Product(factors)))
    }

    pub fn algebra(alg: Arc<FreeRankNAlgebra>) -> Ring {
        Ring::from_kind(RingKind::Algebra(alg))
    }

    /// `base[names]`. Names must be distinct and unused anywhere in `base`.
    pub fn adjoin_variables(&self, names: &[&str]) -> Result<Ring> {
        let mut vars: Vec<String> = Vec::with_capacity(names.len());
        for &n in names {
            if self.uses_variable(n) || vars.iter().any(|v| v == n) {
                return Err(Error::VariableInUse(n.to_string()));
            }
            vars.push(n.to_string());
        }
        if vars.is_empty() {
            return Err(Error::InvalidRing("no variables to adjoin".into()));
        }
        Ok(Ring::from_kind(RingKind::Polynomial { base: self.clone(), vars }))
    }

    /// Whether `name` is a variable of this ring or of any ring it is built from.
    pub fn uses_variable(&self, name: &str) -> bool {
        match self.kind() {
            RingKind::Integers | RingKind::Modular(_) | RingKind::Fractions { .. } => false,
            RingKind::Polynomial { base, vars } => {
                vars.iter().any(|v| v == name) || base.uses_variable(name)
            }
            RingKind::Product(fs) => fs.iter().any(|f| f.uses_variable(name)),
            RingKind::Idempotent { base, .. } => base.uses_variable(name),
            RingKind::Algebra(a) => a.base().uses_variable(name),
        }
    }

    /// A variable name of the form `{stem}{k}` not used by this ring.
    pub fn fresh_variable(&self, stem: &str) -> String {
        (0..)
            .map(|k| format!("{stem}{k}"))
            .find(|n| !self.uses_variable(n))
            .expect("unbounded search")
    }

    pub fn is_zero_ring(&self) -> bool {
        self.is_zero(&self.one())
    }

    // ---- constants -------------------------------------------------------

    pub fn zero(&self) -> Elem {
        match self.kind() {
            RingKind::Integers | RingKind::Modular(_) => Elem::Int(BigInt::zero()),
            RingKind::Fractions { .. } => Elem::Frac { num: BigInt::zero(), exp: 0 },
            RingKind::Polynomial { .. } => Elem::Poly(Poly::zero()),
            RingKind::Product(fs) => Elem::Tuple(fs.iter().map(Ring::zero).collect()),
            RingKind::Idempotent { base, .. } => base.zero(),
            RingKind::Algebra(a) => Elem::Coords(vec![a.base().zero(); a.rank()]),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_bigint(&BigInt::one())
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        self.from_bigint(&BigInt::from(v))
    }

    /// Image of an integer under the canonical map `Z -> self`.
    pub fn from_bigint(&self, v: &BigInt) -> Elem {
        match self.kind() {
            RingKind::Integers => Elem::Int(v.clone()),
            RingKind::Modular(m) => Elem::Int(v.mod_floor(m)),
            RingKind::Fractions { .. } => Elem::Frac { num: v.clone(), exp: 0 },
            RingKind::Polynomial { base, vars } => {
                Elem::Poly(Poly::constant(base, vars.len(), base.from_bigint(v)))
            }
            RingKind::Product(fs) => Elem::Tuple(fs.iter().map(|f| f.from_bigint(v)).collect()),
            RingKind::Idempotent { base, idempotent } => base.mul(idempotent, &base.from_bigint(v)),
            RingKind::Algebra(a) => {
                let base = a.base();
                let s = base.from_bigint(v);
                Elem::Coords(a.unit().iter().map(|u| base.mul(u, &s)).collect())
            }
        }
    }

    // ---- arithmetic ------------------------------------------------------

    pub fn add(&self, x: &Elem, y: &Elem) -> Elem {
        match self.kind() {
            RingKind::Integers => Elem::Int(int(x) + int(y)),
            RingKind::Modular(m) => Elem::Int((int(x) + int(y)).mod_floor(m)),
            RingKind::Fractions { radical } => {
                let (a, i) = frac(x);
                let (b, j) = frac(y);
                let k = i.max(j);
                let num = a * radical.pow(k - i) + b * radical.pow(k - j);
                normalize_frac(num, k, radical)
            }
            RingKind::Polynomial { base, .. } => Elem::Poly(poly(x).add(poly(y), base)),
            RingKind::Product(fs) => Elem::Tuple(
                fs.iter()
                    .zip(parts(x).iter().zip(parts(y)))
                    .map(|(f, (a, b))| f.add(a, b))
                    .collect(),
            ),
            RingKind::Idempotent { base, .. } => base.add(x, y),
            RingKind::Algebra(a) => {
                let base = a.base();
                Elem::Coords(
                    parts(x)
                        .iter()
                        .zip(parts(y))
                        .map(|(p, q)| base.add(p, q))
                        .collect(),
                )
            }
        }
    }

    pub fn neg(&self, x: &Elem) -> Elem {
        match self.kind() {
            RingKind::Integers => Elem::Int(-int(x)),
            RingKind::Modular(m) => Elem::Int((-int(x)).mod_floor(m)),
            RingKind::Fractions { .. } => {
                let (a, i) = frac(x);
                Elem::Frac { num: -a, exp: i }
            }
            RingKind::Polynomial { base, .. } => Elem::Poly(poly(x).neg(base)),
            RingKind::Product(fs) => {
                Elem::Tuple(fs.iter().zip(parts(x)).map(|(f, a)| f.neg(a)).collect())
            }
            RingKind::Idempotent { base, .. } => base.neg(x),
            RingKind::Algebra(a) => {
                let base = a.base();
                Elem::Coords(parts(x).iter().map(|p| base.neg(p)).collect())
            }
        }
    }

    pub fn sub(&self, x: &Elem, y: &Elem) -> Elem {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        match self.kind() {
            RingKind::Integers => Elem::Int(int(x) * int(y)),
            RingKind::Modular(m) => Elem::Int((int(x) * int(y)).mod_floor(m)),
            RingKind::Fractions { radical } => {
                let (a, i) = frac(x);
                let (b, j) = frac(y);
                normalize_frac(a * b, i + j, radical)
            }
            RingKind::Polynomial { base, .. } => Elem::Poly(poly(x).mul(poly(y), base)),
            RingKind::Product(fs) => Elem::Tuple(
                fs.iter()
                    .zip(parts(x).iter().zip(parts(y)))
                    .map(|(f, (a, b))| f.mul(a, b))
                    .collect(),
            ),
            RingKind::Idempotent { base, .. } => base.mul(x, y),
            RingKind::Algebra(a) => Elem::Coords(a.mul_coords(parts(x), parts(y))),
        }
    }

    pub fn pow(&self, x: &Elem, mut e: u64) -> Elem {
        let mut acc = self.one();
        let mut sq = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    pub fn sum<'a>(&self, xs: impl IntoIterator<Item = &'a Elem>) -> Elem {
        xs.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    pub fn is_zero(&self, x: &Elem) -> bool {
        *x == self.zero()
    }

    pub fn is_one(&self, x: &Elem) -> bool {
        *x == self.one()
    }

    // ---- units -----------------------------------------------------------

    pub fn is_unit(&self, x: &Elem) -> bool {
        match self.kind() {
            RingKind::Integers => int(x).abs().is_one(),
            RingKind::Modular(m) => int(x).gcd(m).is_one(),
            RingKind::Fractions { radical } => arith::primes_divide(frac(x).0, radical),
            RingKind::Polynomial { base, vars } => {
                let p = poly(x);
                let unit_const = base.is_unit(&p.constant_term(base, vars.len()));
                unit_const
                    && p.terms()
                        .filter(|(m, _)| !m.is_one())
                        .all(|(_, c)| base.is_nilpotent(c))
            }
            RingKind::Product(fs) => fs.iter().zip(parts(x)).all(|(f, a)| f.is_unit(a)),
            RingKind::Idempotent { base, idempotent } => {
                base.is_unit(&base.add(x, &base.sub(&base.one(), idempotent)))
            }
            RingKind::Algebra(a) => a.base().is_unit(&a.norm(parts(x))),
        }
    }

    pub fn inverse(&self, x: &Elem) -> Result<Elem> {
        if !self.is_unit(x) {
            return Err(Error::NotAUnit);
        }
        Ok(match self.kind() {
            RingKind::Integers => x.clone(),
            RingKind::Modular(m) => Elem::Int(arith::mod_inverse(int(x), m).ok_or(Error::NotAUnit)?),
            RingKind::Fractions { radical } => {
                let (num, exp) = frac(x);
                let mag = num.abs();
                let mut k = 0u32;
                let mut rk = BigInt::one();
                while !(&rk % &mag).is_zero() {
                    rk *= radical;
                    k += 1;
                }
                let sign = if num.is_negative() { -BigInt::one() } else { BigInt::one() };
                normalize_frac(sign * (rk / mag) * radical.pow(exp), k, radical)
            }
            RingKind::Polynomial { base, vars } => {
                // x = a0 (1 + n) with n nilpotent, so x^-1 = a0^-1 * sum (-n)^k.
                let a0 = poly(x).constant_term(base, vars.len());
                let a0_inv = self.embed_constant(&base.inverse(&a0)?);
                let nil = self.sub(&self.mul(x, &a0_inv), &self.one());
                let step = self.neg(&nil);
                let mut term = self.one();
                let mut acc = self.zero();
                while !self.is_zero(&term) {
                    acc = self.add(&acc, &term);
                    term = self.mul(&term, &step);
                }
                self.mul(&acc, &a0_inv)
            }
            RingKind::Product(fs) => Elem::Tuple(
                fs.iter()
                    .zip(parts(x))
                    .map(|(f, a)| f.inverse(a))
                    .collect::<Result<_>>()?,
            ),
            RingKind::Idempotent { base, idempotent } => {
                let lifted = base.add(x, &base.sub(&base.one(), idempotent));
                base.mul(idempotent, &base.inverse(&lifted)?)
            }
            RingKind::Algebra(a) => Elem::Coords(a.inverse_coords(parts(x))?),
        })
    }

    /// Decides nilpotence exactly for every ring kind.
    pub fn is_nilpotent(&self, x: &Elem) -> bool {
        match self.kind() {
            RingKind::Integers => int(x).is_zero(),
            RingKind::Modular(m) => {
                // every prime exponent of m is at most its bit length
                let e = m.bits().max(1) as u32;
                (int(x).pow(e) % m).is_zero()
            }
            RingKind::Fractions { .. } => frac(x).0.is_zero(),
            RingKind::Polynomial { base, .. } => poly(x).terms().all(|(_, c)| base.is_nilpotent(c)),
            RingKind::Product(fs) => fs.iter().zip(parts(x)).all(|(f, a)| f.is_nilpotent(a)),
            RingKind::Idempotent { base, .. } => base.is_nilpotent(x),
            RingKind::Algebra(a) => {
                // nilpotent iff every non-leading characteristic coefficient is
                let coeffs = a
                    .char_poly_coeffs(parts(x))
                    .expect("characteristic polynomial of a valid element");
                coeffs[..a.rank()].iter().all(|c| a.base().is_nilpotent(c))
            }
        }
    }

    // ---- membership & enumeration -----------------------------------------

    /// Checks that `x` is a canonical payload for this ring.
    pub fn contains(&self, x: &Elem) -> bool {
        match (self.kind(), x) {
            (RingKind::Integers, Elem::Int(_)) => true,
            (RingKind::Modular(m), Elem::Int(v)) => !v.is_negative() && v < m,
            (RingKind::Fractions { radical }, Elem::Frac { num, exp }) => {
                (*exp == 0 || !(num % radical).is_zero()) && !(num.is_zero() && *exp > 0)
            }
            (RingKind::Polynomial { base, vars }, Elem::Poly(p)) => p
                .terms()
                .all(|(m, c)| m.0.len() == vars.len() && base.contains(c) && !base.is_zero(c)),
            (RingKind::Product(fs), Elem::Tuple(v)) => {
                fs.len() == v.len() && fs.iter().zip(v).all(|(f, a)| f.contains(a))
            }
            (RingKind::Idempotent { base, idempotent }, _) => {
                base.contains(x) && base.mul(idempotent, x) == *x
            }
            (RingKind::Algebra(a), Elem::Coords(v)) => {
                v.len() == a.rank() && v.iter().all(|c| a.base().contains(c))
            }
            _ => false,
        }
    }

    pub fn check(&self, x: &Elem) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::MixedRings)
        }
    }

    /// Number of elements, or `None` for infinite rings.
    pub fn cardinality(&self) -> Option<BigInt> {
        match self.kind() {
            RingKind::Integers | RingKind::Fractions { .. } => None,
            RingKind::Modular(m) => Some(m.clone()),
            RingKind::Polynomial { base, .. } => {
                if base.is_zero_ring() {
                    Some(BigInt::one())
                } else {
                    None
                }
            }
            RingKind::Product(fs) => fs
                .iter()
                .map(Ring::cardinality)
                .try_fold(BigInt::one(), |acc, c| c.map(|c| acc * c)),
            RingKind::Idempotent { .. } => {
                self.elements_uncapped().map(|v| BigInt::from(v.len()))
            }
            RingKind::Algebra(a) => a.base().cardinality().map(|c| c.pow(a.rank() as u32)),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.cardinality().is_some()
    }

    /// All elements of a finite ring.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        match self.cardinality() {
            None => Err(Error::InfiniteRing),
            Some(c) if c > BigInt::from(ENUMERATION_CAP) => Err(Error::InfiniteRing),
            Some(_) => self.elements_uncapped().ok_or(Error::InfiniteRing),
        }
    }

    fn elements_uncapped(&self) -> Option<Vec<Elem>> {
        match self.kind() {
            RingKind::Integers | RingKind::Fractions { .. } => None,
            RingKind::Modular(m) => {
                let m = m.to_usize().filter(|&m| m <= ENUMERATION_CAP)?;
                Some((0..m).map(|v| Elem::Int(BigInt::from(v))).collect())
            }
            RingKind::Polynomial { base, .. } => {
                base.is_zero_ring().then(|| vec![self.zero()])
            }
            RingKind::Product(fs) => {
                let per: Vec<Vec<Elem>> = fs
                    .iter()
                    .map(|f| f.elements_uncapped())
                    .collect::<Option<_>>()?;
                Some(cartesian(&per).into_iter().map(Elem::Tuple).collect())
            }
            RingKind::Idempotent { base, idempotent } => {
                let mut out: Vec<Elem> = Vec::new();
                for x in base.elements_uncapped()? {
                    let y = base.mul(idempotent, &x);
                    if !out.contains(&y) {
                        out.push(y);
                    }
                }
                Some(out)
            }
            RingKind::Algebra(a) => {
                let per = vec![a.base().elements_uncapped()?; a.rank()];
                Some(cartesian(&per).into_iter().map(Elem::Coords).collect())
            }
        }
    }

    // ---- polynomial rings --------------------------------------------------

    fn poly_parts(&self) -> Result<(&Ring, &[String])> {
        match self.kind() {
            RingKind::Polynomial { base, vars } => Ok((base, vars)),
            _ => Err(Error::InvalidRing(format!("{self} is not a polynomial ring"))),
        }
    }

    /// Embeds an element of the coefficient ring as a constant polynomial.
    pub fn embed(&self, x: &Elem) -> Result<Elem> {
        let (base, _) = self.poly_parts()?;
        base.check(x)?;
        Ok(self.embed_constant(x))
    }

    fn embed_constant(&self, x: &Elem) -> Elem {
        let RingKind::Polynomial { base, vars } = self.kind() else {
            panic!("embed_constant on {self}");
        };
        Elem::Poly(Poly::constant(base, vars.len(), x.clone()))
    }

    pub fn variable(&self, name: &str) -> Result<Elem> {
        let (base, vars) = self.poly_parts()?;
        let i = self.variable_index(name)?;
        Ok(Elem::Poly(Poly::from_terms(base, [(Monomial::var(vars.len(), i), base.one())])))
    }

    pub fn variable_index(&self, name: &str) -> Result<usize> {
        let (_, vars) = self.poly_parts()?;
        vars.iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Coefficient of the monomial with the given exponents.
    pub fn coefficient(&self, p: &Elem, exps: &[u32]) -> Result<Elem> {
        let (base, vars) = self.poly_parts()?;
        if exps.len() != vars.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} exponents for {} variables",
                exps.len(),
                vars.len()
            )));
        }
        Ok(poly(p)
            .coefficient(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| base.zero()))
    }

    /// Evaluates every variable; the result lies in the coefficient ring.
    pub fn specialize(&self, p: &Elem, assignment: &[(&str, Elem)]) -> Result<Elem> {
        let (base, vars) = self.poly_parts()?;
        for (name, v) in assignment {
            if !vars.iter().any(|x| x == name) {
                return Err(Error::UnknownVariable(name.to_string()));
            }
            base.check(v)?;
        }
        let values: Vec<Elem> = vars
            .iter()
            .map(|v| {
                assignment
                    .iter()
                    .find(|(n, _)| n == v)
                    .map(|(_, e)| e.clone())
                    .ok_or_else(|| Error::UnassignedVariable(v.clone()))
            })
            .collect::<Result<_>>()?;
        Ok(self.evaluate_into(p, base, &values, |c| c.clone()))
    }

    /// Evaluates a polynomial of this ring into `target`, mapping
    /// coefficients with `coeff_map` and variable `i` to `values[i]`.
    pub(crate) fn evaluate_into(
        &self,
        p: &Elem,
        target: &Ring,
        values: &[Elem],
        coeff_map: impl Fn(&Elem) -> Elem,
    ) -> Elem {
        let mut acc = target.zero();
        for (m, c) in poly(p).terms() {
            let mut term = coeff_map(c);
            for (v, &e) in values.iter().zip(&m.0) {
                if e > 0 {
                    term = target.mul(&term, &target.pow(v, e as u64));
                }
            }
            acc = target.add(&acc, &term);
        }
        acc
    }

    /// Divides `p` by the named variable, failing if any term lacks it.
    pub fn exact_divide_by_variable(&self, p: &Elem, name: &str) -> Result<Elem> {
        let (base, _) = self.poly_parts()?;
        let i = self.variable_index(name)?;
        let mut terms = Vec::new();
        for (m, c) in poly(p).terms() {
            if m.0[i] == 0 {
                return Err(Error::NotDivisible(name.to_string()));
            }
            let mut e = m.0.clone();
            e[i] -= 1;
            terms.push((Monomial(e), c.clone()));
        }
        Ok(Elem::Poly(Poly::from_terms(base, terms)))
    }

    // ---- localization ------------------------------------------------------

    /// The localization `self_a` together with the canonical map into it.
    ///
    /// Supported: the integers (fractions with powers of `a` in the
    /// denominator), `Z/m` (splits off the part of `m` supported at primes of
    /// `a`), products (componentwise), and inverting a unit or an idempotent
    /// in any ring.
    pub fn localize(&self, a: &Elem) -> Result<(Ring, RingHom)> {
        self.check(a)?;
        let target = if self.is_unit(a) {
            self.clone()
        } else {
            match self.kind() {
                RingKind::Integers => {
                    let r = arith::radical(int(a));
                    if r.is_zero() {
                        Ring::modular(1)?
                    } else {
                        Ring::from_kind(RingKind::Fractions { radical: r })
                    }
                }
                RingKind::Fractions { radical } => {
                    let (num, _) = frac(a);
                    if num.is_zero() {
                        Ring::modular(1)?
                    } else {
                        let r = arith::radical(&(radical * num));
                        Ring::from_kind(RingKind::Fractions { radical: r })
                    }
                }
                RingKind::Modular(m) => Ring::modular(arith::strip_common(m, int(a)))?,
                RingKind::Product(fs) => {
                    let locals = fs
                        .iter()
                        .zip(parts(a))
                        .map(|(f, x)| f.localize(x).map(|(r, _)| r))
                        .collect::<Result<Vec<_>>>()?;
                    Ring::product(locals)?
                }
                RingKind::Idempotent { base, idempotent } if self.mul(a, a) == *a => {
                    debug_assert_eq!(base.mul(idempotent, a), *a);
                    Ring::from_kind(RingKind::Idempotent { base: base.clone(), idempotent: a.clone() })
                }
                _ if self.mul(a, a) == *a => Ring::from_kind(RingKind::Idempotent {
                    base: self.clone(),
                    idempotent: a.clone(),
                }),
                _ => {
                    return Err(Error::LocalizationUnsupported(format!(
                        "cannot invert {a:?} in {self}"
                    )))
                }
            }
        };
        let hom = RingHom::canonical(self, &target)?;
        Ok((target, hom))
    }

    /// Builds a ring directly in the `Z[1/r]` form. `r` must be positive.
    pub fn fractions(inverted: impl Into<BigInt>) -> Result<Ring> {
        Ok(Ring::integers().localize(&Elem::Int(inverted.into()))?.0)
    }
}

fn normalize_frac(mut num: BigInt, mut exp: u32, radical: &BigInt) -> Elem {
    if num.is_zero() {
        return Elem::Frac { num, exp: 0 };
    }
    while exp > 0 && (&num % radical).is_zero() {
        num /= radical;
        exp -= 1;
    }
    Elem::Frac { num, exp }
}

pub(crate) fn make_frac(num: BigInt, exp: u32, radical: &BigInt) -> Elem {
    normalize_frac(num, exp, radical)
}

fn cartesian(per: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = vec![Vec::new()];
    for choices in per {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// An element bundled with its ring; binary operations reject mixed rings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    ring: Ring,
    value: Elem,
}

impl RingElement {
    pub fn new(ring: &Ring, value: Elem) -> Result<Self> {
        ring.check(&value)?;
        Ok(RingElement { ring: ring.clone(), value })
    }

    pub fn zero(ring: &Ring) -> Self {
        RingElement { ring: ring.clone(), value: ring.zero() }
    }

    pub fn one(ring: &Ring) -> Self {
        RingElement { ring: ring.clone(), value: ring.one() }
    }

    pub fn from_i64(ring: &Ring, v: i64) -> Self {
        RingElement { ring: ring.clone(), value: ring.from_i64(v) }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn value(&self) -> &Elem {
        &self.value
    }

    pub fn into_value(self) -> Elem {
        self.value
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::MixedRings)
        }
    }

    fn with(&self, value: Elem) -> Self {
        RingElement { ring: self.ring.clone(), value }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.with(self.ring.add(&self.value, &other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.with(self.ring.sub(&self.value, &other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.with(self.ring.mul(&self.value, &other.value)))
    }

    pub fn neg(&self) -> Self {
        self.with(self.ring.neg(&self.value))
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(&self.value)
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(self.with(self.ring.inverse(&self.value)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: i64) -> Ring {
        Ring::modular(m).unwrap()
    }

    fn i(v: i64) -> Elem {
        Elem::Int(BigInt::from(v))
    }

    #[test]
    fn modular_addition_wraps() {
        let r = z(12);
        assert_eq!(r.add(&i(7), &i(8)), i(3));
    }

    #[test]
    fn zero_absorbs_in_integers() {
        let r = Ring::integers();
        for v in [-17, 0, 3, 1 << 40] {
            assert_eq!(r.mul(&r.zero(), &i(v)), r.zero());
        }
    }

    #[test]
    fn product_componentwise() {
        let r = Ring::product(vec![z(5), z(7)]).unwrap();
        let x = Elem::Tuple(vec![i(2), i(3)]);
        let y = Elem::Tuple(vec![i(4), i(6)]);
        // componentwise: 2*4 = 8 = 3 mod 5, 3*6 = 18 = 4 mod 7
        assert_eq!(r.mul(&x, &y), Elem::Tuple(vec![i(3), i(4)]));
    }

    #[test]
    fn mixed_rings_rejected() {
        let a = RingElement::from_i64(&z(5), 2);
        let b = RingElement::from_i64(&z(7), 2);
        assert_eq!(a.add(&b), Err(Error::MixedRings));
        assert!(RingElement::new(&z(5), i(9)).is_err());
    }

    #[test]
    fn modular_units() {
        let r = z(12);
        assert!(r.is_unit(&i(5)));
        assert_eq!(r.inverse(&i(5)).unwrap(), i(5));
        assert!(!r.is_unit(&i(4)));
        assert_eq!(r.inverse(&i(4)), Err(Error::NotAUnit));
    }

    #[test]
    fn integer_units_are_plus_minus_one() {
        let r = Ring::integers();
        assert!(r.is_unit(&i(-1)));
        assert!(!r.is_unit(&i(2)));
        assert_eq!(r.inverse(&i(2)), Err(Error::NotAUnit));
    }

    #[test]
    fn fractions_units() {
        let r = Ring::fractions(6).unwrap();
        let two = r.from_i64(2);
        assert!(r.is_unit(&two));
        let inv = r.inverse(&two).unwrap();
        assert_eq!(r.mul(&inv, &two), r.one());
        assert!(!r.is_unit(&r.from_i64(10)));
        let x = r.mul(&r.from_i64(-12), &r.inverse(&r.from_i64(9)).unwrap());
        assert!(r.is_unit(&x));
        assert_eq!(r.mul(&x, &r.inverse(&x).unwrap()), r.one());
    }

    #[test]
    fn fraction_canonical_form() {
        let r = Ring::fractions(6).unwrap();
        let sixth = r.inverse(&r.from_i64(6)).unwrap();
        assert_eq!(sixth, Elem::Frac { num: BigInt::one(), exp: 1 });
        // 6 * (1/6) normalizes back to exponent zero
        assert_eq!(r.mul(&sixth, &r.from_i64(6)), Elem::Frac { num: BigInt::one(), exp: 0 });
        // 1/2 = 3/6
        let half = r.inverse(&r.from_i64(2)).unwrap();
        assert_eq!(half, Elem::Frac { num: BigInt::from(3), exp: 1 });
    }

    #[test]
    fn zero_ring_everywhere() {
        let r = z(1);
        assert_eq!(r.one(), r.zero());
        assert!(r.is_unit(&r.zero()));
        assert_eq!(r.inverse(&r.zero()).unwrap(), r.zero());
        assert_eq!(r.elements().unwrap().len(), 1);
        let p = r.adjoin_variables(&["x"]).unwrap();
        assert_eq!(p.variable("x").unwrap(), p.zero());
    }

    #[test]
    fn adjoin_embed_specialize() {
        let base = z(5);
        let p = base.adjoin_variables(&["l"]).unwrap();
        let three = p.embed(&i(3)).unwrap();
        assert_eq!(p.specialize(&three, &[("l", i(2))]).unwrap(), i(3));

        let zz = Ring::integers();
        let q = zz.adjoin_variables(&["l"]).unwrap();
        let l = q.variable("l").unwrap();
        let f = q.add(&q.mul(&l, &l), &l);
        assert_eq!(q.specialize(&f, &[("l", i(-4))]).unwrap(), i(12));

        let r = z(7).adjoin_variables(&["l", "m"]).unwrap();
        let (l, m) = (r.variable("l").unwrap(), r.variable("m").unwrap());
        let g = r.add(&r.mul(&l, &m), &r.mul(&m, &m));
        // 2*3 + 3*3 = 15 = 1 mod 7
        assert_eq!(r.specialize(&g, &[("l", i(2)), ("m", i(3))]).unwrap(), i(1));
        assert_eq!(
            r.specialize(&g, &[("l", i(2)), ("q", i(3))]),
            Err(Error::UnknownVariable("q".into()))
        );
    }

    #[test]
    fn adjoin_requires_fresh_names() {
        let p = z(5).adjoin_variables(&["l"]).unwrap();
        assert!(matches!(p.adjoin_variables(&["l"]), Err(Error::VariableInUse(_))));
        assert!(matches!(z(5).adjoin_variables(&["a", "a"]), Err(Error::VariableInUse(_))));
        assert_eq!(p.fresh_variable("l"), "l0");
    }

    #[test]
    fn divide_by_variable() {
        let r = Ring::integers().adjoin_variables(&["l"]).unwrap();
        let l = r.variable("l").unwrap();
        let p = r.add(&r.mul(&l, &l), &r.mul(&r.from_i64(3), &l));
        let q = r.exact_divide_by_variable(&p, "l").unwrap();
        assert_eq!(q, r.add(&l, &r.from_i64(3)));
        let bad = r.add(&l, &r.one());
        assert_eq!(r.exact_divide_by_variable(&bad, "l"), Err(Error::NotDivisible("l".into())));
    }

    #[test]
    fn polynomial_units_over_nonreduced_base() {
        // 1 + 2x is a unit in Z/4[x] since 2x is nilpotent
        let r = z(4).adjoin_variables(&["x"]).unwrap();
        let x = r.variable("x").unwrap();
        let u = r.add(&r.one(), &r.mul(&r.from_i64(2), &x));
        assert!(r.is_unit(&u));
        assert_eq!(r.mul(&u, &r.inverse(&u).unwrap()), r.one());
        assert!(!r.is_unit(&r.add(&r.one(), &x)));
    }

    #[test]
    fn localize_integers() {
        let zz = Ring::integers();
        let (r, h) = zz.localize(&i(1)).unwrap();
        assert_eq!(r, zz);
        assert_eq!(h.apply(&i(5)).unwrap(), i(5));
        let (r6, h6) = zz.localize(&i(6)).unwrap();
        assert_eq!(r6, Ring::fractions(36).unwrap());
        assert!(r6.is_unit(&h6.apply(&i(6)).unwrap()));
        assert!(r6.is_unit(&h6.apply(&i(2)).unwrap()));
    }

    #[test]
    fn localize_modular_splits() {
        let (r, h) = z(12).localize(&i(3)).unwrap();
        assert_eq!(r, z(4));
        assert_eq!(h.apply(&i(7)).unwrap(), i(3));
        assert!(r.is_unit(&h.apply(&i(3)).unwrap()));
        let (r0, _) = z(12).localize(&i(6)).unwrap();
        assert!(r0.is_zero_ring());
    }

    #[test]
    fn localize_idempotent_in_polynomial_ring() {
        let r = z(6).adjoin_variables(&["x"]).unwrap();
        let e = r.from_i64(3);
        let (loc, h) = r.localize(&e).unwrap();
        let x = h.apply(&r.variable("x").unwrap()).unwrap();
        assert!(loc.contains(&x));
        assert_eq!(loc.one(), e);
        assert!(loc.is_unit(&loc.one()));
        assert!(matches!(
            r.localize(&r.variable("x").unwrap()),
            Err(Error::LocalizationUnsupported(_))
        ));
    }
}
