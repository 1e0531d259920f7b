//! Sparse multivariate polynomials under graded-lexicographic order.
//!
//! Only the term storage lives here; coefficient arithmetic goes through the
//! base [`Ring`], see the polynomial arm of the ring operations.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::ring::{Elem, Ring};

/// Exponent vector, one entry per variable of the ambient polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(vars: usize) -> Self {
        Monomial(vec![0; vars])
    }

    pub fn var(vars: usize, index: usize) -> Self {
        let mut exps = vec![0; vars];
        exps[index] = 1;
        Monomial(exps)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial with no zero coefficients stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Elem>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Elem)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Elem> {
        self.terms.get(m)
    }

    /// Builds a polynomial from arbitrary terms, summing duplicates and
    /// dropping zeros.
    pub fn from_terms(base: &Ring, terms: impl IntoIterator<Item = (Monomial, Elem)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(base, m, c);
        }
        p
    }

    pub fn constant(base: &Ring, vars: usize, c: Elem) -> Self {
        Poly::from_terms(base, [(Monomial::one(vars), c)])
    }

    pub(crate) fn add_term(&mut self, base: &Ring, m: Monomial, c: Elem) {
        if base.is_zero(&c) {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let sum = base.add(&old, &c);
                if !base.is_zero(&sum) {
                    self.terms.insert(m, sum);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub(crate) fn map_coeffs(&self, f: impl Fn(&Elem) -> Elem, target: &Ring) -> Poly {
        Poly::from_terms(target, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub(crate) fn add(&self, other: &Poly, base: &Ring) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(base, m.clone(), c.clone());
        }
        out
    }

    pub(crate) fn neg(&self, base: &Ring) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), base.neg(c)))
                .collect(),
        }
    }

    pub(crate) fn mul(&self, other: &Poly, base: &Ring) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(base, m1.mul(m2), base.mul(c1, c2));
            }
        }
        out
    }

    /// Constant coefficient, or zero.
    pub fn constant_term(&self, base: &Ring, vars: usize) -> Elem {
        self.terms
            .get(&Monomial::one(vars))
            .cloned()
            .unwrap_or_else(|| base.zero())
    }

}
