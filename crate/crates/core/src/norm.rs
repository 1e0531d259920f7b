//! The norm of based quadratic algebras and of their homomorphisms along a
//! free extension `B / A`.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::algebra::FreeRankNAlgebra;
use crate::error::{Error, Result};
use crate::hom::RingHom;
use crate::quadratic::{BasedQuadratic, QuadHom};
use crate::ring::{Elem, Ring};

/// A free rank-n algebra `B` over `A`, together with `B` viewed as a ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Extension {
    algebra: Arc<FreeRankNAlgebra>,
    ring: Ring,
}

impl Extension {
    pub fn new(algebra: FreeRankNAlgebra) -> Self {
        Extension::from_arc(Arc::new(algebra))
    }

    pub fn from_arc(algebra: Arc<FreeRankNAlgebra>) -> Self {
        let ring = Ring::algebra(algebra.clone());
        Extension { algebra, ring }
    }

    pub fn algebra(&self) -> &Arc<FreeRankNAlgebra> {
        &self.algebra
    }

    /// `B` as a ring.
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// `A`.
    pub fn base(&self) -> &Ring {
        self.algebra.base()
    }

    pub fn rank(&self) -> usize {
        self.algebra.rank()
    }

    /// The extension `B (x) C / C` for `f: A -> C`, with the induced map `B -> B (x) C`.
    pub fn base_change(&self, f: &RingHom) -> Result<(Extension, RingHom)> {
        let induced = RingHom::coords(&self.algebra, f)?;
        let ext = Extension { ring: induced.target().clone(), algebra: algebra_of(induced.target()) };
        Ok((ext, induced))
    }

    fn coords<'a>(&self, x: &'a Elem) -> &'a [Elem] {
        match x {
            Elem::Coords(v) => v,
            other => panic!("expected algebra coordinates, found {other:?}"),
        }
    }

    fn expect_quad(&self, q: &BasedQuadratic) -> Result<()> {
        if q.base() == &self.ring {
            Ok(())
        } else {
            Err(Error::BaseMismatch)
        }
    }
}

fn algebra_of(ring: &Ring) -> Arc<FreeRankNAlgebra> {
    match ring.kind() {
        crate::ring::RingKind::Algebra(a) => a.clone(),
        _ => unreachable!("coordinate maps land in algebra rings"),
    }
}

/// `sum_{k=1..n} w^(k-1) s_{k,n-k}(x, y)`, with `w` formed in the integers.
pub fn norm_entry_closed_sum(alg: &FreeRankNAlgebra, x: &[Elem], y: &[Elem], w: i64) -> Result<Elem> {
    let a = alg.base();
    let pair = alg.polarized_pair(x, y)?;
    let mut acc = a.zero();
    let mut weight = BigInt::from(1);
    for s_k in &pair[1..] {
        acc = a.add(&acc, &a.mul(&a.from_bigint(&weight), s_k));
        weight *= w;
    }
    Ok(acc)
}

/// `(s_n(l x + y) - s_n(y)) / l` evaluated at `l = w`, computed in `A[l]`.
pub fn norm_entry_fraction(alg: &FreeRankNAlgebra, x: &[Elem], y: &[Elem], w: i64) -> Result<Elem> {
    let a = alg.base();
    let (poly_ring, name, form) = alg.norm_pencil(x, y)?;
    let constant = poly_ring.embed(&alg.norm(y))?;
    let quotient = poly_ring.exact_divide_by_variable(&poly_ring.sub(&form, &constant), &name)?;
    poly_ring.specialize(&quotient, &[(name.as_str(), a.from_i64(w))])
}

fn entry_both_ways(alg: &FreeRankNAlgebra, x: &[Elem], y: &[Elem], w: i64) -> Result<Elem> {
    let closed = norm_entry_closed_sum(alg, x, y, w)?;
    let fraction = norm_entry_fraction(alg, x, y, w).map_err(|e| match e {
        Error::NotDivisible(v) => {
            Error::InternalContradiction(format!("norm pencil has a nonzero constant term in {v}"))
        }
        other => other,
    })?;
    if closed != fraction {
        return Err(Error::InternalContradiction(format!(
            "closed sum {closed:?} disagrees with fraction form {fraction:?}"
        )));
    }
    Ok(closed)
}

/// `Nm(T, N) = (s_n(T), sum_{k=1..n} (-4)^(k-1) s_{k,n-k}(N, T^2))`.
///
/// The second entry is computed both as the closed sum and as
/// `(s_n(l N + T^2) - s_n(T^2)) / l` at `l = -4`; disagreement is reported as
/// [`Error::InternalContradiction`].
pub fn norm_quad(ext: &Extension, q: &BasedQuadratic) -> Result<BasedQuadratic> {
    ext.expect_quad(q)?;
    let alg = &ext.algebra;
    let t = ext.coords(q.t());
    let n = ext.coords(q.n());
    let t2 = alg.mul_coords(t, t);
    let m = entry_both_ways(alg, n, &t2, -4)?;
    BasedQuadratic::new(alg.base(), alg.norm(t), m)
}

/// `Nm(x -> U x + C) = (x -> s_n(U) x + sum_{k=1..n} 2^(k-1) s_{k,n-k}(C, U T))`
/// with `T` the trace entry of the target. The result is checked against the
/// defining equations between the normed source and target.
pub fn norm_hom(ext: &Extension, f: &QuadHom) -> Result<QuadHom> {
    ext.expect_quad(f.source())?;
    ext.expect_quad(f.target())?;
    let alg = &ext.algebra;
    let u = ext.coords(f.u());
    let c = ext.coords(f.c());
    let t = ext.coords(f.target().t());
    let ut = alg.mul_coords(u, t);
    let c_out = entry_both_ways(alg, c, &ut, 2)?;
    let u_out = alg.norm(u);
    let source = norm_quad(ext, f.source())?;
    let target = norm_quad(ext, f.target())?;
    QuadHom::new(&source, &target, u_out, c_out).map_err(|e| match e {
        Error::NotNormPreserving(eq) => {
            Error::InternalContradiction(format!("normed map violates {eq}"))
        }
        other => other,
    })
}

/// `B / A` and `C / B` composed into `C / A`.
#[derive(Clone, Debug)]
pub struct Tower {
    lower: Extension,
    upper: Extension,
    total: Extension,
}

impl Tower {
    pub fn new(lower: &Extension, upper: &Extension) -> Result<Self> {
        let total = FreeRankNAlgebra::tower_compose(&lower.algebra, &upper.algebra)?;
        Ok(Tower { lower: lower.clone(), upper: upper.clone(), total: Extension::new(total) })
    }

    pub fn lower(&self) -> &Extension {
        &self.lower
    }

    pub fn upper(&self) -> &Extension {
        &self.upper
    }

    pub fn total(&self) -> &Extension {
        &self.total
    }

    /// An element of `C` (coordinates over `B`) in coordinates over `A`.
    pub fn flatten(&self, x: &Elem) -> Elem {
        Elem::Coords(FreeRankNAlgebra::tower_flatten(self.upper.coords(x), self.lower.rank()))
    }

    pub fn flatten_quad(&self, q: &BasedQuadratic) -> Result<BasedQuadratic> {
        self.upper.expect_quad(q)?;
        BasedQuadratic::new(self.total.ring(), self.flatten(q.t()), self.flatten(q.n()))
    }

    pub fn flatten_hom(&self, f: &QuadHom) -> Result<QuadHom> {
        QuadHom::new(
            &self.flatten_quad(f.source())?,
            &self.flatten_quad(f.target())?,
            self.flatten(f.u()),
            self.flatten(f.c()),
        )
    }
}

/// `(Nm_{C/A}(q), Nm_{B/A}(Nm_{C/B}(q)))` for `q` over `C`.
pub fn norm_tower_check(
    a_to_b: &Extension,
    b_to_c: &Extension,
    q: &BasedQuadratic,
) -> Result<(BasedQuadratic, BasedQuadratic)> {
    let tower = Tower::new(a_to_b, b_to_c)?;
    let direct = norm_quad(tower.total(), &tower.flatten_quad(q)?)?;
    let stepwise = norm_quad(a_to_b, &norm_quad(b_to_c, q)?)?;
    Ok((direct, stepwise))
}

/// The homomorphism version of [`norm_tower_check`].
pub fn norm_tower_check_hom(
    a_to_b: &Extension,
    b_to_c: &Extension,
    f: &QuadHom,
) -> Result<(QuadHom, QuadHom)> {
    let tower = Tower::new(a_to_b, b_to_c)?;
    let direct = norm_hom(tower.total(), &tower.flatten_hom(f)?)?;
    let stepwise = norm_hom(a_to_b, &norm_hom(b_to_c, f)?)?;
    Ok((direct, stepwise))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad_over(ext: &Extension, t: Vec<i64>, n: Vec<i64>) -> BasedQuadratic {
        let a = ext.base();
        let e = |v: Vec<i64>| Elem::Coords(v.into_iter().map(|x| a.from_i64(x)).collect());
        BasedQuadratic::new(ext.ring(), e(t), e(n)).unwrap()
    }

    #[test]
    fn rank_one_is_identity() {
        let r = Ring::modular(7).unwrap();
        let ext = Extension::new(FreeRankNAlgebra::trivial(&r));
        let q = quad_over(&ext, vec![3], vec![5]);
        let out = norm_quad(&ext, &q).unwrap();
        assert_eq!(out, BasedQuadratic::new(&r, r.from_i64(3), r.from_i64(5)).unwrap());
    }

    #[test]
    fn split_extension_gives_star() {
        let r = Ring::modular(11).unwrap();
        let ext = Extension::new(FreeRankNAlgebra::split(&r, 2).unwrap());
        let q = quad_over(&ext, vec![2, 3], vec![7, 5]);
        let p1 = BasedQuadratic::new(&r, r.from_i64(2), r.from_i64(7)).unwrap();
        let p2 = BasedQuadratic::new(&r, r.from_i64(3), r.from_i64(5)).unwrap();
        assert_eq!(norm_quad(&ext, &q).unwrap(), p1.star(&p2).unwrap());
    }

    #[test]
    fn split_and_dual_are_fixed() {
        let z = Ring::integers();
        let ext = Extension::new(
            FreeRankNAlgebra::monogenic(&z, &[z.from_i64(2), z.from_i64(-1), z.zero()]).unwrap(),
        );
        let b = ext.ring();
        assert_eq!(
            norm_quad(&ext, &BasedQuadratic::split(b)).unwrap(),
            BasedQuadratic::split(&z)
        );
        assert_eq!(
            norm_quad(&ext, &BasedQuadratic::dual_numbers(b)).unwrap(),
            BasedQuadratic::dual_numbers(&z)
        );
    }

    #[test]
    fn wrong_base_is_rejected() {
        let r = Ring::modular(5).unwrap();
        let ext = Extension::new(FreeRankNAlgebra::split(&r, 2).unwrap());
        assert_eq!(norm_quad(&ext, &BasedQuadratic::split(&r)), Err(Error::BaseMismatch));
    }

    #[test]
    fn swap_parity() {
        let z = Ring::integers();
        for n in 1..=4 {
            let ext = Extension::new(FreeRankNAlgebra::split(&z, n).unwrap());
            let b = ext.ring();
            let s = BasedQuadratic::split(b);
            let swap = QuadHom::new(&s, &s, b.from_i64(-1), b.one()).unwrap();
            let out = norm_hom(&ext, &swap).unwrap();
            let expect = if n % 2 == 0 { (1, 0) } else { (-1, 1) };
            assert_eq!((out.u(), out.c()), (&z.from_i64(expect.0), &z.from_i64(expect.1)));
        }
    }

    #[test]
    fn identity_hom_normalizes_to_identity() {
        let r = Ring::modular(9).unwrap();
        let ext = Extension::new(
            FreeRankNAlgebra::monogenic(&r, &[r.from_i64(-3), r.zero()]).unwrap(),
        );
        let q = quad_over(&ext, vec![1, 4], vec![2, 7]);
        let out = norm_hom(&ext, &QuadHom::identity(&q)).unwrap();
        assert_eq!(out, QuadHom::identity(&norm_quad(&ext, &q).unwrap()));
    }

    #[test]
    fn fraction_and_closed_sum_agree() {
        let r = Ring::modular(12).unwrap();
        let alg = FreeRankNAlgebra::monogenic(&r, &[r.from_i64(5), r.from_i64(1), r.from_i64(7)])
            .unwrap();
        let x: Vec<Elem> = [3, 0, 8].iter().map(|&v| r.from_i64(v)).collect();
        let y: Vec<Elem> = [1, 11, 2].iter().map(|&v| r.from_i64(v)).collect();
        for w in [-4, 2, 3] {
            assert_eq!(
                norm_entry_closed_sum(&alg, &x, &y, w).unwrap(),
                norm_entry_fraction(&alg, &x, &y, w).unwrap()
            );
        }
    }

    #[test]
    fn trivial_upper_stage() {
        let r = Ring::modular(5).unwrap();
        let lower = Extension::new(FreeRankNAlgebra::split(&r, 2).unwrap());
        let upper = Extension::new(FreeRankNAlgebra::trivial(lower.ring()));
        let b = lower.ring();
        let e = |v: [i64; 2]| Elem::Coords(v.iter().map(|&x| r.from_i64(x)).collect());
        let q = BasedQuadratic::new(
            upper.ring(),
            Elem::Coords(vec![e([1, 3])]),
            Elem::Coords(vec![e([4, 2])]),
        )
        .unwrap();
        let (direct, stepwise) = norm_tower_check(&lower, &upper, &q).unwrap();
        assert_eq!(direct, stepwise);
        let q_b = BasedQuadratic::new(b, e([1, 3]), e([4, 2])).unwrap();
        assert_eq!(direct, norm_quad(&lower, &q_b).unwrap());
    }
}
