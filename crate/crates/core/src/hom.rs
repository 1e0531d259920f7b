//! Ring homomorphisms.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::algebra::FreeRankNAlgebra;
use crate::arith;
use crate::error::{Error, Result};
use crate::ring::{make_frac, Elem, Ring, RingKind};

#[derive(Clone, Debug, PartialEq)]
pub enum HomAction {
    /// The structure map determined by the two ring kinds: identities,
    /// reductions `Z/m -> Z/d`, maps out of `Z`, localization maps, and their
    /// componentwise and coordinatewise extensions.
    Canonical,
    /// Polynomial source: coefficients go through `base`, variable `i` goes to
    /// `images[i]`.
    Evaluate { base: Box<RingHom>, images: Vec<Elem> },
    /// `R -> R x ... x R` composed with `factor_maps[i]` into each factor.
    Diagonal(Vec<RingHom>),
    /// Product source, projection onto one factor.
    Projection(usize),
    /// Product to product, one map per factor.
    PerFactor(Vec<RingHom>),
    /// `B -> C (x) B` on free algebras: coordinates pushed through the base map.
    Coords(Box<RingHom>),
    /// Applied left to right.
    Composite(Vec<RingHom>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RingHom {
    source: Ring,
    target: Ring,
    action: HomAction,
}

impl RingHom {
    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn action(&self) -> &HomAction {
        &self.action
    }

    pub fn identity(ring: &Ring) -> RingHom {
        RingHom { source: ring.clone(), target: ring.clone(), action: HomAction::Canonical }
    }

    /// The canonical map between two rings, when the pair of kinds admits one.
    pub fn canonical(source: &Ring, target: &Ring) -> Result<RingHom> {
        if canonical_exists(source, target) {
            Ok(RingHom {
                source: source.clone(),
                target: target.clone(),
                action: HomAction::Canonical,
            })
        } else {
            Err(Error::HomMismatch(format!("no canonical map {source} -> {target}")))
        }
    }

    /// Evaluation hom out of a polynomial ring.
    pub fn evaluate(source: &Ring, base: RingHom, images: Vec<Elem>) -> Result<RingHom> {
        let RingKind::Polynomial { base: coeffs, vars } = source.kind() else {
            return Err(Error::HomMismatch(format!("{source} is not a polynomial ring")));
        };
        if base.source() != coeffs {
            return Err(Error::HomMismatch("coefficient map has the wrong source".into()));
        }
        if images.len() != vars.len() {
            return Err(Error::HomMismatch(format!(
                "{} images for {} variables",
                images.len(),
                vars.len()
            )));
        }
        for im in &images {
            base.target().check(im)?;
        }
        Ok(RingHom {
            source: source.clone(),
            target: base.target().clone(),
            action: HomAction::Evaluate { base: Box::new(base), images },
        })
    }

    /// `R -> prod_i F_i` built from maps `R -> F_i`.
    pub fn diagonal(source: &Ring, factor_maps: Vec<RingHom>) -> Result<RingHom> {
        if factor_maps.iter().any(|h| h.source() != source) {
            return Err(Error::HomMismatch("diagonal components have different sources".into()));
        }
        let target = Ring::product(factor_maps.iter().map(|h| h.target().clone()).collect())?;
        Ok(RingHom { source: source.clone(), target, action: HomAction::Diagonal(factor_maps) })
    }

    pub fn projection(source: &Ring, index: usize) -> Result<RingHom> {
        let RingKind::Product(fs) = source.kind() else {
            return Err(Error::HomMismatch(format!("{source} is not a product")));
        };
        let target = fs
            .get(index)
            .ok_or_else(|| Error::HomMismatch(format!("no factor {index}")))?
            .clone();
        Ok(RingHom { source: source.clone(), target, action: HomAction::Projection(index) })
    }

    pub fn per_factor(maps: Vec<RingHom>) -> Result<RingHom> {
        let source = Ring::product(maps.iter().map(|h| h.source().clone()).collect())?;
        let target = Ring::product(maps.iter().map(|h| h.target().clone()).collect())?;
        Ok(RingHom { source, target, action: HomAction::PerFactor(maps) })
    }

    /// The coordinatewise map `alg -> base_change(alg, base_map)` on ring views.
    pub fn coords(alg: &Arc<FreeRankNAlgebra>, base_map: &RingHom) -> Result<RingHom> {
        let pushed = alg.base_change(base_map)?;
        Ok(RingHom {
            source: Ring::algebra(alg.clone()),
            target: Ring::algebra(Arc::new(pushed)),
            action: HomAction::Coords(Box::new(base_map.clone())),
        })
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &RingHom) -> Result<RingHom> {
        if self.target() != next.source() {
            return Err(Error::HomMismatch(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.source, self.target, next.source, next.target
            )));
        }
        let mut steps = match &self.action {
            HomAction::Composite(v) => v.clone(),
            _ => vec![self.clone()],
        };
        match &next.action {
            HomAction::Composite(v) => steps.extend(v.iter().cloned()),
            _ => steps.push(next.clone()),
        }
        Ok(RingHom {
            source: self.source.clone(),
            target: next.target.clone(),
            action: HomAction::Composite(steps),
        })
    }

    pub fn apply(&self, x: &Elem) -> Result<Elem> {
        self.source.check(x)?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &Elem) -> Elem {
        match &self.action {
            HomAction::Canonical => canonical_apply(&self.source, &self.target, x),
            HomAction::Evaluate { base, images } => self.source.evaluate_into(
                x,
                &self.target,
                images,
                |c| base.apply_unchecked(c),
            ),
            HomAction::Diagonal(maps) => {
                Elem::Tuple(maps.iter().map(|h| h.apply_unchecked(x)).collect())
            }
            HomAction::Projection(i) => match x {
                Elem::Tuple(v) => v[*i].clone(),
                other => panic!("projection of non-tuple {other:?}"),
            },
            HomAction::PerFactor(maps) => match x {
                Elem::Tuple(v) => Elem::Tuple(
                    maps.iter().zip(v).map(|(h, a)| h.apply_unchecked(a)).collect(),
                ),
                other => panic!("per-factor map of non-tuple {other:?}"),
            },
            HomAction::Coords(base) => match x {
                Elem::Coords(v) => Elem::Coords(v.iter().map(|a| base.apply_unchecked(a)).collect()),
                other => panic!("coordinate map of non-algebra element {other:?}"),
            },
            HomAction::Composite(steps) => steps
                .iter()
                .fold(x.clone(), |acc, h| h.apply_unchecked(&acc)),
        }
    }
}

fn canonical_exists(src: &Ring, tgt: &Ring) -> bool {
    if src == tgt {
        return true;
    }
    match (src.kind(), tgt.kind()) {
        (RingKind::Integers, _) => true,
        (RingKind::Modular(m), RingKind::Modular(d)) => m.is_multiple_of(d),
        (RingKind::Fractions { radical: r }, RingKind::Fractions { radical: s }) => {
            s.is_multiple_of(r)
        }
        (RingKind::Fractions { radical: r }, RingKind::Modular(d)) => {
            arith::mod_inverse(r, d).is_some()
        }
        (RingKind::Product(fs), RingKind::Product(gs)) if fs.len() == gs.len() => {
            fs.iter().zip(gs).all(|(f, g)| canonical_exists(f, g))
        }
        (RingKind::Idempotent { base: b, idempotent: e }, RingKind::Idempotent { base: b2, idempotent: e2 })
            if b == b2 =>
        {
            b.mul(e2, e) == *e2
        }
        (_, RingKind::Idempotent { base, .. }) => canonical_exists(src, base),
        (RingKind::Algebra(a), RingKind::Algebra(b)) => {
            a.rank() == b.rank()
                && canonical_exists(a.base(), b.base())
                && RingHom::canonical(a.base(), b.base())
                    .and_then(|h| a.base_change(&h))
                    .map(|pushed| pushed == **b)
                    .unwrap_or(false)
        }
        (RingKind::Polynomial { base: b, vars: v }, RingKind::Polynomial { base: b2, vars: v2 })
            if v == v2 =>
        {
            canonical_exists(b, b2)
        }
        (_, RingKind::Polynomial { base, .. }) => canonical_exists(src, base),
        _ => false,
    }
}

fn canonical_apply(src: &Ring, tgt: &Ring, x: &Elem) -> Elem {
    if src == tgt {
        return x.clone();
    }
    match (src.kind(), tgt.kind(), x) {
        (RingKind::Integers, _, Elem::Int(v)) => tgt.from_bigint(v),
        (RingKind::Modular(_), RingKind::Modular(d), Elem::Int(v)) => Elem::Int(v.mod_floor(d)),
        (
            RingKind::Fractions { radical: r },
            RingKind::Fractions { radical: s },
            Elem::Frac { num, exp },
        ) => {
            let scale = (s / r).pow(*exp);
            make_frac(num * scale, *exp, s)
        }
        (RingKind::Fractions { radical: r }, RingKind::Modular(d), Elem::Frac { num, exp }) => {
            let inv = arith::mod_inverse(r, d).expect("checked when the map was built");
            Elem::Int((num * inv.modpow(&BigInt::from(*exp), d)).mod_floor(d))
        }
        (RingKind::Product(fs), RingKind::Product(gs), Elem::Tuple(v)) if fs.len() == gs.len() => {
            Elem::Tuple(
                fs.iter()
                    .zip(gs)
                    .zip(v)
                    .map(|((f, g), a)| canonical_apply(f, g, a))
                    .collect(),
            )
        }
        (
            RingKind::Idempotent { base: b, .. },
            RingKind::Idempotent { base: b2, idempotent: e2 },
            _,
        ) if b == b2 => b.mul(e2, x),
        (_, RingKind::Idempotent { base, idempotent }, _) => {
            base.mul(idempotent, &canonical_apply(src, base, x))
        }
        (RingKind::Algebra(a), RingKind::Algebra(b), Elem::Coords(v)) => Elem::Coords(
            v.iter()
                .map(|c| canonical_apply(a.base(), b.base(), c))
                .collect(),
        ),
        (RingKind::Polynomial { base: b, .. }, RingKind::Polynomial { base: b2, .. }, Elem::Poly(p)) => {
            Elem::Poly(p.map_coeffs(|c| canonical_apply(b, b2, c), b2))
        }
        (_, RingKind::Polynomial { base, vars }, _) => {
            let c = canonical_apply(src, base, x);
            Elem::Poly(crate::poly::Poly::constant(base, vars.len(), c))
        }
        _ => panic!("no canonical map {src} -> {tgt} for {x:?}"),
    }
}

/// Whether `x` is the image of some element under a canonical localization
/// map, returning a preimage when it is. Used to test whether data over an
/// overlap extends over a piece.
pub fn canonical_preimage(src: &Ring, tgt: &Ring, x: &Elem) -> Option<Elem> {
    if src == tgt {
        return Some(x.clone());
    }
    match (src.kind(), tgt.kind(), x) {
        (RingKind::Integers, RingKind::Fractions { .. }, Elem::Frac { num, exp }) => {
            (*exp == 0).then(|| Elem::Int(num.clone()))
        }
        (RingKind::Integers, RingKind::Modular(_), Elem::Int(_)) => None,
        (
            RingKind::Fractions { radical: r },
            RingKind::Fractions { radical: s },
            Elem::Frac { num, exp },
        ) => {
            // s = r t with t coprime to r, so num / s^exp is in Z[1/r] iff t^exp | num
            let tk = (s / r).pow(*exp);
            if !(num % &tk).is_zero() {
                return None;
            }
            Some(make_frac(num / tk, *exp, r))
        }
        (RingKind::Product(fs), RingKind::Product(gs), Elem::Tuple(v)) if fs.len() == gs.len() => fs
            .iter()
            .zip(gs)
            .zip(v)
            .map(|((f, g), a)| canonical_preimage(f, g, a))
            .collect::<Option<Vec<_>>>()
            .map(Elem::Tuple),
        (RingKind::Algebra(a), RingKind::Algebra(b), Elem::Coords(v)) => v
            .iter()
            .map(|c| canonical_preimage(a.base(), b.base(), c))
            .collect::<Option<Vec<_>>>()
            .map(Elem::Coords),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i(v: i64) -> Elem {
        Elem::Int(BigInt::from(v))
    }

    #[test]
    fn reduction_is_a_hom() {
        let h = RingHom::canonical(&Ring::integers(), &Ring::modular(6).unwrap()).unwrap();
        assert_eq!(h.apply(&i(-1)).unwrap(), i(5));
        assert!(RingHom::canonical(&Ring::modular(6).unwrap(), &Ring::modular(4).unwrap()).is_err());
    }

    #[test]
    fn fraction_refinement() {
        let z2 = Ring::fractions(2).unwrap();
        let z6 = Ring::fractions(6).unwrap();
        let h = RingHom::canonical(&z2, &z6).unwrap();
        let half = z2.inverse(&z2.from_i64(2)).unwrap();
        let img = h.apply(&half).unwrap();
        assert_eq!(z6.mul(&img, &z6.from_i64(2)), z6.one());
        assert_eq!(canonical_preimage(&z2, &z6, &img), Some(half));
        let third = z6.inverse(&z6.from_i64(3)).unwrap();
        assert_eq!(canonical_preimage(&z2, &z6, &third), None);
        assert_eq!(canonical_preimage(&Ring::integers(), &z6, &third), None);
    }

    #[test]
    fn evaluation_hom() {
        let base = Ring::modular(5).unwrap();
        let p = base.adjoin_variables(&["l"]).unwrap();
        let h = RingHom::evaluate(&p, RingHom::identity(&base), vec![i(2)]).unwrap();
        let l = p.variable("l").unwrap();
        let f = p.add(&p.mul(&l, &l), &p.from_i64(1));
        assert_eq!(h.apply(&f).unwrap(), i(0));
    }

    #[test]
    fn composite_and_projection() {
        let z = Ring::integers();
        let z5 = Ring::modular(5).unwrap();
        let z7 = Ring::modular(7).unwrap();
        let d = RingHom::diagonal(
            &z,
            vec![RingHom::canonical(&z, &z5).unwrap(), RingHom::canonical(&z, &z7).unwrap()],
        )
        .unwrap();
        let p = RingHom::projection(d.target(), 1).unwrap();
        let c = d.then(&p).unwrap();
        assert_eq!(c.apply(&i(9)).unwrap(), i(2));
        assert!(p.then(&d).is_err());
    }
}
