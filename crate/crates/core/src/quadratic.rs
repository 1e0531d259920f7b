//! Based quadratic algebras `A[x]/(x^2 - t x + n)` and the maps between them.

use crate::algebra::FreeRankNAlgebra;
use crate::error::{Error, HomEquation, Result};
use crate::hom::RingHom;
use crate::ring::{Elem, Ring};

/// The algebra `base[x]/(x^2 - t x + n)` with its chosen generator `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasedQuadratic {
    base: Ring,
    t: Elem,
    n: Elem,
}

impl BasedQuadratic {
    pub fn new(base: &Ring, t: Elem, n: Elem) -> Result<Self> {
        base.check(&t)?;
        base.check(&n)?;
        Ok(BasedQuadratic { base: base.clone(), t, n })
    }

    /// The split algebra `A x A`, generated by `(1, 0)`.
    pub fn split(base: &Ring) -> Self {
        BasedQuadratic { base: base.clone(), t: base.one(), n: base.zero() }
    }

    /// The dual numbers `A[e]/(e^2)`.
    pub fn dual_numbers(base: &Ring) -> Self {
        BasedQuadratic { base: base.clone(), t: base.zero(), n: base.zero() }
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn t(&self) -> &Elem {
        &self.t
    }

    pub fn n(&self) -> &Elem {
        &self.n
    }

    /// Rank-2 algebra on the basis `{1, x}` with `x^2 = t x - n`.
    pub fn as_rank2_algebra(&self) -> FreeRankNAlgebra {
        let r = &self.base;
        let (zero, one) = (r.zero(), r.one());
        let constants = vec![
            vec![vec![one.clone(), zero.clone()], vec![zero.clone(), one.clone()]],
            vec![vec![zero.clone(), one.clone()], vec![r.neg(&self.n), self.t.clone()]],
        ];
        FreeRankNAlgebra::new(r, constants, vec![one, zero])
            .expect("a monic quadratic presentation is always a valid algebra")
    }

    /// `t^2 - 4n`.
    pub fn discriminant(&self) -> Elem {
        let r = &self.base;
        r.sub(&r.mul(&self.t, &self.t), &r.mul(&r.from_i64(4), &self.n))
    }

    /// `(s, m) * (t, n) = (s t, m t^2 + n s^2 - 4 m n)`.
    pub fn star(&self, other: &Self) -> Result<Self> {
        if self.base != other.base {
            return Err(Error::MixedRings);
        }
        let r = &self.base;
        let (s, m, t, n) = (&self.t, &self.n, &other.t, &other.n);
        let mt2 = r.mul(m, &r.mul(t, t));
        let ns2 = r.mul(n, &r.mul(s, s));
        let mn4 = r.mul(&r.from_i64(4), &r.mul(m, n));
        Ok(BasedQuadratic {
            base: r.clone(),
            t: r.mul(s, t),
            n: r.sub(&r.add(&mt2, &ns2), &mn4),
        })
    }

    pub fn pushforward(&self, f: &RingHom) -> Result<Self> {
        if f.source() != &self.base {
            return Err(Error::HomMismatch(format!(
                "map from {} applied to a quadratic over {}",
                f.source(),
                self.base
            )));
        }
        Ok(BasedQuadratic {
            base: f.target().clone(),
            t: f.apply_unchecked(&self.t),
            n: f.apply_unchecked(&self.n),
        })
    }
}

/// The algebra map `source -> target` sending `x_source` to `u x_target + c`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadHom {
    source: BasedQuadratic,
    target: BasedQuadratic,
    u: Elem,
    c: Elem,
}

impl QuadHom {
    /// Accepts `(u, c)` when `t' = u t + 2c` and `n' = u^2 n + u c t + c^2`,
    /// primes marking the source.
    pub fn new(source: &BasedQuadratic, target: &BasedQuadratic, u: Elem, c: Elem) -> Result<Self> {
        if source.base != target.base {
            return Err(Error::MixedRings);
        }
        let r = &source.base;
        r.check(&u)?;
        r.check(&c)?;
        if let Some(eq) = violated_equation(source, target, &u, &c) {
            return Err(Error::NotNormPreserving(eq));
        }
        Ok(QuadHom { source: source.clone(), target: target.clone(), u, c })
    }

    /// The source determined by a target and `(u, c)`; always valid.
    pub fn with_derived_source(target: &BasedQuadratic, u: Elem, c: Elem) -> Result<Self> {
        let r = &target.base;
        r.check(&u)?;
        r.check(&c)?;
        let t = r.add(&r.mul(&u, &target.t), &r.add(&c, &c));
        let n = r.add(
            &r.add(&r.mul(&r.mul(&u, &u), &target.n), &r.mul(&r.mul(&u, &c), &target.t)),
            &r.mul(&c, &c),
        );
        let source = BasedQuadratic { base: r.clone(), t, n };
        Ok(QuadHom { source, target: target.clone(), u, c })
    }

    pub fn identity(q: &BasedQuadratic) -> Self {
        QuadHom { source: q.clone(), target: q.clone(), u: q.base.one(), c: q.base.zero() }
    }

    pub fn source(&self) -> &BasedQuadratic {
        &self.source
    }

    pub fn target(&self) -> &BasedQuadratic {
        &self.target
    }

    pub fn u(&self) -> &Elem {
        &self.u
    }

    pub fn c(&self) -> &Elem {
        &self.c
    }

    pub fn base(&self) -> &Ring {
        &self.source.base
    }

    /// `g . f` with `f` applied first: `x -> V(U x + C) + D = V U x + (V C + D)`.
    pub fn compose(g: &QuadHom, f: &QuadHom) -> Result<QuadHom> {
        if f.target != g.source {
            return Err(Error::ChainMismatch);
        }
        let r = f.base();
        Ok(QuadHom {
            source: f.source.clone(),
            target: g.target.clone(),
            u: r.mul(&f.u, &g.u),
            c: r.add(&r.mul(&f.u, &g.c), &f.c),
        })
    }

    pub fn is_isomorphism(&self) -> bool {
        self.base().is_unit(&self.u)
    }

    pub fn inverse(&self) -> Result<QuadHom> {
        let r = self.base();
        let v = r.inverse(&self.u)?;
        Ok(QuadHom {
            source: self.target.clone(),
            target: self.source.clone(),
            c: r.neg(&r.mul(&v, &self.c)),
            u: v,
        })
    }

    pub fn pushforward(&self, f: &RingHom) -> Result<QuadHom> {
        Ok(QuadHom {
            source: self.source.pushforward(f)?,
            target: self.target.pushforward(f)?,
            u: f.apply_unchecked(&self.u),
            c: f.apply_unchecked(&self.c),
        })
    }

    /// Image of `a + b x_source` in the coordinates `{1, x_target}`.
    pub fn apply_coords(&self, x: &[Elem]) -> Vec<Elem> {
        let r = self.base();
        vec![r.add(&x[0], &r.mul(&x[1], &self.c)), r.mul(&x[1], &self.u)]
    }

    /// Rechecks both defining equations.
    pub fn is_valid(&self) -> bool {
        violated_equation(&self.source, &self.target, &self.u, &self.c).is_none()
    }
}

fn violated_equation(
    source: &BasedQuadratic,
    target: &BasedQuadratic,
    u: &Elem,
    c: &Elem,
) -> Option<HomEquation> {
    let r = &source.base;
    let t = r.add(&r.mul(u, &target.t), &r.add(c, c));
    if t != source.t {
        return Some(HomEquation::Trace);
    }
    let n = r.add(
        &r.add(&r.mul(&r.mul(u, u), &target.n), &r.mul(&r.mul(u, c), &target.t)),
        &r.mul(c, c),
    );
    if n != source.n {
        return Some(HomEquation::Norm);
    }
    None
}

/// Some isomorphism `p -> q`, by enumerating units `u` and then `c`.
pub fn find_isomorphism(p: &BasedQuadratic, q: &BasedQuadratic) -> Result<QuadHom> {
    if p.base != q.base {
        return Err(Error::MixedRings);
    }
    let r = &p.base;
    if !r.is_finite() {
        return Err(Error::InfiniteRing);
    }
    let elements = r.elements()?;
    for u in elements.iter().filter(|u| r.is_unit(u)) {
        for c in &elements {
            if violated_equation(p, q, u, c).is_none() {
                return Ok(QuadHom { source: p.clone(), target: q.clone(), u: u.clone(), c: c.clone() });
            }
        }
    }
    Err(Error::NotFound)
}
