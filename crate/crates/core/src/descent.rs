//! Quadratic algebras and line bundles given by local data on a cover of the
//! base, glued along transition isomorphisms.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::algebra::FreeRankNAlgebra;
use crate::error::{Error, Result};
use crate::hom::{canonical_preimage, RingHom};
use crate::norm::{norm_hom, norm_quad, Extension};
use crate::quadratic::{BasedQuadratic, QuadHom};
use crate::ring::{Elem, Ring, RingKind};

/// Most elements a cover of the integers may have.
pub const MAX_INTEGER_COVER: usize = 3;

/// Bound on `|c|` for integer coordinates in the globalization search.
pub const INTEGER_SEARCH_BOUND: i64 = 8;

const LIFT_CAP: usize = 1 << 12;
const CANDIDATE_CAP: usize = 1 << 17;

/// Elements `a_1..a_k` of `base` generating the unit ideal, with witnesses
/// `r_i` such that `sum r_i a_i = 1`, and the localizations they define.
#[derive(Clone, Debug)]
pub struct Cover {
    base: Ring,
    elements: Vec<Elem>,
    witnesses: Vec<Elem>,
    pieces: Vec<Ring>,
    overlaps: BTreeMap<(usize, usize), Ring>,
    triples: BTreeMap<(usize, usize, usize), Ring>,
}

impl Cover {
    pub fn new(base: &Ring, elements: Vec<Elem>, witnesses: Vec<Elem>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::CocycleViolation("a cover needs at least one element".into()));
        }
        if witnesses.len() != elements.len() {
            return Err(Error::CocycleViolation(format!(
                "{} witnesses for {} cover elements",
                witnesses.len(),
                elements.len()
            )));
        }
        if is_integral(base) && elements.len() > MAX_INTEGER_COVER {
            return Err(Error::UnsupportedBase(format!(
                "covers of {base} are limited to {MAX_INTEGER_COVER} elements"
            )));
        }
        for x in elements.iter().chain(&witnesses) {
            base.check(x)?;
        }
        let combo = base.sum(
            elements
                .iter()
                .zip(&witnesses)
                .map(|(a, r)| base.mul(a, r))
                .collect::<Vec<_>>()
                .iter(),
        );
        if !base.is_one(&combo) {
            return Err(Error::CocycleViolation(
                "witnesses do not show that the cover generates the unit ideal".into(),
            ));
        }
        let k = elements.len();
        let pieces = elements
            .iter()
            .map(|a| base.localize(a).map(|(r, _)| r))
            .collect::<Result<Vec<_>>>()?;
        let mut overlaps = BTreeMap::new();
        for i in 0..k {
            for j in i + 1..k {
                let a = base.mul(&elements[i], &elements[j]);
                let (r, _) = base.localize(&a)?;
                for p in [i, j] {
                    RingHom::canonical(&pieces[p], &r).map_err(|_| {
                        Error::LocalizationUnsupported(format!(
                            "no restriction from piece {p} to overlap ({i},{j})"
                        ))
                    })?;
                }
                overlaps.insert((i, j), r);
            }
        }
        let mut triples = BTreeMap::new();
        if k >= 3 {
            for i in 0..k {
                for j in i + 1..k {
                    for l in j + 1..k {
                        let a = base.mul(&base.mul(&elements[i], &elements[j]), &elements[l]);
                        let (r, _) = base.localize(&a)?;
                        for pair in [(i, j), (i, l), (j, l)] {
                            RingHom::canonical(&overlaps[&pair], &r).map_err(|_| {
                                Error::LocalizationUnsupported(format!(
                                    "no restriction from overlap {pair:?} to ({i},{j},{l})"
                                ))
                            })?;
                        }
                        triples.insert((i, j, l), r);
                    }
                }
            }
        }
        Ok(Cover { base: base.clone(), elements, witnesses, pieces, overlaps, triples })
    }

    /// Builds a cover, finding witnesses by the extended Euclidean algorithm
    /// over the integers or by search over finite rings.
    pub fn generated_by(base: &Ring, elements: Vec<Elem>) -> Result<Self> {
        let witnesses = find_witnesses(base, &elements)?;
        Cover::new(base, elements, witnesses)
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn witnesses(&self) -> &[Elem] {
        &self.witnesses
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn piece(&self, i: usize) -> &Ring {
        &self.pieces[i]
    }

    /// The localization at `a_i a_j`, in either order.
    pub fn overlap(&self, i: usize, j: usize) -> &Ring {
        if i == j {
            return &self.pieces[i];
        }
        &self.overlaps[&(i.min(j), i.max(j))]
    }

    pub fn triple(&self, i: usize, j: usize, l: usize) -> Option<&Ring> {
        let mut idx = [i, j, l];
        idx.sort_unstable();
        self.triples.get(&(idx[0], idx[1], idx[2]))
    }

    pub fn triple_indices(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.triples.keys().copied()
    }
}

fn is_integral(r: &Ring) -> bool {
    matches!(r.kind(), RingKind::Integers | RingKind::Fractions { .. })
}

fn find_witnesses(base: &Ring, elements: &[Elem]) -> Result<Vec<Elem>> {
    use num_integer::Integer;
    if let RingKind::Integers = base.kind() {
        // fold extended gcds: g = sum w_i a_i
        let mut g = BigInt::from(0);
        let mut ws: Vec<BigInt> = Vec::with_capacity(elements.len());
        for a in elements {
            let Elem::Int(a) = a else { unreachable!() };
            let e = g.extended_gcd(a);
            for w in ws.iter_mut() {
                *w *= &e.x;
            }
            ws.push(e.y);
            g = e.gcd;
        }
        if g == BigInt::from(1) {
            return Ok(ws.into_iter().map(Elem::Int).collect());
        }
        if g == BigInt::from(-1) {
            return Ok(ws.into_iter().map(|w| Elem::Int(-w)).collect());
        }
        return Err(Error::CocycleViolation("elements do not generate the unit ideal".into()));
    }
    if base.is_finite() {
        let all = base.elements()?;
        let k = elements.len();
        let mut idx = vec![0usize; k];
        loop {
            let combo = base.sum(
                idx.iter()
                    .zip(elements)
                    .map(|(&w, a)| base.mul(&all[w], a))
                    .collect::<Vec<_>>()
                    .iter(),
            );
            if base.is_one(&combo) {
                return Ok(idx.iter().map(|&w| all[w].clone()).collect());
            }
            let mut p = 0;
            loop {
                if p == k {
                    return Err(Error::CocycleViolation(
                        "elements do not generate the unit ideal".into(),
                    ));
                }
                idx[p] += 1;
                if idx[p] < all.len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
        }
    }
    Err(Error::UnsupportedBase(format!("cannot find cover witnesses over {base}")))
}

/// The rings where descent data live: the cover's localizations of either
/// the base itself or of a global free algebra over it.
#[derive(Clone, Debug)]
pub struct Layer {
    cover: Arc<Cover>,
    algebra: Option<Arc<FreeRankNAlgebra>>,
    global: Ring,
    pieces: Vec<Ring>,
    overlaps: BTreeMap<(usize, usize), Ring>,
    triples: BTreeMap<(usize, usize, usize), Ring>,
}

impl PartialEq for Layer {
    fn eq(&self, other: &Self) -> bool {
        self.global == other.global
            && self.pieces == other.pieces
            && self.overlaps == other.overlaps
            && self.cover.elements == other.cover.elements
    }
}

impl Layer {
    /// Data over the localizations of the base.
    pub fn base(cover: &Arc<Cover>) -> Self {
        Layer {
            cover: cover.clone(),
            algebra: None,
            global: cover.base.clone(),
            pieces: cover.pieces.clone(),
            overlaps: cover.overlaps.clone(),
            triples: cover.triples.clone(),
        }
    }

    /// Data over the localizations of a free algebra over the base.
    pub fn extension(cover: &Arc<Cover>, algebra: &Arc<FreeRankNAlgebra>) -> Result<Self> {
        if algebra.base() != &cover.base {
            return Err(Error::BaseMismatch);
        }
        let localize = |r: &Ring| -> Result<Ring> {
            let f = RingHom::canonical(&cover.base, r)?;
            Ok(Ring::algebra(Arc::new(algebra.base_change(&f)?)))
        };
        Ok(Layer {
            cover: cover.clone(),
            algebra: Some(algebra.clone()),
            global: Ring::algebra(algebra.clone()),
            pieces: cover.pieces.iter().map(localize).collect::<Result<_>>()?,
            overlaps: cover
                .overlaps
                .iter()
                .map(|(k, r)| Ok((*k, localize(r)?)))
                .collect::<Result<_>>()?,
            triples: cover
                .triples
                .iter()
                .map(|(k, r)| Ok((*k, localize(r)?)))
                .collect::<Result<_>>()?,
        })
    }

    pub fn cover(&self) -> &Arc<Cover> {
        &self.cover
    }

    pub fn algebra(&self) -> Option<&Arc<FreeRankNAlgebra>> {
        self.algebra.as_ref()
    }

    pub fn global(&self) -> &Ring {
        &self.global
    }

    pub fn piece(&self, i: usize) -> &Ring {
        &self.pieces[i]
    }

    pub fn overlap(&self, i: usize, j: usize) -> &Ring {
        if i == j {
            return &self.pieces[i];
        }
        &self.overlaps[&(i.min(j), i.max(j))]
    }

    pub fn triple(&self, i: usize, j: usize, l: usize) -> &Ring {
        let mut idx = [i, j, l];
        idx.sort_unstable();
        &self.triples[&(idx[0], idx[1], idx[2])]
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// The rank-n extension over a localization of the base, for the
    /// extension layer.
    fn extension_at(&self, ring: &Ring) -> Result<Extension> {
        match ring.kind() {
            RingKind::Algebra(a) if self.algebra.is_some() => Ok(Extension::from_arc(a.clone())),
            _ => Err(Error::BaseMismatch),
        }
    }

    /// The base-level layer under an extension layer.
    pub fn below(&self) -> Layer {
        Layer::base(&self.cover)
    }

    /// `a` in the base localization `ring_below`, as a scalar of the matching ring of this layer.
    fn scalar(&self, ring: &Ring, a: &Elem) -> Elem {
        match ring.kind() {
            RingKind::Algebra(alg) if self.algebra.is_some() => Elem::Coords(alg.scalar(a)),
            _ => a.clone(),
        }
    }
}

/// Restriction along the canonical localization map.
pub fn restrict(x: &Elem, from: &Ring, to: &Ring) -> Result<Elem> {
    RingHom::canonical(from, to)?.apply(x)
}

fn restrict_quad(q: &BasedQuadratic, to: &Ring) -> Result<BasedQuadratic> {
    q.pushforward(&RingHom::canonical(q.base(), to)?)
}

fn restrict_hom(f: &QuadHom, to: &Ring) -> Result<QuadHom> {
    f.pushforward(&RingHom::canonical(f.base(), to)?)
}

/// Local based quadratic algebras on each piece, glued by isomorphisms
/// `x_i -> U_ij x_j + C_ij` over the overlaps.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadDescentDatum {
    layer: Layer,
    locals: Vec<BasedQuadratic>,
    /// Keyed by `(i, j)` with `i < j`.
    transitions: BTreeMap<(usize, usize), QuadHom>,
}

impl QuadDescentDatum {
    /// Validates every transition and the cocycle condition on triple overlaps.
    ///
    /// `transitions` holds `(i, j, u, c)` for each pair `i != j`, in either
    /// orientation; pairs given as `(j, i)` are inverted.
    pub fn new(
        layer: &Layer,
        locals: Vec<(Elem, Elem)>,
        transitions: Vec<(usize, usize, Elem, Elem)>,
    ) -> Result<Self> {
        let k = layer.len();
        if locals.len() != k {
            return Err(Error::CocycleViolation(format!(
                "{} local algebras for {k} pieces",
                locals.len()
            )));
        }
        let locals = locals
            .into_iter()
            .enumerate()
            .map(|(i, (t, n))| BasedQuadratic::new(layer.piece(i), t, n))
            .collect::<Result<Vec<_>>>()?;
        let mut map = BTreeMap::new();
        for (i, j, u, c) in transitions {
            if i >= k || j >= k {
                return Err(Error::CocycleViolation(format!("no piece pair ({i},{j})")));
            }
            let ring = layer.overlap(i, j);
            let src = restrict_quad(&locals[i], ring)?;
            let tgt = restrict_quad(&locals[j], ring)?;
            let f = QuadHom::new(&src, &tgt, u, c).map_err(|e| {
                Error::CocycleViolation(format!("transition ({i},{j}) is invalid: {e}"))
            })?;
            if i == j {
                if f != QuadHom::identity(&src) {
                    return Err(Error::CocycleViolation(format!(
                        "transition ({i},{i}) is not the identity"
                    )));
                }
                continue;
            }
            let (key, f) = if i < j {
                ((i, j), f)
            } else {
                let inv = f.inverse().map_err(|_| {
                    Error::CocycleViolation(format!("transition ({i},{j}) is not invertible"))
                })?;
                ((j, i), inv)
            };
            if let Some(prev) = map.get(&key) {
                if *prev != f {
                    return Err(Error::CocycleViolation(format!(
                        "transitions ({i},{j}) and ({j},{i}) are not inverse"
                    )));
                }
            }
            map.insert(key, f);
        }
        let datum = QuadDescentDatum { layer: layer.clone(), locals, transitions: map };
        datum.validate()?;
        Ok(datum)
    }

    fn validate(&self) -> Result<()> {
        let k = self.layer.len();
        for i in 0..k {
            for j in i + 1..k {
                let f = self.transitions.get(&(i, j)).ok_or_else(|| {
                    Error::CocycleViolation(format!("missing transition ({i},{j})"))
                })?;
                let ring = self.layer.overlap(i, j);
                if f.source() != &restrict_quad(&self.locals[i], ring)?
                    || f.target() != &restrict_quad(&self.locals[j], ring)?
                {
                    return Err(Error::CocycleViolation(format!(
                        "transition ({i},{j}) does not connect the restricted locals"
                    )));
                }
                if !f.is_valid() {
                    return Err(Error::CocycleViolation(format!(
                        "transition ({i},{j}) is not norm-preserving"
                    )));
                }
                if !f.is_isomorphism() {
                    return Err(Error::CocycleViolation(format!(
                        "transition ({i},{j}) is not an isomorphism"
                    )));
                }
            }
        }
        for (i, j, l) in self.layer.cover.triple_indices() {
            let ring = self.layer.triple(i, j, l);
            let ij = restrict_hom(&self.transitions[&(i, j)], ring)?;
            let jl = restrict_hom(&self.transitions[&(j, l)], ring)?;
            let il = restrict_hom(&self.transitions[&(i, l)], ring)?;
            if QuadHom::compose(&jl, &ij)? != il {
                return Err(Error::CocycleViolation(format!(
                    "cocycle fails on ({i},{j},{l})"
                )));
            }
        }
        Ok(())
    }

    /// Data built from a global `(T, N)` by choosing local generators
    /// `x_i = u_i x + c_i`, with `u_i` a unit of piece `i`.
    ///
    /// Also returns the isomorphisms `local_i -> global|_i`.
    pub fn from_global(
        layer: &Layer,
        global: &BasedQuadratic,
        generators: &[(Elem, Elem)],
    ) -> Result<(Self, Vec<QuadHom>)> {
        if global.base() != layer.global() {
            return Err(Error::BaseMismatch);
        }
        let k = layer.len();
        if generators.len() != k {
            return Err(Error::CocycleViolation(format!(
                "{} generators for {k} pieces",
                generators.len()
            )));
        }
        let mut locals = Vec::with_capacity(k);
        let mut witnesses = Vec::with_capacity(k);
        for (i, (u, c)) in generators.iter().enumerate() {
            let ring = layer.piece(i);
            if !ring.is_unit(u) {
                return Err(Error::NotAUnit);
            }
            let g = restrict_quad(global, ring)?;
            let w = QuadHom::with_derived_source(&g, u.clone(), c.clone())?;
            locals.push((w.source().t().clone(), w.source().n().clone()));
            witnesses.push(w);
        }
        let mut transitions = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let ring = layer.overlap(i, j);
                let (ui, ci) = restrict_pair(&generators[i], layer.piece(i), ring)?;
                let (uj, cj) = restrict_pair(&generators[j], layer.piece(j), ring)?;
                let uij = ring.mul(&ui, &ring.inverse(&uj)?);
                let cij = ring.sub(&ci, &ring.mul(&uij, &cj));
                transitions.push((i, j, uij, cij));
            }
        }
        Ok((QuadDescentDatum::new(layer, locals, transitions)?, witnesses))
    }

    /// The constant datum of a global quadratic algebra.
    pub fn constant(layer: &Layer, global: &BasedQuadratic) -> Result<Self> {
        let gens: Vec<(Elem, Elem)> =
            (0..layer.len()).map(|i| (layer.piece(i).one(), layer.piece(i).zero())).collect();
        Ok(QuadDescentDatum::from_global(layer, global, &gens)?.0)
    }

    pub fn layer(&self) -> &Layer {
        &self.layer
    }

    pub fn cover(&self) -> &Arc<Cover> {
        &self.layer.cover
    }

    pub fn locals(&self) -> &[BasedQuadratic] {
        &self.locals
    }

    /// The transition over the overlap of pieces `i` and `j`, in any order.
    pub fn transition(&self, i: usize, j: usize) -> Result<QuadHom> {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Equal => Ok(QuadHom::identity(&self.locals[i])),
            Ordering::Less => Ok(self.transitions[&(i, j)].clone()),
            Ordering::Greater => self.transitions[&(j, i)].inverse(),
        }
    }

    /// Transitions with `i < j`, in order.
    pub fn transitions(&self) -> impl Iterator<Item = ((usize, usize), &QuadHom)> {
        self.transitions.iter().map(|(k, v)| (*k, v))
    }
}

fn restrict_pair(p: &(Elem, Elem), from: &Ring, to: &Ring) -> Result<(Elem, Elem)> {
    Ok((restrict(&p.0, from, to)?, restrict(&p.1, from, to)?))
}

/// A line bundle given by unit transitions `U_ij` with `U_ik = U_ij U_jk`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineDescentDatum {
    layer: Layer,
    /// Keyed by `(i, j)` with `i < j`.
    transitions: BTreeMap<(usize, usize), Elem>,
}

impl LineDescentDatum {
    pub fn new(layer: &Layer, transitions: Vec<(usize, usize, Elem)>) -> Result<Self> {
        let k = layer.len();
        let mut map = BTreeMap::new();
        for (i, j, u) in transitions {
            if i >= k || j >= k {
                return Err(Error::CocycleViolation(format!("no piece pair ({i},{j})")));
            }
            let ring = layer.overlap(i, j);
            ring.check(&u)?;
            if !ring.is_unit(&u) {
                return Err(Error::CocycleViolation(format!(
                    "transition ({i},{j}) is not a unit"
                )));
            }
            if i == j {
                if !ring.is_one(&u) {
                    return Err(Error::CocycleViolation(format!(
                        "transition ({i},{i}) is not 1"
                    )));
                }
                continue;
            }
            let (key, u) = if i < j { ((i, j), u) } else { ((j, i), ring.inverse(&u)?) };
            if let Some(prev) = map.get(&key) {
                if *prev != u {
                    return Err(Error::CocycleViolation(format!(
                        "transitions ({i},{j}) and ({j},{i}) are not inverse"
                    )));
                }
            }
            map.insert(key, u);
        }
        let datum = LineDescentDatum { layer: layer.clone(), transitions: map };
        datum.validate()?;
        Ok(datum)
    }

    fn validate(&self) -> Result<()> {
        let k = self.layer.len();
        for i in 0..k {
            for j in i + 1..k {
                if !self.transitions.contains_key(&(i, j)) {
                    return Err(Error::CocycleViolation(format!("missing transition ({i},{j})")));
                }
            }
        }
        for (i, j, l) in self.layer.cover.triple_indices() {
            let ring = self.layer.triple(i, j, l);
            let get = |a: usize, b: usize| {
                restrict(&self.transitions[&(a, b)], self.layer.overlap(a, b), ring)
            };
            let (ij, jl, il) = (get(i, j)?, get(j, l)?, get(i, l)?);
            // U_ik U_jk^-1 U_ij^-1 = 1
            let check = ring.mul(&il, &ring.inverse(&ring.mul(&ij, &jl))?);
            if !ring.is_one(&check) {
                return Err(Error::CocycleViolation(format!(
                    "unit cocycle fails on ({i},{j},{l})"
                )));
            }
        }
        Ok(())
    }

    pub fn trivial(layer: &Layer) -> Self {
        let mut transitions = BTreeMap::new();
        for i in 0..layer.len() {
            for j in i + 1..layer.len() {
                transitions.insert((i, j), layer.overlap(i, j).one());
            }
        }
        LineDescentDatum { layer: layer.clone(), transitions }
    }

    pub fn layer(&self) -> &Layer {
        &self.layer
    }

    pub fn transition(&self, i: usize, j: usize) -> Result<Elem> {
        use std::cmp::Ordering;
        let ring = self.layer.overlap(i, j);
        match i.cmp(&j) {
            Ordering::Equal => Ok(ring.one()),
            Ordering::Less => Ok(self.transitions[&(i, j)].clone()),
            Ordering::Greater => ring.inverse(&self.transitions[&(j, i)]),
        }
    }

    pub fn transitions(&self) -> impl Iterator<Item = ((usize, usize), &Elem)> {
        self.transitions.iter().map(|(k, v)| (*k, v))
    }
}

/// The norm of a datum over the extension layer: local norms glued by the
/// norms of the transitions. The result is revalidated.
pub fn glue_norm(d: &QuadDescentDatum) -> Result<QuadDescentDatum> {
    if d.layer.algebra.is_none() {
        return Err(Error::BaseMismatch);
    }
    let below = d.layer.below();
    let mut locals = Vec::with_capacity(d.locals.len());
    for (i, q) in d.locals.iter().enumerate() {
        let ext = d.layer.extension_at(d.layer.piece(i))?;
        let out = norm_quad(&ext, q)?;
        locals.push((out.t().clone(), out.n().clone()));
    }
    let mut transitions = Vec::new();
    for ((i, j), f) in &d.transitions {
        let ext = d.layer.extension_at(d.layer.overlap(*i, *j))?;
        let g = norm_hom(&ext, f)?;
        transitions.push((*i, *j, g.u().clone(), g.c().clone()));
    }
    QuadDescentDatum::new(&below, locals, transitions).map_err(|e| match e {
        Error::CocycleViolation(m) => {
            Error::InternalContradiction(format!("glued norm is not a descent datum: {m}"))
        }
        other => other,
    })
}

/// Transitions `s_n(U_ij)`.
pub fn line_norm(d: &LineDescentDatum) -> Result<LineDescentDatum> {
    if d.layer.algebra.is_none() {
        return Err(Error::BaseMismatch);
    }
    let mut transitions = Vec::new();
    for ((i, j), u) in &d.transitions {
        let ext = d.layer.extension_at(d.layer.overlap(*i, *j))?;
        let Elem::Coords(v) = u else { unreachable!("extension layer elements are coordinates") };
        transitions.push((*i, *j, ext.algebra().norm(v)));
    }
    LineDescentDatum::new(&d.layer.below(), transitions)
}

/// The bundle generated by `1 ^ x` on each piece, with transitions `U_ij`.
pub fn det_bundle(d: &QuadDescentDatum) -> Result<LineDescentDatum> {
    let transitions = d.transitions.iter().map(|((i, j), f)| (*i, *j, f.u().clone())).collect();
    LineDescentDatum::new(&d.layer, transitions)
}

/// `T_i^2 - 4 N_i` on each piece.
pub fn disc_form(d: &QuadDescentDatum) -> Vec<Elem> {
    d.locals.iter().map(BasedQuadratic::discriminant).collect()
}

/// Checks `disc_i = U_ij^2 disc_j` on every overlap.
pub fn check_disc_compatibility(d: &QuadDescentDatum) -> Result<()> {
    let discs = disc_form(d);
    for ((i, j), f) in &d.transitions {
        let ring = d.layer.overlap(*i, *j);
        let di = restrict(&discs[*i], d.layer.piece(*i), ring)?;
        let dj = restrict(&discs[*j], d.layer.piece(*j), ring)?;
        if di != ring.mul(&ring.mul(f.u(), f.u()), &dj) {
            return Err(Error::CocycleViolation(format!(
                "discriminants on ({i},{j}) differ by more than the square of the transition"
            )));
        }
    }
    Ok(())
}

/// Restricts `d` to a finer cover whose element `k` lies inside piece `parent[k]`.
pub fn refine(
    d: &QuadDescentDatum,
    finer: &Arc<Cover>,
    parent: &[usize],
) -> Result<QuadDescentDatum> {
    if finer.base != d.layer.cover.base {
        return Err(Error::BaseMismatch);
    }
    if parent.len() != finer.len() || parent.iter().any(|&p| p >= d.layer.len()) {
        return Err(Error::CocycleViolation("parent map does not fit the covers".into()));
    }
    let layer = match &d.layer.algebra {
        Some(a) => Layer::extension(finer, a)?,
        None => Layer::base(finer),
    };
    let mut locals = Vec::with_capacity(finer.len());
    for (k, &p) in parent.iter().enumerate() {
        let q = restrict_quad(&d.locals[p], layer.piece(k)).map_err(|_| {
            Error::CocycleViolation(format!("piece {k} does not lie inside piece {p}"))
        })?;
        locals.push((q.t().clone(), q.n().clone()));
    }
    let mut transitions = Vec::new();
    for k in 0..finer.len() {
        for l in k + 1..finer.len() {
            let f = d.transition(parent[k], parent[l])?;
            let g = restrict_hom(&f, layer.overlap(k, l))?;
            transitions.push((k, l, g.u().clone(), g.c().clone()));
        }
    }
    QuadDescentDatum::new(&layer, locals, transitions)
}

/// A global based form of a descent datum, with isomorphisms
/// `global|_i -> local_i` on each piece.
#[derive(Clone, Debug, PartialEq)]
pub struct Globalized {
    pub quad: BasedQuadratic,
    pub witnesses: Vec<QuadHom>,
}

/// Searches for a global generator `y` given on piece 0 by `u x_0 + c`, with
/// `u` from a small set of scalar units and `c` from a bounded family.
pub fn globalize(d: &QuadDescentDatum) -> Result<Globalized> {
    let layer = &d.layer;
    if layer.len() > 2 {
        return Err(Error::UnsupportedBase(format!(
            "globalization is limited to covers with at most 2 pieces, got {}",
            layer.len()
        )));
    }
    if !globalizable_base(&layer.cover.base) {
        return Err(Error::UnsupportedBase(format!("{}", layer.cover.base)));
    }
    let base0 = layer.cover.piece(0);
    let r0 = layer.piece(0);
    let scalars: Vec<Elem> =
        small_units(base0).iter().map(|a| layer.scalar(r0, a)).collect();
    let candidates = small_elements(r0);
    for u0 in &scalars {
        for c0 in &candidates {
            if let Some(g) = try_generator(d, u0, c0)? {
                return Ok(g);
            }
        }
    }
    Err(Error::NotGlobalizable)
}

fn try_generator(d: &QuadDescentDatum, u0: &Elem, c0: &Elem) -> Result<Option<Globalized>> {
    let layer = &d.layer;
    let r0 = layer.piece(0);
    // y = u_i x_i + c_i on each piece
    let mut choices: Vec<Vec<(Elem, Elem)>> = vec![vec![(u0.clone(), c0.clone())]];
    if layer.len() == 2 {
        let ov = layer.overlap(0, 1);
        let f = d.transition(0, 1)?;
        let u0r = restrict(u0, r0, ov)?;
        let c0r = restrict(c0, r0, ov)?;
        // u0 x0 + c0 = u0 (U x1 + C) + c0
        let u1 = ov.mul(&u0r, f.u());
        let c1 = ov.add(&ov.mul(&u0r, f.c()), &c0r);
        let r1 = layer.piece(1);
        let us: Vec<Elem> =
            lifts(r1, ov, &u1).into_iter().filter(|u| r1.is_unit(u)).collect();
        let cs = lifts(r1, ov, &c1);
        let mut pairs = Vec::new();
        'outer: for u in &us {
            for c in &cs {
                pairs.push((u.clone(), c.clone()));
                if pairs.len() >= LIFT_CAP {
                    break 'outer;
                }
            }
        }
        choices.push(pairs);
    }
    let first = &choices[0][0];
    let q0 = local_form(&d.locals[0], first);
    let rest: &[(Elem, Elem)] = choices.get(1).map_or(&[], |v| v.as_slice());
    if layer.len() == 1 {
        return Ok(glue_pair(layer, &[q0], &d.locals, std::slice::from_ref(first)));
    }
    for second in rest {
        let q1 = local_form(&d.locals[1], second);
        if let Some(g) =
            glue_pair(layer, &[q0.clone(), q1], &d.locals, &[first.clone(), second.clone()])
        {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// Trace and norm of `u x + c` in `local`.
fn local_form(local: &BasedQuadratic, gen: &(Elem, Elem)) -> (Elem, Elem) {
    let r = local.base();
    let (u, c) = gen;
    let t = r.add(&r.mul(u, local.t()), &r.add(c, c));
    let n = r.add(
        &r.add(&r.mul(&r.mul(u, u), local.n()), &r.mul(&r.mul(u, c), local.t())),
        &r.mul(c, c),
    );
    (t, n)
}

fn glue_pair(
    layer: &Layer,
    forms: &[(Elem, Elem)],
    locals: &[BasedQuadratic],
    gens: &[(Elem, Elem)],
) -> Option<Globalized> {
    let t = glue_value(layer, &forms.iter().map(|f| f.0.clone()).collect::<Vec<_>>())?;
    let n = glue_value(layer, &forms.iter().map(|f| f.1.clone()).collect::<Vec<_>>())?;
    let quad = BasedQuadratic::new(layer.global(), t, n).ok()?;
    let witnesses = gens
        .iter()
        .zip(locals)
        .enumerate()
        .map(|(i, ((u, c), local))| {
            let g = restrict_quad(&quad, layer.piece(i)).ok()?;
            QuadHom::new(&g, local, u.clone(), c.clone()).ok()
        })
        .collect::<Option<Vec<_>>>()?;
    Some(Globalized { quad, witnesses })
}

/// A global element restricting to `values[i]` on each piece, if one exists
/// among the lifts of `values[0]`.
fn glue_value(layer: &Layer, values: &[Elem]) -> Option<Elem> {
    lifts(layer.global(), layer.piece(0), &values[0]).into_iter().find(|g| {
        values.iter().enumerate().all(|(i, v)| {
            restrict(g, layer.global(), layer.piece(i)).map(|r| r == *v).unwrap_or(false)
        })
    })
}

fn globalizable_base(r: &Ring) -> bool {
    match r.kind() {
        RingKind::Integers | RingKind::Modular(_) => true,
        RingKind::Product(fs) => fs
            .iter()
            .all(|f| matches!(f.kind(), RingKind::Integers | RingKind::Modular(_))),
        _ => false,
    }
}

/// Preimages of `x` under the canonical map `src -> tgt`, capped.
pub fn lifts(src: &Ring, tgt: &Ring, x: &Elem) -> Vec<Elem> {
    if src == tgt {
        return vec![x.clone()];
    }
    match (src.kind(), tgt.kind(), x) {
        (RingKind::Modular(m), RingKind::Modular(d), Elem::Int(v)) => {
            let count = m / d;
            let mut out = Vec::new();
            let mut k = BigInt::from(0);
            while k < count && out.len() < LIFT_CAP {
                out.push(Elem::Int(v + &k * d));
                k += 1;
            }
            out
        }
        (RingKind::Product(fs), RingKind::Product(gs), Elem::Tuple(v)) if fs.len() == gs.len() => {
            let per: Vec<Vec<Elem>> =
                fs.iter().zip(gs).zip(v).map(|((f, g), a)| lifts(f, g, a)).collect();
            capped_product(&per).into_iter().map(Elem::Tuple).collect()
        }
        (RingKind::Algebra(a), RingKind::Algebra(b), Elem::Coords(v)) => {
            let per: Vec<Vec<Elem>> = v.iter().map(|c| lifts(a.base(), b.base(), c)).collect();
            capped_product(&per).into_iter().map(Elem::Coords).collect()
        }
        _ => canonical_preimage(src, tgt, x).into_iter().collect(),
    }
}

fn capped_product(per: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = vec![Vec::new()];
    for choices in per {
        let mut next = Vec::new();
        'fill: for prefix in &out {
            for c in choices {
                let mut v = prefix.clone();
                v.push(c.clone());
                next.push(v);
                if next.len() >= LIFT_CAP {
                    break 'fill;
                }
            }
        }
        out = next;
    }
    out
}

/// Scalar units tried for the leading coefficient of a global generator.
fn small_units(r: &Ring) -> Vec<Elem> {
    if r.is_finite() {
        if let Ok(all) = r.elements() {
            let mut us: Vec<Elem> = all.into_iter().filter(|x| r.is_unit(x)).collect();
            us.sort_by_key(|x| x != &r.one());
            return us;
        }
    }
    vec![r.one(), r.neg(&r.one())]
}

/// Every element of a finite ring, or elements with integer coordinates of
/// absolute value at most [`INTEGER_SEARCH_BOUND`]; zero first, smaller first.
fn small_elements(r: &Ring) -> Vec<Elem> {
    let mut out = match r.kind() {
        _ if r.is_finite() && r.cardinality().is_some_and(|c| c <= BigInt::from(CANDIDATE_CAP)) => {
            r.elements().unwrap_or_default()
        }
        RingKind::Integers | RingKind::Fractions { .. } => (0..=INTEGER_SEARCH_BOUND)
            .flat_map(|v| if v == 0 { vec![0] } else { vec![v, -v] })
            .map(|v| r.from_i64(v))
            .collect(),
        RingKind::Product(fs) => {
            let per: Vec<Vec<Elem>> = fs.iter().map(small_elements).collect();
            capped_product(&per).into_iter().map(Elem::Tuple).collect()
        }
        RingKind::Algebra(a) => {
            let per = vec![small_elements(a.base()); a.rank()];
            let mut all: Vec<Vec<Elem>> = Vec::new();
            // grow by max-norm shells so that small candidates come first
            for bound in 0..=INTEGER_SEARCH_BOUND as usize {
                let shell: Vec<Vec<Elem>> = per.iter().map(|p| p[..(2 * bound + 1).min(p.len())].to_vec()).collect();
                for v in full_product(&shell) {
                    if !all.contains(&v) {
                        all.push(v);
                    }
                    if all.len() >= CANDIDATE_CAP {
                        break;
                    }
                }
            }
            all.into_iter().map(Elem::Coords).collect()
        }
        _ => vec![r.zero()],
    };
    if let Some(pos) = out.iter().position(|x| r.is_zero(x)) {
        let z = out.remove(pos);
        out.insert(0, z);
    }
    out
}

fn full_product(per: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
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
