//! Seeded generators for rings, algebras, quadratic data, towers and descent
//! fixtures. Every generator takes the caller's RNG, so a fixed seed gives a
//! fixed stream.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::FreeRankNAlgebra;
use crate::descent::{Cover, Layer, LineDescentDatum, QuadDescentDatum};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::norm::{Extension, Tower};
use crate::poly::{Monomial, Poly};
use crate::quadratic::{BasedQuadratic, QuadHom};
use crate::ring::{make_frac, Elem, Ring, RingKind};

/// Rejection samplers give up after this many draws.
pub const REJECTION_CAP: usize = 1000;

/// Range of integers drawn for `Z` and for numerators in `Z[1/r]`.
const INT_RANGE: i64 = 6;

/// Moduli of the default modular bases.
pub const MODULI: [i64; 9] = [2, 3, 4, 5, 6, 7, 8, 9, 12];

/// `Z/m` for the default moduli, two product rings and `Z`.
pub fn default_bases() -> Vec<Ring> {
    let mut out: Vec<Ring> = MODULI.iter().map(|&m| Ring::modular(m).unwrap()).collect();
    out.push(Ring::product(vec![Ring::modular(2).unwrap(), Ring::modular(3).unwrap()]).unwrap());
    out.push(Ring::product(vec![Ring::modular(4).unwrap(), Ring::modular(5).unwrap()]).unwrap());
    out.push(Ring::integers());
    out
}

/// The finite members of [`default_bases`].
pub fn finite_bases() -> Vec<Ring> {
    default_bases().into_iter().filter(Ring::is_finite).collect()
}

pub fn random_elem(rng: &mut impl Rng, r: &Ring) -> Elem {
    match r.kind() {
        RingKind::Integers => Elem::Int(rng.gen_range(-INT_RANGE..=INT_RANGE).into()),
        RingKind::Modular(m) => {
            let m = i64::try_from(m).expect("modulus fits in i64");
            r.from_i64(rng.gen_range(0..m))
        }
        RingKind::Fractions { radical } => {
            let num = BigInt::from(rng.gen_range(-INT_RANGE..=INT_RANGE));
            make_frac(num, rng.gen_range(0..=2), radical)
        }
        RingKind::Polynomial { base, vars } => {
            let terms = (0..rng.gen_range(0..=3))
                .map(|_| {
                    let exps = (0..vars.len()).map(|_| rng.gen_range(0..=2)).collect();
                    (Monomial(exps), random_elem(rng, base))
                })
                .collect::<Vec<_>>();
            Elem::Poly(Poly::from_terms(base, terms))
        }
        RingKind::Product(fs) => Elem::Tuple(fs.iter().map(|f| random_elem(rng, f)).collect()),
        RingKind::Idempotent { base, idempotent } => base.mul(idempotent, &random_elem(rng, base)),
        RingKind::Algebra(a) => Elem::Coords(random_coords(rng, a)),
    }
}

pub fn random_coords(rng: &mut impl Rng, a: &FreeRankNAlgebra) -> Vec<Elem> {
    (0..a.rank()).map(|_| random_elem(rng, a.base())).collect()
}

/// A uniformly drawn unit for finite rings; over infinite rings a small unit.
pub fn random_unit(rng: &mut impl Rng, r: &Ring) -> Result<Elem> {
    match r.kind() {
        RingKind::Integers => Ok(r.from_i64(if rng.gen_bool(0.5) { 1 } else { -1 })),
        RingKind::Polynomial { base, .. } => {
            let u = random_unit(rng, base)?;
            r.embed(&u)
        }
        RingKind::Product(fs) => {
            Ok(Elem::Tuple(fs.iter().map(|f| random_unit(rng, f)).collect::<Result<_>>()?))
        }
        RingKind::Algebra(a) => {
            // units of orders over Z are sparse, fall back to scalars
            for _ in 0..64 {
                let x = random_elem(rng, r);
                if r.is_unit(&x) {
                    return Ok(x);
                }
            }
            Ok(Elem::Coords(a.scalar(&random_unit(rng, a.base())?)))
        }
        _ => {
            for _ in 0..REJECTION_CAP {
                let x = random_elem(rng, r);
                if r.is_unit(&x) {
                    return Ok(x);
                }
            }
            Err(Error::GenerationExhausted(REJECTION_CAP))
        }
    }
}

/// A random rank-`n` algebra: monogenic or a product of smaller ones, then
/// possibly rewritten in a random basis.
pub fn random_algebra(rng: &mut impl Rng, base: &Ring, n: usize) -> Result<FreeRankNAlgebra> {
    assert!(n >= 1, "rank must be positive");
    let alg = if n >= 2 && rng.gen_bool(0.3) {
        let k = rng.gen_range(1..n);
        let a1 = random_algebra(rng, base, k)?;
        let a2 = random_algebra(rng, base, n - k)?;
        FreeRankNAlgebra::product_algebra(&a1, &a2)?
    } else {
        let lower: Vec<Elem> = (0..n).map(|_| random_elem(rng, base)).collect();
        FreeRankNAlgebra::monogenic(base, &lower)?
    };
    if n >= 2 && rng.gen_bool(0.5) {
        change_basis(rng, &alg)
    } else {
        Ok(alg)
    }
}

/// The same algebra in the basis given by the columns of a random invertible
/// matrix `P = D L U`.
pub fn change_basis(rng: &mut impl Rng, alg: &FreeRankNAlgebra) -> Result<FreeRankNAlgebra> {
    let r = alg.base();
    let n = alg.rank();
    let mut small = |i: usize, j: usize, unit: &mut dyn FnMut() -> Result<Elem>| -> Result<Elem> {
        Ok(match i.cmp(&j) {
            std::cmp::Ordering::Equal => unit()?,
            _ => r.from_i64(rng.gen_range(-2..=2)),
        })
    };
    let mut one = || Ok(r.one());
    let mut l = Vec::with_capacity(n * n);
    let mut u = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            l.push(if j > i { r.zero() } else { small(i, j, &mut one)? });
            u.push(if j < i { r.zero() } else { small(i, j, &mut one)? });
        }
    }
    let d: Vec<Elem> = (0..n).map(|_| random_unit(rng, r)).collect::<Result<_>>()?;
    let p = Matrix::diagonal(r, &d)
        .mat_mul(&Matrix::new(r, n, n, l)?)?
        .mat_mul(&Matrix::new(r, n, n, u)?)?;
    let det_inv = r.inverse(&p.det()?)?;
    let p_inv = p.adjugate()?.scale(&det_inv);
    let col = |j: usize| -> Vec<Elem> { (0..n).map(|i| p.get(i, j).clone()).collect() };
    let mut constants = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let prod = alg.mul_coords(&col(i), &col(j));
            constants[i][j] = p_inv.mul_vec(&prod)?;
        }
    }
    let unit = p_inv.mul_vec(alg.unit())?;
    FreeRankNAlgebra::new(r, constants, unit)
}

pub fn random_extension(rng: &mut impl Rng, base: &Ring, n: usize) -> Result<Extension> {
    Ok(Extension::new(random_algebra(rng, base, n)?))
}

pub fn random_quad(rng: &mut impl Rng, r: &Ring) -> BasedQuadratic {
    BasedQuadratic::new(r, random_elem(rng, r), random_elem(rng, r)).expect("elements of r")
}

/// A valid hom into `target`: the source is solved from the chosen `(u, c)`.
pub fn random_hom_to(rng: &mut impl Rng, target: &BasedQuadratic) -> Result<QuadHom> {
    let r = target.base();
    let u = if rng.gen_bool(0.75) { random_unit(rng, r)? } else { random_elem(rng, r) };
    QuadHom::with_derived_source(target, u, random_elem(rng, r))
}

/// `(f, g)` with `f: p -> q` and `g: q -> r`.
pub fn random_chain(rng: &mut impl Rng, r: &Ring) -> Result<(QuadHom, QuadHom)> {
    let q = random_quad(rng, r);
    let g = random_hom_to(rng, &q)?;
    let f = random_hom_to(rng, g.source())?;
    Ok((f, g))
}

/// `Z -> Z[i] -> Z[i][y]/(y^2 - i)`.
pub fn gaussian_tower() -> Tower {
    let z = Ring::integers();
    let zi = Arc::new(FreeRankNAlgebra::monogenic(&z, &[z.one(), z.zero()]).unwrap());
    let lower = Extension::from_arc(zi);
    let b = lower.ring().clone();
    let minus_i = Elem::Coords(vec![z.zero(), z.from_i64(-1)]);
    let upper = FreeRankNAlgebra::monogenic(&b, &[minus_i, b.zero()]).unwrap();
    Tower::new(&lower, &Extension::new(upper)).unwrap()
}

/// `A -> A^m -> (A^m)^n`.
pub fn split_tower(base: &Ring, m: usize, n: usize) -> Result<Tower> {
    let lower = Extension::new(FreeRankNAlgebra::split(base, m)?);
    let upper = Extension::new(FreeRankNAlgebra::split(lower.ring(), n)?);
    Tower::new(&lower, &upper)
}

pub fn random_tower(rng: &mut impl Rng, base: &Ring, m: usize, n: usize) -> Result<Tower> {
    let lower = random_extension(rng, base, m)?;
    let upper = random_extension(rng, lower.ring(), n)?;
    Tower::new(&lower, &upper)
}

/// The cover of `Z` by `{2, 3}`.
pub fn integer_cover() -> Arc<Cover> {
    let z = Ring::integers();
    Arc::new(Cover::generated_by(&z, vec![z.from_i64(2), z.from_i64(3)]).unwrap())
}

/// The cover of `Z/12` by `{3, 4}`.
pub fn modular_cover() -> Arc<Cover> {
    let r = Ring::modular(12).unwrap();
    Arc::new(Cover::generated_by(&r, vec![r.from_i64(3), r.from_i64(4)]).unwrap())
}

/// A datum on `layer` made from a random global quadratic by random local
/// generator changes, with the global quadratic.
pub fn random_descent(
    rng: &mut impl Rng,
    layer: &Layer,
) -> Result<(BasedQuadratic, QuadDescentDatum)> {
    let global = random_quad(rng, layer.global());
    let gens = (0..layer.len())
        .map(|i| {
            let p = layer.piece(i);
            Ok((random_unit(rng, p)?, random_elem(rng, p)))
        })
        .collect::<Result<Vec<_>>>()?;
    let (d, _) = QuadDescentDatum::from_global(layer, &global, &gens)?;
    Ok((global, d))
}

/// A line datum `v_i / v_j` from random local units `v_i`.
pub fn random_line_descent(rng: &mut impl Rng, layer: &Layer) -> Result<LineDescentDatum> {
    let v = (0..layer.len()).map(|i| random_unit(rng, layer.piece(i))).collect::<Result<Vec<_>>>()?;
    let mut transitions = Vec::new();
    for i in 0..layer.len() {
        for j in i + 1..layer.len() {
            let ov = layer.overlap(i, j);
            let vi = crate::descent::restrict(&v[i], layer.piece(i), ov)?;
            let vj = crate::descent::restrict(&v[j], layer.piece(j), ov)?;
            transitions.push((i, j, ov.mul(&vi, &ov.inverse(&vj)?)));
        }
    }
    LineDescentDatum::new(layer, transitions)
}

/// One of the default bases, chosen uniformly.
pub fn pick_base(rng: &mut impl Rng, bases: &[Ring]) -> Ring {
    bases.choose(rng).expect("non-empty base list").clone()
}
