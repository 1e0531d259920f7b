//! Randomized law checking over a family of base rings.

use std::fmt::Display;
use std::sync::Arc;
use std::time::{Duration, Instant};

use quadnorm_core::algebra::binomial;
use quadnorm_core::json::{
    algebra_from_json, algebra_to_json, descent_to_json, elem_to_json, quad_from_json,
    quad_with_base_to_json, ring_to_json,
};
use quadnorm_core::norm::{norm_entry_closed_sum, norm_entry_fraction};
use quadnorm_core::random::{
    default_bases, integer_cover, modular_cover, pick_base, random_chain, random_coords,
    random_descent, random_elem, random_extension, random_hom_to, random_quad, random_tower,
};
use quadnorm_core::{
    check_disc_compatibility, det_bundle, find_isomorphism, glue_norm, line_norm, norm_hom,
    norm_quad, norm_tower_check, norm_tower_check_hom, BasedQuadratic, Elem, Extension,
    FreeRankNAlgebra, Layer, Matrix, QuadHom, Ring,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub const DEFAULT_CASES: usize = 200;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub cases_per_law: usize,
    pub bases: Vec<Ring>,
    pub laws: Vec<&'static str>,
}

impl VerifyConfig {
    pub fn new(seed: u64, cases_per_law: usize) -> Self {
        VerifyConfig { seed, cases_per_law, bases: default_bases(), laws: law_names() }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct LawReport {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct VerifyReport {
    pub seed: String,
    pub cases_per_law: usize,
    pub laws: Vec<LawReport>,
    /// Wall-clock per law; kept out of the JSON so reports are reproducible.
    #[serde(skip)]
    pub timings: Vec<Duration>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.laws.iter().all(|l| l.failed == 0)
    }
}

pub struct Failure {
    inputs: Value,
    reason: String,
}

fn fail(inputs: &Value, reason: impl Display) -> Failure {
    Failure { inputs: inputs.clone(), reason: reason.to_string() }
}

fn ensure(cond: bool, inputs: &Value, reason: &str) -> Result<(), Failure> {
    if cond {
        Ok(())
    } else {
        Err(fail(inputs, reason))
    }
}

struct Family {
    bases: Vec<Ring>,
    finite: Vec<Ring>,
    layers: Vec<Layer>,
}

impl Family {
    fn new(bases: &[Ring]) -> Self {
        let mut finite: Vec<Ring> = bases.iter().filter(|r| r.is_finite()).cloned().collect();
        if finite.is_empty() {
            finite = default_bases().into_iter().filter(Ring::is_finite).collect();
        }
        Family { bases: bases.to_vec(), finite, layers: descent_layers() }
    }
}

fn descent_layers() -> Vec<Layer> {
    let z = Ring::integers();
    let z12 = Ring::modular(12).unwrap();
    let zi = FreeRankNAlgebra::monogenic(&z, &[z.one(), z.zero()]).unwrap();
    let cubic = FreeRankNAlgebra::monogenic(&z12, &[z12.from_i64(5), z12.one(), z12.zero()]).unwrap();
    let (zc, mc) = (integer_cover(), modular_cover());
    [
        (&zc, FreeRankNAlgebra::trivial(&z)),
        (&zc, zi),
        (&mc, FreeRankNAlgebra::trivial(&z12)),
        (&mc, cubic),
    ]
    .into_iter()
    .map(|(c, a)| Layer::extension(c, &Arc::new(a)).unwrap())
    .collect()
}

type Law = fn(&mut ChaCha8Rng, &Family) -> Result<(), Failure>;

const LAWS: [(&str, Law); 18] = [
    ("ring-axioms", ring_axioms),
    ("determinant", determinant),
    ("norm-multiplicative", norm_multiplicative),
    ("transitivity", transitivity),
    ("polarized", polarized),
    ("cayley-hamilton", cayley_hamilton),
    ("star-monoid", star_monoid),
    ("hom-preserves-norm", hom_preserves_norm),
    ("disc-identity", disc_identity),
    ("functoriality", functoriality),
    ("norm-product", norm_product),
    ("square-root", square_root),
    ("swap-parity", swap_parity),
    ("tower", tower),
    ("monoid-hom", monoid_hom),
    ("descent", descent),
    ("round-trip", round_trip),
    ("oracle", oracle),
];

pub fn law_names() -> Vec<&'static str> {
    LAWS.iter().map(|(n, _)| *n).collect()
}

/// Resolves `all` or a single law name.
pub fn select_laws(name: &str) -> Option<Vec<&'static str>> {
    if name == "all" {
        return Some(law_names());
    }
    LAWS.iter().find(|(n, _)| *n == name).map(|(n, _)| vec![*n])
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn case_rng(seed: u64, law: usize, case: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(((law as u64) << 32) | case as u64)))
}

pub fn run(config: &VerifyConfig) -> VerifyReport {
    let family = Family::new(&config.bases);
    let mut laws = Vec::new();
    let mut timings = Vec::new();
    for (index, (name, law)) in LAWS.iter().enumerate() {
        if !config.laws.contains(name) {
            continue;
        }
        let start = Instant::now();
        let outcomes: Vec<Result<(), Failure>> = (0..config.cases_per_law)
            .into_par_iter()
            .map(|case| law(&mut case_rng(config.seed, index, case), &family))
            .collect();
        timings.push(start.elapsed());
        let failed = outcomes.iter().filter(|o| o.is_err()).count();
        let counterexample = outcomes.into_iter().enumerate().find_map(|(case, o)| {
            o.err().map(|f| json!({"case": case, "reason": f.reason, "inputs": f.inputs}))
        });
        laws.push(LawReport {
            name: name.to_string(),
            passed: config.cases_per_law - failed,
            failed,
            counterexample,
        });
    }
    VerifyReport { seed: config.seed.to_string(), cases_per_law: config.cases_per_law, laws, timings }
}

fn ext_json(ext: &Extension) -> Value {
    json!({"algebra": algebra_to_json(ext.algebra())})
}

fn random_ext(g: &mut ChaCha8Rng, bases: &[Ring], max_rank: usize) -> Result<Extension, Failure> {
    let base = pick_base(g, bases);
    let n = g.gen_range(1..=max_rank);
    random_extension(g, &base, n).map_err(|e| fail(&json!({"base": ring_to_json(&base)}), e))
}

fn ring_axioms(g: &mut ChaCha8Rng, fam: &Family) -> Result<(), Failure> {
    let r = pick_base(g, &fam.bases);
    let [x, y, z] = [0; 3].map(|_| random_elem(g, &r));
    let inputs = json!({
        "base": ring_to_json(&r),
        "x": elem_to_json(&r, &x), "y": elem_to_json(&r, &y), "z": elem_to_json(&r, &z),
    });
    ensure(r.add(&r.add(&x, &y), &z) == r.add(&x, &r.add(&y, &z)), &inputs, "addition is not associative")?;
    ensure(r.mul(&r.mul(&x, &y), &z) == r.mul(&x, &r.mul(&y, &z)), &inputs, "multiplication is not associative")?;
    ensure(r.mul(&x, &y) == r.mul(&y, &x), &inputs, "multiplication is not commutative")?;
    ensure(
        r.mul(&x, &r.add(&y, &z)) == r.add(&r.mul(&x, &y), &r.mul(&x, &z)),
        &inputs,
        "distributivity fails",
    )?;
    ensure(r.mul(&r.one(), &x) == x, &inputs, "one is not a unit")
}

fn laplace(m: &Matrix) -> Elem {
    let r = m.ring();
    if m.rows() == 0 {
        return r.one();
    }
    (0..m.cols()).fold(r.zero(), |acc, j| {
        let t = r.mul(m.get(0, j), &laplace(&m.minor(0, j)));
        if j % 2 == 0 {
            r.add(&acc, &t)
        } else {
            r.sub(&acc, &t)
        }
    })
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| m.row(i).iter().map(|x| elem_to_json(m.ring(), x)).collect()).collect())
}

fn determinant(g: &mut ChaCha8Rng, fam: &Family) -> Result<(), Failure> {
    let r = pick_base(g, &fam.bases);
    let n = g.gen_range(1..=4);
    let mut mat = || Matrix::new(&r, n, n, (0..n * n).map(|_| random_elem(g, &r)).collect()).unwrap();
    let (a, b) = (mat(), mat());
    let inputs = json!({"base": ring_to_json(&r), "a": matrix_json(&a), "b": matrix_json(&b)});
    let det = |m: &Matrix| m.det().map_err(|e| fail(&inputs, e));
    let da = det(&a)?;
    let ab = a.mat_mul(&b).map_err(|e| fail(&inputs, e))?;
    ensure(det(&ab)? == r.mul(&da, &det(&b)?), &inputs, "det(AB) != det(A) det(B)")?;
    ensure(det(&a.transpose())? == da, &inputs, "det(A^T) != det(A)")?;
    ensure(laplace(&a) == da, &inputs, "det disagrees with cofactor expansion")
}

fn norm_multiplicative(g: &mut ChaCha8Rng, fam: &Family) -> Result<(), Failure> {
    let ext = random_ext(g, &fam.bases, 4)?;
    let a = ext.algebra();
    let (x, y) = (random_coords(g, a), random_coords(g, a));
    let inputs = json!({"extension": ext_json(&ext), "x": elem_to_json(ext.ring(), &Elem::Coords(x.clone())), "y": elem_to_json(ext.ring(), &Elem::Coords(y.clone()))});
    let r = a.base();
    ensure(a.norm(&a.mul_coords(&x, &y)) == r.mul(&a.norm(&x), &a.norm(&y)), &inputs, "s_n(xy) != s_n(x) s_n(y)")
}

fn coords(x: &Elem) -> &[Elem] {
    match x {
        Elem::Coords(v) => v,
        other => panic!("expected coordinates, found {other:?}"),
    }
}

fn transitivity(g: &mut ChaCha8Rng, fam: &Family) -> Result<(), Failure> {
    let base = pick_base(g, &fam.bases);
    let (m, n) = *[(1, 2), (2, 1), (2, 2), (1, 3), (3, 1), (1, 4), (4, 1)].choose(g).unwrap();
    let t = random_tower(g, &base, m, n).map_err(|e| fail(&json!({"base": ring_to_json(&base)}), e))?;
    let c = random_coords(g, t.upper().algebra());
    let inputs = json!({
        "lower": ext_json(t.lower()),
        "upper": ext_json(t.upper()),
        "element": elem_to_json(t.upper().ring(), &Elem::Coords(c.clone())),
    });
    let stepwise = t.lower().algebra().norm(coords(&t.upper().algebra().norm(&c)));
    let direct = t.total().algebra().norm(coords(&t.flatten(&Elem::Coords(c))));
    ensure(direct == stepwise, &inputs, "s_mn(c) != s_m(s_n(c))")
}

fn composition(g: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<usize> {
    let mut parts = vec![0; m];
    for _ in 0..n {
        parts[g.gen_range(0..m)] += 1;
    }
    parts
}

fn polarized(g: &mut ChaCha8Rng, fam: &Family) -> Result<(), Failure> {
    let ext = random_ext(g, &fam.bases, 4)?;
    let a = ext.algebra();
    let r = a.base();
    let n = a.rank();
    let m = g.gen_range(2..=3);
    let ks = composition(g, n, m);
    let bs: Vec<Vec<Elem>> = (0..m).map(|_| random_coords(g, a)).collect();
    let s = random_elem(g, r);
    let b = random_coords(g, a);
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(g);
    let mut k0 = composition(g, n, m - 1);
    k0.insert(0, 0);
    let inputs = json!({
        "extension": ext_json(&ext),
        "exponents": ks,
        "elements": bs.iter().map(|x| elem_to_json(ext.ring(), &Elem::Coords(x.clone()))).collect::<Vec<_>>(),
        "scalar": elem_to_json(r, &s),
        "multiplier": elem_to_json(ext.ring(), &Elem::Coords(b.clone())),
        "permutation": perm,
        "degenerate_exponents": k0,
    });
    let polar = |ks: &[usize], bs: &[Vec<Elem>]| {
        let parts: Vec<(usize, &[Elem])> = ks.iter().zip(bs).map(|(k, b)| (*k, b.as_slice())).collect();
        a.polarized(&parts).map_err(|e| fail(&inputs, e))
    };
    let value = polar(&ks, &bs)?;

    let kp: Vec<usize> = perm.iter().map(|&i| ks[i]).collect();
    let bp: Vec<Vec<Elem>> = perm.iter().map(|&i| bs[i].clone()).collect();
    ensure(polar(&kp, &bp)? == value, &inputs, "reordering")?;

    let mut same = bs.clone();
    same[1] = bs[0].clone();
    let mut k2 = vec![ks[0] + ks[1]];
    k2.extend_from_slice(&ks[2..]);
    let mut b2 = vec![bs[0].clone()];
    b2.extend_from_slice(&bs[2..]);
    let coeff = r.from_bigint(&binomial(ks[0] + ks[1], ks[0]));
    ensure(polar(&ks, &same)? == r.mul(&coeff, &polar(&k2, &b2)?), &inputs, "combination of equal slots")?;

    let mut scaled = bs.clone();
    scaled[0] = a.scale_coords(&s, &bs[0]);
    ensure(polar(&ks, &scaled)? == r.mul(&r.pow(&s, ks[0] as u64), &value), &inputs, "homogeneity")?;

    ensure(polar(&k0, &bs)? == polar(&k0[1..], &bs[1..])?, &inputs, "degeneracy")?;

    let prod: Vec<Vec<Elem>> = bs.iter().map(|x| a.mul_coords(&b, x)).collect();
    ensure(polar(&ks, &prod)? == r.mul(&a.norm(&b), &value), &inputs, "multiplicativity")
}

fn cayley_hamilton(g: &mut ChaCha8Rng, fam: &Family) -> Result<(), Failure> {
    let ext = random_ext(g, &fam.bases, 4)?;
    let a = ext.algebra();
    let r = a.base();
    let n = a.rank();
    let x = random_coords(g, a);
    let inputs = json!({"extension": ext_json(&ext), "element": elem_to_json(ext.ring(), &Elem::Coords(x.clone()))});
    let cp = a.char_poly_coeffs(&x).map_err(|e| fail(&inputs, e))?;
    let m = a.mul_matrix(&x);
    let mut acc = Matrix::zero(r, n, n);
    let mut power = Matrix::identity(r, n);
    for c in &cp {
        acc = acc.mat_add(&power.scale(c)).map_err(|e| fail(&inputs, e))?;
        power = power.mat_mul(&m).map_err(|e| fail(&inputs, e))?;
    }
    ensure(acc == Matrix::zero(r, n, n), &inputs, "characteristic polynomial does not kill x")
}

fn star_monoid(g: &mut ChaCha8Rng, fam: &Family) -> Result<(), Failure> {
    let r = pick_base(g, &fam.bases);
    let [p, q, s] = [0; 3].map(|_| random_quad(g, &r));
    let inputs = json!({"p": quad_with_base_to_json(&p), "q": quad_with_base_to_json(&q), "s": quad_with_base_to_json(&s)});
    let star = |x: &BasedQuadratic, y: &BasedQuadratic| x.star(y).map_err(|e| fail(&inputs, e));
    let pq = star(&p, &q)?;
    ensure(pq == star(&q, &p)?, &inputs, "star is not commutative")?;
    ensure(star(&pq, &s)? == star(&p, &star(&q, &s)?)?, &inputs, "star is not associative")?;
    let one = BasedQuadratic::new(&r, r.one(), r.zero()).unwrap();
    let zero = BasedQuadratic::new(&r, r.zero(), r.zero()).unwrap();
    ensure(star(&one, &p)? == p, &inputs, "(1,0) is not the identity")?;
    ensure(star(&zero, &p)? == zero, &inputs, "(0,0) does not absorb")?;
    ensure(pq.discriminant() == r.mul(&p.discriminant(), &q.discriminant()), &inputs, "disc is not multiplicative")
}

fn hom_json(f: &QuadHom) -> Value {
    json!({
        "source": quad_with_base_to_json(f.source()),
        "target": quad_with_base_to_json(f.target()),
        "u": elem_to_json(f.base(), f.u()),
        "c": elem_to_json(f.base(), f.c()),
    })
}

fn hom_preserves_norm(g: &mut ChaCha8Rng, fam: &Family) -> Result<(), Failure> {
    let r = pick_base(g, &fam.bases);
    let target = random_quad(g, &r);
    let f = random_hom_to(g, &target).map_err(|e| fail(&quad_with_base_to_json(&target), e))?;
    let (src, tgt) = (f.source().as_rank2_algebra(), f.target().as_rank2_algebra());
    let zs: Vec<Vec<Elem>> = (0..20).map(|_| random_coords(g, &src)).collect();
    let inputs = json!({
        "hom": hom_json(&f),
        "elements": zs.iter().map(|z| z.iter().map(|c| elem_to_json(&r, c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    ensure(f.is_valid(), &inputs, "generated hom is not valid")?;
    for z in &zs {
        let fz = f.apply_coords(z);
        ensure(tgt.norm(&fz) == src.norm(z), &inputs, "norm is not preserved")?;
        ensure(tgt.trace(&fz) == src.trace(z), &inputs, "trace is not preserved")?;
    }
    Ok(())
}

fn disc_identity(g: &mut ChaCha8Rng, fam: &Family) -> Result<(), Failure> {
    let ext = random_ext(g, &fam.bases, 4)?;
    let b = ext.ring();
    let q = random_quad(g, b);
    let inputs = json!({"extension": ext_json(&ext), "quad": quad_with_base_to_json(&q)});
    let nq = norm_quad(&ext, &q).map_err(|e| fail(&inputs, e))?;
    let d = b.sub(&b.mul(q.t(), q.t()), &b.mul(&b.from_i64(4), q.n()));
    ensure(nq.discriminant() == ext.algebra().norm(coords(&d)), &inputs, "t^2 - 4m != s_n(T^2 - 4N)")
}

fn functoriality(g: &mut ChaCha8Rng, fam: &Family) -> Result<(), Failure> {
    let ext = random_ext(g, &fam.bases, 4)?;
    let inputs0 = json!({"extension": ext_json(&ext)});
    let (f, h) = random_chain(g, ext.ring()).map_err(|e| fail(&inputs0, e))?;
    let inputs = json!({"extension": ext_json(&ext), "first": hom_json(&f), "second": hom_json(&h)});
    let nh = |x: &QuadHom| norm_hom(&ext, x).map_err(|e| fail(&inputs, e));
    let hf = QuadHom::compose(&h, &f).map_err(|e| fail(&inputs, e))?;
    let stepwise = QuadHom::compose(&nh(&h)?, &nh(&f)?).map_err(|e| fail(&inputs, e))?;
    ensure(nh(&hf)? == stepwise, &inputs, "norm of a composite is not the composite of norms")
}

fn norm_product(g: &mut ChaCha8Rng, fam: &Family) -> Result<(), Failure> {
    let a = pick_base(g, &fam.bases);
    let ext = Extension::new(FreeRankNAlgebra::split(&a, 2).unwrap());
    let [s, m, t, n] = [0; 4].map(|_| random_elem(g, &a));
    let p = BasedQuadratic::new(&a, s.clone(), m.clone()).unwrap();
    let q = BasedQuadratic::new(&a, t.clone(), n.clone()).unwrap();
    let pair = |x: &Elem, y: &Elem| Elem::Coords(vec![x.clone(), y.clone()]);
    let both = BasedQuadratic::new(ext.ring(), pair(&s, &t), pair(&m, &n)).unwrap();
    let inputs = json!({"left": quad_with_base_to_json(&p), "right": quad_with_base_to_json(&q)});
    let got = norm_quad(&ext, &both).map_err(|e| fail(&inputs, e))?;
    ensure(got == p.star(&q).map_err(|e| fail(&inputs, e))?, &inputs, "norm over A x A is not the star product")
}

fn square_root(g: &mut ChaCha8Rng, fam: &Family) -> Result<(), Failure> {
    let ext = random_ext(g, &fam.bases, 3)?;
    let (a, b) = (ext.base(), ext.ring());
    let d = random_elem(g, b);
    let inputs = json!({"extension": ext_json(&ext), "d": elem_to_json(b, &d)});
    let q = BasedQuadratic::new(b, b.zero(), b.neg(&d)).unwrap();
    let got = norm_quad(&ext, &q).map_err(|e| fail(&inputs, e))?;
    let scale = a.pow(&a.from_i64(4), ext.rank() as u64 - 1);
    let want = BasedQuadratic::new(a, a.zero(), a.neg(&a.mul(&scale, &ext.algebra().norm(coords(&d))))).unwrap();
    ensure(got == want, &inputs, "norm of (0, -D) is not (0, -4^(n-1) s_n(D))")
}

fn swap_parity(g: &mut ChaCha8Rng, fam: &Family) -> Result<(), Failure> {
    let a = pick_base(g, &fam.bases);
    let n = g.gen_range(1..=4);
    let inputs = json!({"base": ring_to_json(&a), "rank": n});
    let ext = Extension::new(FreeRankNAlgebra::split(&a, n).map_err(|e| fail(&inputs, e))?);
    let b = ext.ring();
    let q = BasedQuadratic::new(b, b.one(), b.zero()).unwrap();
    let swap = QuadHom::new(&q, &q, b.from_i64(-1), b.one()).map_err(|e| fail(&inputs, e))?;
    let got = norm_hom(&ext, &swap).map_err(|e| fail(&inputs, e))?;
    let (u, c) = if n % 2 == 0 { (a.one(), a.zero()) } else { (a.from_i64(-1), a.one()) };
    ensure(got.u() == &u && got.c() == &c, &inputs, "swap norm has the wrong parity")
}

fn tower(g: &mut ChaCha8Rng, fam: &Family) -> Result<(), Failure> {
    let base = pick_base(g, &fam.bases);
    let (m, n) = *[(1, 2), (2, 1), (2, 2), (1, 3), (3, 1)].choose(g).unwrap();
    let t = random_tower(g, &base, m, n).map_err(|e| fail(&json!({"base": ring_to_json(&base)}), e))?;
    let c = t.upper().ring().clone();
    let q = random_quad(g, &c);
    let (_, f) = random_chain(g, &c).map_err(|e| fail(&json!({}), e))?;
    let inputs = json!({
        "lower": ext_json(t.lower()),
        "upper": ext_json(t.upper()),
        "quad": quad_with_base_to_json(&q),
        "hom": hom_json(&f),
    });
    let (d, s) = norm_tower_check(t.lower(), t.upper(), &q).map_err(|e| fail(&inputs, e))?;
    ensure(d == s, &inputs, "direct and stepwise norms differ")?;
    let (dh, sh) = norm_tower_check_hom(t.lower(), t.upper(), &f).map_err(|e| fail(&inputs, e))?;
    ensure(dh == sh, &inputs, "direct and stepwise hom norms differ")
}

fn monoid_hom(g: &mut ChaCha8Rng, fam: &Family) -> Result<(), Failure> {
    let ext = random_ext(g, &fam.finite, 3)?;
    let b = ext.ring();
    let (p, q) = (random_quad(g, b), random_quad(g, b));
    let inputs = json!({"extension": ext_json(&ext), "p": quad_with_base_to_json(&p), "q": quad_with_base_to_json(&q)});
    let nq = |x: &BasedQuadratic| norm_quad(&ext, x).map_err(|e| fail(&inputs, e));
    let lhs = nq(&p.star(&q).map_err(|e| fail(&inputs, e))?)?;
    let rhs = nq(&p)?.star(&nq(&q)?).map_err(|e| fail(&inputs, e))?;
    find_isomorphism(&lhs, &rhs).map(|_| ()).map_err(|e| fail(&inputs, e))
}

fn descent(g: &mut ChaCha8Rng, fam: &Family) -> Result<(), Failure> {
    let layer = fam.layers.choose(g).unwrap();
    let (_, d) = random_descent(g, layer).map_err(|e| fail(&json!({}), e))?;
    let inputs = json!({
        "base": ring_to_json(layer.cover().base()),
        "algebra": algebra_to_json(layer.algebra().unwrap()),
        "descent": descent_to_json(&d),
    });
    let glued = glue_norm(&d).map_err(|e| fail(&inputs, e))?;
    let lhs = det_bundle(&glued).map_err(|e| fail(&inputs, e))?;
    let rhs = det_bundle(&d).and_then(|l| line_norm(&l)).map_err(|e| fail(&inputs, e))?;
    ensure(lhs == rhs, &inputs, "det of the glued norm is not the norm of det")?;
    check_disc_compatibility(&glued).map_err(|e| fail(&inputs, e))
}

fn round_trip(g: &mut ChaCha8Rng, fam: &Family) -> Result<(), Failure> {
    let ext = random_ext(g, &fam.bases, 4)?;
    let q = random_quad(g, ext.ring());
    let inputs = json!({"extension": ext_json(&ext), "quad": quad_with_base_to_json(&q)});
    let text = inputs.to_string();
    let back: Value = serde_json::from_str(&text).map_err(|e| fail(&inputs, e))?;
    let alg = algebra_from_json(&back["extension"]["algebra"]).map_err(|e| fail(&inputs, e))?;
    ensure(&alg == ext.algebra().as_ref(), &inputs, "algebra does not round-trip")?;
    let q2 = quad_from_json(None, &back["quad"]).map_err(|e| fail(&inputs, e))?;
    ensure(q2 == q, &inputs, "quadratic does not round-trip")
}

fn oracle(g: &mut ChaCha8Rng, fam: &Family) -> Result<(), Failure> {
    let ext = random_ext(g, &fam.bases, 4)?;
    let a = ext.algebra();
    let (x, y) = (random_coords(g, a), random_coords(g, a));
    let inputs = json!({
        "extension": ext_json(&ext),
        "x": elem_to_json(ext.ring(), &Elem::Coords(x.clone())),
        "y": elem_to_json(ext.ring(), &Elem::Coords(y.clone())),
    });
    for w in [-4, 2] {
        let closed = norm_entry_closed_sum(a, &x, &y, w).map_err(|e| fail(&inputs, e))?;
        let fraction = norm_entry_fraction(a, &x, &y, w).map_err(|e| fail(&inputs, e))?;
        ensure(closed == fraction, &inputs, "closed sum and fraction forms differ")?;
    }
    Ok(())
}
