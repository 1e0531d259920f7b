//! Acceptance suite. Runs each criterion at its stated size and time limit and
//! prints one PASS/FAIL line per criterion.

mod common;

use std::cell::Cell;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{coords, fixtures, laplace_det, rng};
use quadnorm_core::norm::{norm_entry_closed_sum, norm_entry_fraction};
use quadnorm_core::random::{
    finite_bases, gaussian_tower, integer_cover, modular_cover, random_chain, random_coords,
    random_descent, random_elem, random_extension, random_quad, random_tower, split_tower,
};
use quadnorm_core::{
    check_disc_compatibility, det_bundle, find_isomorphism, glue_norm, line_norm, norm_hom,
    norm_quad, norm_tower_check, norm_tower_check_hom, BasedQuadratic, Elem, Error, Extension,
    FreeRankNAlgebra, Layer, Matrix, QuadDescentDatum, QuadHom, Ring,
};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

thread_local! {
    static CONTRADICTIONS: Cell<usize> = const { Cell::new(0) };
    static NORM_CALLS: Cell<usize> = const { Cell::new(0) };
}

fn record<T>(r: quadnorm_core::Result<T>) -> Result<T, String> {
    NORM_CALLS.with(|c| c.set(c.get() + 1));
    r.map_err(|e| {
        if matches!(e, Error::InternalContradiction(_)) {
            CONTRADICTIONS.with(|c| c.set(c.get() + 1));
        }
        e.to_string()
    })
}

fn nq(ext: &Extension, q: &BasedQuadratic) -> Result<BasedQuadratic, String> {
    record(norm_quad(ext, q))
}

fn nh(ext: &Extension, f: &QuadHom) -> Result<QuadHom, String> {
    record(norm_hom(ext, f))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn norm_of_product() -> Outcome {
    let mut g = rng(101);
    let mut checked = 0;
    for m in 2..=13 {
        let a = Ring::modular(m).unwrap();
        let ext = Extension::new(FreeRankNAlgebra::split(&a, 2).unwrap());
        let b = ext.ring().clone();
        for _ in 0..500 {
            let [s, mm, t, n] = [0; 4].map(|_| random_elem(&mut g, &a));
            let pair = |x: &Elem, y: &Elem| Elem::Coords(vec![x.clone(), y.clone()]);
            let q = BasedQuadratic::new(&b, pair(&s, &t), pair(&mm, &n)).unwrap();
            let got = nq(&ext, &q)?;
            let want = BasedQuadratic::new(&a, s.clone(), mm.clone())
                .unwrap()
                .star(&BasedQuadratic::new(&a, t.clone(), n.clone()).unwrap())
                .unwrap();
            ensure(got == want, || format!("Z/{m}: ({s:?},{mm:?})x({t:?},{n:?}) gave {got:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} products over Z/2..Z/13"))
}

fn rank_fixtures(g: &mut impl Rng, ranks: &[usize], count: usize) -> Vec<Extension> {
    let mut bases = finite_bases();
    bases.push(Ring::integers());
    (0..count)
        .map(|i| {
            let base = bases.choose(g).unwrap().clone();
            random_extension(g, &base, ranks[i % ranks.len()]).unwrap()
        })
        .collect()
}

fn square_root_example() -> Outcome {
    let mut g = rng(102);
    let exts = rank_fixtures(&mut g, &[1, 2, 3], 12);
    let mut checked = 0;
    for ext in &exts {
        let (a, b, n) = (ext.base().clone(), ext.ring().clone(), ext.rank());
        for _ in 0..200 {
            let d = random_elem(&mut g, &b);
            let q = BasedQuadratic::new(&b, b.zero(), b.neg(&d)).unwrap();
            let got = nq(ext, &q)?;
            let scale = a.pow(&a.from_i64(4), n as u64 - 1);
            let want_n = a.neg(&a.mul(&scale, &ext.algebra().norm(coords(&d))));
            let want = BasedQuadratic::new(&a, a.zero(), want_n).unwrap();
            ensure(got == want, || format!("rank {n} over {a}: D = {d:?} gave {got:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} cases over {} rank 1-3 fixtures", exts.len()))
}

fn swap_parity() -> Outcome {
    let mut checked = 0;
    for a in [Ring::integers(), Ring::modular(7).unwrap(), Ring::modular(12).unwrap()] {
        for n in 1..=4 {
            let ext = Extension::new(FreeRankNAlgebra::split(&a, n).unwrap());
            let b = ext.ring().clone();
            let q = BasedQuadratic::new(&b, b.one(), b.zero()).unwrap();
            let swap = QuadHom::new(&q, &q, b.from_i64(-1), b.one()).map_err(|e| e.to_string())?;
            let got = nh(&ext, &swap)?;
            let (u, c) = if n % 2 == 0 { (a.one(), a.zero()) } else { (a.from_i64(-1), a.one()) };
            ensure(got.u() == &u && got.c() == &c, || {
                format!("n = {n} over {a}: got ({:?}, {:?})", got.u(), got.c())
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} swaps, n = 1..4"))
}

fn discriminant_identity() -> Outcome {
    let mut g = rng(104);
    let exts = rank_fixtures(&mut g, &[1, 2, 3, 4], 500);
    for ext in &exts {
        let b = ext.ring();
        let q = random_quad(&mut g, b);
        let got = nq(ext, &q)?;
        let d = b.sub(&b.mul(q.t(), q.t()), &b.mul(&b.from_i64(4), q.n()));
        let want = ext.algebra().norm(coords(&d));
        ensure(got.discriminant() == want, || format!("{q:?}: {:?} vs {want:?}", got.discriminant()))?;
    }
    Ok(format!("{} fixtures, ranks 1-4", exts.len()))
}

fn functoriality_and_transitivity() -> Outcome {
    let mut g = rng(105);
    let exts = rank_fixtures(&mut g, &[1, 2, 3, 4], 200);
    for ext in &exts {
        let (f, h) = random_chain(&mut g, ext.ring()).map_err(|e| e.to_string())?;
        let hf = QuadHom::compose(&h, &f).map_err(|e| e.to_string())?;
        let direct = nh(ext, &hf)?;
        let stepwise = QuadHom::compose(&nh(ext, &h)?, &nh(ext, &f)?).map_err(|e| e.to_string())?;
        ensure(direct == stepwise, || format!("chain {f:?} then {h:?}"))?;
    }
    let mut towers = vec![gaussian_tower()];
    towers.push(split_tower(&Ring::modular(5).unwrap(), 2, 2).unwrap());
    let mut bases = finite_bases();
    bases.push(Ring::integers());
    while towers.len() < 100 {
        let base = bases.choose(&mut g).unwrap().clone();
        let (m, n) = *[(1, 2), (2, 1), (2, 2), (1, 3), (3, 1)].choose(&mut g).unwrap();
        towers.push(random_tower(&mut g, &base, m, n).unwrap());
    }
    for t in &towers {
        let q = random_quad(&mut g, t.upper().ring());
        let (direct, stepwise) = record(norm_tower_check(t.lower(), t.upper(), &q))?;
        ensure(direct == stepwise, || format!("tower over {}: {direct:?} vs {stepwise:?}", t.lower().base()))?;
        let (_, f) = random_chain(&mut g, t.upper().ring()).map_err(|e| e.to_string())?;
        let (dh, sh) = record(norm_tower_check_hom(t.lower(), t.upper(), &f))?;
        ensure(dh == sh, || format!("tower hom over {}", t.lower().base()))?;
    }
    Ok(format!("{} chains, {} towers", exts.len(), towers.len()))
}

fn monoid_homomorphism() -> Outcome {
    let mut g = rng(106);
    let exts = rank_fixtures(&mut g, &[1, 2, 3], 200)
        .into_iter()
        .map(|e| if e.base().is_finite() { e } else { random_extension(&mut g, &Ring::modular(6).unwrap(), e.rank()).unwrap() })
        .collect::<Vec<_>>();
    for ext in &exts {
        let b = ext.ring();
        let (q, q2) = (random_quad(&mut g, b), random_quad(&mut g, b));
        let lhs = nq(ext, &q.star(&q2).unwrap())?;
        let rhs = nq(ext, &q)?.star(&nq(ext, &q2)?).unwrap();
        find_isomorphism(&lhs, &rhs).map_err(|e| {
            format!("{e}: Nm(q*q') = {lhs:?}, Nm(q)*Nm(q') = {rhs:?} over {}", ext.base())
        })?;
    }
    Ok(format!("{} pairs over finite bases", exts.len()))
}

fn composition(g: &mut impl Rng, n: usize, m: usize) -> Vec<usize> {
    let mut parts = vec![0; m];
    for _ in 0..n {
        parts[g.gen_range(0..m)] += 1;
    }
    parts
}

fn polar(a: &FreeRankNAlgebra, ks: &[usize], bs: &[Vec<Elem>]) -> Result<Elem, String> {
    let parts: Vec<(usize, &[Elem])> = ks.iter().zip(bs).map(|(k, b)| (*k, b.as_slice())).collect();
    a.polarized(&parts).map_err(|e| e.to_string())
}

fn polarized_suite() -> Outcome {
    let mut g = rng(107);
    let families = fixtures(170);
    for (name, a) in &families {
        let r = a.base().clone();
        let n = a.rank();
        for law in 0..5 {
            for _ in 0..100 {
                let m = g.gen_range(2..=3);
                let ks = composition(&mut g, n, m);
                let bs: Vec<Vec<Elem>> = (0..m).map(|_| random_coords(&mut g, a)).collect();
                let (lhs, rhs) = match law {
                    0 => {
                        let mut perm: Vec<usize> = (0..m).collect();
                        perm.shuffle(&mut g);
                        let kp: Vec<usize> = perm.iter().map(|&i| ks[i]).collect();
                        let bp: Vec<Vec<Elem>> = perm.iter().map(|&i| bs[i].clone()).collect();
                        (polar(a, &kp, &bp)?, polar(a, &ks, &bs)?)
                    }
                    1 => {
                        let mut same = bs.clone();
                        same[1] = bs[0].clone();
                        let mut k2 = vec![ks[0] + ks[1]];
                        k2.extend_from_slice(&ks[2..]);
                        let mut b2 = vec![bs[0].clone()];
                        b2.extend_from_slice(&bs[2..]);
                        let c = r.from_bigint(&quadnorm_core::algebra::binomial(ks[0] + ks[1], ks[0]));
                        (polar(a, &ks, &same)?, r.mul(&c, &polar(a, &k2, &b2)?))
                    }
                    2 => {
                        let s = random_elem(&mut g, &r);
                        let mut scaled = bs.clone();
                        scaled[0] = a.scale_coords(&s, &bs[0]);
                        (polar(a, &ks, &scaled)?, r.mul(&r.pow(&s, ks[0] as u64), &polar(a, &ks, &bs)?))
                    }
                    3 => {
                        let mut k0 = composition(&mut g, n, m - 1);
                        k0.insert(0, 0);
                        (polar(a, &k0, &bs)?, polar(a, &k0[1..], &bs[1..])?)
                    }
                    _ => {
                        let b = random_coords(&mut g, a);
                        let prod: Vec<Vec<Elem>> = bs.iter().map(|x| a.mul_coords(&b, x)).collect();
                        (polar(a, &ks, &prod)?, r.mul(&a.norm(&b), &polar(a, &ks, &bs)?))
                    }
                };
                ensure(lhs == rhs, || format!("{name}: identity {} fails at {ks:?}", law + 1))?;
            }
        }
    }
    // every lambda over Z/2 and Z/3
    let mut specialized = 0;
    for m in [2, 3] {
        let r = Ring::modular(m).unwrap();
        let elems = r.elements().unwrap();
        for n in 1..=3 {
            for _ in 0..5 {
                let a = quadnorm_core::random::random_algebra(&mut g, &r, n).unwrap();
                let bs: Vec<Vec<Elem>> = (0..2).map(|_| random_coords(&mut g, &a)).collect();
                let terms: Vec<Elem> = (0..=n)
                    .map(|k| polar(&a, &[k, n - k], &bs))
                    .collect::<Result<_, _>>()?;
                for l0 in &elems {
                    for l1 in &elems {
                        let mut lhs = r.zero();
                        for (k, t) in terms.iter().enumerate() {
                            let mono = r.mul(&r.pow(l0, k as u64), &r.pow(l1, (n - k) as u64));
                            lhs = r.add(&lhs, &r.mul(&mono, t));
                        }
                        let combo = a.add_coords(&a.scale_coords(l0, &bs[0]), &a.scale_coords(l1, &bs[1]));
                        ensure(lhs == a.norm(&combo), || format!("specialization over Z/{m}, rank {n}"))?;
                        specialized += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{} families x 5 identities x 100, {specialized} specializations", families.len()))
}

fn descent_layers() -> Vec<Layer> {
    let z = Ring::integers();
    let zi = Arc::new(FreeRankNAlgebra::monogenic(&z, &[z.one(), z.zero()]).unwrap());
    let z12 = Ring::modular(12).unwrap();
    let cubic =
        Arc::new(FreeRankNAlgebra::monogenic(&z12, &[z12.from_i64(5), z12.one(), z12.zero()]).unwrap());
    let zc = integer_cover();
    let mc = modular_cover();
    vec![
        Layer::extension(&zc, &Arc::new(FreeRankNAlgebra::trivial(&z))).unwrap(),
        Layer::extension(&zc, &zi).unwrap(),
        Layer::extension(&zc, &Arc::new(FreeRankNAlgebra::split(&z, 3).unwrap())).unwrap(),
        Layer::extension(&mc, &Arc::new(FreeRankNAlgebra::trivial(&z12))).unwrap(),
        Layer::extension(&mc, &cubic).unwrap(),
    ]
}

fn descent_suite() -> Outcome {
    let mut g = rng(108);
    let mut count = 0;
    for layer in descent_layers() {
        for _ in 0..8 {
            let (_, d) = random_descent(&mut g, &layer).map_err(|e| e.to_string())?;
            let glued = record(glue_norm(&d))?;
            // rebuild from parts so the validation runs on the output as given
            let locals = glued.locals().iter().map(|q| (q.t().clone(), q.n().clone())).collect();
            let transitions = glued
                .transitions()
                .map(|((i, j), f)| (i, j, f.u().clone(), f.c().clone()))
                .collect();
            QuadDescentDatum::new(glued.layer(), locals, transitions).map_err(|e| e.to_string())?;

            let lhs = det_bundle(&glued).map_err(|e| e.to_string())?;
            let rhs = line_norm(&det_bundle(&d).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            for ((i, j), u) in lhs.transitions() {
                let v = rhs.transition(i, j).map_err(|e| e.to_string())?;
                ensure(u == &v, || format!("det transition ({i},{j}): {u:?} vs {v:?}"))?;
            }
            check_disc_compatibility(&glued).map_err(|e| e.to_string())?;
            for (k, (q, nq)) in d.locals().iter().zip(glued.locals()).enumerate() {
                let piece_alg = match d.layer().piece(k).kind() {
                    quadnorm_core::RingKind::Algebra(a) => Some(a.clone()),
                    _ => None,
                };
                let want = match piece_alg {
                    Some(a) => a.norm(coords(&q.discriminant())),
                    None => q.discriminant(),
                };
                ensure(nq.discriminant() == want, || format!("disc on piece {k}"))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} descent fixtures"))
}

fn oracle_equivalence() -> Outcome {
    let mut g = rng(109);
    let exts = rank_fixtures(&mut g, &[1, 2, 3, 4], 100);
    for ext in &exts {
        let a = ext.algebra();
        let (x, y) = (random_coords(&mut g, a), random_coords(&mut g, a));
        for w in [-4, 2] {
            let closed = norm_entry_closed_sum(a, &x, &y, w).map_err(|e| e.to_string())?;
            let fraction = norm_entry_fraction(a, &x, &y, w).map_err(|e| e.to_string())?;
            ensure(closed == fraction, || format!("w = {w}: {closed:?} vs {fraction:?}"))?;
        }
    }
    let z3 = Ring::modular(3).unwrap();
    for k in 0..500 {
        let n = 1 + k % 4;
        let m = Matrix::new(&z3, n, n, (0..n * n).map(|_| random_elem(&mut g, &z3)).collect()).unwrap();
        let det = m.det().map_err(|e| e.to_string())?;
        ensure(det == laplace_det(&m), || format!("det disagrees with cofactor expansion on {m:?}"))?;
    }
    let fired = CONTRADICTIONS.with(Cell::get);
    let calls = NORM_CALLS.with(Cell::get);
    ensure(fired == 0, || format!("internal assertion fired {fired} times in {calls} norm calls"))?;
    Ok(format!("{calls} norm calls without contradiction, 500 determinants"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("norm of a product is the star product", 5, norm_of_product),
        ("square root example", 5, square_root_example),
        ("swap parity", 1, swap_parity),
        ("discriminant identity", 10, discriminant_identity),
        ("functoriality and transitivity", 30, functoriality_and_transitivity),
        ("monoid homomorphism up to isomorphism", 60, monoid_homomorphism),
        ("polarized identities", 30, polarized_suite),
        ("descent", 10, descent_suite),
        // must run last: it audits the norm calls made above
        ("closed sum and fraction agree", 60, oracle_equivalence),
    ];
    let mut failures = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let line = match outcome {
            Ok(detail) if elapsed <= Duration::from_secs(*limit) => {
                format!("PASS {}: {name} ({detail}; {:.2}s)", k + 1, elapsed.as_secs_f64())
            }
            Ok(detail) => {
                failures += 1;
                format!(
                    "FAIL {}: {name} ({detail}; {:.2}s exceeds {limit}s)",
                    k + 1,
                    elapsed.as_secs_f64()
                )
            }
            Err(why) => {
                failures += 1;
                format!("FAIL {}: {name}: {why}", k + 1)
            }
        };
        println!("{line}");
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
