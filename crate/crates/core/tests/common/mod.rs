#![allow(dead_code)]

use quadnorm_core::random::random_algebra;
use quadnorm_core::{Elem, FreeRankNAlgebra, Matrix, Ring};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Cofactor expansion along the first row.
pub fn laplace_det(m: &Matrix) -> Elem {
    let r = m.ring();
    let n = m.rows();
    if n == 0 {
        return r.one();
    }
    let mut acc = r.zero();
    for j in 0..n {
        let term = r.mul(m.get(0, j), &laplace_det(&m.minor(0, j)));
        acc = if j % 2 == 0 { r.add(&acc, &term) } else { r.sub(&acc, &term) };
    }
    acc
}

/// `sum_{i,j} x_i y_j c_ijk`.
pub fn expand_product(a: &FreeRankNAlgebra, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
    let r = a.base();
    let n = a.rank();
    (0..n)
        .map(|k| {
            let mut acc = r.zero();
            for i in 0..n {
                for j in 0..n {
                    let t = r.mul(&r.mul(&x[i], &y[j]), a.structure_constant(i, j, k));
                    acc = r.add(&acc, &t);
                }
            }
            acc
        })
        .collect()
}

pub fn coords(x: &Elem) -> &[Elem] {
    match x {
        Elem::Coords(v) => v,
        other => panic!("not algebra coordinates: {other:?}"),
    }
}

/// Named algebra families used across the property suites.
pub fn fixtures(seed: u64) -> Vec<(String, FreeRankNAlgebra)> {
    let mut g = rng(seed);
    let z = Ring::integers();
    let z5 = Ring::modular(5).unwrap();
    let z9 = Ring::modular(9).unwrap();
    let z2 = Ring::modular(2).unwrap();
    let z3 = Ring::modular(3).unwrap();
    let prod = Ring::product(vec![z2.clone(), z3.clone()]).unwrap();
    let mut out = vec![
        ("rank1/Z7".to_string(), FreeRankNAlgebra::trivial(&Ring::modular(7).unwrap())),
        ("split2/Z5".to_string(), FreeRankNAlgebra::split(&z5, 2).unwrap()),
        ("gaussian/Z".to_string(), FreeRankNAlgebra::monogenic(&z, &[z.one(), z.zero()]).unwrap()),
        (
            "cubic/Z9".to_string(),
            FreeRankNAlgebra::monogenic(&z9, &[z9.from_i64(3), z9.from_i64(1), z9.zero()]).unwrap(),
        ),
        ("split3/Z2".to_string(), FreeRankNAlgebra::split(&z2, 3).unwrap()),
    ];
    for (name, base, n) in [
        ("random2/Z3", z3, 2),
        ("random3/Z2xZ3", prod, 3),
        ("random4/Z4", Ring::modular(4).unwrap(), 4),
        ("random3/Z", z, 3),
    ] {
        out.push((name.to_string(), random_algebra(&mut g, &base, n).unwrap()));
    }
    out
}
