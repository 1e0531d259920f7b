//! Free rank-n algebras given by structure constants, and the norm law `s_n`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::hom::RingHom;
use crate::linalg::Matrix;
use crate::ring::{Elem, Ring};

/// A commutative algebra over `base`, free on a basis `theta_0..theta_{n-1}`
/// with `theta_i theta_j = sum_k c[i][j][k] theta_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeRankNAlgebra {
    base: Ring,
    rank: usize,
    /// `c[i][j][k]` at `(i * rank + j) * rank + k`.
    constants: Vec<Elem>,
    unit: Vec<Elem>,
}

impl FreeRankNAlgebra {
    /// Validates commutativity, associativity and the unit law.
    pub fn new(base: &Ring, constants: Vec<Vec<Vec<Elem>>>, unit: Vec<Elem>) -> Result<Self> {
        let n = unit.len();
        if n == 0 {
            return Err(Error::InvalidAlgebra("rank must be at least 1".into()));
        }
        if constants.len() != n
            || constants.iter().any(|row| row.len() != n || row.iter().any(|v| v.len() != n))
        {
            return Err(Error::InvalidAlgebra(format!(
                "structure constants must be {n}x{n}x{n}"
            )));
        }
        let flat: Vec<Elem> = constants.into_iter().flatten().flatten().collect();
        for e in flat.iter().chain(&unit) {
            if !base.contains(e) {
                return Err(Error::InvalidAlgebra(format!("entry {e:?} is not in {base}")));
            }
        }
        let alg = FreeRankNAlgebra { base: base.clone(), rank: n, constants: flat, unit };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<()> {
        let n = self.rank;
        let r = &self.base;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.c(i, j, k) != self.c(j, i, k) {
                        return Err(Error::InvalidAlgebra(format!(
                            "not commutative at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        for j in 0..n {
            let prod = self.mul_coords(&self.unit, &self.basis(j));
            if prod != self.basis(j) {
                return Err(Error::InvalidAlgebra(format!("unit fails on basis vector {j}")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j);
                for l in 0..n {
                    let left = self.mul_coords(&ij, &self.basis(l));
                    let right = self.mul_coords(&self.basis(i), &self.basis_product(j, l));
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!(
                            "not associative at ({i},{j},{l})"
                        )));
                    }
                }
            }
        }
        debug_assert!(self.unit.iter().all(|u| r.contains(u)));
        Ok(())
    }

    /// `base[y]/(f)` with `f = y^n + a_{n-1} y^{n-1} + ... + a_0`, on the basis `1, y, ..., y^{n-1}`.
    pub fn monogenic(base: &Ring, lower: &[Elem]) -> Result<Self> {
        let n = lower.len();
        if n == 0 {
            return Err(Error::InvalidAlgebra("monic polynomial of degree 0".into()));
        }
        for a in lower {
            base.check(a)?;
        }
        // powers[d] = coordinates of y^d for d < 2n - 1
        let mut powers: Vec<Vec<Elem>> = Vec::with_capacity(2 * n);
        for d in 0..n {
            let mut v = vec![base.zero(); n];
            v[d] = base.one();
            powers.push(v);
        }
        for d in n..2 * n - 1 {
            let prev = &powers[d - 1];
            let top = prev[n - 1].clone();
            let mut v = vec![base.zero(); n];
            for i in 0..n {
                let shifted = if i == 0 { base.zero() } else { prev[i - 1].clone() };
                v[i] = base.sub(&shifted, &base.mul(&top, &lower[i]));
            }
            powers.push(v);
        }
        let constants = (0..n)
            .map(|i| (0..n).map(|j| powers[i + j].clone()).collect())
            .collect();
        let mut unit = vec![base.zero(); n];
        unit[0] = base.one();
        FreeRankNAlgebra::new(base, constants, unit)
    }

    /// The base itself as a rank-1 algebra.
    pub fn trivial(base: &Ring) -> Self {
        FreeRankNAlgebra {
            base: base.clone(),
            rank: 1,
            constants: vec![base.one()],
            unit: vec![base.one()],
        }
    }

    /// `base^n` with the idempotent basis.
    pub fn split(base: &Ring, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAlgebra("rank must be at least 1".into()));
        }
        let constants = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| if i == j && j == k { base.one() } else { base.zero() })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        FreeRankNAlgebra::new(base, constants, vec![base.one(); n])
    }

    /// `a1 x a2` over their common base, with block-diagonal structure constants.
    pub fn product_algebra(a1: &Self, a2: &Self) -> Result<Self> {
        if a1.base != a2.base {
            return Err(Error::MixedRings);
        }
        let (n1, n2) = (a1.rank, a2.rank);
        let n = n1 + n2;
        let base = &a1.base;
        let block = |i: usize, j: usize, k: usize| -> Elem {
            if i < n1 && j < n1 && k < n1 {
                a1.c(i, j, k).clone()
            } else if i >= n1 && j >= n1 && k >= n1 {
                a2.c(i - n1, j - n1, k - n1).clone()
            } else {
                base.zero()
            }
        };
        let constants = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| block(i, j, k)).collect()).collect())
            .collect();
        let unit = a1.unit.iter().chain(&a2.unit).cloned().collect();
        FreeRankNAlgebra::new(base, constants, unit)
    }

    /// `C` as an algebra over `A`, given `B/A` and `C/B` with `C`'s base the ring view of `B`.
    ///
    /// If `theta_k` is the basis of `B` and `phi_i` that of `C`, the product
    /// basis `phi_i theta_k` sits at index `k * m + i` where `m = rank(C/B)`.
    pub fn tower_compose(b_over_a: &Arc<Self>, c_over_b: &Self) -> Result<Self> {
        if c_over_b.base != Ring::algebra(b_over_a.clone()) {
            return Err(Error::TowerMismatch(format!(
                "upper algebra is over {}, not over {}",
                c_over_b.base,
                Ring::algebra(b_over_a.clone())
            )));
        }
        let (n, m) = (b_over_a.rank, c_over_b.rank);
        let a = &b_over_a.base;
        let total = n * m;
        let mut constants = vec![vec![vec![a.zero(); total]; total]; total];
        for k in 0..n {
            for l in 0..n {
                let theta_kl = b_over_a.basis_product(k, l);
                for i in 0..m {
                    for j in 0..m {
                        for p in 0..m {
                            let cijp = coords(c_over_b.c(i, j, p));
                            let d = b_over_a.mul_coords(cijp, &theta_kl);
                            for (q, dq) in d.into_iter().enumerate() {
                                constants[k * m + i][l * m + j][q * m + p] = dq;
                            }
                        }
                    }
                }
            }
        }
        let mut unit = vec![a.zero(); total];
        for (p, up) in c_over_b.unit.iter().enumerate() {
            for (q, upq) in coords(up).iter().enumerate() {
                unit[q * m + p] = upq.clone();
            }
        }
        FreeRankNAlgebra::new(a, constants, unit)
    }

    /// Flattens coordinates over `B` into coordinates over `A`, matching
    /// [`FreeRankNAlgebra::tower_compose`].
    pub fn tower_flatten(upper: &[Elem], lower_rank: usize) -> Vec<Elem> {
        let m = upper.len();
        let mut out = Vec::with_capacity(m * lower_rank);
        for q in 0..lower_rank {
            for x in upper {
                out.push(coords(x)[q].clone());
            }
        }
        out
    }

    /// Inverse of [`FreeRankNAlgebra::tower_flatten`].
    pub fn tower_unflatten(flat: &[Elem], upper_rank: usize) -> Vec<Elem> {
        let n = flat.len() / upper_rank;
        (0..upper_rank)
            .map(|p| Elem::Coords((0..n).map(|q| flat[q * upper_rank + p].clone()).collect()))
            .collect()
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn unit(&self) -> &[Elem] {
        &self.unit
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Elem {
        self.c(i, j, k)
    }

    fn c(&self, i: usize, j: usize, k: usize) -> &Elem {
        &self.constants[(i * self.rank + j) * self.rank + k]
    }

    /// Coordinates of `theta_i`.
    pub fn basis(&self, i: usize) -> Vec<Elem> {
        let mut v = vec![self.base.zero(); self.rank];
        v[i] = self.base.one();
        v
    }

    fn basis_product(&self, i: usize, j: usize) -> Vec<Elem> {
        (0..self.rank).map(|k| self.c(i, j, k).clone()).collect()
    }

    pub fn zero_coords(&self) -> Vec<Elem> {
        vec![self.base.zero(); self.rank]
    }

    /// Coordinates of the scalar `a * 1`.
    pub fn scalar(&self, a: &Elem) -> Vec<Elem> {
        self.unit.iter().map(|u| self.base.mul(a, u)).collect()
    }

    pub fn add_coords(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        x.iter().zip(y).map(|(a, b)| self.base.add(a, b)).collect()
    }

    pub fn neg_coords(&self, x: &[Elem]) -> Vec<Elem> {
        x.iter().map(|a| self.base.neg(a)).collect()
    }

    pub fn scale_coords(&self, a: &Elem, x: &[Elem]) -> Vec<Elem> {
        x.iter().map(|b| self.base.mul(a, b)).collect()
    }

    pub fn mul_coords(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        let r = &self.base;
        let n = self.rank;
        let mut out = vec![r.zero(); n];
        for i in 0..n {
            if r.is_zero(&x[i]) {
                continue;
            }
            for j in 0..n {
                if r.is_zero(&y[j]) {
                    continue;
                }
                let xy = r.mul(&x[i], &y[j]);
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !r.is_zero(c) {
                        *o = r.add(o, &r.mul(&xy, c));
                    }
                }
            }
        }
        out
    }

    /// Matrix of multiplication by `x`: `mul_matrix(x) * y = x y` on coordinate columns.
    pub fn mul_matrix(&self, x: &[Elem]) -> Matrix {
        let r = &self.base;
        Matrix::from_fn(r, self.rank, self.rank, |k, j| {
            r.sum(
                (0..self.rank)
                    .map(|i| r.mul(&x[i], self.c(i, j, k)))
                    .collect::<Vec<_>>()
                    .iter(),
            )
        })
    }

    /// `s_n(x)`, the determinant of multiplication by `x`.
    pub fn norm(&self, x: &[Elem]) -> Elem {
        self.mul_matrix(x).det().expect("multiplication matrices are square")
    }

    pub fn trace(&self, x: &[Elem]) -> Elem {
        self.mul_matrix(x).trace().expect("multiplication matrices are square")
    }

    pub fn inverse_coords(&self, x: &[Elem]) -> Result<Vec<Elem>> {
        let m = self.mul_matrix(x);
        let d_inv = self.base.inverse(&m.det()?)?;
        let y = m.adjugate()?.mul_vec(&self.unit)?;
        Ok(self.scale_coords(&d_inv, &y))
    }

    /// The algebra with structure constants pushed through `f`.
    pub fn base_change(&self, f: &RingHom) -> Result<Self> {
        if f.source() != &self.base {
            return Err(Error::HomMismatch(format!(
                "map from {} cannot change the base {}",
                f.source(),
                self.base
            )));
        }
        Ok(FreeRankNAlgebra {
            base: f.target().clone(),
            rank: self.rank,
            constants: self.constants.iter().map(|c| f.apply_unchecked(c)).collect(),
            unit: self.unit.iter().map(|c| f.apply_unchecked(c)).collect(),
        })
    }

    /// Pushes element coordinates along `f` into [`FreeRankNAlgebra::base_change`].
    pub fn push_coords(&self, f: &RingHom, x: &[Elem]) -> Vec<Elem> {
        x.iter().map(|c| f.apply_unchecked(c)).collect()
    }

    /// `s_n(l_0 x_0 + ... + l_{m-1} x_{m-1})` in `base[l_0..l_{m-1}]`,
    /// returned with that polynomial ring.
    pub fn norm_form(&self, xs: &[&[Elem]]) -> Result<(Ring, Elem)> {
        if xs.is_empty() {
            return Err(Error::PartitionMismatch { got: 0, rank: self.rank });
        }
        for x in xs {
            self.check_coords(x)?;
        }
        let names = fresh_names(&self.base, xs.len());
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let poly_ring = self.base.adjoin_variables(&refs)?;
        let embed = RingHom::canonical(&self.base, &poly_ring)?;
        let lifted = self.base_change(&embed)?;
        let vars: Vec<Elem> =
            refs.iter().map(|n| poly_ring.variable(n)).collect::<Result<_>>()?;
        let combo: Vec<Elem> = (0..self.rank)
            .map(|k| {
                let terms: Vec<Elem> = xs
                    .iter()
                    .zip(&vars)
                    .map(|(x, v)| poly_ring.mul(v, &embed.apply_unchecked(&x[k])))
                    .collect();
                poly_ring.sum(terms.iter())
            })
            .collect();
        let value = lifted.norm(&combo);
        Ok((poly_ring, value))
    }

    /// `s_{k_1,...,k_m}(x_1,...,x_m)`: the coefficient of `l_1^{k_1}...l_m^{k_m}`
    /// in `s_n(l_1 x_1 + ... + l_m x_m)`.
    pub fn polarized(&self, parts: &[(usize, &[Elem])]) -> Result<Elem> {
        let got: usize = parts.iter().map(|(k, _)| k).sum();
        if got != self.rank || parts.is_empty() {
            return Err(Error::PartitionMismatch { got, rank: self.rank });
        }
        let xs: Vec<&[Elem]> = parts.iter().map(|(_, x)| *x).collect();
        let (ring, form) = self.norm_form(&xs)?;
        let exps: Vec<u32> = parts.iter().map(|(k, _)| *k as u32).collect();
        ring.coefficient(&form, &exps)
    }

    /// `s_n(l x + y)` in `base[l]`, returned with that ring and the name of `l`.
    pub fn norm_pencil(&self, x: &[Elem], y: &[Elem]) -> Result<(Ring, String, Elem)> {
        self.check_coords(x)?;
        self.check_coords(y)?;
        let name = self.base.fresh_variable("l");
        let poly_ring = self.base.adjoin_variables(&[name.as_str()])?;
        let embed = RingHom::canonical(&self.base, &poly_ring)?;
        let lifted = self.base_change(&embed)?;
        let l = poly_ring.variable(&name)?;
        let combo: Vec<Elem> = x
            .iter()
            .zip(y)
            .map(|(a, b)| {
                poly_ring.add(
                    &poly_ring.mul(&l, &embed.apply_unchecked(a)),
                    &embed.apply_unchecked(b),
                )
            })
            .collect();
        let form = lifted.norm(&combo);
        Ok((poly_ring, name, form))
    }

    /// `[s_{0,n}(x, y), s_{1,n-1}(x, y), ..., s_{n,0}(x, y)]` from a single
    /// determinant over `base[l]`: `s_n(l x + y)` is the two-variable form
    /// with the second variable set to 1.
    pub fn polarized_pair(&self, x: &[Elem], y: &[Elem]) -> Result<Vec<Elem>> {
        let (poly_ring, _, form) = self.norm_pencil(x, y)?;
        (0..=self.rank as u32).map(|k| poly_ring.coefficient(&form, &[k])).collect()
    }

    /// Coefficients of the characteristic polynomial `s_n(l - x)`, indexed by
    /// the power of `l`; the coefficient of `l^k` is `(-1)^(n-k) s_{k,n-k}(1, x)`.
    pub fn char_poly_coeffs(&self, x: &[Elem]) -> Result<Vec<Elem>> {
        self.polarized_pair(&self.unit, &self.neg_coords(x))
    }

    pub fn check_coords(&self, x: &[Elem]) -> Result<()> {
        if x.len() != self.rank {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for rank {}",
                x.len(),
                self.rank
            )));
        }
        for c in x {
            self.base.check(c)?;
        }
        Ok(())
    }
}

/// Binomial coefficient formed in the integers.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn coords(e: &Elem) -> &[Elem] {
    match e {
        Elem::Coords(v) => v,
        other => panic!("expected algebra coordinates, found {other:?}"),
    }
}

fn fresh_names(base: &Ring, count: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(count);
    let mut k = 0usize;
    while names.len() < count {
        let candidate = format!("l{k}");
        if !base.uses_variable(&candidate) {
            names.push(candidate);
        }
        k += 1;
    }
    names
}

/// An element of a free algebra, tagged with its parent.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    parent: Arc<FreeRankNAlgebra>,
    coords: Vec<Elem>,
}

impl AlgebraElement {
    pub fn new(parent: &Arc<FreeRankNAlgebra>, coords: Vec<Elem>) -> Result<Self> {
        parent.check_coords(&coords)?;
        Ok(AlgebraElement { parent: parent.clone(), coords })
    }

    pub fn one(parent: &Arc<FreeRankNAlgebra>) -> Self {
        AlgebraElement { parent: parent.clone(), coords: parent.unit.clone() }
    }

    pub fn zero(parent: &Arc<FreeRankNAlgebra>) -> Self {
        AlgebraElement { parent: parent.clone(), coords: parent.zero_coords() }
    }

    pub fn parent(&self) -> &Arc<FreeRankNAlgebra> {
        &self.parent
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    fn same_parent(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.parent, &other.parent) || self.parent == other.parent {
            Ok(())
        } else {
            Err(Error::MixedAlgebras)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_parent(other)?;
        Ok(self.with(self.parent.add_coords(&self.coords, &other.coords)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_parent(other)?;
        Ok(self.with(self.parent.mul_coords(&self.coords, &other.coords)))
    }

    pub fn scalar_mul(&self, a: &Elem) -> Result<Self> {
        self.parent.base.check(a)?;
        Ok(self.with(self.parent.scale_coords(a, &self.coords)))
    }

    pub fn neg(&self) -> Self {
        self.with(self.parent.neg_coords(&self.coords))
    }

    pub fn mul_matrix(&self) -> Matrix {
        self.parent.mul_matrix(&self.coords)
    }

    pub fn norm(&self) -> Elem {
        self.parent.norm(&self.coords)
    }

    pub fn trace(&self) -> Elem {
        self.parent.trace(&self.coords)
    }

    pub fn char_poly_coeffs(&self) -> Result<Vec<Elem>> {
        self.parent.char_poly_coeffs(&self.coords)
    }

    fn with(&self, coords: Vec<Elem>) -> Self {
        AlgebraElement { parent: self.parent.clone(), coords }
    }
}
