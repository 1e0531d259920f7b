//! Dense matrices over a commutative ring and division-free determinants.

use crate::error::{Error, Result};
use crate::hom::RingHom;
use crate::ring::{Elem, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Elem>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, checking that every entry lies in `ring`.
    pub fn new(ring: &Ring, rows: usize, cols: usize, entries: Vec<Elem>) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        for e in &entries {
            ring.check(e)?;
        }
        Ok(Matrix { ring: ring.clone(), rows, cols, entries })
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Elem>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(ring, r, c, rows.into_iter().flatten().collect())
    }

    pub(crate) fn from_fn(
        ring: &Ring,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Elem,
    ) -> Matrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { ring: ring.clone(), rows, cols, entries }
    }

    pub fn zero(ring: &Ring, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(ring, rows, cols, |_, _| ring.zero())
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        Matrix::from_fn(ring, n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn diagonal(ring: &Ring, diag: &[Elem]) -> Matrix {
        let n = diag.len();
        Matrix::from_fn(ring, n, n, |i, j| if i == j { diag[i].clone() } else { ring.zero() })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn same_ring(&self, other: &Matrix) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::MixedRings)
        }
    }

    pub fn mat_add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_ring(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let r = &self.ring;
        Ok(Matrix::from_fn(r, self.rows, self.cols, |i, j| {
            r.add(self.get(i, j), other.get(i, j))
        }))
    }

    pub fn mat_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let r = &self.ring;
        Ok(Matrix::from_fn(r, self.rows, other.cols, |i, j| {
            (0..self.cols).fold(r.zero(), |acc, k| {
                r.add(&acc, &r.mul(self.get(i, k), other.get(k, j)))
            })
        }))
    }

    pub fn scale(&self, s: &Elem) -> Matrix {
        let r = &self.ring;
        Matrix::from_fn(r, self.rows, self.cols, |i, j| r.mul(s, self.get(i, j)))
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Result<Vec<Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let r = &self.ring;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(r.zero(), |acc, (a, b)| r.add(&acc, &r.mul(a, b)))
            })
            .collect())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Applies a ring homomorphism entrywise.
    pub fn map(&self, f: &RingHom) -> Result<Matrix> {
        if f.source() != &self.ring {
            return Err(Error::HomMismatch(format!(
                "map from {} applied to a matrix over {}",
                f.source(),
                self.ring
            )));
        }
        Ok(Matrix::from_fn(f.target(), self.rows, self.cols, |i, j| {
            f.apply_unchecked(self.get(i, j))
        }))
    }

    pub fn trace(&self) -> Result<Elem> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        Ok(self.ring.sum((0..self.rows).map(|i| self.get(i, i))))
    }

    /// Determinant by Berkowitz's algorithm: no divisions, so it is exact over
    /// rings with zero divisors.
    pub fn det(&self) -> Result<Elem> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let r = &self.ring;
        // `coeffs` holds det(lambda I - A_k) for the leading k x k block, highest degree first.
        let mut coeffs = vec![r.one()];
        for k in 0..n {
            let a_kk = self.get(k, k);
            // column R = A[0..k][k], row S = A[k][0..k]
            let col: Vec<Elem> = (0..k).map(|i| self.get(i, k).clone()).collect();
            let mut toeplitz = Vec::with_capacity(k + 2);
            toeplitz.push(r.one());
            toeplitz.push(r.neg(a_kk));
            // S * M^j * R for j = 0..k-1, with M the leading k x k block
            let mut v = col;
            for _ in 0..k {
                let s_v = (0..k).fold(r.zero(), |acc, i| r.add(&acc, &r.mul(self.get(k, i), &v[i])));
                toeplitz.push(r.neg(&s_v));
                v = (0..k)
                    .map(|i| {
                        (0..k).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(self.get(i, j), &v[j])))
                    })
                    .collect();
            }
            let next: Vec<Elem> = (0..k + 2)
                .map(|i| {
                    (0..=k.min(i)).fold(r.zero(), |acc, j| {
                        if i - j < toeplitz.len() && j < coeffs.len() {
                            r.add(&acc, &r.mul(&toeplitz[i - j], &coeffs[j]))
                        } else {
                            acc
                        }
                    })
                })
                .collect();
            coeffs = next;
        }
        let constant = coeffs.pop().expect("non-empty");
        Ok(if n.is_multiple_of(2) { constant } else { r.neg(&constant) })
    }

    /// Matrix with row `skip_row` and column `skip_col` removed.
    pub fn minor(&self, skip_row: usize, skip_col: usize) -> Matrix {
        let rows: Vec<usize> = (0..self.rows).filter(|&i| i != skip_row).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| j != skip_col).collect();
        Matrix::from_fn(&self.ring, rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// Classical adjugate, so that `adj(A) A = det(A) I`.
    pub fn adjugate(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let r = &self.ring;
        if n == 1 {
            return Ok(Matrix::identity(r, 1));
        }
        let mut cof = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                // adj[i][j] = (-1)^(i+j) det(minor(j, i))
                let d = self.minor(j, i).det()?;
                cof.push(if (i + j) % 2 == 0 { d } else { r.neg(&d) });
            }
        }
        Ok(Matrix { ring: r.clone(), rows: n, cols: n, entries: cof })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn i(v: i64) -> Elem {
        Elem::Int(BigInt::from(v))
    }

    fn m(ring: &Ring, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(ring, rows.iter().map(|r| r.iter().map(|&v| ring.from_i64(v)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn product_over_z5() {
        let r = Ring::modular(5).unwrap();
        let a = m(&r, &[&[1, 2], &[3, 4]]);
        let b = m(&r, &[&[0, 1], &[1, 0]]);
        assert_eq!(a.mat_mul(&b).unwrap(), m(&r, &[&[2, 1], &[4, 3]]));
        assert_eq!(Matrix::identity(&r, 2).mat_mul(&a).unwrap(), a);
        assert_eq!(Matrix::zero(&r, 2, 2).mat_mul(&a).unwrap(), Matrix::zero(&r, 2, 2));
    }

    #[test]
    fn dimension_errors() {
        let r = Ring::integers();
        let a = m(&r, &[&[1, 2, 3]]);
        assert!(matches!(a.mat_mul(&a), Err(Error::DimensionMismatch(_))));
        assert_eq!(a.det(), Err(Error::NotSquare(1, 3)));
    }

    #[test]
    fn small_determinants() {
        let z = Ring::integers();
        assert_eq!(Matrix::identity(&z, 5).det().unwrap(), i(1));
        assert_eq!(m(&z, &[&[1, 2], &[3, 4]]).det().unwrap(), i(-2));
        assert_eq!(m(&z, &[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]).det().unwrap(), i(6));
        assert_eq!(Matrix::zero(&z, 0, 0).det().unwrap(), i(1));
        assert_eq!(m(&z, &[&[7]]).det().unwrap(), i(7));
    }

    #[test]
    fn diagonal_determinant_is_product() {
        let z = Ring::integers();
        let d = Matrix::diagonal(&z, &[i(3), i(-5)]);
        assert_eq!(d.det().unwrap(), i(-15));
    }

    #[test]
    fn adjugate_identity() {
        let r = Ring::modular(9).unwrap();
        let a = m(&r, &[&[2, 7, 1], &[4, 0, 3], &[8, 5, 6]]);
        let adj = a.adjugate().unwrap();
        let d = a.det().unwrap();
        assert_eq!(adj.mat_mul(&a).unwrap(), Matrix::identity(&r, 3).scale(&d));
    }
}
