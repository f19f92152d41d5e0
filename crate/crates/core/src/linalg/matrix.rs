use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square dense matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Matrix::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { n, data })
    }

    /// Builds from a row-major buffer of length `n²`.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(Matrix { n, data })
    }

    /// Builds a `2p × 2p` matrix from four `p × p` blocks `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<Self> {
        let p = a.n;
        for m in [b, c, d] {
            if m.n != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    found: m.n,
                });
            }
        }
        let mut out = Matrix::zeros(2 * p);
        for i in 0..p {
            for j in 0..p {
                out[(i, j)] = a[(i, j)];
                out[(i, j + p)] = b[(i, j)];
                out[(i + p, j)] = c[(i, j)];
                out[(i + p, j + p)] = d[(i, j)];
            }
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.n, other.n, "matrix sizes differ");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: f64) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// `self · other`, checked.
    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(self * other)
    }

    /// `selfᵗ · m · self`.
    pub fn congruence(&self, m: &Matrix) -> Matrix {
        &(&self.transpose() * m) * self
    }

    /// Determinant by partial-pivot Gaussian elimination.
    pub fn determinant(&self) -> f64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))
                .unwrap_or(col);
            if a[pivot * n + col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot * n + k);
                }
                det = -det;
            }
            let d = a[col * n + col];
            det *= d;
            for row in col + 1..n {
                let f = a[row * n + col] / d;
                for k in col..n {
                    a[row * n + k] -= f * a[col * n + k];
                }
            }
        }
        det
    }

    /// Rotates columns `a` and `b` in place: `self ← self · G` where `G` is the
    /// Givens rotation with `cos t = c`, `sin t = s` in the `(a, b)` plane and `G[b][a] = s`.
    pub(crate) fn rotate_columns(&mut self, a: usize, b: usize, c: f64, s: f64) {
        let n = self.n;
        for i in 0..n {
            let xa = self.data[i * n + a];
            let xb = self.data[i * n + b];
            self.data[i * n + a] = c * xa + s * xb;
            self.data[i * n + b] = -s * xa + c * xb;
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "matrix sizes differ");
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "matrix sizes differ");
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "matrix sizes differ");
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        self.scale(-1.0)
    }
}

/// Real symmetric matrix. Construction symmetrizes, so `s[i][j] == s[j][i]` exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Matrix", from = "Matrix")]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    /// Replaces `m` by `(m + mᵗ)/2`.
    pub fn symmetrize(m: &Matrix) -> Self {
        let n = m.n();
        let mut s = Matrix::zeros(n);
        for i in 0..n {
            s[(i, i)] = m[(i, i)];
            for j in i + 1..n {
                let v = 0.5 * (m[(i, j)] + m[(j, i)]);
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        SymMatrix(s)
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        SymMatrix(Matrix::from_diagonal(diag))
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix(Matrix::identity(n))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Ok(SymMatrix::symmetrize(&Matrix::from_rows(rows)?))
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    /// `qᵗ · self · q`.
    pub fn conjugate_by(&self, q: &Matrix) -> SymMatrix {
        SymMatrix::symmetrize(&q.congruence(&self.0))
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(SymMatrix(&self.0 + &other.0))
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;

    fn index(&self, ix: (usize, usize)) -> &f64 {
        &self.0[ix]
    }
}

impl From<Matrix> for SymMatrix {
    fn from(m: Matrix) -> Self {
        SymMatrix::symmetrize(&m)
    }
}

impl From<SymMatrix> for Matrix {
    fn from(s: SymMatrix) -> Matrix {
        s.0
    }
}

/// Real antisymmetric matrix with an exactly zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix(Matrix);

impl SkewMatrix {
    /// Replaces `m` by `(m − mᵗ)/2`.
    pub fn antisymmetrize(m: &Matrix) -> Self {
        let n = m.n();
        let mut s = Matrix::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                let v = 0.5 * (m[(i, j)] - m[(j, i)]);
                s[(i, j)] = v;
                s[(j, i)] = -v;
            }
        }
        SkewMatrix(s)
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    /// `−C²`, which is symmetric positive semidefinite.
    pub fn negated_square(&self) -> SymMatrix {
        SymMatrix::symmetrize(&(&self.0 * &self.0).scale(-1.0))
    }
}

impl Index<(usize, usize)> for SkewMatrix {
    type Output = f64;

    fn index(&self, ix: (usize, usize)) -> &f64 {
        &self.0[ix]
    }
}

/// Element of SO(n).
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation(Matrix);

impl Rotation {
    pub const ORTHOGONALITY_TOL: f64 = 1e-12;
    pub const DETERMINANT_TOL: f64 = 1e-9;

    pub fn identity(n: usize) -> Self {
        Rotation(Matrix::identity(n))
    }

    /// Checks `RᵗR = I` entrywise and `det R = +1`.
    pub fn new(m: Matrix) -> Result<Self> {
        let dev = m
            .congruence(&Matrix::identity(m.n()))
            .max_abs_diff(&Matrix::identity(m.n()));
        if dev > Self::ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal(dev));
        }
        let det = m.determinant();
        if (det - 1.0).abs() > Self::DETERMINANT_TOL {
            return Err(Error::NotSpecial(det));
        }
        Ok(Rotation(m))
    }

    pub(crate) fn new_unchecked(m: Matrix) -> Self {
        Rotation(m)
    }

    /// Givens rotation in the `(a, b)` plane, `a < b`, equal to `exp(t ξ)` where
    /// `ξ = e_b e_aᵗ − e_a e_bᵗ`.
    pub fn givens(n: usize, a: usize, b: usize, t: f64) -> Self {
        let mut m = Matrix::identity(n);
        let (s, c) = t.sin_cos();
        m[(a, a)] = c;
        m[(b, b)] = c;
        m[(a, b)] = -s;
        m[(b, a)] = s;
        Rotation(m)
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn inverse(&self) -> Rotation {
        Rotation(self.0.transpose())
    }

    pub fn compose(&self, other: &Rotation) -> Rotation {
        Rotation(&self.0 * &other.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrize_is_exact() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.1, 3.0]]).unwrap();
        let s = SymMatrix::symmetrize(&m);
        assert_eq!(s[(0, 1)], s[(1, 0)]);
        assert_eq!(s[(0, 1)], 1.05);
    }

    #[test]
    fn skew_has_zero_diagonal() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 3.0]]).unwrap();
        let s = SkewMatrix::antisymmetrize(&m);
        assert_eq!(s[(0, 0)], 0.0);
        assert_eq!(s[(0, 1)], -s[(1, 0)]);
    }

    #[test]
    fn determinant_of_permutation() {
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(m.determinant(), -1.0);
        assert!(matches!(Rotation::new(m), Err(Error::NotSpecial(_))));
    }

    #[test]
    fn givens_two_by_two() {
        let t = 0.3_f64;
        let g = Rotation::givens(2, 0, 1, t);
        let want = Matrix::from_rows(&[vec![t.cos(), -t.sin()], vec![t.sin(), t.cos()]]).unwrap();
        assert_eq!(g.matrix(), &want);
        assert!(Rotation::new(g.matrix().clone()).is_ok());
    }

    #[test]
    fn rotate_columns_matches_product() {
        let mut acc = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0], vec![7.0, 8.0, 10.0]]).unwrap();
        let g = Rotation::givens(3, 0, 2, 1.1);
        let want = &acc * g.matrix();
        let (s, c) = 1.1_f64.sin_cos();
        acc.rotate_columns(0, 2, c, s);
        assert!(acc.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn blocks_assemble() {
        let a = Matrix::identity(2);
        let z = Matrix::zeros(2);
        let m = Matrix::from_blocks(&z, &a.scale(-1.0), &a, &z).unwrap();
        assert_eq!(m[(0, 2)], -1.0);
        assert_eq!(m[(2, 0)], 1.0);
        assert_eq!(m[(0, 0)], 0.0);
    }
}
