//! Dense complex matrices and the handful of factorizations the rest of the
//! crate needs. Storage is row-major; factorizations go through `nalgebra`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for col in 0..self.cols {
                let z = self[(r, col)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape { rows, cols, len: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for col in 0..cols {
                data.push(f(r, col));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = c(d, 0.0);
        }
        m
    }

    /// Rank-one operator `|v><w|`.
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        Self::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
    }

    /// Projector `|v><v|`.
    pub fn projector(v: &[C64]) -> Self {
        Self::outer(v, v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, col)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, col| self[(col, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, col| self[(col, r)])
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows).map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(rows, cols, |r, col| self[(r / other.rows, col / other.cols)] * other[(r % other.rows, col % other.cols)])
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `max |M_ij - conj(M_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |r, col| m[(r, col)])
    }

    /// Eigendecomposition of the Hermitian part of a square matrix.
    pub fn eigh(&self) -> Spectrum {
        eigh(self)
    }

    pub fn eigenvalues_hermitian(&self) -> Vec<f64> {
        eigh(self).eigenvalues
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let svd = self.to_nalgebra().svd(false, false);
        let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// Moore-Penrose pseudo-inverse; singular values below `cutoff` are treated as zero.
    pub fn pseudo_inverse(&self, cutoff: f64) -> Self {
        let svd = self.to_nalgebra().svd(true, true);
        let u = svd.u.as_ref().expect("u requested");
        let v_t = svd.v_t.as_ref().expect("v_t requested");
        let mut out = Self::zeros(self.cols, self.rows);
        for (k, &s) in svd.singular_values.iter().enumerate() {
            if s <= cutoff {
                continue;
            }
            let inv = 1.0 / s;
            for i in 0..self.cols {
                let vik = v_t[(k, i)].conj() * inv;
                if vik == ZERO {
                    continue;
                }
                for j in 0..self.rows {
                    out.data[i * self.rows + j] += vik * u[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn max_eigenvalue(&self) -> f64 {
        eigh(self).eigenvalues[0]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *eigh(self).eigenvalues.last().expect("non-empty matrix")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, col): (usize, usize)) -> &C64 {
        debug_assert!(r < self.rows && col < self.cols);
        &self.data[r * self.cols + col]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut C64 {
        debug_assert!(r < self.rows && col < self.cols);
        &mut self.data[r * self.cols + col]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape mismatch");
        ComplexMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape mismatch");
        ComplexMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues sorted descending.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors as columns, in the same order as `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// `V f(Λ) V†`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let fl = f(lam);
            if fl == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * fl;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|x| x)
    }

    /// Number of eigenvalues strictly above `cutoff`.
    pub fn rank(&self, cutoff: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| l > cutoff).count()
    }
}

pub fn eigh(m: &ComplexMatrix) -> Spectrum {
    assert!(m.is_square(), "eigh needs a square matrix");
    let n = m.rows();
    let herm = DMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]);
    Spectrum { eigenvalues, eigenvectors }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `<v|w>` (conjugate-linear in the first argument).
pub fn inner(v: &[C64], w: &[C64]) -> C64 {
    v.iter().zip(w).map(|(a, b)| a.conj() * b).sum()
}

/// Kronecker product of two vectors.
pub fn kron_vec(v: &[C64], w: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(v.len() * w.len());
    for a in v {
        for b in w {
            out.push(a * b);
        }
    }
    out
}

/// Matrix exponential of an anti-Hermitian matrix, i.e. a unitary.
pub fn expm_anti_hermitian(h: &ComplexMatrix) -> ComplexMatrix {
    // h = i k with k Hermitian
    let k = h.scale(c(0.0, -1.0));
    let spec = eigh(&k);
    let n = h.rows();
    let v = &spec.eigenvectors;
    let mut out = ComplexMatrix::zeros(n, n);
    for (idx, &lam) in spec.eigenvalues.iter().enumerate() {
        let phase = C64::from_polar(1.0, lam);
        for i in 0..n {
            let vik = v[(i, idx)] * phase;
            for j in 0..n {
                out[(i, j)] += vik * v[(j, idx)].conj();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ComplexMatrix {
        ComplexMatrix::new(
            3,
            3,
            vec![
                c(2.0, 0.0),
                c(1.0, 1.0),
                c(0.0, -0.5),
                c(1.0, -1.0),
                c(3.0, 0.0),
                c(0.25, 0.0),
                c(0.0, 0.5),
                c(0.25, 0.0),
                c(1.0, 0.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_shape_and_nan() {
        assert!(matches!(ComplexMatrix::new(2, 2, vec![ZERO; 3]), Err(Error::Shape { .. })));
        assert_eq!(ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]).unwrap_err(), Error::NonFinite);
    }

    #[test]
    fn eigh_reconstructs_and_sorts() {
        let m = sample();
        let spec = m.eigh();
        assert!(spec.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        assert!(spec.reconstruct().max_abs_diff(&m) < 1e-12);
    }

    #[test]
    fn kron_matches_index_formula() {
        let a = sample();
        let b = ComplexMatrix::identity(2);
        let k = a.kron(&b);
        assert_eq!(k.rows(), 6);
        assert_eq!(k[(2, 4)], a[(1, 2)]);
        assert_eq!(k[(3, 4)], ZERO);
    }

    #[test]
    fn pseudo_inverse_of_invertible_is_inverse() {
        let m = sample();
        let inv = m.pseudo_inverse(1e-12);
        assert!(m.matmul(&inv).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn exponential_is_unitary() {
        let m = sample();
        let anti = ComplexMatrix::from_fn(3, 3, |i, j| {
            (m[(i, j)] - m[(j, i)].conj()) * 0.5 + c(0.0, 0.3) * m[(i, j)].re * if i == j { 1.0 } else { 0.0 }
        });
        let u = expm_anti_hermitian(&anti);
        assert!(u.matmul(&u.adjoint()).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
    }
}
