//! Small dense square complex matrices.
//!
//! Row-major storage. Multiplication skips zero entries of the left factor,
//! which matters because basis matrices carry at most `n` nonzeros and the
//! exact path pays for every rational multiply.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Entry<S> = Complex<S>;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S: Scalar> {
    n: usize,
    data: Vec<Entry<S>>,
}

pub(crate) fn i_unit<S: Scalar>() -> Entry<S> {
    Complex::new(S::zero(), S::one())
}

pub(crate) fn real<S: Scalar>(v: S) -> Entry<S> {
    Complex::new(v, S::zero())
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Entry::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for k in 0..n {
            m.set(k, k, real(S::one()));
        }
        m
    }

    pub fn from_diagonal(diag: Vec<Entry<S>>) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, d) in diag.into_iter().enumerate() {
            m.set(k, k, d);
        }
        m
    }

    /// Builds a matrix from row-major entries; `data.len()` must be a square.
    pub fn from_row_major(n: usize, data: Vec<Entry<S>>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: n * n,
                right: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> &Entry<S> {
        &self.data[row * self.n + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Entry<S>) {
        self.data[row * self.n + col] = value;
    }

    pub fn entries(&self) -> &[Entry<S>] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.is_zero())
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    pub fn trace(&self) -> Entry<S> {
        (0..self.n).fold(Entry::zero(), |acc, k| acc + self.get(k, k).clone())
    }

    /// `tr(self * other)` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> Entry<S> {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        let mut acc = Entry::zero();
        for p in 0..n {
            for q in 0..n {
                let a = &self.data[p * n + q];
                if a.is_zero() {
                    continue;
                }
                let b = &other.data[q * n + p];
                if b.is_zero() {
                    continue;
                }
                acc = acc + a.clone() * b.clone();
            }
        }
        acc
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for p in 0..n {
            for q in 0..n {
                out.set(q, p, self.get(p, q).conj());
            }
        }
        out
    }

    pub fn scale(&self, factor: &Entry<S>) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z.clone() * factor.clone()).collect(),
        }
    }

    pub fn scale_real(&self, factor: &S) -> Self {
        Self {
            n: self.n,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(z.re.clone() * factor.clone(), z.im.clone() * factor.clone()))
                .collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = vec![Entry::<S>::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.data[k * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    out[i * n + j] = out[i * n + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Self { n, data: out }
    }

    /// `AB - BA`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) - &rhs.matmul(self)
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) + &rhs.matmul(self)
    }

    /// Largest `|entry|` (as `f64`), used by the floating-point checks.
    pub fn max_abs_entry(&self) -> f64 {
        self.data
            .iter()
            .map(|z| z.re.to_f64().hypot(z.im.to_f64()))
            .fold(0.0, f64::max)
    }

    /// Frobenius norm (as `f64`).
    pub fn frobenius(&self) -> f64 {
        self.data
            .iter()
            .map(|z| {
                let (re, im) = (z.re.to_f64(), z.im.to_f64());
                re * re + im * im
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Largest deviation from skew-Hermitian form, `max |A + A^†|`.
    pub fn skew_hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for p in 0..n {
            for q in p..n {
                let s = self.get(p, q).clone() + self.get(q, p).conj();
                worst = worst.max(s.re.to_f64().hypot(s.im.to_f64()));
            }
        }
        worst
    }

    /// Largest deviation from Hermitian form, `max |A - A^†|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for p in 0..n {
            for q in p..n {
                let s = self.get(p, q).clone() - self.get(q, p).conj();
                worst = worst.max(s.re.to_f64().hypot(s.im.to_f64()));
            }
        }
        worst
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(z.re.to_f64(), z.im.to_f64()))
                .collect(),
        }
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;

    fn add(self, rhs: Self) -> Matrix<S> {
        debug_assert_eq!(self.n, rhs.n);
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;

    fn sub(self, rhs: Self) -> Matrix<S> {
        debug_assert_eq!(self.n, rhs.n);
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Neg for &Matrix<S> {
    type Output = Matrix<S>;

    fn neg(self) -> Matrix<S> {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|a| -a.clone()).collect(),
        }
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;

    fn mul(self, rhs: Self) -> Matrix<S> {
        self.matmul(rhs)
    }
}

/// Coordinate-list form of a matrix with few nonzeros.
#[derive(Clone, Debug)]
pub struct SparseMatrix<S: Scalar> {
    n: usize,
    entries: Vec<(usize, usize, Entry<S>)>,
}

impl<S: Scalar> SparseMatrix<S> {
    pub fn from_dense(m: &Matrix<S>) -> Self {
        let n = m.dim();
        let mut entries = Vec::new();
        for p in 0..n {
            for q in 0..n {
                let z = m.get(p, q);
                if !z.is_zero() {
                    entries.push((p, q, z.clone()));
                }
            }
        }
        Self { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// `tr(self * dense)`.
    pub fn trace_of_product(&self, dense: &Matrix<S>) -> Entry<S> {
        self.entries
            .iter()
            .fold(Entry::zero(), |acc, (p, q, z)| acc + z.clone() * dense.get(*q, *p).clone())
    }
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
pub fn expm(a: &Matrix<f64>) -> Matrix<f64> {
    let norm = a.frobenius();
    let mut squarings = 0u32;
    let mut scaled = a.clone();
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
        scaled = a.scale_real(&(1.0 / 2f64.powi(squarings as i32)));
    }
    let n = a.dim();
    let mut result = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=20 {
        term = term.matmul(&scaled).scale_real(&(1.0 / k as f64));
        result = &result + &term;
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trace_of_product_matches_matmul() {
        let a = Matrix::from_row_major(2, vec![c(1.0, 2.0), c(0.0, 1.0), c(3.0, 0.0), c(-1.0, 0.5)]).unwrap();
        let b = Matrix::from_row_major(2, vec![c(0.5, 0.0), c(2.0, -1.0), c(0.0, 1.0), c(1.0, 1.0)]).unwrap();
        let direct = a.matmul(&b).trace();
        let fused = a.trace_of_product(&b);
        assert!((direct - fused).norm() < 1e-14);
    }

    #[test]
    fn row_major_rejects_bad_length() {
        assert!(Matrix::<f64>::from_row_major(3, vec![c(0.0, 0.0); 8]).is_err());
    }

    #[test]
    fn exp_of_diagonal_skew_matrix_is_phase() {
        let a = Matrix::from_diagonal(vec![c(0.0, 3.0), c(0.0, -3.0)]);
        let e = expm(&a);
        assert!((e.get(0, 0) - Complex64::from_polar(1.0, 3.0)).norm() < 1e-12);
        assert!((e.get(1, 1) - Complex64::from_polar(1.0, -3.0)).norm() < 1e-12);
        assert!(e.get(0, 1).norm() < 1e-14);
    }
}
