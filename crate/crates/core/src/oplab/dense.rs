//! Small dense complex matrices for subspace algebra.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::Result;

use super::eigen::eig_hermitian;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::default(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Matrix whose columns are the given equal-length vectors.
    pub fn from_columns(cols: &[Vec<Complex64>]) -> Self {
        let rows = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, &v) in c.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul(&self, b: &Self) -> Self {
        assert_eq!(self.cols, b.rows, "mul dimension");
        let mut out = Self::zeros(self.rows, b.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::default() {
                    continue;
                }
                for j in 0..b.cols {
                    out[(i, j)] += a * b[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    fn zip(&self, b: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!((self.rows, self.cols), (b.rows, b.cols), "shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&b.data).map(|(&x, &y)| f(x, y)).collect(),
        }
    }

    pub fn add(&self, b: &Self) -> Self {
        self.zip(b, |x, y| x + y)
    }

    pub fn sub(&self, b: &Self) -> Self {
        self.zip(b, |x, y| x - y)
    }

    pub fn commutator(&self, b: &Self) -> Self {
        self.mul(b).sub(&b.mul(self))
    }

    /// Kronecker product `A (x) B`.
    pub fn kron(&self, b: &Self) -> Self {
        Self::from_fn(self.rows * b.rows, self.cols * b.cols, |i, j| {
            self[(i / b.rows, j / b.cols)] * b[(i % b.rows, j % b.cols)]
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> Result<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Ok(0.0);
        }
        let g = self.adjoint().mul(self);
        let e = eig_hermitian(&g.hermitian_part())?;
        Ok(e.values.iter().fold(0.0f64, |m, &v| m.max(v)).max(0.0).sqrt())
    }

    /// `(A + A^H) / 2`.
    pub fn hermitian_part(&self) -> Self {
        self.add(&self.adjoint()).scale(Complex64::new(0.5, 0.0))
    }

    /// `max |A - A^H|`.
    pub fn hermiticity_residual(&self) -> f64 {
        self.sub(&self.adjoint()).max_abs()
    }

    /// Dense `A = B` copy restricted to rows and columns in `keep`.
    pub fn select(&self, keep: &[usize]) -> Self {
        Self::from_fn(keep.len(), keep.len(), |i, j| self[(keep[i], keep[j])])
    }

    /// Columns in `keep`.
    pub fn select_columns(&self, keep: &[usize]) -> Self {
        Self::from_fn(self.rows, keep.len(), |i, j| self[(i, keep[j])])
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}
