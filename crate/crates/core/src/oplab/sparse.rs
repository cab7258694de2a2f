//! Compressed-row complex operator matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::dense::CMatrix;

/// Sparse complex matrix in CSR layout.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
    hermitian: bool,
}

/// Coordinate-list accumulator; duplicate entries are summed.
#[derive(Debug, Clone, Default)]
pub struct Triplets {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl Triplets {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: Vec::new() }
    }

    pub fn push(&mut self, i: usize, j: usize, v: Complex64) {
        debug_assert!(i < self.rows && j < self.cols);
        if v != Complex64::default() {
            self.entries.push((i, j, v));
        }
    }

    pub fn push_real(&mut self, i: usize, j: usize, v: f64) {
        self.push(i, j, Complex64::new(v, 0.0));
    }

    pub fn build(mut self) -> OperatorMatrix {
        self.entries.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; self.rows + 1];
        let mut col_idx = Vec::with_capacity(self.entries.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(self.entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in self.entries {
            if last == Some((i, j)) {
                if let Some(x) = values.last_mut() {
                    *x += v;
                }
                continue;
            }
            last = Some((i, j));
            row_ptr[i + 1] += 1;
            col_idx.push(j);
            values.push(v);
        }
        for i in 0..self.rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        OperatorMatrix { rows: self.rows, cols: self.cols, row_ptr, col_idx, values, hermitian: false }
    }
}

impl OperatorMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Triplets::new(rows, cols).build()
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        let mut t = Triplets::new(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            t.push(i, i, v);
        }
        t.build()
    }

    pub fn real_diagonal(d: &[f64]) -> Self {
        let mut t = Triplets::new(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            t.push_real(i, i, v);
        }
        t.build()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Whether the matrix was declared Hermitian by its builder.
    pub fn is_flagged_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Sets the Hermitian flag after checking `max |A - A^H| <= tol`.
    pub fn flag_hermitian(mut self, tol: f64) -> Result<Self> {
        let r = self.hermiticity_residual();
        if r > tol {
            return Err(Error::NotHermitian(r));
        }
        self.hermitian = true;
        Ok(self)
    }

    /// `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    /// Entry `(i, j)`, zero when not stored.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[span.clone()].binary_search(&j) {
            Ok(k) => self.values[span.start + k],
            Err(_) => Complex64::default(),
        }
    }

    /// Iterator over stored `(i, j, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.rows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "matvec dimension");
        (0..self.rows).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    /// `A X` for a dense block of column vectors.
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        assert_eq!(x.rows(), self.cols, "apply dimension");
        let k = x.cols();
        let mut out = CMatrix::zeros(self.rows, k);
        for i in 0..self.rows {
            for (j, v) in self.row(i) {
                for c in 0..k {
                    out[(i, c)] += v * x[(j, c)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut t = Triplets::new(self.cols, self.rows);
        for (i, j, v) in self.entries() {
            t.push(j, i, v.conj());
        }
        let mut m = t.build();
        m.hermitian = self.hermitian;
        m
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut m = self.clone();
        m.values.iter_mut().for_each(|v| *v *= s);
        m.hermitian = self.hermitian && s.im == 0.0;
        m
    }

    /// `alpha A + beta B`.
    pub fn axpby(alpha: Complex64, a: &Self, beta: Complex64, b: &Self) -> Self {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols), "axpby shapes");
        let mut t = Triplets::new(a.rows, a.cols);
        for (i, j, v) in a.entries() {
            t.push(i, j, alpha * v);
        }
        for (i, j, v) in b.entries() {
            t.push(i, j, beta * v);
        }
        let mut m = t.build();
        m.drop_zeros();
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self::axpby(one, self, one, other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self::axpby(one, self, -one, other)
    }

    fn drop_zeros(&mut self) {
        let mut t = Triplets::new(self.rows, self.cols);
        for (i, j, v) in self.entries() {
            t.push(i, j, v);
        }
        *self = t.build();
    }

    /// Sparse product `A B`.
    pub fn matmul(&self, b: &Self) -> Self {
        assert_eq!(self.cols, b.rows, "matmul dimension");
        let mut acc = vec![Complex64::default(); b.cols];
        let mut mark = vec![usize::MAX; b.cols];
        let mut touched = Vec::new();
        let mut row_ptr = vec![0usize; self.rows + 1];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for i in 0..self.rows {
            touched.clear();
            for (k, a) in self.row(i) {
                for (j, v) in b.row(k) {
                    if mark[j] != i {
                        mark[j] = i;
                        acc[j] = Complex64::default();
                        touched.push(j);
                    }
                    acc[j] += a * v;
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                if acc[j] != Complex64::default() {
                    col_idx.push(j);
                    values.push(acc[j]);
                }
            }
            row_ptr[i + 1] = col_idx.len();
        }
        Self { rows: self.rows, cols: b.cols, row_ptr, col_idx, values, hermitian: false }
    }

    /// `A B - B A`.
    pub fn commutator(&self, b: &Self) -> Self {
        self.matmul(b).sub(&b.matmul(self))
    }

    /// `A B + B A`.
    pub fn anticommutator(&self, b: &Self) -> Self {
        self.matmul(b).add(&b.matmul(self))
    }

    /// `max |(A B - B A)_{ij}|`, computed row by row without storing the products.
    pub fn commutator_max_abs(&self, b: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (b.rows, b.cols));
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut acc = vec![Complex64::default(); n];
        let mut mark = vec![usize::MAX; n];
        let mut touched = Vec::new();
        let mut worst = 0.0f64;
        for i in 0..n {
            touched.clear();
            let mut add = |j: usize, v: Complex64, touched: &mut Vec<usize>| {
                if mark[j] != i {
                    mark[j] = i;
                    acc[j] = Complex64::default();
                    touched.push(j);
                }
                acc[j] += v;
            };
            for (k, x) in self.row(i) {
                for (j, y) in b.row(k) {
                    add(j, x * y, &mut touched);
                }
            }
            for (k, x) in b.row(i) {
                for (j, y) in self.row(k) {
                    add(j, -(x * y), &mut touched);
                }
            }
            for &j in &touched {
                worst = worst.max(acc[j].norm());
            }
        }
        worst
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// `max |A - A^H|`.
    pub fn hermiticity_residual(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        self.entries()
            .map(|(i, j, v)| (v - self.get(j, i).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Dense copy (small matrices only).
    pub fn to_dense(&self) -> CMatrix {
        let mut d = CMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.entries() {
            d[(i, j)] = v;
        }
        d
    }

    /// Block-diagonal matrix with `copies` copies of `self`.
    pub fn repeat_diagonal(&self, copies: usize) -> Self {
        let mut t = Triplets::new(self.rows * copies, self.cols * copies);
        for c in 0..copies {
            for (i, j, v) in self.entries() {
                t.push(c * self.rows + i, c * self.cols + j, v);
            }
        }
        let mut m = t.build();
        m.hermitian = self.hermitian;
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample() -> OperatorMatrix {
        let mut t = Triplets::new(3, 3);
        t.push(0, 0, c(1.0, 0.0));
        t.push(0, 2, c(0.0, 2.0));
        t.push(2, 0, c(0.0, -2.0));
        t.push(1, 1, c(-3.0, 0.0));
        t.push(1, 1, c(1.0, 0.0));
        t.build()
    }

    #[test]
    fn duplicates_are_summed() {
        assert_eq!(sample().get(1, 1), c(-2.0, 0.0));
        assert_eq!(sample().nnz(), 4);
    }

    #[test]
    fn hermitian_flag_checks_residual() {
        assert_eq!(sample().hermiticity_residual(), 0.0);
        assert!(sample().flag_hermitian(1e-13).unwrap().is_flagged_hermitian());
        let mut t = Triplets::new(2, 2);
        t.push(0, 1, c(1.0, 0.0));
        assert!(matches!(t.build().flag_hermitian(1e-13), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn products_match_dense() {
        let a = sample();
        let mut t = Triplets::new(3, 3);
        t.push(0, 1, c(1.0, 1.0));
        t.push(2, 2, c(0.5, 0.0));
        t.push(1, 0, c(0.0, -1.0));
        let b = t.build();
        let ab = a.matmul(&b).to_dense();
        let want = a.to_dense().mul(&b.to_dense());
        assert!(ab.sub(&want).max_abs() < 1e-15);
        let comm = a.commutator(&b);
        assert!((comm.max_abs() - a.commutator_max_abs(&b)).abs() < 1e-15);
        let x = vec![c(1.0, 0.0), c(0.0, 1.0), c(2.0, -1.0)];
        let y = a.matvec(&x);
        let yd = a.to_dense().mul(&CMatrix::from_columns(&[x]));
        for i in 0..3 {
            assert!((y[i] - yd[(i, 0)]).norm() < 1e-15);
        }
    }
}
