//! Hermitian eigensolvers: dense Householder plus implicit QL, and
//! Sturm bisection with inverse iteration for tridiagonal blocks.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::dense::CMatrix;

/// Eigenvalues in ascending order with eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

const QL_MAX_SWEEPS: usize = 60;

/// Full eigendecomposition of a dense Hermitian matrix.
pub fn eig_hermitian(m: &CMatrix) -> Result<Eigen> {
    let n = m.rows();
    if n != m.cols() {
        return Err(Error::Shape(format!("{}x{} is not square", n, m.cols())));
    }
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let skew = m.hermiticity_residual();
    if skew > 1e-10 * scale {
        return Err(Error::NotHermitian(skew));
    }
    if n == 0 {
        return Ok(Eigen { values: Vec::new(), vectors: CMatrix::zeros(0, 0) });
    }
    let (diag, sub, q) = householder(m);

    // Rotate the complex subdiagonal onto the positive reals.
    let mut phase = vec![Complex64::new(1.0, 0.0); n];
    let mut off = vec![0.0; n];
    for k in 0..n - 1 {
        let t = sub[k];
        let r = t.norm();
        off[k] = r;
        phase[k + 1] = if r > 0.0 { phase[k] * t / r } else { phase[k] };
    }
    let mut d = diag;
    let mut z = vec![vec![0.0; n]; n];
    for (i, row) in z.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    implicit_ql(&mut d, &mut off, &mut z)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, c| {
        let col = order[c];
        (0..n).map(|k| q[(i, k)] * phase[k] * z[k][col]).sum()
    });
    Ok(Eigen { values, vectors })
}

/// Unitary reduction to Hermitian tridiagonal form: `A = Q T Q^H`.
fn householder(m: &CMatrix) -> (Vec<f64>, Vec<Complex64>, CMatrix) {
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut q = CMatrix::identity(n);
    let mut sub = vec![Complex64::default(); n.saturating_sub(1)];
    for k in 0..n.saturating_sub(1) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let norm = x.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm == 0.0 || x.len() == 1 {
            sub[k] = x[0];
            continue;
        }
        let x0 = x[0];
        let unit = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -unit * norm;
        let mut v = x;
        v[0] -= alpha;
        let vn = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        v.iter_mut().for_each(|c| *c /= vn);

        let m = v.len();
        let p: Vec<Complex64> = (0..m)
            .map(|i| (0..m).map(|j| a[(k + 1 + i, k + 1 + j)] * v[j]).sum())
            .collect();
        let s: Complex64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let w: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - s.re * vi).collect();
        for i in 0..m {
            for j in 0..m {
                a[(k + 1 + i, k + 1 + j)] -= 2.0 * (v[i] * w[j].conj() + w[i] * v[j].conj());
            }
        }
        for i in k + 1..n {
            a[(i, k)] = Complex64::default();
            a[(k, i)] = Complex64::default();
        }
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();
        sub[k] = alpha;

        for r in 0..n {
            let qv: Complex64 = (0..m).map(|j| q[(r, k + 1 + j)] * v[j]).sum();
            for j in 0..m {
                q[(r, k + 1 + j)] -= 2.0 * qv * v[j].conj();
            }
        }
    }
    let diag = (0..n).map(|i| a[(i, i)].re).collect();
    (diag, sub, q)
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix.
/// `off[k]` couples `k` and `k + 1`; `z` accumulates the rotations.
fn implicit_ql(d: &mut [f64], off: &mut [f64], z: &mut [Vec<f64>]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > QL_MAX_SWEEPS {
                return Err(Error::NoConvergence("implicit QL".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

/// Real symmetric tridiagonal matrix; `off[k]` couples `k` and `k + 1`.
#[derive(Debug, Clone)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Shape(format!("diag {} / off {}", diag.len(), off.len())));
        }
        if diag.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("tridiagonal entries"));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    fn norm_bound(&self) -> f64 {
        (0..self.len())
            .map(|i| {
                let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let right = self.off.get(i).map_or(0.0, |v| v.abs());
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.len() {
            if i > 0 {
                q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / q;
            }
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Eigenvalues in `[lo, hi)`, ascending, bisected to machine precision.
    pub fn eigenvalues_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let first = self.count_below(lo);
        let last = self.count_below(hi);
        let tol = 2.0 * f64::EPSILON * self.norm_bound();
        (first..last)
            .map(|k| {
                let (mut a, mut b) = (lo, hi);
                while b - a > tol.max(f64::EPSILON * a.abs().max(b.abs())) {
                    let mid = 0.5 * (a + b);
                    if mid <= a || mid >= b {
                        break;
                    }
                    if self.count_below(mid) > k {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                0.5 * (a + b)
            })
            .collect()
    }

    /// Unit eigenvector for the eigenvalue `lambda` by inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Result<Vec<f64>> {
        let lu = ShiftedLu::new(self, lambda);
        let n = self.len();
        let mut x = vec![1.0 / (n as f64).sqrt(); n];
        for _ in 0..3 {
            lu.solve(&mut x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                return Err(Error::NoConvergence("inverse iteration".into()));
            }
            x.iter_mut().for_each(|v| *v /= norm);
        }
        Ok(x)
    }
}

/// Partial-pivoting LU of `T - lambda I`.
struct ShiftedLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn new(t: &SymTridiagonal, lambda: f64) -> Self {
        let n = t.len();
        let mut dl = t.off.clone();
        let mut d: Vec<f64> = t.diag.iter().map(|v| v - lambda).collect();
        let mut du = t.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        let floor = f64::EPSILON * t.norm_bound().max(f64::MIN_POSITIVE);
        for v in &mut d {
            if v.abs() < floor {
                *v = floor.copysign(*v);
            }
        }
        Self { dl, d, du, du2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Deterministic pseudo-random stream (64-bit LCG).
    fn stream(seed: u64) -> impl FnMut() -> f64 {
        let mut s = seed;
        move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        }
    }

    #[test]
    fn reconstructs_random_hermitian_200() {
        let mut rnd = stream(7);
        let n = 200;
        let raw = CMatrix::from_fn(n, n, |_, _| Complex64::default());
        let mut m = raw;
        for i in 0..n {
            for j in 0..=i {
                let v = if i == j { Complex64::new(rnd(), 0.0) } else { Complex64::new(rnd(), rnd()) };
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
        let e = eig_hermitian(&m).unwrap();
        let rebuilt = e.vectors.mul(&CMatrix::from_real_diagonal(&e.values)).mul(&e.vectors.adjoint());
        assert!(rebuilt.sub(&m).max_abs() < 1e-12);
        let gram = e.vectors.adjoint().mul(&e.vectors);
        assert!(gram.sub(&CMatrix::identity(n)).max_abs() < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::identity(2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn bisection_matches_laplacian_closed_form() {
        let n = 50;
        let t = SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap();
        let vals = t.eigenvalues_in(0.0, 4.0);
        assert_eq!(vals.len(), n);
        for (k, v) in vals.iter().enumerate() {
            let x = std::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64;
            let exact = 2.0 - 2.0 * x.cos();
            assert!((v - exact).abs() < 1e-14);
            let vec = t.eigenvector(*v).unwrap();
            let s = if vec[0] < 0.0 { -1.0 } else { 1.0 };
            let norm = (2.0 / (n + 1) as f64).sqrt();
            for (i, c) in vec.iter().enumerate() {
                let exact = norm * (x * (i + 1) as f64).sin();
                assert!((s * c - exact).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn window_counts() {
        let t = SymTridiagonal::new(vec![1.0, 2.0, 3.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(t.count_below(2.5), 2);
        assert_eq!(t.eigenvalues_in(1.5, 10.0).len(), 2);
    }
}
