//! Pseudospin and SO(4) generators on the bound subspace.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectra::QuantumNumbers;

use super::bound::{BoundSubspace, Exclusion};
use super::dense::CMatrix;
use super::eigen::eig_hermitian;
use super::space::SectorSpace;
use super::sparse::OperatorMatrix;

/// Eigenvalues of `D^2` below this floor are treated as `ker D`.
pub const KERNEL_FLOOR: f64 = 1e-8;

/// `V^H A V` for sparse `A` and a dense basis `V`.
pub fn compress(a: &OperatorMatrix, v: &CMatrix) -> CMatrix {
    v.adjoint().mul(&a.apply(v))
}

/// Pseudospin generators on the admissible part of a bound subspace.
#[derive(Debug, Clone)]
pub struct Pseudospin {
    /// Orthonormal admissible basis in the full space.
    pub basis: CMatrix,
    /// `(m_index, label)` for each basis column.
    pub labels: Vec<(usize, QuantumNumbers)>,
    pub h: CMatrix,
    pub d: CMatrix,
    pub k: CMatrix,
    /// `tau_1, tau_2, tau_3`.
    pub tau: [CMatrix; 3],
    /// `T_i = tau_i / 2`.
    pub t: [CMatrix; 3],
    /// `ker D` states and floor violations.
    pub excluded: Vec<Exclusion>,
}

/// Builds `tau_1 = D (D^2)^{-1/2}`, `tau_3 = K/(j + 1/2)`, `tau_2 = i tau_1 tau_3`.
///
/// States with `n = j + 1/2` lie in `ker D` and are left out, as is any state
/// whose compressed `D^2` has an eigenvalue below [`KERNEL_FLOOR`].
pub fn build_pseudospin(h: &OperatorMatrix, k: &OperatorMatrix, d: &OperatorMatrix, sub: &BoundSubspace, space: &SectorSpace) -> Result<Pseudospin> {
    let mut excluded = Vec::new();
    let mut keep: Vec<usize> = Vec::new();
    for (i, s) in sub.states.iter().enumerate() {
        if s.label.n_radial() == 0 {
            excluded.push(Exclusion {
                label: format!("{} m_index={}", s.label, s.m_index),
                energy: s.energy,
                reason: "n = j + 1/2 lies in ker D".into(),
            });
        } else {
            keep.push(i);
        }
    }
    let all = sub.basis();
    loop {
        if keep.is_empty() {
            return Err(Error::EmptyWindow { lo: sub.window.lo, hi: sub.window.hi });
        }
        let v = all.select_columns(&keep);
        let d_sub = compress(d, &v);
        let d_herm = d_sub.hermitian_part();
        let eig = eig_hermitian(&d_herm)?;
        let small = eig.values.iter().copied().enumerate().find(|&(_, x)| x * x < KERNEL_FLOOR);
        if let Some((col, x)) = small {
            // Drop the basis state carrying most of the offending eigenvector.
            let weights: Vec<f64> = (0..keep.len()).map(|r| eig.vectors[(r, col)].norm_sqr()).collect();
            let worst = (0..keep.len()).max_by(|&a, &b| weights[a].total_cmp(&weights[b])).unwrap_or(0);
            let s = &sub.states[keep[worst]];
            excluded.push(Exclusion {
                label: format!("{} m_index={}", s.label, s.m_index),
                energy: s.energy,
                reason: format!("D^2 eigenvalue {:.3e} below floor {KERNEL_FLOOR:.0e}", x * x),
            });
            keep.remove(worst);
            continue;
        }
        let signs: Vec<f64> = eig.values.iter().map(|x| x.signum()).collect();
        let tau1 = eig.vectors.mul(&CMatrix::from_real_diagonal(&signs)).mul(&eig.vectors.adjoint());
        let k_sub = compress(k, &v);
        let tau3 = k_sub.scale(Complex64::new(1.0 / space.kappa_abs(), 0.0));
        let tau2 = tau1.mul(&tau3).scale(Complex64::new(0.0, 1.0));
        let half = Complex64::new(0.5, 0.0);
        let t = [tau1.scale(half), tau2.scale(half), tau3.scale(half)];
        let labels = keep.iter().map(|&i| (sub.states[i].m_index, sub.states[i].label)).collect();
        return Ok(Pseudospin {
            h: compress(h, &v),
            basis: v,
            labels,
            d: d_sub,
            k: k_sub,
            tau: [tau1, tau2, tau3],
            t,
            excluded,
        });
    }
}

/// `I = J + T` and `R = J - T` with `J` compressed to the same subspace.
#[derive(Debug, Clone)]
pub struct So4 {
    pub j: [CMatrix; 3],
    pub i: [CMatrix; 3],
    pub r: [CMatrix; 3],
}

/// Builds the six SO(4) generators; `J` must act across the full multiplet.
pub fn build_so4(space: &SectorSpace, spin: &Pseudospin, j_ops: &[OperatorMatrix; 3]) -> Result<So4> {
    if !space.is_full_multiplet() {
        return Err(Error::FullMultipletRequired);
    }
    let j = [0, 1, 2].map(|n| compress(&j_ops[n], &spin.basis));
    let i = [0, 1, 2].map(|n| j[n].add(&spin.t[n]));
    let r = [0, 1, 2].map(|n| j[n].sub(&spin.t[n]));
    Ok(So4 { j, i, r })
}

/// `max_{ijk} |[A_i, B_j] - i eps_{ijk} C_k|` in the entry norm.
pub fn closure_residual(a: &[CMatrix; 3], b: &[CMatrix; 3], c: &[CMatrix; 3]) -> f64 {
    let unit = Complex64::new(0.0, 1.0);
    let mut worst = 0.0f64;
    for x in 0..3 {
        for y in 0..3 {
            let mut lhs = a[x].commutator(&b[y]);
            if x != y {
                let z = 3 - x - y;
                let sign = if (x + 1) % 3 == y { 1.0 } else { -1.0 };
                lhs = lhs.sub(&c[z].scale(unit * sign));
            }
            worst = worst.max(lhs.max_abs());
        }
    }
    worst
}
