//! Bound-state window of a sector Hamiltonian, labelled against the
//! closed-form spectrum and screened for discretization artifacts.

use num_complex::Complex64;

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::spectra::{sommerfeld_energy, KappaSign, QuantumNumbers};

use super::dense::CMatrix;
use super::eigen::SymTridiagonal;
use super::space::{Component, KBlock, SectorSpace};
use super::sparse::OperatorMatrix;

/// Default relative eigenvalue shift tolerated under `N -> 2N`.
pub const REFINEMENT_TOL: f64 = 1e-7;
/// Default bound on a state's `D^2` identity residual relative to the window median.
pub const D_SQUARE_FACTOR: f64 = 5.0;

/// Energy interval `[lo, hi)` in units of `M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundWindow {
    pub lo: f64,
    pub hi: f64,
    pub n_max: u32,
}

impl BoundWindow {
    /// Window holding every level of the sector with `n <= n_max`.
    pub fn up_to(n_max: u32, space: &SectorSpace, c: &PhysicalConstants) -> Result<Self> {
        let j = space.j();
        let k = space.kappa_abs() as u32;
        if n_max < k {
            return Err(Error::EmptyWindow { lo: f64::from(k), hi: f64::from(n_max) });
        }
        let e = |n: u32| sommerfeld_energy(&QuantumNumbers::new(n, j, KappaSign::Negative)?, c);
        let (e0, e1) = (e(k)?, e(k + 1)?);
        let lo = e0 - 0.25 * (e1 - e0);
        let hi = 0.5 * (e(n_max)? + e(n_max + 1)?);
        Ok(Self { lo, hi, n_max })
    }
}

/// One labelled eigenpair of a single `m_j` block.
#[derive(Debug, Clone)]
pub struct BoundState {
    pub label: QuantumNumbers,
    pub block: KBlock,
    pub m_index: usize,
    pub energy: f64,
    /// Unit vector in the full sector space.
    pub vector: Vec<Complex64>,
}

/// A window eigenpair rejected by one of the screens.
#[derive(Debug, Clone, PartialEq)]
pub struct Exclusion {
    pub label: String,
    pub energy: f64,
    pub reason: String,
}

/// Labelled bound states plus the record of excluded states.
#[derive(Debug, Clone)]
pub struct BoundSubspace {
    pub window: BoundWindow,
    pub states: Vec<BoundState>,
    pub excluded: Vec<Exclusion>,
}

/// Chain of indices `mid_0, edge_0, mid_1, edge_1, ...` for one `K` block.
pub fn chain_indices(space: &SectorSpace, m_index: usize, block: KBlock) -> Vec<usize> {
    let (mid, edge) = match block {
        KBlock::Plus => (Component::UpperA, Component::LowerB),
        KBlock::Minus => (Component::LowerA, Component::UpperB),
    };
    (0..space.grid().cells())
        .flat_map(|i| [space.index(m_index, mid, i), space.index(m_index, edge, i)])
        .collect()
}

/// Real tridiagonal form of one block plus the phases mapping its
/// eigenvectors back: `v_k = phase_k z_k`.
fn reduce_block(h: &OperatorMatrix, chain: &[usize]) -> Result<(SymTridiagonal, Vec<Complex64>)> {
    let mut position = std::collections::HashMap::with_capacity(chain.len());
    for (k, &idx) in chain.iter().enumerate() {
        position.insert(idx, k);
    }
    for (k, &idx) in chain.iter().enumerate() {
        for (col, v) in h.row(idx) {
            let near = position.get(&col).is_some_and(|&c| c.abs_diff(k) <= 1);
            if !near && v.norm() > 0.0 {
                return Err(Error::Shape(format!("row {idx} couples outside its K block chain")));
            }
        }
    }
    let diag: Vec<f64> = chain.iter().map(|&i| h.get(i, i).re).collect();
    let mut off = Vec::with_capacity(chain.len() - 1);
    let mut phase = vec![Complex64::new(1.0, 0.0); chain.len()];
    for k in 0..chain.len() - 1 {
        let t = h.get(chain[k + 1], chain[k]);
        let r = t.norm();
        off.push(r);
        phase[k + 1] = if r > 0.0 { phase[k] * t / r } else { phase[k] };
    }
    Ok((SymTridiagonal::new(diag, off)?, phase))
}

/// Eigenvalues of one block inside the window.
pub fn block_eigenvalues(h: &OperatorMatrix, space: &SectorSpace, m_index: usize, block: KBlock, window: &BoundWindow) -> Result<Vec<f64>> {
    let (t, _) = reduce_block(h, &chain_indices(space, m_index, block))?;
    Ok(t.eigenvalues_in(window.lo, window.hi))
}

fn sign_of(block: KBlock) -> KappaSign {
    match block {
        KBlock::Plus => KappaSign::Negative,
        KBlock::Minus => KappaSign::Positive,
    }
}

/// Labels for an ascending list of block eigenvalues, or the reason it fails.
fn label_levels(values: &[f64], space: &SectorSpace, block: KBlock, c: &PhysicalConstants) -> Vec<std::result::Result<QuantumNumbers, String>> {
    let k = space.kappa_abs() as u32;
    let first = match block {
        KBlock::Plus => k,
        KBlock::Minus => k + 1,
    };
    let exact = |n: u32| QuantumNumbers::new(n, space.j(), sign_of(block)).and_then(|q| Ok((q, sommerfeld_energy(&q, c)?)));
    values
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let n = first + i as u32;
            let (q, e_n) = exact(n).map_err(|err| err.to_string())?;
            let (_, e_next) = exact(n + 1).map_err(|err| err.to_string())?;
            if (e - e_n).abs() < 0.25 * (e_next - e_n) {
                Ok(q)
            } else {
                Err(format!("eigenvalue {e:.16e} does not match level n = {n} at {e_n:.16e}"))
            }
        })
        .collect()
}

/// Labelled bound states of `h` in the window, for every `m_j` block.
pub fn bound_subspace(h: &OperatorMatrix, space: &SectorSpace, window: &BoundWindow, c: &PhysicalConstants) -> Result<BoundSubspace> {
    if window.hi <= window.lo {
        return Err(Error::EmptyWindow { lo: window.lo, hi: window.hi });
    }
    let mut states = Vec::new();
    let mut excluded = Vec::new();
    for m_index in 0..space.m_list().len() {
        for block in KBlock::BOTH {
            let chain = chain_indices(space, m_index, block);
            let (t, phase) = reduce_block(h, &chain)?;
            let values = t.eigenvalues_in(window.lo, window.hi);
            for (e, label) in values.iter().zip(label_levels(&values, space, block, c)) {
                match label {
                    Ok(label) => {
                        let z = t.eigenvector(*e)?;
                        let mut vector = vec![Complex64::default(); space.dim()];
                        for (k, &idx) in chain.iter().enumerate() {
                            vector[idx] = phase[k] * z[k];
                        }
                        states.push(BoundState { label, block, m_index, energy: *e, vector });
                    }
                    Err(reason) => excluded.push(Exclusion { label: "unidentified".into(), energy: *e, reason }),
                }
            }
        }
    }
    if states.is_empty() {
        return Err(Error::EmptyWindow { lo: window.lo, hi: window.hi });
    }
    Ok(BoundSubspace { window: *window, states, excluded })
}

impl BoundSubspace {
    /// Columns of the state vectors, in stored order.
    pub fn basis(&self) -> CMatrix {
        let cols: Vec<Vec<Complex64>> = self.states.iter().map(|s| s.vector.clone()).collect();
        CMatrix::from_columns(&cols)
    }

    pub fn energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy).collect()
    }

    /// States of one `m_j` block.
    pub fn in_block(&self, m_index: usize) -> impl Iterator<Item = &BoundState> {
        self.states.iter().filter(move |s| s.m_index == m_index)
    }

    fn exclude_where(&mut self, mut reason: impl FnMut(&BoundState) -> Option<String>) {
        let mut kept = Vec::with_capacity(self.states.len());
        for s in self.states.drain(..) {
            match reason(&s) {
                Some(r) => self.excluded.push(Exclusion { label: format!("{} m_index={}", s.label, s.m_index), energy: s.energy, reason: r }),
                None => kept.push(s),
            }
        }
        self.states = kept;
    }

    /// Drops states whose eigenvalue moves by more than `tol` (relative)
    /// when the same Hamiltonian is rebuilt on the refined grid.
    pub fn apply_refinement_filter(&mut self, refined_h: &OperatorMatrix, refined: &SectorSpace, c: &PhysicalConstants, tol: f64) -> Result<()> {
        let mut fine = Vec::new();
        for m_index in 0..refined.m_list().len() {
            for block in KBlock::BOTH {
                let values = block_eigenvalues(refined_h, refined, m_index, block, &self.window)?;
                for (e, label) in values.iter().zip(label_levels(&values, refined, block, c)) {
                    if let Ok(label) = label {
                        fine.push((m_index, label, *e));
                    }
                }
            }
        }
        self.exclude_where(|s| {
            match fine.iter().find(|(m, l, _)| *m == s.m_index && *l == s.label) {
                Some((_, _, e)) => {
                    let shift = (e - s.energy).abs() / s.energy.abs();
                    (shift > tol).then(|| format!("refinement shift {shift:.3e} exceeds {tol:.1e}"))
                }
                None => Some("no counterpart on the refined grid".into()),
            }
        });
        Ok(())
    }

    /// Per-state `D^2` identity residual: norm of the projected column
    /// `V^H (D^2 - 1 - (H^2 - 1) k^2/a^2) v`.
    pub fn d_square_column_residuals(&self, h: &OperatorMatrix, d: &OperatorMatrix, space: &SectorSpace, c: &PhysicalConstants) -> Vec<f64> {
        let v = self.basis();
        let e4 = d_square_apply(h, d, &v, space.kappa_abs(), c.a());
        let proj = v.adjoint().mul(&e4);
        (0..proj.cols()).map(|j| proj.column(j).iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()).collect()
    }

    /// Drops states whose `D^2` identity residual exceeds `factor` times the window median.
    pub fn apply_d_square_filter(&mut self, h: &OperatorMatrix, d: &OperatorMatrix, space: &SectorSpace, c: &PhysicalConstants, factor: f64) {
        let res = self.d_square_column_residuals(h, d, space, c);
        let mut sorted = res.clone();
        sorted.sort_by(f64::total_cmp);
        let median = sorted[sorted.len() / 2];
        let mut it = res.into_iter();
        self.exclude_where(|_| {
            let r = it.next().unwrap_or(0.0);
            (r > factor * median).then(|| format!("D^2 identity residual {r:.3e} exceeds {factor} x median {median:.3e}"))
        });
    }

    /// Keeps only states whose label and block appear in `labels`.
    pub fn retain_labels(&mut self, labels: &[(usize, QuantumNumbers)]) {
        self.exclude_where(|s| (!labels.contains(&(s.m_index, s.label))).then(|| "excluded on the reference grid".into()));
    }

    pub fn labels(&self) -> Vec<(usize, QuantumNumbers)> {
        self.states.iter().map(|s| (s.m_index, s.label)).collect()
    }
}

/// `(D^2 - 1 - (H^2 - 1) k^2 / a^2) V` for a block of columns.
pub fn d_square_apply(h: &OperatorMatrix, d: &OperatorMatrix, v: &CMatrix, kappa_abs: f64, a: f64) -> CMatrix {
    let dd = d.apply(&d.apply(v)).sub(v);
    let hh = h.apply(&h.apply(v)).sub(v);
    dd.sub(&hh.scale(Complex64::new(kappa_abs * kappa_abs / (a * a), 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::HalfInteger;
    use crate::oplab::builders::{build_d, build_h, build_k, Potential};
    use crate::oplab::space::RadialGrid;

    fn setup(cells: usize) -> (SectorSpace, OperatorMatrix, PhysicalConstants) {
        let c = PhysicalConstants::default();
        let s = SectorSpace::single(HalfInteger::HALF, RadialGrid::new(cells, 200.0 / c.a()).unwrap()).unwrap();
        let h = build_h(&s, &c, &Potential::Coulomb).unwrap();
        (s, h, c)
    }

    #[test]
    fn five_states_per_block_up_to_n3() {
        let (s, h, c) = setup(2000);
        let w = BoundWindow::up_to(3, &s, &c).unwrap();
        let b = bound_subspace(&h, &s, &w, &c).unwrap();
        let labels: Vec<String> = b.states.iter().map(|s| s.label.label()).collect();
        assert_eq!(labels, ["1S1/2", "2S1/2", "3S1/2", "2P1/2", "3P1/2"]);
        assert!(b.excluded.is_empty());
        let ground = sommerfeld_energy(&b.states[0].label, &c).unwrap();
        assert!(((b.states[0].energy - ground) / ground).abs() < 5e-7);
        let v = b.basis();
        assert!(v.adjoint().mul(&v).sub(&CMatrix::identity(5)).max_abs() < 1e-12);
        for st in &b.states {
            let r: f64 = h.matvec(&st.vector).iter().zip(&st.vector).map(|(x, y)| (x - st.energy * y).norm_sqr()).sum();
            assert!(r.sqrt() < 1e-10);
        }
    }

    #[test]
    fn refinement_filter_keeps_physical_states() {
        let (s, h, c) = setup(2000);
        let w = BoundWindow::up_to(3, &s, &c).unwrap();
        let mut b = bound_subspace(&h, &s, &w, &c).unwrap();
        let fine = s.refined();
        let hf = build_h(&fine, &c, &Potential::Coulomb).unwrap();
        b.apply_refinement_filter(&hf, &fine, &c, REFINEMENT_TOL).unwrap();
        assert_eq!(b.states.len(), 5, "{:?}", b.excluded);
        b.apply_refinement_filter(&hf, &fine, &c, 1e-12).unwrap();
        assert!(b.states.is_empty());
    }

    #[test]
    fn d_square_filter_measure() {
        let (s, h, c) = setup(2000);
        let d = build_d(&h, &build_k(&s), &s, &c).unwrap();
        let w = BoundWindow::up_to(3, &s, &c).unwrap();
        let mut b = bound_subspace(&h, &s, &w, &c).unwrap();
        b.apply_d_square_filter(&h, &d, &s, &c, D_SQUARE_FACTOR);
        assert_eq!(b.states.len(), 5, "{:?}", b.excluded);
    }

    #[test]
    fn empty_window_is_an_error() {
        let (s, h, c) = setup(200);
        let w = BoundWindow { lo: 0.1, hi: 0.2, n_max: 1 };
        assert!(matches!(bound_subspace(&h, &s, &w, &c), Err(Error::EmptyWindow { .. })));
        let s3 = SectorSpace::single(HalfInteger::from_twice(3), *s.grid()).unwrap();
        assert!(BoundWindow::up_to(1, &s3, &c).is_err());
    }
}
