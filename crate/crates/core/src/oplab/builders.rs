//! Matrix builders for `H`, `K`, `beta`, `gamma^5`, `Sigma.rhat`, `D` and `J`.
//!
//! Each `K` block is a reduced radial Dirac pair on the staggered grid. The
//! radial derivative acts as `(d/dr + k/r) = r^-k d/dr r^k` differenced
//! across one cell, from edge points to midpoints, and its adjoint supplies
//! the reverse coupling. This keeps `H` exactly Hermitian and free of
//! doubled modes.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::angular::j_ladder_element;
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

use super::sparse::{OperatorMatrix, Triplets};
use super::space::{Component, KBlock, RadialGrid, SectorSpace, Stagger};

/// Tolerance for flagging builder output as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-13;

type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Radial profile `W(r)` of the nonabelian potential `A = i W(r) Sigma x r`.
#[derive(Clone)]
pub struct GaugeProfile {
    label: String,
    value: RadialFn,
    derivative: RadialFn,
}

impl fmt::Debug for GaugeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaugeProfile").field("label", &self.label).finish_non_exhaustive()
    }
}

impl GaugeProfile {
    /// Profile from value and derivative closures.
    pub fn new(
        label: impl Into<String>,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self { label: label.into(), value: Arc::new(value), derivative: Arc::new(derivative) }
    }

    /// `W(r) = -1/r^2`.
    pub fn inverse_square() -> Self {
        Self::new("-1/r^2", |r| -1.0 / (r * r), |r| 2.0 / (r * r * r))
    }

    /// `W(r) = c`.
    pub fn constant(c: f64) -> Self {
        Self::new(format!("{c}"), move |_| c, |_| 0.0)
    }

    /// `W(r) = 0`.
    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn value(&self, r: f64) -> f64 {
        (self.value)(r)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        (self.derivative)(r)
    }

    /// Rejects profiles more singular than `1/r^2` at the origin.
    pub fn check_origin(&self) -> Result<()> {
        let weight = |r: f64| r * r * self.value(r).abs();
        let probes = [1e-4, 1e-6, 1e-8, 1e-10].map(weight);
        if probes.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("gauge profile near the origin"));
        }
        let reference = probes[0].max(1e-300);
        if probes[3] > 100.0 * reference && probes[3] > probes[1] {
            return Err(Error::Domain(format!(
                "W(r) = {} is more singular than 1/r^2 at the origin",
                self.label
            )));
        }
        Ok(())
    }
}

/// Potential entering the Hamiltonian builder.
#[derive(Debug, Clone)]
pub enum Potential {
    Coulomb,
    /// Coulomb plus `-e alpha.A` with `A = i W(r) Sigma x r`.
    CoulombPlusNonabelian { profile: GaugeProfile, coupling: f64 },
}

/// Cell-wise gauge phases `int w dr` with `w = 2 e W(r) r`.
struct LinkPhases {
    /// `int_{p_i}^{q_i} w`.
    mid_to_edge: Vec<f64>,
    /// `int_{q_{i-1}}^{p_i} w`, with entry 0 unused.
    edge_to_mid: Vec<f64>,
}

impl LinkPhases {
    fn new(grid: &RadialGrid, profile: &GaugeProfile, coupling: f64) -> Result<Self> {
        let rule = GaussLegendre::new(16);
        let w = |r: f64| 2.0 * coupling * profile.value(r) * r;
        let n = grid.cells();
        let mut mid_to_edge = Vec::with_capacity(n);
        let mut edge_to_mid = vec![0.0; n];
        for i in 0..n {
            let (p, q) = (grid.r(Stagger::Mid, i), grid.r(Stagger::Edge, i));
            mid_to_edge.push(rule.integrate(p, q, w));
            if i > 0 {
                edge_to_mid[i] = rule.integrate(grid.r(Stagger::Edge, i - 1), p, w);
            }
        }
        if mid_to_edge.iter().chain(&edge_to_mid).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("gauge link phase"));
        }
        Ok(Self { mid_to_edge, edge_to_mid })
    }
}

/// Entries `(i, j, value)` of the edge-to-midpoint coupling `r^-k D r^k`.
fn coupling_entries(grid: &RadialGrid, k: f64, links: Option<&LinkPhases>) -> Vec<(usize, usize, Complex64)> {
    let h = grid.h();
    let mut out = Vec::with_capacity(2 * grid.cells());
    for i in 0..grid.cells() {
        let p = grid.r(Stagger::Mid, i);
        let diag = (grid.r(Stagger::Edge, i) / p).powf(k) / h;
        let phase = links.map_or(0.0, |l| l.mid_to_edge[i]);
        out.push((i, i, Complex64::from_polar(diag, phase)));
        if i > 0 {
            let sub = -(grid.r(Stagger::Edge, i - 1) / p).powf(k) / h;
            let phase = links.map_or(0.0, |l| -l.edge_to_mid[i]);
            out.push((i, i - 1, Complex64::from_polar(sub, phase)));
        }
    }
    out
}

/// Dirac Hamiltonian on the sector (`M = 1`), flagged Hermitian.
pub fn build_h(space: &SectorSpace, c: &PhysicalConstants, potential: &Potential) -> Result<OperatorMatrix> {
    hamiltonian_with_coupling(space, c.a(), potential)
}

/// As [`build_h`] with a raw Coulomb strength; `a = 0` gives the free Dirac operator.
pub fn hamiltonian_with_coupling(space: &SectorSpace, a: f64, potential: &Potential) -> Result<OperatorMatrix> {
    if !(0.0..1.0).contains(&a) {
        return Err(Error::Domain(format!("coupling a = {a} outside [0, 1)")));
    }
    let grid = space.grid();
    let links = match potential {
        Potential::Coulomb => None,
        Potential::CoulombPlusNonabelian { profile, coupling } => {
            if !coupling.is_finite() {
                return Err(Error::NonFinite("nonabelian coupling"));
            }
            profile.check_origin()?;
            Some(LinkPhases::new(grid, profile, *coupling)?)
        }
    };
    let coupling = coupling_entries(grid, space.kappa_abs(), links.as_ref());
    let i_unit = Complex64::new(0.0, 1.0);
    let mut t = Triplets::new(space.dim(), space.dim());
    for b in 0..space.m_list().len() {
        for comp in Component::ALL {
            for i in 0..grid.cells() {
                let r = grid.r(comp.stagger(), i);
                let idx = space.index(b, comp, i);
                t.push_real(idx, idx, comp.beta() - a / r);
            }
        }
        for block in KBlock::BOTH {
            // Pairs (midpoint component, edge component) coupled by i C and its adjoint.
            let (mid, edge) = match block {
                KBlock::Plus => (Component::UpperA, Component::LowerB),
                KBlock::Minus => (Component::LowerA, Component::UpperB),
            };
            for &(i, j, v) in &coupling {
                let (row, col) = (space.index(b, mid, i), space.index(b, edge, j));
                t.push(row, col, i_unit * v);
                t.push(col, row, (i_unit * v).conj());
            }
        }
    }
    let h = t.build();
    if h.entries().any(|(_, _, v)| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NonFinite("Hamiltonian entry"));
    }
    h.flag_hermitian(HERMITIAN_TOL)
}

fn diagonal_by_component(space: &SectorSpace, value: impl Fn(Component) -> f64) -> OperatorMatrix {
    let mut d = vec![0.0; space.dim()];
    for b in 0..space.m_list().len() {
        for comp in Component::ALL {
            for i in 0..space.grid().cells() {
                d[space.index(b, comp, i)] = value(comp);
            }
        }
    }
    OperatorMatrix::real_diagonal(&d)
}

/// `K = beta (Sigma.L + 1)`: `+(j + 1/2)` on upper A and lower B, `-(j + 1/2)` otherwise.
pub fn build_k(space: &SectorSpace) -> OperatorMatrix {
    let k = space.kappa_abs();
    let m = diagonal_by_component(space, |comp| comp.k_sign() * k);
    m.flag_hermitian(0.0).expect("diagonal real matrix")
}

/// `beta = diag(+1, +1, -1, -1)`.
pub fn build_beta(space: &SectorSpace) -> OperatorMatrix {
    let m = diagonal_by_component(space, Component::beta);
    m.flag_hermitian(0.0).expect("diagonal real matrix")
}

/// `gamma^5`: exchanges upper and lower components on the same angular channel.
pub fn build_gamma5(space: &SectorSpace) -> OperatorMatrix {
    let mut t = Triplets::new(space.dim(), space.dim());
    for b in 0..space.m_list().len() {
        for comp in Component::ALL {
            for i in 0..space.grid().cells() {
                t.push_real(space.index(b, comp.gamma5_partner(), i), space.index(b, comp, i), 1.0);
            }
        }
    }
    t.build().flag_hermitian(0.0).expect("permutation is symmetric")
}

/// `Sigma.rhat`: maps `phi^A <-> phi^B` with sign `-1`, averaging between
/// the staggered point sets.
pub fn build_sigma_r(space: &SectorSpace) -> OperatorMatrix {
    let n = space.grid().cells();
    let mut t = Triplets::new(space.dim(), space.dim());
    for b in 0..space.m_list().len() {
        for (a_comp, b_comp) in [(Component::UpperA, Component::UpperB), (Component::LowerA, Component::LowerB)] {
            for i in 0..n {
                let row = space.index(b, a_comp, i);
                for j in [i.checked_sub(1), Some(i)].into_iter().flatten() {
                    let col = space.index(b, b_comp, j);
                    t.push_real(row, col, -0.5);
                    t.push_real(col, row, -0.5);
                }
            }
        }
    }
    t.build().flag_hermitian(0.0).expect("symmetric averaging")
}

/// Johnson–Lippmann operator `D = Sigma.rhat - (i/(M a)) K gamma^5 (H - M beta)`.
pub fn build_d(h: &OperatorMatrix, k: &OperatorMatrix, space: &SectorSpace, c: &PhysicalConstants) -> Result<OperatorMatrix> {
    let dim = space.dim();
    if h.rows() != dim || k.rows() != dim {
        return Err(Error::Shape(format!("H {} / K {} on a space of dimension {dim}", h.rows(), k.rows())));
    }
    let shifted = h.sub(&build_beta(space));
    let tail = k.matmul(&build_gamma5(space)).matmul(&shifted);
    let one = Complex64::new(1.0, 0.0);
    Ok(OperatorMatrix::axpby(one, &build_sigma_r(space), Complex64::new(0.0, 1.0 / c.a()), &tail.scale(-one)))
}

/// `(J_1, J_2, J_3)` acting across `m_j` blocks; needs the full multiplet.
pub fn build_j(space: &SectorSpace) -> Result<[OperatorMatrix; 3]> {
    if !space.is_full_multiplet() {
        return Err(Error::FullMultipletRequired);
    }
    let dim = space.dim();
    let bd = space.block_dim();
    let ms = space.m_list();
    let mut jp = Triplets::new(dim, dim);
    let mut jm = Triplets::new(dim, dim);
    let mut j3 = vec![0.0; dim];
    for (b, m) in ms.iter().enumerate() {
        j3[b * bd..(b + 1) * bd].iter_mut().for_each(|v| *v = m.value());
        for (up, target, t) in [(true, m.twice() + 2, &mut jp), (false, m.twice() - 2, &mut jm)] {
            if let Some(b2) = ms.iter().position(|x| x.twice() == target) {
                let coef = j_ladder_element(space.j(), *m, up);
                for x in 0..bd {
                    t.push_real(b2 * bd + x, b * bd + x, coef);
                }
            }
        }
    }
    let (jp, jm) = (jp.build(), jm.build());
    let half = Complex64::new(0.5, 0.0);
    let j1 = OperatorMatrix::axpby(half, &jp, half, &jm);
    let j2 = OperatorMatrix::axpby(Complex64::new(0.0, -0.5), &jp, Complex64::new(0.0, 0.5), &jm);
    Ok([
        j1.flag_hermitian(1e-15)?,
        j2.flag_hermitian(1e-15)?,
        OperatorMatrix::real_diagonal(&j3).flag_hermitian(0.0)?,
    ])
}

/// `H'' - H`: the nonabelian term `-e alpha.A = 2 e W(r) r (alpha.rhat)` as
/// represented by gauge-covariant links on the staggered grid.
pub fn nonabelian_term(profile: &GaugeProfile, coupling: f64, space: &SectorSpace, c: &PhysicalConstants) -> Result<OperatorMatrix> {
    let with = build_h(space, c, &Potential::CoulombPlusNonabelian { profile: profile.clone(), coupling })?;
    let without = build_h(space, c, &Potential::Coulomb)?;
    with.sub(&without).flag_hermitian(HERMITIAN_TOL)
}
