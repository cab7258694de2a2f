//! The identity battery: structural checks, subspace algebra, and grid-limited
//! identities measured on two resolutions.

use num_complex::Complex64;

use crate::angular::HalfInteger;
use crate::breaking::{lamb_potential, LambParams};
use crate::constants::PhysicalConstants;
use crate::error::Result;
use crate::spectra::{sommerfeld_energy, KappaSign, QuantumNumbers};

use super::analytic::analytic_residual;
use super::bound::{bound_subspace, d_square_apply, BoundSubspace, BoundWindow, D_SQUARE_FACTOR, REFINEMENT_TOL};
use super::builders::{build_d, build_h, build_j, build_k, Potential};
use super::dense::CMatrix;
use super::so4::{build_pseudospin, build_so4, closure_residual, Pseudospin, So4};
use super::report::{fmt_float, EntryKind, NormKind, OrderBand, ReportEntry, SymmetryReport};
use super::space::{RadialGrid, SectorSpace, DEFAULT_EXTENT};
use super::sparse::OperatorMatrix;

/// Per-identity tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `{K, D}`, `K^2`, `[K, H]`, `[J, .]`.
    pub structural: f64,
    /// Hermiticity of `H` and `K`.
    pub hermitian: f64,
    /// Hermiticity of `D`.
    pub d_hermitian: f64,
    /// Closure relations on the bound subspace.
    pub algebra: f64,
    /// `tau_i^2 = 1`, hermiticity of `tau_i`, `[J, T] = 0`.
    pub pseudospin: f64,
    /// Relative splitting of Kramers pairs.
    pub kramers: f64,
    /// `1 - |<psi_-|tau_1 psi_+>|`.
    pub kramers_overlap: f64,
    /// Relative eigenvalue shift allowed by the refinement screen.
    pub refinement: f64,
    /// `D^2` identity screen, in multiples of the window median.
    pub d_square_factor: f64,
    /// Compressed `[H, D]`.
    pub commutator_hd: f64,
    /// Compressed `D^2` identity.
    pub d_square: f64,
    /// `||(H - E) psi|| / ||psi||` for the injected ground state.
    pub analytic: f64,
    /// Relative error of the lowest eigenvalue.
    pub ground: f64,
    pub order: OrderBand,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            structural: 1e-12,
            hermitian: 1e-13,
            d_hermitian: 1e-11,
            algebra: 1e-8,
            pseudospin: 1e-9,
            kramers: 1e-7,
            kramers_overlap: 1e-5,
            refinement: REFINEMENT_TOL,
            d_square_factor: D_SQUARE_FACTOR,
            commutator_hd: 1e-6,
            d_square: 1e-2,
            analytic: 1e-5,
            ground: 5e-7,
            order: OrderBand::default(),
        }
    }
}

/// Inputs of [`verify_so4`].
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub constants: PhysicalConstants,
    pub j: HalfInteger,
    /// Highest principal number in the bound window.
    pub n_max: u32,
    pub coarse_cells: usize,
    pub fine_cells: usize,
    /// `r_max` in units of `(j + 1/2)/(M a)`.
    pub extent: f64,
    pub potential: Potential,
    /// Optional Lamb term added to `H` (the operator `D` stays the Coulomb one).
    pub lamb: Option<LambParams>,
    pub tolerances: Tolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            constants: PhysicalConstants::default(),
            j: HalfInteger::HALF,
            n_max: 3,
            coarse_cells: 1000,
            fine_cells: 2000,
            extent: DEFAULT_EXTENT,
            potential: Potential::Coulomb,
            lamb: None,
            tolerances: Tolerances::default(),
        }
    }
}

impl VerifyConfig {
    pub fn r_max(&self) -> f64 {
        self.extent * (self.j.value() + 0.5) / self.constants.a()
    }

    fn space(&self, cells: usize) -> Result<SectorSpace> {
        SectorSpace::multiplet(self.j, RadialGrid::new(cells, self.r_max())?)
    }
}

/// Operators and subspace objects on one grid.
struct Level {
    space: SectorSpace,
    h: OperatorMatrix,
    k: OperatorMatrix,
    d: OperatorMatrix,
    j: [OperatorMatrix; 3],
    sub: BoundSubspace,
    spin: Pseudospin,
    so4: So4,
}

fn hamiltonian(cfg: &VerifyConfig, space: &SectorSpace) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let clean = build_h(space, &cfg.constants, &cfg.potential)?;
    let total = match &cfg.lamb {
        Some(p) => clean.add(&lamb_potential(space, p, &cfg.constants)?),
        None => clean.clone(),
    };
    Ok((clean, total))
}

fn level(cfg: &VerifyConfig, cells: usize, reference: Option<&[(usize, QuantumNumbers)]>) -> Result<Level> {
    let c = &cfg.constants;
    let space = cfg.space(cells)?;
    let (clean, h) = hamiltonian(cfg, &space)?;
    let k = build_k(&space);
    let d = build_d(&clean, &k, &space, c)?;
    let j = build_j(&space)?;
    let window = BoundWindow::up_to(cfg.n_max, &space, c)?;
    let mut sub = bound_subspace(&h, &space, &window, c)?;
    match reference {
        Some(labels) => sub.retain_labels(labels),
        None => {
            let refined = space.refined();
            let (_, h2) = hamiltonian(cfg, &refined)?;
            sub.apply_refinement_filter(&h2, &refined, c, cfg.tolerances.refinement)?;
            sub.apply_d_square_filter(&h, &d, &space, c, cfg.tolerances.d_square_factor);
        }
    }
    let spin = build_pseudospin(&h, &k, &d, &sub, &space)?;
    let so4 = build_so4(&space, &spin, &j)?;
    Ok(Level { space, h, k, d, j, sub, spin, so4 })
}

struct Structural {
    herm_h: f64,
    herm_k: f64,
    herm_d: f64,
    anti_kd: f64,
    k_squared: f64,
    comm_kh: f64,
    comm_jh: f64,
    comm_jk: f64,
    comm_jd: f64,
    m_independence: f64,
}

fn structural(l: &Level) -> Structural {
    let kk = l.space.kappa_abs() * l.space.kappa_abs();
    let k2 = l.k.matmul(&l.k).sub(&OperatorMatrix::identity(l.space.dim()).scale(Complex64::new(kk, 0.0)));
    let max_j = |m: &OperatorMatrix| l.j.iter().map(|j| m.commutator_max_abs(j)).fold(0.0, f64::max);
    let mut m_dev = 0.0f64;
    for s in &l.sub.states {
        if let Some(r) = l.sub.in_block(0).find(|r| r.label == s.label) {
            m_dev = m_dev.max((s.energy - r.energy).abs());
        }
    }
    Structural {
        herm_h: l.h.hermiticity_residual(),
        herm_k: l.k.hermiticity_residual(),
        herm_d: l.d.hermiticity_residual(),
        anti_kd: l.k.anticommutator(&l.d).max_abs(),
        k_squared: k2.max_abs(),
        comm_kh: l.h.commutator_max_abs(&l.k),
        comm_jh: max_j(&l.h),
        comm_jk: max_j(&l.k),
        comm_jd: max_j(&l.d),
        m_independence: m_dev,
    }
}

struct Algebra {
    tau1_sq: f64,
    tau3_sq: f64,
    tau_herm: f64,
    closure: f64,
    t_squared: f64,
    comm_jt: f64,
    ii: f64,
    ir: f64,
    rr: f64,
}

fn algebra(l: &Level) -> Algebra {
    let n = l.spin.basis.cols();
    let id = CMatrix::identity(n);
    let tau = &l.spin.tau;
    let t = &l.spin.t;
    let zero = [CMatrix::zeros(n, n), CMatrix::zeros(n, n), CMatrix::zeros(n, n)];
    let t2 = (0..3).fold(CMatrix::zeros(n, n), |acc, i| acc.add(&t[i].mul(&t[i])));
    Algebra {
        tau1_sq: tau[0].mul(&tau[0]).sub(&id).max_abs(),
        tau3_sq: tau[2].mul(&tau[2]).sub(&id).max_abs(),
        tau_herm: tau.iter().map(CMatrix::hermiticity_residual).fold(0.0, f64::max),
        closure: closure_residual(t, t, t),
        t_squared: t2.sub(&id.scale(Complex64::new(0.75, 0.0))).max_abs(),
        comm_jt: closure_residual(&l.so4.j, t, &zero),
        ii: closure_residual(&l.so4.i, &l.so4.i, &l.so4.i),
        ir: closure_residual(&l.so4.i, &l.so4.r, &l.so4.r),
        rr: closure_residual(&l.so4.r, &l.so4.r, &l.so4.i),
    }
}

struct Converging {
    comm_hd: f64,
    d_square: f64,
    comm_hi: f64,
    comm_hr: f64,
    kramers: f64,
    overlap: f64,
    ground: f64,
    unpaired: f64,
}

fn converging(l: &Level, c: &PhysicalConstants) -> Result<Converging> {
    let v = l.sub.basis();
    let hv = l.h.apply(&v);
    let dv = l.d.apply(&v);
    let comm = v.adjoint().mul(&l.h.apply(&dv)).sub(&v.adjoint().mul(&l.d.apply(&hv)));
    let e4 = v.adjoint().mul(&d_square_apply(&l.h, &l.d, &v, l.space.kappa_abs(), c.a()));
    let h_sub = &l.spin.h;
    let comm_with = |ops: &[CMatrix; 3]| -> Result<f64> {
        ops.iter().map(|o| h_sub.commutator(o).spectral_norm()).try_fold(0.0f64, |m, x| Ok(m.max(x?)))
    };

    let block0: Vec<_> = l.sub.in_block(0).collect();
    let mut kramers = 0.0f64;
    let mut overlap = 0.0f64;
    for s in block0.iter().filter(|s| s.label.kappa_sign() == KappaSign::Negative && s.label.n_radial() > 0) {
        if let Some(p) = block0.iter().find(|p| p.label.n() == s.label.n() && p.label.kappa_sign() == KappaSign::Positive) {
            kramers = kramers.max((s.energy - p.energy).abs() / s.energy);
            let col = l.spin.labels.iter().position(|x| *x == (0, s.label));
            let row = l.spin.labels.iter().position(|x| *x == (0, p.label));
            if let (Some(a), Some(b)) = (col, row) {
                overlap = overlap.max(1.0 - l.spin.tau[0][(b, a)].norm());
            }
        } else {
            kramers = f64::INFINITY;
        }
    }
    let ground_state = block0.iter().min_by(|a, b| a.energy.total_cmp(&b.energy));
    let (ground, unpaired) = match ground_state {
        Some(g) => {
            let exact = sommerfeld_energy(&g.label, c)?;
            let partners = block0.iter().filter(|p| p.label.kappa_sign() == KappaSign::Positive && ((p.energy - g.energy) / g.energy).abs() < 1e-7).count();
            (((g.energy - exact) / exact).abs(), partners as f64)
        }
        None => (f64::INFINITY, 0.0),
    };
    Ok(Converging {
        comm_hd: comm.spectral_norm()?,
        d_square: e4.spectral_norm()?,
        comm_hi: comm_with(&l.so4.i)?,
        comm_hr: comm_with(&l.so4.r)?,
        kramers,
        overlap,
        ground,
        unpaired,
    })
}

/// Runs the full battery on the coarse and fine grids of `cfg`.
///
/// The state set is fixed on the fine grid (refinement and `D^2` screens) and
/// the same labels are used on the coarse grid.
pub fn verify_so4(cfg: &VerifyConfig) -> Result<SymmetryReport> {
    let c = &cfg.constants;
    let fine = level(cfg, cfg.fine_cells, None)?;
    let labels = fine.sub.labels();
    let coarse = level(cfg, cfg.coarse_cells, Some(&labels))?;
    let tol = &cfg.tolerances;
    let refinement = cfg.fine_cells as f64 / cfg.coarse_cells as f64;
    let both = format!("N={},{};r_max={}", cfg.coarse_cells, cfg.fine_cells, fmt_float(cfg.r_max()));
    let fine_only = format!("N={};r_max={}", cfg.fine_cells, fmt_float(cfg.r_max()));

    let mut rep = SymmetryReport::new("verify_so4");
    rep.meta("a", fmt_float(c.a()));
    rep.meta("j", cfg.j.to_string());
    rep.meta("n_max", cfg.n_max.to_string());
    rep.meta("cells", format!("{},{}", cfg.coarse_cells, cfg.fine_cells));
    rep.meta("r_max", fmt_float(cfg.r_max()));
    rep.meta("potential", potential_label(&cfg.potential));
    if let Some(p) = &cfg.lamb {
        rep.meta("lamb", p.describe());
    }
    rep.meta("states", fine.sub.states.len().to_string());
    rep.meta("admissible", fine.spin.labels.len().to_string());

    let (sc, sf) = (structural(&coarse), structural(&fine));
    let worst = |f: fn(&Structural) -> f64| f(&sc).max(f(&sf));
    use EntryKind::{Algebra as Alg, Structural as St};
    use NormKind::{Count, MaxEntry, Relative, Spectral};
    for (label, value, t) in [
        ("hermiticity_H", worst(|s| s.herm_h), tol.hermitian),
        ("hermiticity_K", worst(|s| s.herm_k), tol.hermitian),
        ("hermiticity_D", worst(|s| s.herm_d), tol.d_hermitian),
        ("anticommutator_K_D", worst(|s| s.anti_kd), tol.structural),
        ("K_squared", worst(|s| s.k_squared), tol.structural),
        ("commutator_K_H", worst(|s| s.comm_kh), tol.structural),
        ("commutator_J_H", worst(|s| s.comm_jh), tol.structural),
        ("commutator_J_K", worst(|s| s.comm_jk), tol.structural),
        ("commutator_J_D", worst(|s| s.comm_jd), tol.structural),
        ("m_independence", worst(|s| s.m_independence), 1e-13),
    ] {
        rep.push(ReportEntry::fixed(label, St, MaxEntry, value, t, both.clone()));
    }

    let (ac, af) = (algebra(&coarse), algebra(&fine));
    let worst = |f: fn(&Algebra) -> f64| f(&ac).max(f(&af));
    for (label, value, t) in [
        ("tau1_squared", worst(|a| a.tau1_sq), tol.pseudospin),
        ("tau3_squared", worst(|a| a.tau3_sq), tol.pseudospin),
        ("tau_hermiticity", worst(|a| a.tau_herm), tol.pseudospin),
        ("pseudospin_closure", worst(|a| a.closure), tol.algebra),
        ("T_squared", worst(|a| a.t_squared), tol.algebra),
        ("commutator_J_T", worst(|a| a.comm_jt), tol.pseudospin),
        ("so4_I_I", worst(|a| a.ii), tol.algebra),
        ("so4_I_R", worst(|a| a.ir), tol.algebra),
        ("so4_R_R", worst(|a| a.rr), tol.algebra),
    ] {
        rep.push(ReportEntry::fixed(label, Alg, MaxEntry, value, t, both.clone()));
    }

    let (cc, cf) = (converging(&coarse, c)?, converging(&fine, c)?);
    let band = Some(tol.order);
    let pair = |f: fn(&Converging) -> f64| (f(&cc), f(&cf));
    rep.push(ReportEntry::converging("commutator_H_D", Spectral, pair(|x| x.comm_hd), refinement, tol.commutator_hd, band, both.clone()));
    rep.push(ReportEntry::converging("d_squared_identity", Spectral, pair(|x| x.d_square), refinement, tol.d_square, band, both.clone()));
    rep.push(ReportEntry::converging("commutator_H_I", Spectral, pair(|x| x.comm_hi), refinement, 2.0 * cf.comm_hd, band, both.clone()));
    rep.push(ReportEntry::converging("commutator_H_R", Spectral, pair(|x| x.comm_hr), refinement, 2.0 * cf.comm_hd, band, both.clone()));
    rep.push(ReportEntry::converging("ground_energy", Relative, pair(|x| x.ground), refinement, tol.ground, band, both.clone()));
    rep.push(ReportEntry::converging("kramers_splitting", Relative, pair(|x| x.kramers), refinement, tol.kramers, None, both.clone()));
    rep.push(ReportEntry::converging("kramers_overlap", Relative, pair(|x| x.overlap), refinement, tol.kramers_overlap, None, both.clone()));
    rep.push(ReportEntry::fixed("ground_unpaired", St, Count, cf.unpaired, 0.5, fine_only));
    if matches!(cfg.potential, Potential::Coulomb) && cfg.lamb.is_none() {
        let qn = QuantumNumbers::new(fine.space.kappa_abs() as u32, cfg.j, KappaSign::Negative)?;
        let single = |l: &Level| l.space.first_block();
        let r = (analytic_residual(qn, &single(&coarse), c)?, analytic_residual(qn, &single(&fine), c)?);
        rep.push(ReportEntry::converging(format!("analytic_residual_{}", qn.label()), Relative, r, refinement, tol.analytic, band, both.clone()));
    }
    rep.excluded.extend(fine.sub.excluded.iter().cloned());
    rep.excluded.extend(fine.spin.excluded.iter().cloned());
    Ok(rep)
}

/// Short description of a potential for report metadata.
pub fn potential_label(p: &Potential) -> String {
    match p {
        Potential::Coulomb => "coulomb".into(),
        Potential::CoulombPlusNonabelian { profile, coupling } => format!("nonabelian(W={},e={})", profile.label(), fmt_float(*coupling)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_battery_passes() {
        let rep = verify_so4(&VerifyConfig::default()).unwrap();
        assert!(rep.all_pass(), "{}", rep.to_text());
        assert_eq!(rep.excluded.len(), 2);
    }

    #[test]
    fn nonabelian_battery_passes() {
        for e in [0.05, 0.1, 0.5, PhysicalConstants::default().a()] {
            let cfg = VerifyConfig {
                potential: Potential::CoulombPlusNonabelian { profile: super::super::builders::GaugeProfile::inverse_square(), coupling: e },
                ..VerifyConfig::default()
            };
            let rep = verify_so4(&cfg).unwrap();
            assert!(rep.all_pass(), "e = {e}\n{}", rep.to_text());
        }
    }
}
