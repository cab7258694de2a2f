//! Closed-form radial states injected into the grid and tested against `H`.

use num_complex::Complex64;

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::radial::RadialState;
use crate::spectra::{KappaSign, QuantumNumbers};

use super::builders::{build_h, Potential};
use super::space::{Component, SectorSpace};

/// Relative size of `|f(r_max)|` above which a state does not fit on the grid.
pub const TRUNCATION_LIMIT: f64 = 1e-8;

/// Samples `state` on the first `m_j` block: upper channel `f`, lower channel `i g`.
pub fn inject(state: &RadialState, space: &SectorSpace) -> Result<Vec<Complex64>> {
    let qn = state.quantum_numbers();
    if qn.j() != space.j() {
        return Err(Error::Domain(format!("state j = {} on a j = {} sector", qn.j(), space.j())));
    }
    let (upper, lower) = match qn.kappa_sign() {
        KappaSign::Negative => (Component::UpperA, Component::LowerB),
        KappaSign::Positive => (Component::UpperB, Component::LowerA),
    };
    let grid = space.grid();
    let mut v = vec![Complex64::default(); space.dim()];
    let mut peak = 0.0f64;
    for i in 0..grid.cells() {
        let (f, _) = state.eval(grid.r(upper.stagger(), i));
        let (_, g) = state.eval(grid.r(lower.stagger(), i));
        if !(f.is_finite() && g.is_finite()) {
            return Err(Error::NonFinite("radial function on the grid"));
        }
        peak = peak.max(f.abs());
        v[space.index(0, upper, i)] = Complex64::new(f, 0.0);
        // The stored lower function carries the sign s; the grid wants i times the literal g.
        v[space.index(0, lower, i)] = Complex64::new(0.0, state.lower_sign() * g);
    }
    let (tail, _) = state.eval(grid.r_max());
    let ratio = tail.abs() / peak;
    if !(ratio < TRUNCATION_LIMIT) {
        return Err(Error::MeshTruncation { ratio });
    }
    Ok(v)
}

/// `||(H - E) psi|| / ||psi||` for the exact state on the Coulomb grid Hamiltonian.
pub fn analytic_residual(qn: QuantumNumbers, space: &SectorSpace, c: &PhysicalConstants) -> Result<f64> {
    state_residual(&RadialState::new(qn, c)?, space, c)
}

/// As [`analytic_residual`] for an arbitrary (possibly deliberately wrong) state.
pub fn state_residual(state: &RadialState, space: &SectorSpace, c: &PhysicalConstants) -> Result<f64> {
    let single = space.first_block();
    let v = inject(state, &single)?;
    let h = build_h(&single, c, &Potential::Coulomb)?;
    let hv = h.matvec(&v);
    let e = state.energy();
    let num: f64 = hv.iter().zip(&v).map(|(x, y)| (x - e * y).norm_sqr()).sum();
    let den: f64 = v.iter().map(Complex64::norm_sqr).sum();
    Ok((num / den).sqrt())
}
