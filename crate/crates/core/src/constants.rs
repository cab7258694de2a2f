use crate::error::{Error, Result};

/// Fine-structure constant (CODATA 2018).
pub const FINE_STRUCTURE: f64 = 7.297_352_5693e-3;
/// Electron rest frequency m_e c^2 / h in Hz (CODATA 2018).
pub const ELECTRON_REST_FREQUENCY: f64 = 1.235_589_990_3e20;

/// Coupling and unit conversion. The library works in units M = hbar = c = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    a: f64,
    rest_frequency: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self { a: FINE_STRUCTURE, rest_frequency: ELECTRON_REST_FREQUENCY }
    }
}

impl PhysicalConstants {
    pub fn new(a: f64, rest_frequency: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Domain(format!("coupling a = {a} must lie in (0, 1)")));
        }
        if !(rest_frequency > 0.0 && rest_frequency.is_finite()) {
            return Err(Error::Domain(format!("rest frequency {rest_frequency} must be positive")));
        }
        Ok(Self { a, rest_frequency })
    }

    /// Same rest frequency, different coupling.
    pub fn with_coupling(self, a: f64) -> Result<Self> {
        Self::new(a, self.rest_frequency)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// M c^2 / h in Hz.
    pub fn rest_frequency(&self) -> f64 {
        self.rest_frequency
    }

    /// Energy in units of M to Hz.
    pub fn to_frequency(&self, delta_e: f64) -> f64 {
        delta_e * self.rest_frequency
    }
}
