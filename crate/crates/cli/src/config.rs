//! Flat `key = value` run configuration with strict parsing.
//!
//! Blank lines and lines starting with `#` are ignored. Every other line must
//! be `key = value` with a documented key; anything else is a usage error that
//! names the offending key.

use std::fmt;
use std::path::Path;

use so4lab::breaking::{BreakingConfig, LambParams};
use so4lab::oplab::verify::{Tolerances, VerifyConfig};
use so4lab::oplab::{GaugeProfile, Potential};
use so4lab::radial::MeshSpec;
use so4lab::{HalfInteger, PhysicalConstants};

use crate::output::Format;

/// Rejected configuration input; always maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Documented configuration keys.
pub const KEYS: &[&str] = &[
    "a",
    "rest_frequency",
    "format",
    "out",
    "cells",
    "coarse_cells",
    "extent",
    "verify_j",
    "verify_n_max",
    "potential",
    "coupling",
    "breaking_cells",
    "breaking_extent",
    "multiplet_cells",
    "mu",
    "include_delta",
    "include_spin_orbit",
    "ratio_threshold",
    "splitting_tolerance",
    "radial_samples",
    "radial_extent",
    "tol_structural",
    "tol_hermitian",
    "tol_d_hermitian",
    "tol_algebra",
    "tol_pseudospin",
    "tol_kramers",
    "tol_kramers_overlap",
    "tol_refinement",
    "tol_d_square_factor",
    "tol_commutator_hd",
    "tol_d_square",
    "tol_analytic",
    "tol_ground",
    "order_min",
    "order_max",
];

/// Potential selector for the symmetry battery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    Coulomb,
    Nonabelian,
}

/// Everything a subcommand may read; flags override file values.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub a: f64,
    pub rest_frequency: f64,
    pub format: Option<Format>,
    pub out: Option<String>,
    pub cells: usize,
    pub coarse_cells: usize,
    pub extent: f64,
    pub verify_j: HalfInteger,
    pub verify_n_max: u32,
    pub potential: PotentialKind,
    pub coupling: f64,
    pub breaking_cells: usize,
    pub breaking_extent: f64,
    pub multiplet_cells: usize,
    /// `None` selects `M a^2` for the configured coupling.
    pub mu: Option<f64>,
    pub include_delta: bool,
    pub include_spin_orbit: bool,
    pub ratio_threshold: f64,
    pub splitting_tolerance: f64,
    pub radial_samples: usize,
    pub radial_extent: f64,
    pub tolerances: Tolerances,
    pub breaking_structural: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let c = PhysicalConstants::default();
        let v = VerifyConfig::default();
        let b = BreakingConfig::default();
        let m = MeshSpec::default();
        Self {
            a: c.a(),
            rest_frequency: c.rest_frequency(),
            format: None,
            out: None,
            cells: v.fine_cells,
            coarse_cells: v.coarse_cells,
            extent: v.extent,
            verify_j: v.j,
            verify_n_max: v.n_max,
            potential: PotentialKind::Coulomb,
            coupling: 0.1,
            breaking_cells: b.cells,
            breaking_extent: b.extent,
            multiplet_cells: b.multiplet_cells,
            mu: None,
            include_delta: true,
            include_spin_orbit: true,
            ratio_threshold: b.ratio_threshold,
            splitting_tolerance: b.splitting_tolerance,
            radial_samples: m.samples,
            radial_extent: m.extent,
            tolerances: v.tolerances,
            breaking_structural: b.structural,
        }
    }
}

fn bad(key: &str, value: &str, what: &str) -> ConfigError {
    ConfigError(format!("invalid value for key '{key}': '{value}' ({what})"))
}

fn positive(key: &str, value: &str) -> Result<f64, ConfigError> {
    match value.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(bad(key, value, "expected a positive number")),
    }
}

fn count(key: &str, value: &str) -> Result<usize, ConfigError> {
    match value.parse::<usize>() {
        Ok(x) if x > 0 => Ok(x),
        _ => Err(bad(key, value, "expected a positive integer")),
    }
}

fn flag(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(bad(key, value, "expected true or false")),
    }
}

/// Accepts `3/2`, `1.5` or `0`.
pub fn parse_half(value: &str) -> Option<HalfInteger> {
    if let Some((num, den)) = value.split_once('/') {
        let num: i32 = num.trim().parse().ok()?;
        return match den.trim() {
            "2" => Some(HalfInteger::from_twice(num)),
            "1" => num.checked_mul(2).map(HalfInteger::from_twice),
            _ => None,
        };
    }
    HalfInteger::from_f64(value.trim().parse().ok()?).ok()
}

impl RunConfig {
    /// Sets one key, rejecting unknown keys and malformed values.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "a" => {
                let a = value.parse().map_err(|_| bad(key, value, "expected a number"))?;
                PhysicalConstants::new(a, self.rest_frequency).map_err(|e| bad(key, value, &e.to_string()))?;
                self.a = a;
            }
            "rest_frequency" => self.rest_frequency = positive(key, value)?,
            "format" => self.format = Some(value.parse().map_err(|e: String| bad(key, value, &e))?),
            "out" if !value.is_empty() => self.out = Some(value.to_string()),
            "out" => return Err(bad(key, value, "expected a path")),
            "cells" => self.cells = count(key, value)?,
            "coarse_cells" => self.coarse_cells = count(key, value)?,
            "extent" => self.extent = positive(key, value)?,
            "verify_j" => match parse_half(value) {
                Some(j) if j.is_half_odd() && j.twice() > 0 => self.verify_j = j,
                _ => return Err(bad(key, value, "expected a positive odd half-integer such as 1/2")),
            },
            "verify_n_max" => self.verify_n_max = count(key, value)? as u32,
            "potential" => {
                self.potential = match value {
                    "coulomb" => PotentialKind::Coulomb,
                    "nonabelian" => PotentialKind::Nonabelian,
                    _ => return Err(bad(key, value, "expected coulomb or nonabelian")),
                }
            }
            "coupling" => self.coupling = value.parse().ok().filter(|x: &f64| x.is_finite()).ok_or_else(|| bad(key, value, "expected a number"))?,
            "breaking_cells" => self.breaking_cells = count(key, value)?,
            "breaking_extent" => self.breaking_extent = positive(key, value)?,
            "multiplet_cells" => self.multiplet_cells = count(key, value)?,
            "mu" => {
                let mu = positive(key, value)?;
                LambParams::new(mu).map_err(|e| bad(key, value, &e.to_string()))?;
                self.mu = Some(mu);
            }
            "include_delta" => self.include_delta = flag(key, value)?,
            "include_spin_orbit" => self.include_spin_orbit = flag(key, value)?,
            "ratio_threshold" => self.ratio_threshold = positive(key, value)?,
            "splitting_tolerance" => self.splitting_tolerance = positive(key, value)?,
            "radial_samples" => self.radial_samples = count(key, value)?,
            "radial_extent" => self.radial_extent = positive(key, value)?,
            "tol_structural" => {
                self.tolerances.structural = positive(key, value)?;
                self.breaking_structural = self.tolerances.structural;
            }
            "tol_hermitian" => self.tolerances.hermitian = positive(key, value)?,
            "tol_d_hermitian" => self.tolerances.d_hermitian = positive(key, value)?,
            "tol_algebra" => self.tolerances.algebra = positive(key, value)?,
            "tol_pseudospin" => self.tolerances.pseudospin = positive(key, value)?,
            "tol_kramers" => self.tolerances.kramers = positive(key, value)?,
            "tol_kramers_overlap" => self.tolerances.kramers_overlap = positive(key, value)?,
            "tol_refinement" => self.tolerances.refinement = positive(key, value)?,
            "tol_d_square_factor" => self.tolerances.d_square_factor = positive(key, value)?,
            "tol_commutator_hd" => self.tolerances.commutator_hd = positive(key, value)?,
            "tol_d_square" => self.tolerances.d_square = positive(key, value)?,
            "tol_analytic" => self.tolerances.analytic = positive(key, value)?,
            "tol_ground" => self.tolerances.ground = positive(key, value)?,
            "order_min" => self.tolerances.order.min = positive(key, value)?,
            "order_max" => self.tolerances.order.max = positive(key, value)?,
            _ => return Err(ConfigError(format!("unknown configuration key '{key}'"))),
        }
        Ok(())
    }

    /// Applies every `key = value` line of `text`. Repeated keys are rejected.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        let mut seen: Vec<&str> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError(format!("line {}: expected key = value, found '{line}'", i + 1)));
            };
            let key = key.trim();
            if seen.contains(&key) {
                return Err(ConfigError(format!("duplicate configuration key '{key}'")));
            }
            seen.push(key);
            self.set(key, value.trim())?;
        }
        self.check()
    }

    /// Reads a configuration file.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    /// Applies one `key=value` override.
    pub fn apply_override(&mut self, kv: &str) -> Result<(), ConfigError> {
        let (key, value) = kv.split_once('=').ok_or_else(|| ConfigError(format!("override '{kv}' must be key=value")))?;
        self.set(key.trim(), value.trim())?;
        self.check()
    }

    /// Cross-key consistency.
    pub fn check(&self) -> Result<(), ConfigError> {
        let o = self.tolerances.order;
        if o.min >= o.max {
            return Err(ConfigError(format!("order_min = {} must be below order_max = {}", o.min, o.max)));
        }
        if self.coarse_cells >= self.cells {
            return Err(ConfigError(format!("coarse_cells = {} must be below cells = {}", self.coarse_cells, self.cells)));
        }
        Ok(())
    }

    pub fn constants(&self) -> PhysicalConstants {
        PhysicalConstants::new(self.a, self.rest_frequency).expect("validated in set")
    }

    pub fn lamb(&self) -> LambParams {
        let c = self.constants();
        let mu = self.mu.unwrap_or_else(|| LambParams::default_for(&c).mu());
        LambParams::with_terms(mu, self.include_delta, self.include_spin_orbit).expect("validated in set")
    }

    pub fn verify(&self) -> VerifyConfig {
        let potential = match self.potential {
            PotentialKind::Coulomb => Potential::Coulomb,
            PotentialKind::Nonabelian => Potential::CoulombPlusNonabelian { profile: GaugeProfile::inverse_square(), coupling: self.coupling },
        };
        VerifyConfig {
            constants: self.constants(),
            j: self.verify_j,
            n_max: self.verify_n_max,
            coarse_cells: self.coarse_cells,
            fine_cells: self.cells,
            extent: self.extent,
            potential,
            lamb: None,
            tolerances: self.tolerances,
        }
    }

    pub fn breaking(&self) -> BreakingConfig {
        BreakingConfig {
            constants: self.constants(),
            params: self.lamb(),
            cells: self.breaking_cells,
            extent: self.breaking_extent,
            multiplet_cells: self.multiplet_cells,
            ratio_threshold: self.ratio_threshold,
            splitting_tolerance: self.splitting_tolerance,
            structural: self.breaking_structural,
        }
    }

    pub fn mesh(&self) -> MeshSpec {
        MeshSpec { extent: self.radial_extent, samples: self.radial_samples, ..MeshSpec::default() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_documented_key_is_accepted() {
        let values = [("format", "json"), ("out", "x.json"), ("potential", "nonabelian"), ("verify_j", "3/2"), ("include_delta", "false"), ("include_spin_orbit", "true"), ("a", "0.01"), ("mu", "1e-4"), ("order_max", "3")];
        for key in KEYS {
            let v = values.iter().find(|(k, _)| k == key).map_or("7", |(_, v)| v);
            let mut cfg = RunConfig::default();
            if *key == "coarse_cells" {
                cfg.set(key, "5").unwrap();
            } else {
                cfg.set(key, v).unwrap_or_else(|e| panic!("{key}: {e}"));
            }
        }
    }

    #[test]
    fn unknown_and_malformed_keys_name_the_key() {
        let mut cfg = RunConfig::default();
        let e = cfg.apply_text("cells = 100\nbogus = 1\n").unwrap_err();
        assert!(e.0.contains("'bogus'"), "{e}");
        let e = cfg.apply_text("tol_algebra = -1\n").unwrap_err();
        assert!(e.0.contains("'tol_algebra'"), "{e}");
        let e = cfg.apply_text("cells = 2.5\n").unwrap_err();
        assert!(e.0.contains("'cells'"), "{e}");
        let e = cfg.apply_text("a = 1.5\n").unwrap_err();
        assert!(e.0.contains("'a'"), "{e}");
        let e = cfg.apply_text("mu = 2\n").unwrap_err();
        assert!(e.0.contains("'mu'"), "{e}");
        let e = cfg.apply_text("cells = 10\ncells = 20\n").unwrap_err();
        assert!(e.0.contains("'cells'"), "{e}");
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let mut cfg = RunConfig::default();
        cfg.apply_text("# grid\n\n  cells = 3000 \ntol_ground=1e-6\n").unwrap();
        assert_eq!(cfg.cells, 3000);
        assert_eq!(cfg.tolerances.ground, 1e-6);
    }

    #[test]
    fn half_integers() {
        assert_eq!(parse_half("1/2"), Some(HalfInteger::from_twice(1)));
        assert_eq!(parse_half("1.5"), Some(HalfInteger::from_twice(3)));
        assert_eq!(parse_half("-1/2"), Some(HalfInteger::from_twice(-1)));
        assert_eq!(parse_half("0"), Some(HalfInteger::from_twice(0)));
        assert_eq!(parse_half("1/3"), None);
        assert_eq!(parse_half("0.3"), None);
    }
}
