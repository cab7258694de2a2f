//! Browser bindings for the `so4lab` demo page.
//!
//! Each exported function has a plain-Rust counterpart so that the logic is
//! testable without a JavaScript host.

use so4lab::diagram::{depression_table, level_diagram_svg};
use so4lab::radial::{build_solution, MeshSpec};
use so4lab::{HalfInteger, KappaSign, PhysicalConstants, QuantumNumbers};
use wasm_bindgen::prelude::*;

/// Sampled radial pair of one bound state.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct RadialProfile {
    label: String,
    r: Vec<f64>,
    f: Vec<f64>,
    g: Vec<f64>,
    energy: f64,
    b: f64,
}

#[wasm_bindgen]
impl RadialProfile {
    #[wasm_bindgen(getter)]
    pub fn label(&self) -> String {
        self.label.clone()
    }

    /// Radii in units of the Bohr radius `1/(M a)`.
    #[wasm_bindgen(getter)]
    pub fn r(&self) -> Vec<f64> {
        self.r.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn f(&self) -> Vec<f64> {
        self.f.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn g(&self) -> Vec<f64> {
        self.g.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn energy(&self) -> f64 {
        self.energy
    }

    #[wasm_bindgen(getter)]
    pub fn b(&self) -> f64 {
        self.b
    }
}

/// Depression table as parallel columns.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct DepressionColumns {
    labels: Vec<String>,
    energy: Vec<f64>,
    energy_primed: Vec<f64>,
    depression_hz: Vec<f64>,
}

#[wasm_bindgen]
impl DepressionColumns {
    #[wasm_bindgen(getter)]
    pub fn labels(&self) -> Vec<String> {
        self.labels.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn energy(&self) -> Vec<f64> {
        self.energy.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn energy_primed(&self) -> Vec<f64> {
        self.energy_primed.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn depression_hz(&self) -> Vec<f64> {
        self.depression_hz.clone()
    }
}

fn constants(a: f64) -> so4lab::Result<PhysicalConstants> {
    PhysicalConstants::default().with_coupling(a)
}

/// Level diagram for coupling `a`, levels up to `n_max` and charge `q = q_twice / 2`.
pub fn levels(a: f64, n_max: u32, q_twice: i32) -> so4lab::Result<String> {
    level_diagram_svg(n_max, HalfInteger::from_twice(q_twice), &constants(a)?)
}

/// Depression columns for the same inputs as [`levels`].
pub fn depressions(a: f64, n_max: u32, q_twice: i32) -> so4lab::Result<DepressionColumns> {
    let rows = depression_table(n_max, HalfInteger::from_twice(q_twice), &constants(a)?)?;
    Ok(DepressionColumns {
        labels: rows.iter().map(|r| r.label.clone()).collect(),
        energy: rows.iter().map(|r| r.energy).collect(),
        energy_primed: rows.iter().map(|r| r.energy_primed).collect(),
        depression_hz: rows.iter().map(|r| r.depression_hz).collect(),
    })
}

/// Radial profile of `(n, j = j_twice / 2, sign kappa)` with `samples` points.
pub fn radial(a: f64, n: u32, j_twice: i32, sign: i32, samples: usize) -> so4lab::Result<RadialProfile> {
    let c = constants(a)?;
    let qn = QuantumNumbers::new(n, HalfInteger::from_twice(j_twice), KappaSign::from_signum(sign)?)?;
    let sol = build_solution(qn, &c, &MeshSpec { samples, extent: 40.0, ..MeshSpec::default() })?;
    let scale = 1.0 / sol.norm().sqrt();
    Ok(RadialProfile {
        label: qn.label(),
        r: sol.r.iter().map(|r| r * c.a()).collect(),
        f: sol.f.iter().map(|v| v * scale).collect(),
        g: sol.g.iter().map(|v| v * scale).collect(),
        energy: sol.state.energy(),
        b: sol.b(),
    })
}

fn js(e: so4lab::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = levelsSvg)]
pub fn levels_svg(a: f64, n_max: u32, q_twice: i32) -> Result<String, JsError> {
    levels(a, n_max, q_twice).map_err(js)
}

#[wasm_bindgen(js_name = depressionTable)]
pub fn depression_columns(a: f64, n_max: u32, q_twice: i32) -> Result<DepressionColumns, JsError> {
    depressions(a, n_max, q_twice).map_err(js)
}

#[wasm_bindgen(js_name = radialProfile)]
pub fn radial_profile(a: f64, n: u32, j_twice: i32, sign: i32, samples: usize) -> Result<RadialProfile, JsError> {
    radial(a, n, j_twice, sign, samples).map_err(js)
}

/// Default fine-structure constant, for initializing the page.
#[wasm_bindgen(js_name = fineStructure)]
pub fn fine_structure() -> f64 {
    PhysicalConstants::default().a()
}
