//! Browser bindings for the demo page in `www/`.

use cql_core::bubbles::{bubble_energy, bubble_mass, sobolev_constant, BubbleSpec};
use cql_core::grid::{Domain, PotentialSpec};
use cql_core::lorentz::{lorentz_norm, LorentzExponents, LorentzIndex, StepProfile};
use cql_core::minimize::{minimize_quotient, Init, MinimizeOptions};
use wasm_bindgen::prelude::*;

fn js(e: cql_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Radial bubble profile on `samples` points of `[0, radius]`, cut at `cutoff` when positive.
#[wasm_bindgen]
pub fn bubble_profile(n: usize, eps: f64, cutoff: f64, radius: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    let mut spec = BubbleSpec::new(n, eps).map_err(js)?;
    if cutoff > 0.0 {
        spec = spec.with_cutoff(cutoff).map_err(js)?;
    }
    let last = samples.max(2) - 1;
    Ok((0..=last).map(|i| spec.radial(radius * i as f64 / last as f64)).collect())
}

#[wasm_bindgen]
pub struct BubbleNumbers {
    pub energy: f64,
    pub mass: f64,
    /// `S^{n/2}`
    pub target: f64,
}

#[wasm_bindgen]
pub fn bubble_numbers(n: usize, eps: f64, lambda: f64, cutoff: f64) -> Result<BubbleNumbers, JsError> {
    let mut spec = BubbleSpec::new(n, eps).map_err(js)?;
    if cutoff > 0.0 {
        spec = spec.with_cutoff(cutoff).map_err(js)?;
    }
    Ok(BubbleNumbers {
        energy: bubble_energy(&spec, lambda).map_err(js)?,
        mass: bubble_mass(&spec),
        target: sobolev_constant(n).map_err(js)?.powf(n as f64 / 2.0),
    })
}

/// `‖f‖_{p,d}` of the step function taking `values[i]` on a set of measure `widths[i]`.
/// A non-finite `d` selects the weak space.
#[wasm_bindgen]
pub fn step_lorentz_norm(values: Vec<f64>, widths: Vec<f64>, p: f64, d: f64) -> Result<f64, JsError> {
    if values.len() != widths.len() {
        return Err(JsError::new("values and widths differ in length"));
    }
    let profile = StepProfile::from_pairs(values.into_iter().zip(widths)).map_err(js)?;
    let d = if d.is_finite() {
        LorentzIndex::Finite(d)
    } else {
        LorentzIndex::Infinity
    };
    Ok(lorentz_norm(&profile, LorentzExponents::new(p, d).map_err(js)?))
}

#[wasm_bindgen]
pub struct WellRun {
    pub s_a: f64,
    pub sobolev: f64,
    pub iterations: usize,
    pub el_residual: f64,
    status: String,
    radii: Vec<f64>,
    profile: Vec<f64>,
    trajectory: Vec<f64>,
}

#[wasm_bindgen]
impl WellRun {
    #[wasm_bindgen(getter)]
    pub fn status(&self) -> String {
        self.status.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn radii(&self) -> Vec<f64> {
        self.radii.clone()
    }

    /// Normalized minimizer at `radii`.
    #[wasm_bindgen(getter)]
    pub fn profile(&self) -> Vec<f64> {
        self.profile.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn trajectory(&self) -> Vec<f64> {
        self.trajectory.clone()
    }
}

/// Minimizes the quotient on the unit ball with a well of `depth` and `radius`,
/// starting from a cut bubble of width `eps`.
#[wasm_bindgen]
pub fn minimize_well(n: usize, nodes: usize, depth: f64, radius: f64, eps: f64) -> Result<WellRun, JsError> {
    let dom = Domain::radial_ball(n, 1.0, nodes).map_err(js)?;
    let mut a = PotentialSpec::well(radius, depth, n);
    if n == 4 {
        a = a.with_cap(0.0);
    }
    let init = Init::Bubble(BubbleSpec::new(n, eps).and_then(|b| b.with_cutoff(0.5)).map_err(js)?);
    let rep = minimize_quotient(&a, &dom, init, &MinimizeOptions::default()).map_err(js)?;
    Ok(WellRun {
        s_a: rep.s_a_estimate,
        sobolev: rep.sobolev,
        iterations: rep.iterations(),
        el_residual: rep.el_residual,
        status: rep.status.to_string(),
        radii: (0..dom.len()).map(|i| dom.radius_of(i)).collect(),
        profile: rep.minimizer.values().to_vec(),
        trajectory: rep.quotient_trajectory,
    })
}
