//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export takes plain numbers or a JSON string and returns JSON text;
//! the `*_json` functions hold the logic so they can be tested natively.

use hypcob::floer::{sum_report, HMModule};
use hypcob::geometry::BudgetLiteral;
use hypcob::lab::{
    check_bounded_flow_bound, check_relative_flow_bound, random_family, spectral_flow, trajectories, zero_crossings,
    FamilySpec, FlowCheck, SpectrumShape, WeightModel,
};
use hypcob::pipeline::{obstruction_report, ReportOptions};
use hypcob::spectral_density::WeylConstants;
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

/// Largest matrix the page will diagonalize.
pub const MAX_DIM: usize = 100;
pub const MAX_STEPS: usize = 2000;

#[derive(Serialize)]
struct TrajectoryReport {
    dim: usize,
    steps: usize,
    base_spectrum: Vec<f64>,
    /// Ascending eigenvalues, one row per grid point `s = i/steps`.
    rows: Vec<Vec<f64>>,
    flow: i64,
    crossings: i64,
    bounded: FlowCheck,
    relative: Option<FlowCheck>,
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// Eigenvalue tracks of a seeded random family `T + sA`.
pub fn trajectories_json(
    dim: usize,
    seed: u32,
    norm_target: f64,
    sobolev: bool,
    drift: f64,
    steps: usize,
) -> Result<String, String> {
    if !(1..=MAX_DIM).contains(&dim) {
        return Err(format!("dimension must be between 1 and {MAX_DIM}"));
    }
    if !(2..=MAX_STEPS).contains(&steps) {
        return Err(format!("steps must be between 2 and {MAX_STEPS}"));
    }
    if !(norm_target >= 0.0 && norm_target <= 50.0) {
        return Err("‖A‖ must lie in [0, 50]".into());
    }
    if !(-1.0..=1.0).contains(&drift) {
        return Err("drift must lie in [-1, 1]".into());
    }
    let spec = FamilySpec {
        seed: seed as u64,
        dim,
        spectrum_range: 12.0,
        norm_target,
        weight_model: if sobolev { WeightModel::Sobolev } else { WeightModel::Flat },
        shape: SpectrumShape::Uniform,
        drift,
    };
    let f = random_family(&spec).map_err(|e| e.to_string())?;
    let rows = trajectories(&f, steps).map_err(|e| e.to_string())?;
    let report = TrajectoryReport {
        dim,
        steps,
        base_spectrum: f.base_spectrum().to_vec(),
        flow: spectral_flow(&f).map_err(|e| e.to_string())?,
        crossings: zero_crossings(&rows),
        bounded: check_bounded_flow_bound(&f).map_err(|e| e.to_string())?,
        relative: if sobolev { Some(check_relative_flow_bound(&f).map_err(|e| e.to_string())?) } else { None },
        rows,
    };
    to_json(&report)
}

/// The obstruction report (𝔫 with log10 endpoints) for one budget, built-in profile.
pub fn n_constant_json(volume: &str, inj: &str, lambda1: &str, unchecked: bool) -> Result<String, String> {
    let lit = BudgetLiteral { volume: volume.trim().into(), eps: inj.trim().into(), delta: lambda1.trim().into() };
    let mut w = WeylConstants::eps_015();
    if unchecked {
        w = w.overriding_eps();
    }
    let opts = ReportOptions { unchecked, ..Default::default() };
    to_json(&obstruction_report(None, &lit, &w, &opts).map_err(|e| e.to_string())?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TorInput {
    List(Vec<HMModule>),
    Wrapped { modules: Vec<HMModule> },
}

/// Connected sum of the modules in `input` (a JSON list, or `{"modules": [...]}`).
pub fn tor_json(input: &str) -> Result<String, String> {
    let modules = match serde_json::from_str(input).map_err(|e| format!("module JSON: {e}"))? {
        TorInput::List(m) | TorInput::Wrapped { modules: m } => m,
    };
    to_json(&sum_report(modules).map_err(|e| e.to_string())?)
}

#[wasm_bindgen(js_name = eigenvalueTrajectories)]
pub fn eigenvalue_trajectories(
    dim: usize,
    seed: u32,
    norm_target: f64,
    sobolev: bool,
    drift: f64,
    steps: usize,
) -> Result<String, JsError> {
    trajectories_json(dim, seed, norm_target, sobolev, drift, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = nConstant)]
pub fn n_constant(volume: &str, inj: &str, lambda1: &str, unchecked: bool) -> Result<String, JsError> {
    n_constant_json(volume, inj, lambda1, unchecked).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = torSum)]
pub fn tor_sum(input: &str) -> Result<String, JsError> {
    tor_json(input).map_err(|e| JsError::new(&e))
}
