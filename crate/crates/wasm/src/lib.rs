//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export is a thin wrapper over a plain Rust function in [`demo`], so
//! the numerics can be tested natively without a JavaScript host.

use wasm_bindgen::prelude::*;

pub mod demo;

/// Samples `exp_q` and `log_q` on `n` evenly spaced points of `[lo, hi]`.
/// Returns `[x0, exp0, log0, x1, exp1, log1, ...]`, with NaN where a value
/// is undefined.
#[wasm_bindgen]
pub fn deformed_curves(q: f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    demo::deformed_curves(q, lo, hi, n)
}

/// Slacks of `trials` random instances of the deformed Peierls-Bogolyubov
/// inequality in clause `case` ("i" to "v").
#[wasm_bindgen]
pub fn slack_sweep(case: &str, q: f64, r: f64, dim: usize, trials: u32, seed: u64) -> Result<Vec<f64>, JsError> {
    demo::slack_sweep(case, q, r, dim, trials, seed).map_err(|e| JsError::new(&e))
}

/// Trace lower bound of the Tsallis relative entropy as a function of `p`.
/// Returns `[D_q, p0, b0, p1, b1, ...]`.
#[wasm_bindgen]
pub fn tsallis_bound_curve(q: f64, dim: usize, seed: u64, n: usize) -> Result<Vec<f64>, JsError> {
    demo::tsallis_bound_curve(q, dim, seed, n).map_err(|e| JsError::new(&e))
}

/// Text listing of the parameter regimes, for display.
#[wasm_bindgen]
pub fn regime_table() -> String {
    deformed_pb::deformed::REGIME_TABLE.to_string()
}
