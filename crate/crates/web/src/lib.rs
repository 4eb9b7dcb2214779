//! WebAssembly entry points for the static demo page in `www/`.
//!
//! Each exported function returns a flat `Float64Array` of `(x, y)` pairs.
//! The plain Rust versions are public too, so they can be tested natively.

use hotbang::hotbang::L_phi;
use hotbang::minkowski::FourVector;
use hotbang::quad::QuadConfig;
use hotbang::states::StateSpec;
use hotbang::testfn::{random_test_function, BumpFamily};
use hotbang::thermal::{macro_expectation, MacroObservable};
use wasm_bindgen::prelude::*;

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// `(t, ω_hb(T²)(t, r, 0, 0))` for `t` from `t_min` to `t_max`.
pub fn temperature_profile(lambda: f64, r: f64, t_min: f64, t_max: f64, n: usize) -> Result<Vec<f64>, String> {
    let state = StateSpec::hotbang(lambda).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(2 * n);
    for t in grid(t_min, t_max, n) {
        let v = macro_expectation(&state, &MacroObservable::T2 {}, &FourVector::new(t, r, 0.0, 0.0)).map_err(|e| e.to_string())?;
        out.extend([t, v]);
    }
    Ok(out)
}

/// `(φ, L(φ))` on `[0, π]` for the two-bump test function drawn with `seed`.
pub fn l_phi_curve(seed: u64, n: usize) -> Result<Vec<f64>, String> {
    let f = random_test_function(seed, &BumpFamily { terms: 2, ..Default::default() }).map_err(|e| e.to_string())?;
    let quad = QuadConfig::coarse();
    let mut out = Vec::with_capacity(2 * n);
    for phi in grid(0.0, std::f64::consts::PI, n) {
        out.extend([phi, L_phi(&f, phi, &quad).map_err(|e| e.to_string())?]);
    }
    Ok(out)
}

/// `(θ, ω_hb(N_p)(x))` for `p = ω(1, sin θ, 0, cos θ)`, `θ ∈ [0, π]`, at
/// `x = (t, 0, 0, z)`.
pub fn phase_space_sweep(lambda: f64, t: f64, z: f64, omega: f64, n: usize) -> Result<Vec<f64>, String> {
    let state = StateSpec::hotbang(lambda).map_err(|e| e.to_string())?;
    let x = FourVector::new(t, 0.0, 0.0, z);
    let mut out = Vec::with_capacity(2 * n);
    for th in grid(0.0, std::f64::consts::PI, n) {
        let p = FourVector::new(omega, omega * th.sin(), 0.0, omega * th.cos());
        let v = macro_expectation(&state, &MacroObservable::PhaseSpace { p }, &x).map_err(|e| e.to_string())?;
        out.extend([th, v]);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = temperatureProfile)]
pub fn temperature_profile_js(lambda: f64, r: f64, t_min: f64, t_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    temperature_profile(lambda, r, t_min, t_max, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = lPhiCurve)]
pub fn l_phi_curve_js(seed: u32, n: usize) -> Result<Vec<f64>, JsError> {
    l_phi_curve(seed as u64, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = phaseSpaceSweep)]
pub fn phase_space_sweep_js(lambda: f64, t: f64, z: f64, omega: f64, n: usize) -> Result<Vec<f64>, JsError> {
    phase_space_sweep(lambda, t, z, omega, n).map_err(|e| JsError::new(&e))
}
