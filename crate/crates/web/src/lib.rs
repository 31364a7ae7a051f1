//! wasm-bindgen wrappers for the static demo page in `www/`.

use tdt_core::boundaries::{csr_boundary_lambda, sr_boundary_lambda, theta_c};
use tdt_core::meanfield::{minimize_with, observables, MinimizerOptions, SeedSet};
use tdt_core::{MeanFieldSolution, ModelParams};
use wasm_bindgen::prelude::*;

// the page recomputes on every slider move; the reduced seed set is enough
// for the ground state and several times cheaper
fn opts() -> MinimizerOptions {
    MinimizerOptions { n_starts: 8, seeds: SeedSet::Reduced, ..Default::default() }
}

fn solve(lambda: f64, gamma: f64, theta: f64, j_ratio: f64) -> Result<(ModelParams, MeanFieldSolution), JsError> {
    let p = ModelParams::new(lambda, gamma, theta, j_ratio)?;
    let s = minimize_with(&p, &opts())?;
    Ok((p, s))
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| lo + step * i as f64)
}

/// Phase codes (0 NP, 1 SR, 2 CSR) on a `lambda_steps x theta_steps` grid,
/// row `i` at the i-th lambda, theta from -pi to pi.
#[wasm_bindgen]
pub fn phase_map(
    gamma: f64,
    j_ratio: f64,
    lambda_min: f64,
    lambda_max: f64,
    lambda_steps: usize,
    theta_steps: usize,
) -> Result<Vec<u8>, JsError> {
    let pi = std::f64::consts::PI;
    let mut out = Vec::with_capacity(lambda_steps * theta_steps);
    for lambda in linspace(lambda_min, lambda_max, lambda_steps) {
        for theta in linspace(-pi, pi, theta_steps) {
            out.push(solve(lambda, gamma, theta, j_ratio)?.1.phase.code());
        }
    }
    Ok(out)
}

/// Onset coupling `min(lambda_SR, lambda_CSR)` at each theta of the map.
#[wasm_bindgen]
pub fn onset_line(gamma: f64, j_ratio: f64, theta_steps: usize) -> Result<Vec<f64>, JsError> {
    let pi = std::f64::consts::PI;
    linspace(-pi, pi, theta_steps)
        .map(|t| Ok(sr_boundary_lambda(gamma, t, j_ratio)?.min(csr_boundary_lambda(gamma, t, j_ratio)?)))
        .collect()
}

#[wasm_bindgen]
pub fn critical_flux(j_ratio: f64) -> Result<f64, JsError> {
    Ok(theta_c(j_ratio)?)
}

/// `[lambda, |alpha_1|, |alpha_2|, |alpha_3|, h_mean]` per point, flattened.
#[wasm_bindgen]
pub fn order_curve(
    gamma: f64,
    theta: f64,
    j_ratio: f64,
    lambda_min: f64,
    lambda_max: f64,
    steps: usize,
) -> Result<Vec<f64>, JsError> {
    let mut out = Vec::with_capacity(5 * steps);
    for lambda in linspace(lambda_min, lambda_max, steps) {
        let (p, s) = solve(lambda, gamma, theta, j_ratio)?;
        let h = observables(&p, &s.order).h_exp;
        out.push(lambda);
        out.extend((0..3).map(|n| s.order.alpha(n).norm()));
        out.push(h.iter().sum::<f64>() / 3.0);
    }
    Ok(out)
}

/// `[theta, i_ph]` pairs for theta from -pi to pi, flattened.
#[wasm_bindgen]
pub fn current_vs_theta(lambda: f64, gamma: f64, j_ratio: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    let pi = std::f64::consts::PI;
    let mut out = Vec::with_capacity(2 * steps);
    for theta in linspace(-pi, pi, steps) {
        let (p, s) = solve(lambda, gamma, theta, j_ratio)?;
        out.push(theta);
        out.push(observables(&p, &s.order).i_ph);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_has_all_three_phases() {
        let m = phase_map(0.9, 0.1, 0.2, 1.2, 6, 9).unwrap();
        assert_eq!(m.len(), 54);
        for code in 0..3 {
            assert!(m.contains(&code), "{m:?}");
        }
    }

    #[test]
    fn current_is_odd() {
        let c = current_vs_theta(1.0, 1.2, 0.1, 8).unwrap();
        for k in 0..4 {
            assert!((c[2 * k + 1] + c[2 * (7 - k) + 1]).abs() < 1e-8);
        }
    }
}
