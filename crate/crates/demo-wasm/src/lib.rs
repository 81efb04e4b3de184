//! Browser bindings for three small views of the core crate:
//! the Curie-Weiss root curve, the exact magnetization law at finite `n`,
//! and the smoothed cutoff profile. The plain functions are native and
//! tested; the `#[wasm_bindgen]` wrappers only convert errors.

use mfgl::gibbs::gibbs_measure;
use mfgl::hamiltonians::{build_hamiltonian, delta_prime, HamiltonianSpec, ScalarShape};
use mfgl::meanfield::{curie_weiss_constant_roots, curie_weiss_roots};
use wasm_bindgen::prelude::*;

/// Largest `n` for the exact magnetization law (2^n states).
pub const MAX_DEMO_N: usize = 16;
const MAX_POINTS: usize = 10_000;

fn check_points(points: usize) -> Result<(), String> {
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(format!("points must lie in [2, {MAX_POINTS}], got {points}"));
    }
    Ok(())
}

/// Interleaved `[β, x*(β), x*_n(β), ...]`: the positive root of `x = tanh(βx)`
/// and the constant fixed point at dimension `n` (0 when there is none).
pub fn root_curve(beta_max: f64, n: usize, points: usize) -> Result<Vec<f64>, String> {
    check_points(points)?;
    if !(beta_max > 0.0 && beta_max.is_finite()) {
        return Err(format!("beta_max must be positive, got {beta_max}"));
    }
    let mut out = Vec::with_capacity(3 * points);
    for k in 1..=points {
        let beta = beta_max * k as f64 / points as f64;
        let top = |r: Vec<f64>| r.last().copied().unwrap_or(0.0);
        out.push(beta);
        out.push(top(curie_weiss_roots(beta, 1e-12).map_err(|e| e.to_string())?));
        out.push(top(curie_weiss_constant_roots(beta, n, 1e-12).map_err(|e| e.to_string())?));
    }
    Ok(out)
}

/// Exact law of the number of `+1` coordinates under the Curie-Weiss Gibbs
/// measure, by enumerating all `2^n` states; entry `k` is `P(#plus = k)`.
pub fn magnetization_law(beta: f64, n: usize) -> Result<Vec<f64>, String> {
    if !(2..=MAX_DEMO_N).contains(&n) {
        return Err(format!("n must lie in [2, {MAX_DEMO_N}], got {n}"));
    }
    let f = build_hamiltonian(&HamiltonianSpec::CurieWeiss { beta, n }, MAX_DEMO_N)
        .map_err(|e| e.to_string())?
        .expansion;
    let nu = gibbs_measure(&f, MAX_DEMO_N).map_err(|e| e.to_string())?;
    let mut law = vec![0.0; n + 1];
    for (v, p) in nu.probs().iter().enumerate() {
        law[v.count_ones() as usize] += p;
    }
    Ok(law)
}

/// Interleaved `[y, ψ(y), φ(y), ...]` over `y/n ∈ [t - 3δ, t + δ]`.
pub fn cutoff_profile(n: usize, t: f64, delta: f64, points: usize) -> Result<Vec<f64>, String> {
    check_points(points)?;
    if n == 0 {
        return Err("n must be positive".into());
    }
    if !(delta > 0.0 && delta.is_finite() && t.is_finite()) {
        return Err(format!("need finite t and delta > 0, got t = {t}, delta = {delta}"));
    }
    let psi = ScalarShape::cutoff_potential(n, t, delta);
    let nf = n as f64;
    let (lo, hi) = ((t - delta_prime(delta)) * nf, t * nf);
    let (a, b) = ((t - 3.0 * delta) * nf, (t + delta) * nf);
    let mut out = Vec::with_capacity(3 * points);
    for k in 0..points {
        let y = a + (b - a) * k as f64 / (points - 1) as f64;
        let g = psi.value(y);
        let phi = if y < lo {
            0.0
        } else if y >= hi {
            1.0
        } else {
            g.exp()
        };
        out.extend([y, g, phi]);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = rootCurve)]
pub fn root_curve_js(beta_max: f64, n: usize, points: usize) -> Result<Vec<f64>, JsError> {
    root_curve(beta_max, n, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = magnetizationLaw)]
pub fn magnetization_law_js(beta: f64, n: usize) -> Result<Vec<f64>, JsError> {
    magnetization_law(beta, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = cutoffProfile)]
pub fn cutoff_profile_js(n: usize, t: f64, delta: f64, points: usize) -> Result<Vec<f64>, JsError> {
    cutoff_profile(n, t, delta, points).map_err(|e| JsError::new(&e))
}
