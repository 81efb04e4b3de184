//! The mean-field equation `X = tanh(λ ∇f(X))` and related scalar analysis.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boolfn::{CubePoint, FourierExpansion};
use crate::complexity::ComplexityParams;
use crate::{invalid, par, Error, Result};

pub const DEFAULT_DAMPING: f64 = 0.5;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;
/// Solutions closer than this in `‖·‖₁` are merged.
pub const DEDUP_DISTANCE: f64 = 1e-6;
pub const DEFAULT_RANDOM_STARTS: usize = 14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointSolution {
    pub point: Vec<f64>,
    pub lambda: f64,
    pub residual_l1: f64,
    pub iterations: usize,
    pub converged: bool,
    pub start_id: String,
}

impl FixedPointSolution {
    pub fn cube_point(&self) -> Result<CubePoint> {
        CubePoint::new(self.point.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterOptions {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for IterOptions {
    fn default() -> Self {
        Self { damping: DEFAULT_DAMPING, tol: DEFAULT_TOL, max_iter: DEFAULT_MAX_ITER }
    }
}

impl IterOptions {
    fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return invalid(format!("damping must lie in (0, 1], got {}", self.damping));
        }
        if !(self.tol > 0.0) {
            return invalid(format!("tolerance must be positive, got {}", self.tol));
        }
        Ok(())
    }
}

/// `tanh(λ ∇f(x))`.
fn target(f: &FourierExpansion, x: &[f64], lambda: f64) -> Result<Vec<f64>> {
    let g = f.gradient_unchecked(x);
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("gradient"));
    }
    Ok(g.into_iter().map(|v| (lambda * v).tanh()).collect())
}

fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// `‖X - tanh(λ∇f(X))‖₁`.
pub fn residual(f: &FourierExpansion, x: &CubePoint, lambda: f64) -> Result<f64> {
    check_dim(f, x.dim())?;
    Ok(l1_distance(x.coords(), &target(f, x.coords(), lambda)?))
}

fn check_dim(f: &FourierExpansion, got: usize) -> Result<()> {
    if got != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), got });
    }
    Ok(())
}

/// Damped iteration `X ← (1-γ)X + γ tanh(λ∇f(X))`.
pub fn mf_iterate(
    f: &FourierExpansion,
    x0: &CubePoint,
    lambda: f64,
    opts: IterOptions,
    start_id: impl Into<String>,
) -> Result<FixedPointSolution> {
    check_dim(f, x0.dim())?;
    opts.validate()?;
    if !lambda.is_finite() {
        return Err(Error::NonFinite("lambda"));
    }
    let gamma = opts.damping;
    let mut x = x0.coords().to_vec();
    let mut iterations = 0;
    loop {
        let t = target(f, &x, lambda)?;
        let res = l1_distance(&x, &t);
        if res <= opts.tol || iterations == opts.max_iter {
            return Ok(FixedPointSolution {
                point: x,
                lambda,
                residual_l1: res,
                iterations,
                converged: res <= opts.tol,
                start_id: start_id.into(),
            });
        }
        for (xi, ti) in x.iter_mut().zip(&t) {
            *xi = ((1.0 - gamma) * *xi + gamma * ti).clamp(-1.0, 1.0);
        }
        iterations += 1;
    }
}

/// Zeros, all `±0.9`, and `random` seeded uniform points in `[-1,1]^n`.
pub fn default_starts(n: usize, random: usize, seed: u64) -> Vec<(String, Vec<f64>)> {
    let mut starts = vec![
        ("zeros".to_string(), vec![0.0; n]),
        ("plus_0.9".to_string(), vec![0.9; n]),
        ("minus_0.9".to_string(), vec![-0.9; n]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..random {
        starts.push((format!("uniform_{k}"), (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect()));
    }
    starts
}

/// Keeps the first of every cluster of solutions within `DEDUP_DISTANCE`.
pub fn dedup_solutions(solutions: Vec<FixedPointSolution>) -> Vec<FixedPointSolution> {
    let mut kept: Vec<FixedPointSolution> = Vec::new();
    for s in solutions {
        if !kept.iter().any(|k| l1_distance(&k.point, &s.point) <= DEDUP_DISTANCE) {
            kept.push(s);
        }
    }
    kept
}

/// Runs every start at scale `λ`; returns converged, deduplicated solutions in start order.
pub fn solve_fixed_points(
    f: &FourierExpansion,
    lambda: f64,
    starts: &[(String, Vec<f64>)],
    opts: IterOptions,
) -> Result<Vec<FixedPointSolution>> {
    let points = starts
        .iter()
        .map(|(_, x)| CubePoint::new(x.clone()))
        .collect::<Result<Vec<_>>>()?;
    let runs = par::map_range(starts.len(), |k| mf_iterate(f, &points[k], lambda, opts, &starts[k].0));
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(dedup_solutions(runs.into_iter().filter(|s| s.converged).collect()))
}

/// Membership test for the set of approximate fixed points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XfTest {
    pub threshold: f64,
    pub residual: f64,
    pub residual_per_n: f64,
    pub member: bool,
}

/// `5000 · L₁ · L₂^{3/4} · D^{1/4} · n^{3/4}`.
pub fn xf_threshold(params: &ComplexityParams, n: usize) -> f64 {
    let p = params.floored();
    5000.0 * p.l1 * p.l2.powf(0.75) * p.d.max(0.0).powf(0.25) * (n as f64).powf(0.75)
}

pub fn xf_test(f: &FourierExpansion, x: &CubePoint, params: &ComplexityParams) -> Result<XfTest> {
    let r = residual(f, x, 1.0)?;
    let threshold = xf_threshold(params, f.n());
    Ok(XfTest { threshold, residual: r, residual_per_n: r / f.n() as f64, member: r <= threshold })
}

/// `H_b(p) = -p log p - (1-p) log(1-p)`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |q: f64| if q <= 0.0 { 0.0 } else { -q * q.ln() };
    term(p) + term(1.0 - p)
}

fn check_interior(f: &FourierExpansion, x: &CubePoint) -> Result<()> {
    check_dim(f, x.dim())?;
    if !x.is_interior() {
        return invalid("mean-field functional needs an interior point (all |X_i| < 1)");
    }
    Ok(())
}

/// `f(X) + Σ_i H_b((1 + X_i)/2)`.
pub fn mean_field_functional(f: &FourierExpansion, x: &CubePoint) -> Result<f64> {
    check_interior(f, x)?;
    let h: f64 = x.coords().iter().map(|&xi| binary_entropy(0.5 * (1.0 + xi))).sum();
    Ok(f.eval_unchecked(x.coords()) + h)
}

/// `∇f(X) - atanh(X)`; vanishes exactly at fixed points with `λ = 1`.
pub fn mean_field_gradient(f: &FourierExpansion, x: &CubePoint) -> Result<Vec<f64>> {
    check_interior(f, x)?;
    Ok(f.gradient_unchecked(x.coords())
        .into_iter()
        .zip(x.coords())
        .map(|(g, xi)| g - xi.atanh())
        .collect())
}

/// Sorted roots of `x = tanh(βx)` in `[-1, 1]`.
pub fn curie_weiss_roots(beta: f64, tol: f64) -> Result<Vec<f64>> {
    if !(beta > 0.0 && beta.is_finite()) {
        return invalid(format!("beta must be positive, got {beta}"));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return invalid(format!("tol must lie in (0, 1), got {tol}"));
    }
    let g = |x: f64| (beta * x).tanh() - x;
    if beta <= 1.0 || g(tol) <= 0.0 {
        return Ok(vec![0.0]);
    }
    let (mut lo, mut hi) = (tol, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    Ok(vec![-root, 0.0, root])
}

/// The constant fixed point `x·1` of Curie-Weiss at dimension `n`.
///
/// With pair coefficient `β/n` the gradient at `x·1` is `β(n-1)x/n`, so the
/// scalar equation carries the effective inverse temperature `β(n-1)/n`.
pub fn curie_weiss_constant_roots(beta: f64, n: usize, tol: f64) -> Result<Vec<f64>> {
    if n < 2 {
        return invalid("curie_weiss needs n >= 2");
    }
    curie_weiss_roots(beta * (n - 1) as f64 / n as f64, tol)
}

/// 64 geometric points on `[10^-2, 10^2]`, their negatives and 0, ascending.
pub fn default_lambda_grid() -> Vec<f64> {
    let pos: Vec<f64> = (0..64).map(|k| 10f64.powf(-2.0 + 4.0 * k as f64 / 63.0)).collect();
    let mut grid: Vec<f64> = pos.iter().rev().map(|x| -x).collect();
    grid.push(0.0);
    grid.extend(pos);
    grid
}

/// `[(t - 6δ)n, tn]`.
pub fn ld_window(t: f64, delta: f64, n: usize) -> (f64, f64) {
    let n = n as f64;
    ((t - 6.0 * delta) * n, t * n)
}

/// Fixed points of `X = tanh(λ∇f(X))` over a λ grid whose value `f(X)` lies
/// in the window `[(t - 6δ)n, tn]`. Each λ after the first is also started
/// from the previous λ's converged solutions.
pub fn lambda_scan(
    f: &FourierExpansion,
    t: f64,
    delta: f64,
    grid: &[f64],
    starts: &[(String, Vec<f64>)],
    opts: IterOptions,
) -> Result<Vec<FixedPointSolution>> {
    if grid.is_empty() {
        return invalid("empty lambda grid");
    }
    if grid.iter().any(|l| !l.is_finite()) {
        return Err(Error::NonFinite("lambda grid"));
    }
    if !(delta > 0.0) {
        return invalid(format!("delta must be positive, got {delta}"));
    }
    let (lo, hi) = ld_window(t, delta, f.n());
    let mut kept = Vec::new();
    let mut previous: Vec<FixedPointSolution> = Vec::new();
    for &lambda in grid {
        let mut run_starts = starts.to_vec();
        run_starts.extend(previous.iter().enumerate().map(|(j, s)| (format!("warm_{j}"), s.point.clone())));
        let solutions = solve_fixed_points(f, lambda, &run_starts, opts)?;
        for s in &solutions {
            let value = f.eval_unchecked(&s.point);
            if s.residual_l1 <= opts.tol && value >= lo && value <= hi {
                kept.push(s.clone());
            }
        }
        previous = solutions;
    }
    Ok(kept)
}
