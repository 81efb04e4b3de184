//! Exact finite-state computations on `{-1,1}^n`.
//!
//! All measures are relative to the uniform base measure; Gibbs laws are
//! `∝ exp(f)` and are built in log space with a max shift.

mod transport;

use serde::{Deserialize, Serialize};

use crate::boolfn::{check_cap, vertex_coords, FourierExpansion, CUBE_TOLERANCE};
use crate::{invalid, Error, Result};

pub use transport::{w1, w1_exact, w1_greedy_upper, Transport, MASS_SCALE};

/// A probability vector over the `2^n` vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMeasure {
    n: usize,
    probs: Vec<f64>,
    log_norm: f64,
}

impl DenseMeasure {
    /// Normalises `exp(log_weights)` with a max shift. `-∞` entries get mass 0.
    pub fn from_log_weights(n: usize, log_weights: &[f64]) -> Result<Self> {
        if log_weights.len() != 1usize << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, got: log_weights.len() });
        }
        if log_weights.iter().any(|w| w.is_nan() || *w == f64::INFINITY) {
            return Err(Error::NonFinite("log weights"));
        }
        let shift = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if shift == f64::NEG_INFINITY {
            return invalid("all weights are zero");
        }
        let mut probs: Vec<f64> = log_weights.iter().map(|w| (w - shift).exp()).collect();
        let z: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= z);
        Ok(Self { n, probs, log_norm: shift + z.ln() })
    }

    /// From explicit probabilities; they must be non-negative and sum to 1 within 1e-9.
    pub fn from_probs(n: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 1usize << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, got: probs.len() });
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return invalid("probabilities must be finite and non-negative");
        }
        let z: f64 = probs.iter().sum();
        if (z - 1.0).abs() > 1e-9 {
            return invalid(format!("probabilities sum to {z}, not 1"));
        }
        let probs = probs.into_iter().map(|p| p / z).collect();
        Ok(Self { n, probs, log_norm: 0.0 })
    }

    pub fn uniform(n: usize) -> Self {
        let len = 1usize << n;
        Self { n, probs: vec![1.0 / len as f64; len], log_norm: (len as f64).ln() }
    }

    pub fn point_mass(n: usize, v: usize) -> Self {
        let mut probs = vec![0.0; 1 << n];
        probs[v] = 1.0;
        Self { n, probs, log_norm: 0.0 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, v: usize) -> f64 {
        self.probs[v]
    }

    /// `log Σ_v w(v)` for the weights used at construction.
    pub fn log_norm(&self) -> f64 {
        self.log_norm
    }

    /// `Σ_v p(v) g(v)` in vertex order.
    pub fn expectation(&self, g: impl Fn(usize) -> f64) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(v, &p)| p * g(v))
            .sum()
    }

    /// Mass of the vertex set selected by `pred`.
    pub fn mass_where(&self, pred: impl Fn(usize) -> bool) -> f64 {
        self.expectation(|v| if pred(v) { 1.0 } else { 0.0 })
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        Ok(())
    }
}

/// The product law on `{-1,1}^n` with the given mean.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductMeasure {
    mean: Vec<f64>,
}

impl ProductMeasure {
    /// Entries are clamped to `[-1,1]` after a `1e-12` tolerance check.
    pub fn new(mean: Vec<f64>) -> Result<Self> {
        if mean.iter().any(|m| !m.is_finite()) {
            return Err(Error::NonFinite("product mean"));
        }
        if let Some(m) = mean.iter().find(|m| m.abs() > 1.0 + CUBE_TOLERANCE) {
            return invalid(format!("product mean entry {m} outside [-1, 1]"));
        }
        Ok(Self { mean: mean.into_iter().map(|m| m.clamp(-1.0, 1.0)).collect() })
    }

    pub fn n(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// `Pr[Y_i = +1] = (1 + m_i)/2`.
    pub fn prob_plus(&self, i: usize) -> f64 {
        0.5 * (1.0 + self.mean[i])
    }

    pub fn densify(&self, cap: usize) -> Result<DenseMeasure> {
        let n = self.n();
        check_cap(n, cap, "dense enumeration")?;
        let logp: Vec<(f64, f64)> = (0..n)
            .map(|i| (self.prob_plus(i).ln(), (1.0 - self.prob_plus(i)).ln()))
            .collect();
        let logw: Vec<f64> = (0..1usize << n)
            .map(|v| (0..n).map(|i| if v >> i & 1 == 1 { logp[i].0 } else { logp[i].1 }).sum())
            .collect();
        DenseMeasure::from_log_weights(n, &logw)
    }
}

/// A tilt direction `θ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TiltVector {
    theta: Vec<f64>,
}

impl TiltVector {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite("tilt vector"));
        }
        Ok(Self { theta })
    }

    pub fn zero(n: usize) -> Self {
        Self { theta: vec![0.0; n] }
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    pub fn norm_inf(&self) -> f64 {
        self.theta.iter().fold(0.0, |m, t| m.max(t.abs()))
    }

    pub fn norm1(&self) -> f64 {
        self.theta.iter().map(|t| t.abs()).sum()
    }

    pub fn norm2(&self) -> f64 {
        self.theta.iter().map(|t| t * t).sum::<f64>().sqrt()
    }

    /// Whether `θ ∈ B(0, ε√n) ∩ [-¼, ¼]^n`.
    pub fn in_support(&self, epsilon: f64) -> bool {
        self.norm_inf() <= 0.25 && self.norm2() <= epsilon * (self.n() as f64).sqrt()
    }

    fn dot_vertex(&self, v: usize) -> f64 {
        self.theta
            .iter()
            .enumerate()
            .map(|(i, t)| if v >> i & 1 == 1 { *t } else { -*t })
            .sum()
    }
}

/// `Pr[v] ∝ exp(f(v))`.
pub fn gibbs_measure(f: &FourierExpansion, cap: usize) -> Result<DenseMeasure> {
    let table = f.truth_table(cap)?;
    if table.iter().any(|y| !y.is_finite()) {
        return Err(Error::NonFinite("Hamiltonian values"));
    }
    DenseMeasure::from_log_weights(f.n(), &table)
}

/// `dτ_θν/dν ∝ exp⟨θ, v⟩`. The log-normaliser matches `gibbs_measure(f + ⟨θ,·⟩)`
/// when `ν = gibbs_measure(f)`.
pub fn tilt(nu: &DenseMeasure, theta: &TiltVector) -> Result<DenseMeasure> {
    if theta.n() != nu.n {
        return Err(Error::DimensionMismatch { expected: nu.n, got: theta.n() });
    }
    let logw: Vec<f64> = nu
        .probs
        .iter()
        .enumerate()
        .map(|(v, p)| p.ln() + theta.dot_vertex(v))
        .collect();
    let mut out = DenseMeasure::from_log_weights(nu.n, &logw)?;
    out.log_norm += nu.log_norm;
    Ok(out)
}

/// Anything with a mean vector.
pub trait HasMean {
    fn mean_vector(&self) -> Vec<f64>;
}

impl HasMean for DenseMeasure {
    fn mean_vector(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.n];
        for (v, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for (i, mi) in m.iter_mut().enumerate() {
                if v >> i & 1 == 1 {
                    *mi += p;
                } else {
                    *mi -= p;
                }
            }
        }
        m
    }
}

impl HasMean for ProductMeasure {
    fn mean_vector(&self) -> Vec<f64> {
        self.mean.clone()
    }
}

pub fn mean<M: HasMean + ?Sized>(measure: &M) -> Vec<f64> {
    measure.mean_vector()
}

/// The effective gradient field `∇f(v) + θ`, read from a truth table.
#[derive(Clone, Debug)]
pub struct GradientField {
    n: usize,
    table: Vec<f64>,
    shift: Vec<f64>,
}

impl GradientField {
    pub fn new(f: &FourierExpansion, cap: usize) -> Result<Self> {
        Ok(Self { n: f.n(), table: f.truth_table(cap)?, shift: vec![0.0; f.n()] })
    }

    /// The field of `τ_θ ν`: the same table shifted by `θ`.
    pub fn tilted(&self, theta: &TiltVector) -> Result<Self> {
        if theta.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: theta.n() });
        }
        let shift = self.shift.iter().zip(theta.theta()).map(|(a, b)| a + b).collect();
        Ok(Self { n: self.n, table: self.table.clone(), shift })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn fill(&self, v: usize, out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let b = 1usize << i;
            *o = 0.5 * (self.table[v | b] - self.table[v & !b]) + self.shift[i];
        }
    }

    pub fn at(&self, v: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.fill(v, &mut out);
        out
    }

    fn check(&self, nu: &DenseMeasure) -> Result<()> {
        if nu.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: nu.n });
        }
        Ok(())
    }
}

/// Covariance of `tanh(∇f_ν(V))` under `V ~ ν`, with its trace.
#[derive(Clone, Debug, PartialEq)]
pub struct HMatrix {
    pub matrix: Vec<Vec<f64>>,
    pub trace: f64,
}

/// `E tanh(field(V))` under `V ~ ν`.
pub fn tanh_field_mean(nu: &DenseMeasure, field: &GradientField) -> Result<Vec<f64>> {
    field.check(nu)?;
    let n = field.n;
    let mut m = vec![0.0; n];
    let mut g = vec![0.0; n];
    for (v, &p) in nu.probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        field.fill(v, &mut g);
        for (mi, gi) in m.iter_mut().zip(&g) {
            *mi += p * gi.tanh();
        }
    }
    Ok(m)
}

pub fn h_matrix(nu: &DenseMeasure, field: &GradientField) -> Result<HMatrix> {
    let m = tanh_field_mean(nu, field)?;
    let n = field.n;
    let mut h = vec![vec![0.0; n]; n];
    let mut g = vec![0.0; n];
    for (v, &p) in nu.probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        field.fill(v, &mut g);
        for (gi, mi) in g.iter_mut().zip(&m) {
            *gi = gi.tanh() - mi;
        }
        for i in 0..n {
            for j in 0..=i {
                h[i][j] += p * g[i] * g[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            h[j][i] = h[i][j];
        }
    }
    let trace = (0..n).map(|i| h[i][i]).sum();
    Ok(HMatrix { matrix: h, trace })
}

/// `Tr H(ν)` without forming the matrix.
pub fn h_trace(nu: &DenseMeasure, field: &GradientField) -> Result<f64> {
    let m = tanh_field_mean(nu, field)?;
    let mut g = vec![0.0; field.n];
    let mut tr = 0.0;
    for (v, &p) in nu.probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        field.fill(v, &mut g);
        tr += p * g.iter().zip(&m).map(|(gi, mi)| (gi.tanh() - mi).powi(2)).sum::<f64>();
    }
    Ok(tr)
}

/// The product law centred at `E tanh(∇f_ν(V))`.
pub fn product_approx(nu: &DenseMeasure, field: &GradientField) -> Result<ProductMeasure> {
    ProductMeasure::new(tanh_field_mean(nu, field)?)
}

/// `½ Σ_v |ν₁(v) - ν₂(v)|`.
pub fn tv(a: &DenseMeasure, b: &DenseMeasure) -> Result<f64> {
    a.check_same_dim(b)?;
    Ok(0.5 * a.probs.iter().zip(&b.probs).map(|(p, q)| (p - q).abs()).sum::<f64>())
}

/// `Σ_v p(v) · x(v)` for a measure and a vertex-coordinate transform.
pub fn vertex_expectation(nu: &DenseMeasure, g: impl Fn(&[f64]) -> f64) -> f64 {
    nu.expectation(|v| g(&vertex_coords(nu.n, v)))
}
