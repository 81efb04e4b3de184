//! Hamiltonian catalog, scalar shapes and composition parameters.
//!
//! Quadratic Hamiltonians use one coefficient per unordered pair, so that an
//! Ising model with interaction matrix `A` (symmetric, zero diagonal) and
//! field `μ` is `f(x) = Σ_{i<j} A_ij x_i x_j + ⟨μ, x⟩` and has discrete gradient
//! exactly `Ax + μ`. Curie-Weiss is the Ising model with `A = β(J - I)/n`.
//!
//! Only the uniform base measure is supported; a biased product base measure
//! would enter as an additional linear term and is not wired in.

use serde::{Deserialize, Serialize};

use crate::boolfn::{check_cap, FourierExpansion};
use crate::complexity::{ComplexityParams, ParamProvenance, Provenance};
use crate::{invalid, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseTerm {
    pub subset: Vec<usize>,
    pub coef: f64,
}

/// JSON-serialisable description of a Hamiltonian.
///
/// ```json
/// {"type": "curie_weiss", "beta": 2.0, "n": 8}
/// {"type": "ising", "a": [[0, 1], [1, 0]], "mu": [0.1, 0.2]}
/// {"type": "smoothed_cutoff", "inner": {"type": "linear", "theta": [1, 1]}, "t": 0.5, "delta": 0.1}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum HamiltonianSpec {
    Linear {
        theta: Vec<f64>,
    },
    Ising {
        #[serde(alias = "A")]
        a: Vec<Vec<f64>>,
        mu: Vec<f64>,
    },
    CurieWeiss {
        beta: f64,
        n: usize,
    },
    /// `β/N Σ_{i,j,k distinct} x_ij x_jk x_ki` over the `N choose 2` edge variables.
    TriangleCount {
        beta: f64,
        #[serde(alias = "N")]
        vertices: usize,
    },
    SparseFourier {
        n: usize,
        terms: Vec<SparseTerm>,
    },
    SmoothedCutoff {
        inner: Box<HamiltonianSpec>,
        t: f64,
        delta: f64,
    },
}

impl HamiltonianSpec {
    /// Ambient dimension without building the expansion.
    pub fn dim(&self) -> usize {
        match self {
            Self::Linear { theta } => theta.len(),
            Self::Ising { mu, .. } => mu.len(),
            Self::CurieWeiss { n, .. } | Self::SparseFourier { n, .. } => *n,
            Self::TriangleCount { vertices, .. } => vertices * vertices.saturating_sub(1) / 2,
            Self::SmoothedCutoff { inner, .. } => inner.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Linear { theta } => {
                if theta.is_empty() {
                    return invalid("linear: empty theta");
                }
            }
            Self::Ising { a, mu } => validate_ising(a, mu)?,
            Self::CurieWeiss { beta, n } => {
                if !(beta.is_finite() && *beta > 0.0) {
                    return invalid(format!("curie_weiss: beta must be > 0, got {beta}"));
                }
                if *n < 2 {
                    return invalid("curie_weiss: n must be at least 2");
                }
            }
            Self::TriangleCount { beta, vertices } => {
                if !beta.is_finite() {
                    return Err(Error::NonFinite("triangle_count beta"));
                }
                if *vertices < 2 {
                    return invalid("triangle_count: need at least 2 vertices");
                }
            }
            Self::SparseFourier { n, .. } => {
                if *n == 0 {
                    return invalid("sparse_fourier: n must be positive");
                }
            }
            Self::SmoothedCutoff { inner, t, delta } => {
                inner.validate()?;
                if !t.is_finite() {
                    return Err(Error::NonFinite("smoothed_cutoff t"));
                }
                if !(delta.is_finite() && *delta > 0.0) {
                    return invalid(format!("smoothed_cutoff: delta must be > 0, got {delta}"));
                }
            }
        }
        Ok(())
    }
}

fn validate_ising(a: &[Vec<f64>], mu: &[f64]) -> Result<()> {
    let n = mu.len();
    if n == 0 {
        return invalid("ising: empty field vector");
    }
    if a.len() != n || a.iter().any(|row| row.len() != n) {
        return invalid(format!("ising: interaction matrix must be {n}x{n}"));
    }
    for i in 0..n {
        if a[i][i] != 0.0 {
            return invalid(format!("ising: nonzero diagonal entry A[{i}][{i}] = {}", a[i][i]));
        }
        for j in 0..i {
            let (x, y) = (a[i][j], a[j][i]);
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::NonFinite("ising interaction"));
            }
            if (x - y).abs() > 1e-12 * x.abs().max(y.abs()).max(1.0) {
                return invalid(format!("ising: asymmetric entries A[{i}][{j}] = {x}, A[{j}][{i}] = {y}"));
            }
        }
    }
    if mu.iter().any(|m| !m.is_finite()) {
        return Err(Error::NonFinite("ising field"));
    }
    Ok(())
}

/// A Hamiltonian's expansion, plus the closed-form Ising gradient when known.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    pub expansion: FourierExpansion,
    ising: Option<(Vec<Vec<f64>>, Vec<f64>)>,
}

impl Hamiltonian {
    pub fn n(&self) -> usize {
        self.expansion.n()
    }

    /// `Ax + μ` for Ising-type specs.
    pub fn closed_form_gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.ising.as_ref().map(|(a, mu)| {
            a.iter()
                .zip(mu)
                .map(|(row, m)| row.iter().zip(x).map(|(aij, xj)| aij * xj).sum::<f64>() + m)
                .collect()
        })
    }

    /// Interaction matrix and field for Ising-type specs.
    pub fn ising_parts(&self) -> Option<(&[Vec<f64>], &[f64])> {
        self.ising.as_ref().map(|(a, mu)| (a.as_slice(), mu.as_slice()))
    }
}

pub fn curie_weiss_matrix(beta: f64, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { beta / n as f64 }).collect())
        .collect()
}

fn ising_expansion(a: &[Vec<f64>], mu: &[f64]) -> Result<FourierExpansion> {
    let n = mu.len();
    let mut terms = Vec::with_capacity(n * (n + 1) / 2);
    for (i, &m) in mu.iter().enumerate() {
        terms.push((1u64 << i, m));
        for j in 0..i {
            terms.push(((1u64 << i) | (1u64 << j), a[i][j]));
        }
    }
    FourierExpansion::new(n, terms)
}

/// Edge variable index of `{i, j}` (with `i < j`) in lexicographic order.
pub fn edge_index(vertices: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < vertices);
    i * (2 * vertices - i - 1) / 2 + (j - i - 1)
}

fn triangle_expansion(beta: f64, vertices: usize) -> Result<FourierExpansion> {
    let n = vertices * (vertices - 1) / 2;
    // each unordered triangle appears 3! times among ordered distinct triples
    let coef = 6.0 * beta / vertices as f64;
    let mut terms = Vec::new();
    for i in 0..vertices {
        for j in i + 1..vertices {
            for k in j + 1..vertices {
                let mask = (1u64 << edge_index(vertices, i, j))
                    | (1u64 << edge_index(vertices, j, k))
                    | (1u64 << edge_index(vertices, i, k));
                terms.push((mask, coef));
            }
        }
    }
    FourierExpansion::new(n, terms)
}

/// Builds the expansion for a spec. `cap` bounds dense work (smoothed cutoffs).
pub fn build_hamiltonian(spec: &HamiltonianSpec, cap: usize) -> Result<Hamiltonian> {
    spec.validate()?;
    let plain = |expansion| Ok(Hamiltonian { expansion, ising: None });
    match spec {
        HamiltonianSpec::Linear { theta } => plain(FourierExpansion::linear(theta)?),
        HamiltonianSpec::Ising { a, mu } => Ok(Hamiltonian {
            expansion: ising_expansion(a, mu)?,
            ising: Some((a.clone(), mu.clone())),
        }),
        HamiltonianSpec::CurieWeiss { beta, n } => {
            let a = curie_weiss_matrix(*beta, *n);
            let mu = vec![0.0; *n];
            Ok(Hamiltonian {
                expansion: ising_expansion(&a, &mu)?,
                ising: Some((a, mu)),
            })
        }
        HamiltonianSpec::TriangleCount { beta, vertices } => {
            plain(triangle_expansion(*beta, *vertices)?)
        }
        HamiltonianSpec::SparseFourier { n, terms } => {
            let subsets: Vec<(Vec<usize>, f64)> =
                terms.iter().map(|t| (t.subset.clone(), t.coef)).collect();
            plain(FourierExpansion::from_subsets(*n, &subsets)?)
        }
        HamiltonianSpec::SmoothedCutoff { inner, t, delta } => {
            let f = build_hamiltonian(inner, cap)?.expansion;
            plain(smoothed_cutoff_weights(&f, *t, *delta, cap)?.g)
        }
    }
}

/// Value and first two derivatives of a scalar shape at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShapeValue {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Twice-differentiable scalar functions `h: ℝ → ℝ` with analytic derivatives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarShape {
    /// `2x+1` on `(-∞,-1]`, `-x²` on `[-1,0]`, `0` on `[0,∞)`.
    CutoffH,
    /// `¾x³ - ¼x⁵` on `(-1,1)`, `±½x²` outside; odd, with `h'(0) = 0`.
    TightnessH,
    Affine { a: f64, b: f64 },
    CustomTable(SplineTable),
    /// `outer · inner(slope · x + offset)`.
    Rescaled {
        inner: Box<ScalarShape>,
        outer: f64,
        slope: f64,
        offset: f64,
    },
}

impl ScalarShape {
    /// `ψ(x) = n · h((x/n - t)/δ)` with `h` the cutoff shape.
    pub fn cutoff_potential(n: usize, t: f64, delta: f64) -> Self {
        let n = n as f64;
        Self::Rescaled {
            inner: Box::new(Self::CutoffH),
            outer: n,
            slope: 1.0 / (n * delta),
            offset: -t / delta,
        }
    }

    pub fn eval(&self, x: f64) -> ShapeValue {
        match self {
            Self::CutoffH => {
                if x <= -1.0 {
                    ShapeValue { value: 2.0 * x + 1.0, d1: 2.0, d2: 0.0 }
                } else if x <= 0.0 {
                    ShapeValue { value: -x * x, d1: -2.0 * x, d2: -2.0 }
                } else {
                    ShapeValue { value: 0.0, d1: 0.0, d2: 0.0 }
                }
            }
            Self::TightnessH => {
                if x >= 1.0 {
                    ShapeValue { value: 0.5 * x * x, d1: x, d2: 1.0 }
                } else if x <= -1.0 {
                    ShapeValue { value: -0.5 * x * x, d1: -x, d2: -1.0 }
                } else {
                    let x2 = x * x;
                    ShapeValue {
                        value: 0.75 * x2 * x - 0.25 * x2 * x2 * x,
                        d1: 2.25 * x2 - 1.25 * x2 * x2,
                        d2: 4.5 * x - 5.0 * x2 * x,
                    }
                }
            }
            Self::Affine { a, b } => ShapeValue { value: a * x + b, d1: *a, d2: 0.0 },
            Self::CustomTable(table) => table.eval(x),
            Self::Rescaled { inner, outer, slope, offset } => {
                let s = inner.eval(slope * x + offset);
                ShapeValue {
                    value: outer * s.value,
                    d1: outer * slope * s.d1,
                    d2: outer * slope * slope * s.d2,
                }
            }
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.eval(x).value
    }

    /// `(B₁, B₂)` with `|h'| ≤ B₁` and `|h''| ≤ B₂` on all of ℝ (possibly infinite).
    pub fn derivative_bounds(&self) -> (f64, f64) {
        match self {
            Self::CutoffH => (2.0, 2.0),
            // max of |4.5x - 5x³| on [0,1] sits at x² = 0.3
            Self::TightnessH => (f64::INFINITY, 3.0 * 0.3f64.sqrt()),
            Self::Affine { a, .. } => (a.abs(), 0.0),
            Self::CustomTable(table) => table.derivative_bounds(),
            Self::Rescaled { inner, outer, slope, .. } => {
                let (b1, b2) = inner.derivative_bounds();
                (outer.abs() * slope.abs() * b1, outer.abs() * slope * slope * b2)
            }
        }
    }

    /// Composition `h ∘ f` as a Fourier expansion.
    pub fn compose(&self, f: &FourierExpansion, cap: usize) -> Result<FourierExpansion> {
        f.compose(|y| self.value(y), cap)
    }
}

/// Natural cubic spline through `(knots[i], values[i])`, extended linearly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SplineSpec", into = "SplineSpec")]
pub struct SplineTable {
    knots: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplineSpec {
    pub knots: Vec<f64>,
    pub values: Vec<f64>,
}

impl TryFrom<SplineSpec> for SplineTable {
    type Error = Error;

    fn try_from(spec: SplineSpec) -> Result<Self> {
        SplineTable::new(spec.knots, spec.values)
    }
}

impl From<SplineTable> for SplineSpec {
    fn from(t: SplineTable) -> Self {
        SplineSpec { knots: t.knots, values: t.values }
    }
}

impl SplineTable {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != values.len() {
            return invalid("custom table needs at least two knots and matching values");
        }
        if knots.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("custom table"));
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return invalid("custom table knots must be strictly increasing");
        }
        let second = natural_spline_second_derivatives(&knots, &values);
        Ok(Self { knots, values, second })
    }

    fn slope_at_ends(&self) -> (f64, f64) {
        let k = self.knots.len() - 1;
        (self.interval(0, self.knots[0]).d1, self.interval(k - 1, self.knots[k]).d1)
    }

    fn interval(&self, i: usize, x: f64) -> ShapeValue {
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let h = x1 - x0;
        let (a, b) = (x1 - x, x - x0);
        let c0 = y0 / h - m0 * h / 6.0;
        let c1 = y1 / h - m1 * h / 6.0;
        ShapeValue {
            value: m0 * a * a * a / (6.0 * h) + m1 * b * b * b / (6.0 * h) + c0 * a + c1 * b,
            d1: -m0 * a * a / (2.0 * h) + m1 * b * b / (2.0 * h) - c0 + c1,
            d2: (m0 * a + m1 * b) / h,
        }
    }

    pub fn eval(&self, x: f64) -> ShapeValue {
        let k = self.knots.len() - 1;
        if x <= self.knots[0] {
            let (s, _) = self.slope_at_ends();
            return ShapeValue { value: self.values[0] + s * (x - self.knots[0]), d1: s, d2: 0.0 };
        }
        if x >= self.knots[k] {
            let (_, s) = self.slope_at_ends();
            return ShapeValue { value: self.values[k] + s * (x - self.knots[k]), d1: s, d2: 0.0 };
        }
        let i = self.knots.partition_point(|&kx| kx <= x) - 1;
        self.interval(i.min(k - 1), x)
    }

    fn derivative_bounds(&self) -> (f64, f64) {
        let b2 = self.second.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut b1 = 0.0f64;
        for i in 0..self.knots.len() - 1 {
            let (x0, x1) = (self.knots[i], self.knots[i + 1]);
            b1 = b1.max(self.interval(i, x0).d1.abs()).max(self.interval(i, x1).d1.abs());
            // interior extremum of the quadratic d1 where d2 changes sign
            let (m0, m1) = (self.second[i], self.second[i + 1]);
            if m0 * m1 < 0.0 {
                let xs = x0 + (x1 - x0) * m0 / (m0 - m1);
                b1 = b1.max(self.interval(i, xs).d1.abs());
            }
        }
        (b1, b2)
    }
}

fn natural_spline_second_derivatives(x: &[f64], y: &[f64]) -> Vec<f64> {
    let k = x.len() - 1;
    let mut m = vec![0.0; k + 1];
    if k < 2 {
        return m;
    }
    // Thomas algorithm on the interior equations
    let mut diag = vec![0.0; k + 1];
    let mut rhs = vec![0.0; k + 1];
    let mut upper = vec![0.0; k + 1];
    for i in 1..k {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        let lower = h0 / 6.0;
        diag[i] = (h0 + h1) / 3.0;
        upper[i] = h1 / 6.0;
        rhs[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
        if i > 1 {
            let w = lower / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
    }
    for i in (1..k).rev() {
        m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
    }
    m
}

/// Closed-form complexity bounds for the Ising model with gradient `Ax + μ`.
pub fn ising_complexity_bounds(a: &[Vec<f64>], mu: &[f64]) -> Result<ComplexityParams> {
    validate_ising(a, mu)?;
    let n = mu.len() as f64;
    let mu_max = mu.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // Tr A² = Σ_ij A_ij A_ji
    let trace_sq: f64 = a.iter().flatten().map(|v| v * v).sum();
    let row_max = a
        .iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0f64, f64::max);
    Ok(ComplexityParams {
        d: (n * trace_sq).sqrt() + n.sqrt() * mu_max,
        d_stderr: None,
        l1: (mu_max + row_max).max(1.0),
        l2: row_max.max(1.0),
        provenance: ParamProvenance::all(Provenance::ClosedFormBound),
    })
}

pub fn cutoff_shape_eval(h: &ScalarShape, x: f64) -> ShapeValue {
    h.eval(x)
}

/// `(D̃, L̃₁, L̃₂, L̃₃)` for a composition `h ∘ f`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompositionParams {
    pub d: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

pub fn composition_params(
    b1: f64,
    b2: f64,
    base: &ComplexityParams,
    n: usize,
) -> Result<CompositionParams> {
    if !(b1 >= 0.0 && b2 >= 0.0) {
        return invalid(format!("derivative bounds must be non-negative, got ({b1}, {b2})"));
    }
    let base = base.floored();
    let n = n as f64;
    let l1_sq_n = base.l1 * base.l1 * n;
    Ok(CompositionParams {
        d: b1 * base.d + b2 * l1_sq_n,
        l1: (b1 * base.l1).max(1.0),
        l2: (b1 * base.l2 + 3.0 * b2 * l1_sq_n).max(1.0),
        l3: 2.0 * b2 * l1_sq_n * n.sqrt(),
    })
}

/// The smoothed cutoff `g = ψ ∘ f` and the truncated weights `φ`.
#[derive(Clone, Debug)]
pub struct SmoothedCutoff {
    pub g: FourierExpansion,
    pub psi: ScalarShape,
    /// `f` at every vertex.
    pub f_table: Vec<f64>,
    /// `ψ(f(v))` evaluated directly (no transform round trip).
    pub g_table: Vec<f64>,
    pub phi: Vec<f64>,
    /// `log φ`, `-∞` where `φ = 0`.
    pub log_phi: Vec<f64>,
    pub delta_prime: f64,
    pub t: f64,
    pub delta: f64,
}

impl SmoothedCutoff {
    /// `(t - δ')n`: vertices strictly below get `φ = 0`.
    pub fn lower_cut(&self) -> f64 {
        (self.t - self.delta_prime) * self.g.n() as f64
    }

    pub fn upper_cut(&self) -> f64 {
        self.t * self.g.n() as f64
    }

    /// Whether some vertex reaches `f ≥ tn`.
    pub fn has_witness(&self) -> bool {
        let target = self.upper_cut();
        self.f_table.iter().any(|&v| v >= target)
    }
}

/// `δ' = (log 4 + 1) δ / 2`.
pub fn delta_prime(delta: f64) -> f64 {
    (4f64.ln() + 1.0) * delta / 2.0
}

pub fn smoothed_cutoff_weights(
    f: &FourierExpansion,
    t: f64,
    delta: f64,
    cap: usize,
) -> Result<SmoothedCutoff> {
    if !(delta.is_finite() && delta > 0.0) {
        return invalid(format!("delta must be > 0, got {delta}"));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("cutoff level t"));
    }
    check_cap(f.n(), cap, "dense enumeration")?;
    let n = f.n();
    let psi = ScalarShape::cutoff_potential(n, t, delta);
    let f_table = f.truth_table(cap)?;
    let g_table: Vec<f64> = f_table.iter().map(|&y| psi.value(y)).collect();
    let g = FourierExpansion::from_truth_table(n, &g_table)?;
    let dp = delta_prime(delta);
    let (lo, hi) = ((t - dp) * n as f64, t * n as f64);
    let log_phi: Vec<f64> = f_table
        .iter()
        .zip(&g_table)
        .map(|(&fy, &gy)| {
            if fy < lo {
                f64::NEG_INFINITY
            } else if fy >= hi {
                0.0
            } else {
                gy
            }
        })
        .collect();
    let phi = log_phi.iter().map(|l| l.exp()).collect();
    Ok(SmoothedCutoff { g, psi, f_table, g_table, phi, log_phi, delta_prime: dp, t, delta })
}
