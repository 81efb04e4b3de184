//! Gradient complexity: the Gaussian width of `{∇f(y) : y ∈ {-1,1}^n} ∪ {0}`.
//!
//! Gaussian draws come from ChaCha8 seeded with `seed`, one stream per draw,
//! so each draw is reproducible on its own and independent of the number of
//! threads.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::boolfn::{check_cap, FourierExpansion};
use crate::{invalid, par, Error, Result};

pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEDUP_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Exact,
    MonteCarlo,
    ClosedFormBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamProvenance {
    pub d: Provenance,
    pub l1: Provenance,
    pub l2: Provenance,
}

impl ParamProvenance {
    pub fn all(p: Provenance) -> Self {
        Self { d: p, l1: p, l2: p }
    }
}

/// `(D, L₁, L₂)` with `L₁, L₂` floored at 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexityParams {
    pub d: f64,
    pub d_stderr: Option<f64>,
    pub l1: f64,
    pub l2: f64,
    pub provenance: ParamProvenance,
}

impl ComplexityParams {
    /// Exact parameters; the floors are applied here.
    pub fn exact(d: f64, l1: f64, l2: f64) -> Self {
        Self {
            d,
            d_stderr: None,
            l1: l1.max(1.0),
            l2: l2.max(1.0),
            provenance: ParamProvenance::all(Provenance::Exact),
        }
    }

    pub fn floored(&self) -> Self {
        Self { l1: self.l1.max(1.0), l2: self.l2.max(1.0), ..*self }
    }
}

/// Deduplicated gradient image plus the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientCloud {
    n: usize,
    /// Row-major, `len() / n` points.
    flat: Vec<f64>,
}

fn grid_key(point: &[f64]) -> Vec<i64> {
    point.iter().map(|&x| (x / DEDUP_TOLERANCE).round() as i64).collect()
}

impl GradientCloud {
    /// Builds a cloud from arbitrary points; the origin is added and duplicates removed.
    pub fn from_points(n: usize, points: &[Vec<f64>]) -> Result<Self> {
        let mut builder = CloudBuilder::new(n);
        for p in points {
            if p.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: p.len() });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("gradient cloud point"));
            }
            builder.push(p);
        }
        Ok(builder.finish())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        if self.n == 0 {
            1
        } else {
            self.flat.len() / self.n
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, k: usize) -> &[f64] {
        &self.flat[k * self.n..(k + 1) * self.n]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.flat.chunks_exact(self.n.max(1))
    }

    /// Multiplies every point by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let pts: Vec<Vec<f64>> = self.points().map(|p| p.iter().map(|x| c * x).collect()).collect();
        Self::from_points(self.n, &pts)
    }

    /// `max(0, max_k ⟨x_k, g⟩)`; the origin always contributes 0.
    fn sup(&self, g: &[f64]) -> f64 {
        self.points()
            .map(|p| p.iter().zip(g).map(|(a, b)| a * b).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

struct CloudBuilder {
    n: usize,
    seen: HashSet<Vec<i64>>,
    flat: Vec<f64>,
}

impl CloudBuilder {
    fn new(n: usize) -> Self {
        let mut b = Self { n, seen: HashSet::new(), flat: Vec::new() };
        b.push(&vec![0.0; n]);
        b
    }

    fn push(&mut self, p: &[f64]) {
        if self.seen.insert(grid_key(p)) {
            self.flat.extend_from_slice(p);
        }
    }

    fn finish(self) -> GradientCloud {
        GradientCloud { n: self.n, flat: self.flat }
    }
}

/// Exact gradients at all `2^n` vertices, deduplicated, origin first.
pub fn gradient_cloud(f: &FourierExpansion, cap: usize) -> Result<GradientCloud> {
    check_cap(f.n(), cap, "dense enumeration")?;
    let n = f.n();
    let table = f.truth_table(cap)?;
    let mut builder = CloudBuilder::new(n);
    let mut g = vec![0.0; n];
    for v in 0..table.len() {
        for (i, gi) in g.iter_mut().enumerate() {
            let b = 1usize << i;
            *gi = 0.5 * (table[v | b] - table[v & !b]);
        }
        builder.push(&g);
    }
    Ok(builder.finish())
}

/// Standard normal vector for draw `k`.
pub fn gaussian_draw(n: usize, seed: u64, k: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// Per-draw suprema `sup_{x ∈ cloud} ⟨x, Γ_k⟩` for `k < samples`.
pub fn per_draw_sups(cloud: &GradientCloud, samples: usize, seed: u64) -> Vec<f64> {
    par::map_range(samples, |k| cloud.sup(&gaussian_draw(cloud.n(), seed, k as u64)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WidthEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
}

pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

pub fn gaussian_width_mc(cloud: &GradientCloud, samples: usize, seed: u64) -> Result<WidthEstimate> {
    if samples < 2 {
        return invalid(format!("need at least 2 samples, got {samples}"));
    }
    let sups = per_draw_sups(cloud, samples, seed);
    let (estimate, stderr) = mean_and_stderr(&sups);
    Ok(WidthEstimate { estimate, stderr, samples })
}

/// Monte-Carlo `D` together with exact, floored `L₁` and `L₂`.
pub fn complexity_params(
    f: &FourierExpansion,
    samples: usize,
    seed: u64,
    cap: usize,
) -> Result<ComplexityParams> {
    let cloud = gradient_cloud(f, cap)?;
    let w = gaussian_width_mc(&cloud, samples, seed)?;
    let table = f.truth_table(cap)?;
    let l1 = crate::boolfn::lipschitz_l1_table(f.n(), &table);
    let l2 = crate::boolfn::lipschitz_l2_table(f.n(), &table);
    Ok(ComplexityParams {
        d: w.estimate,
        d_stderr: Some(w.stderr),
        l1: l1.max(1.0),
        l2: l2.max(1.0),
        provenance: ParamProvenance {
            d: Provenance::MonteCarlo,
            l1: Provenance::Exact,
            l2: Provenance::Exact,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_function_cloud_is_origin() {
        let f = FourierExpansion::zero(5).unwrap();
        let c = gradient_cloud(&f, 20).unwrap();
        assert_eq!(c.len(), 1);
        let w = gaussian_width_mc(&c, 100, 1).unwrap();
        assert_eq!((w.estimate, w.stderr), (0.0, 0.0));
        let p = complexity_params(&f, 100, 1, 20).unwrap();
        assert_eq!((p.d, p.l1, p.l2), (0.0, 1.0, 1.0));
    }

    #[test]
    fn linear_cloud_has_two_points() {
        let mu = vec![0.3, -1.0, 2.0];
        let c = gradient_cloud(&FourierExpansion::linear(&mu).unwrap(), 20).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.point(0), &[0.0; 3]);
        assert!(c.point(1).iter().zip(&mu).all(|(a, b)| (a - b).abs() < 1e-14));
    }

    #[test]
    fn draws_are_reproducible_and_distinct() {
        assert_eq!(gaussian_draw(4, 9, 3), gaussian_draw(4, 9, 3));
        assert_ne!(gaussian_draw(4, 9, 3), gaussian_draw(4, 9, 4));
        assert_ne!(gaussian_draw(4, 9, 3), gaussian_draw(4, 10, 3));
    }

    #[test]
    fn too_few_samples_rejected() {
        let c = GradientCloud::from_points(2, &[]).unwrap();
        assert!(gaussian_width_mc(&c, 1, 0).is_err());
    }

    #[test]
    fn floors_apply() {
        let p = ComplexityParams::exact(0.5, 0.2, 0.0);
        assert_eq!((p.l1, p.l2), (1.0, 1.0));
    }
}
