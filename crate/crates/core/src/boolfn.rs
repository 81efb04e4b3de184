//! Real-valued functions on `{-1,1}^n` in their Fourier (multilinear) form.
//!
//! A [`FourierExpansion`] stores `f(x) = Σ_S f̂(S) Π_{i∈S} x_i` sparsely, with
//! subsets encoded as bitmasks. The same polynomial evaluated on `[-1,1]^n`
//! is the harmonic extension, and its partial derivatives extend the discrete
//! gradient `∂_i f(y) = (f(y^{i→+1}) - f(y^{i→-1})) / 2`.

use crate::{invalid, par, Error, Result};

/// Coefficients with absolute value at or below this are dropped after a transform.
pub const PRUNE_TOLERANCE: f64 = 1e-14;

/// Slack allowed on the `[-1,1]` box when validating cube points.
pub const CUBE_TOLERANCE: f64 = 1e-12;

/// Hard limit imposed by the `u64` subset encoding.
pub const MAX_SPARSE_DIM: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct FourierExpansion {
    n: usize,
    /// Sorted by mask, no duplicates, no zero coefficients.
    terms: Vec<(u64, f64)>,
}

/// A point of the solid cube `[-1,1]^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CubePoint(Vec<f64>);

impl CubePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        for &c in &coords {
            if !c.is_finite() {
                return Err(Error::NonFinite("cube point"));
            }
            if c.abs() > 1.0 + CUBE_TOLERANCE {
                return invalid(format!("cube coordinate {c} outside [-1, 1]"));
            }
        }
        Ok(Self(coords))
    }

    /// The vertex with index `v` under the bit encoding (bit set ↔ `+1`).
    pub fn vertex(n: usize, v: usize) -> Self {
        Self(vertex_coords(n, v))
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_vertex(&self) -> bool {
        self.0.iter().all(|&c| c == 1.0 || c == -1.0)
    }

    pub fn is_interior(&self) -> bool {
        self.0.iter().all(|&c| c.abs() < 1.0)
    }
}

impl AsRef<[f64]> for CubePoint {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

pub fn vertex_coords(n: usize, v: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if v >> i & 1 == 1 { 1.0 } else { -1.0 })
        .collect()
}

/// Index of a `±1` vector; entries `> 0` count as `+1`.
pub fn vertex_index(coords: &[f64]) -> usize {
    coords
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0.0)
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

/// `χ_S(v) = Π_{i∈S} v_i` at a vertex index.
#[inline]
pub fn character(mask: u64, v: usize) -> f64 {
    // factors are -1 exactly where the bit of v is clear
    if (mask & !(v as u64)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// In-place unnormalised Walsh-Hadamard transform over `{0,1}^n` indices.
pub fn fwht(a: &mut [f64]) {
    let len = a.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(2 * h) {
            for k in block..block + h {
                let (x, y) = (a[k], a[k + h]);
                a[k] = x + y;
                a[k + h] = x - y;
            }
        }
        h *= 2;
    }
}

pub(crate) fn check_cap(n: usize, cap: usize, what: &'static str) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded { what, n, cap });
    }
    Ok(())
}

fn mask_of(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl FourierExpansion {
    /// Builds an expansion, merging repeated subsets and dropping zero coefficients.
    pub fn new(n: usize, terms: impl IntoIterator<Item = (u64, f64)>) -> Result<Self> {
        if n == 0 || n > MAX_SPARSE_DIM {
            return invalid(format!("dimension {n} must lie in 1..={MAX_SPARSE_DIM}"));
        }
        let full = mask_of(n);
        let mut terms: Vec<(u64, f64)> = terms.into_iter().collect();
        for &(mask, c) in &terms {
            if mask & !full != 0 {
                return invalid(format!("subset mask {mask:#x} uses bits beyond n = {n}"));
            }
            if !c.is_finite() {
                return Err(Error::NonFinite("Fourier coefficient"));
            }
        }
        terms.sort_by_key(|t| t.0);
        let mut merged: Vec<(u64, f64)> = Vec::with_capacity(terms.len());
        for (mask, c) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == mask => last.1 += c,
                _ => merged.push((mask, c)),
            }
        }
        merged.retain(|t| t.1 != 0.0);
        Ok(Self { n, terms: merged })
    }

    /// Builds from subsets given as index lists.
    pub fn from_subsets(n: usize, terms: &[(Vec<usize>, f64)]) -> Result<Self> {
        let mut encoded = Vec::with_capacity(terms.len());
        for (subset, c) in terms {
            let mut mask = 0u64;
            for &i in subset {
                if i >= n {
                    return invalid(format!("subset index {i} out of range for n = {n}"));
                }
                if mask >> i & 1 == 1 {
                    return invalid(format!("subset index {i} repeated"));
                }
                mask |= 1 << i;
            }
            encoded.push((mask, *c));
        }
        Self::new(n, encoded)
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::new(n, [(0, c)])
    }

    /// `⟨θ, x⟩`.
    pub fn linear(theta: &[f64]) -> Result<Self> {
        Self::new(
            theta.len(),
            theta.iter().enumerate().map(|(i, &t)| (1u64 << i, t)),
        )
    }

    /// Inverse of [`truth_table`](Self::truth_table); coefficients at or
    /// below [`PRUNE_TOLERANCE`] are dropped.
    pub fn from_truth_table(n: usize, table: &[f64]) -> Result<Self> {
        if n == 0 || n >= usize::BITS as usize || table.len() != 1 << n {
            return invalid(format!("truth table of length {} for n = {n}", table.len()));
        }
        if table.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("truth table"));
        }
        let full = (1usize << n) - 1;
        let mut a: Vec<f64> = (0..table.len()).map(|w| table[full ^ w]).collect();
        fwht(&mut a);
        let scale = 1.0 / table.len() as f64;
        let terms = a
            .into_iter()
            .enumerate()
            .map(|(s, c)| (s as u64, c * scale))
            .filter(|t| t.1.abs() > PRUNE_TOLERANCE);
        Self::new(n, terms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(u64, f64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mask: u64) -> f64 {
        self.terms
            .binary_search_by_key(&mask, |t| t.0)
            .map(|k| self.terms[k].1)
            .unwrap_or(0.0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.count_ones()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Self::new(self.n, self.terms.iter().chain(&other.terms).copied())
    }

    /// `f + ⟨θ, x⟩`.
    pub fn add_linear(&self, theta: &[f64]) -> Result<Self> {
        self.add(&Self::linear(theta)?)
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        Self::new(self.n, self.terms.iter().map(|&(m, a)| (m, a * c)))
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got,
            });
        }
        Ok(())
    }

    /// Value at vertex index `v`.
    pub fn eval_vertex(&self, v: usize) -> f64 {
        self.terms.iter().map(|&(m, c)| c * character(m, v)).sum()
    }

    /// Discrete gradient at vertex index `v`.
    pub fn gradient_vertex(&self, v: usize) -> Vec<f64> {
        let mut g = vec![0.0; self.n];
        for &(mask, c) in &self.terms {
            let mut bits = mask;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                g[i] += c * character(mask & !(1 << i), v);
            }
        }
        g
    }

    /// Multilinear extension `Σ_S f̂(S) Π_{i∈S} x_i`.
    pub fn eval_extension(&self, x: &CubePoint) -> Result<f64> {
        self.check_dim(x.dim())?;
        Ok(self.eval_unchecked(x.coords()))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|&(mask, c)| c * subset_product(mask, x, None))
            .sum()
    }

    /// Gradient of the extension; component `i` is `Σ_{S∋i} f̂(S) Π_{j∈S∖i} x_j`.
    pub fn gradient_extension(&self, x: &CubePoint) -> Result<Vec<f64>> {
        self.check_dim(x.dim())?;
        Ok(self.gradient_unchecked(x.coords()))
    }

    pub(crate) fn gradient_unchecked(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.n];
        for &(mask, c) in &self.terms {
            let mut bits = mask;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                g[i] += c * subset_product(mask, x, Some(i));
            }
        }
        g
    }

    /// Values at all `2^n` vertices, indexed by the vertex encoding.
    pub fn truth_table(&self, cap: usize) -> Result<Vec<f64>> {
        check_cap(self.n, cap, "dense enumeration")?;
        let len = 1usize << self.n;
        let mut a = vec![0.0; len];
        for &(mask, c) in &self.terms {
            a[mask as usize] = c;
        }
        fwht(&mut a);
        let full = len - 1;
        Ok((0..len).map(|v| a[full ^ v]).collect())
    }

    /// `Lip(f) = max_{i, y} |∂_i f(y)|` by exhaustive enumeration.
    pub fn lipschitz_l1(&self, cap: usize) -> Result<f64> {
        let table = self.truth_table(cap)?;
        Ok(lipschitz_l1_table(self.n, &table))
    }

    /// `max_{x≠y} ‖∇f(x) - ∇f(y)‖₁ / ‖x - y‖₁` over the vertices.
    ///
    /// Only Hamming-distance-one pairs are scanned: along any monotone path
    /// between two vertices the numerator is subadditive and the denominator
    /// additive, so the supremum is attained on a single flip.
    pub fn lipschitz_l2(&self, cap: usize) -> Result<f64> {
        let table = self.truth_table(cap)?;
        Ok(lipschitz_l2_table(self.n, &table))
    }

    /// Fourier expansion of `v ↦ h(f(v))`, computed through the truth table.
    pub fn compose<H>(&self, h: H, cap: usize) -> Result<Self>
    where
        H: Fn(f64) -> f64,
    {
        let table = self.truth_table(cap)?;
        let mapped: Vec<f64> = table.into_iter().map(h).collect();
        if mapped.iter().any(|y| !y.is_finite()) {
            return Err(Error::NonFinite("composed scalar function"));
        }
        Self::from_truth_table(self.n, &mapped)
    }
}

#[inline]
fn subset_product(mask: u64, x: &[f64], skip: Option<usize>) -> f64 {
    let mut bits = mask;
    let mut p = 1.0;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        if Some(j) != skip {
            p *= x[j];
        }
    }
    p
}

/// `2·∂_j f` at vertex `v`, read from a truth table.
#[inline]
fn twice_partial(table: &[f64], v: usize, j: usize) -> f64 {
    let b = 1usize << j;
    table[v | b] - table[v & !b]
}

pub(crate) fn lipschitz_l1_table(n: usize, table: &[f64]) -> f64 {
    let m = par::max_range(table.len(), |v| {
        (0..n)
            .filter(|&i| v >> i & 1 == 0)
            .map(|i| 0.5 * (table[v | 1 << i] - table[v]).abs())
            .fold(0.0, f64::max)
    });
    m.max(0.0)
}

pub(crate) fn lipschitz_l2_table(n: usize, table: &[f64]) -> f64 {
    let m = par::max_range(table.len(), |v| {
        let mut best = 0.0f64;
        for i in (0..n).filter(|&i| v >> i & 1 == 0) {
            let u = v | 1 << i;
            let mut s = 0.0;
            for j in (0..n).filter(|&j| j != i) {
                s += (twice_partial(table, v, j) - twice_partial(table, u, j)).abs();
            }
            // ½ from the half-differences, ½ from ‖x − y‖₁ = 2
            best = best.max(0.25 * s);
        }
        best
    });
    m.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x1x2() -> FourierExpansion {
        FourierExpansion::new(2, [(0b11, 1.0)]).unwrap()
    }

    #[test]
    fn monomial_at_vertex_and_interior() {
        let f = x1x2();
        let v = CubePoint::new(vec![1.0, -1.0]).unwrap();
        assert_eq!(f.eval_extension(&v).unwrap(), -1.0);
        let x = CubePoint::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(f.eval_extension(&x).unwrap(), 0.25);
    }

    #[test]
    fn normalisation_merges_and_drops_zeros() {
        let f = FourierExpansion::new(3, [(0b101, 1.0), (0b101, -1.0), (0b1, 2.0), (0b1, 0.5)])
            .unwrap();
        assert_eq!(f.terms(), &[(0b1, 2.5)]);
        assert!(FourierExpansion::new(2, [(0b100, 1.0)]).is_err());
        assert!(FourierExpansion::from_subsets(3, &[(vec![1, 1], 1.0)]).is_err());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let f = x1x2();
        let x = CubePoint::new(vec![0.0; 3]).unwrap();
        assert!(matches!(
            f.eval_extension(&x),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
        assert!(f.gradient_extension(&x).is_err());
    }

    #[test]
    fn cube_point_validation() {
        assert!(CubePoint::new(vec![1.0 + 1e-13]).is_ok());
        assert!(CubePoint::new(vec![1.1]).is_err());
        assert!(CubePoint::new(vec![f64::NAN]).is_err());
        assert!(CubePoint::vertex(3, 0b101).is_vertex());
        assert!(!CubePoint::new(vec![0.5, 1.0]).unwrap().is_vertex());
    }

    #[test]
    fn vertex_encoding_round_trip() {
        for v in 0..16 {
            assert_eq!(vertex_index(&vertex_coords(4, v)), v);
        }
    }

    #[test]
    fn linear_gradient_is_constant() {
        let mu = [0.3, -1.2, 0.7];
        let f = FourierExpansion::linear(&mu).unwrap();
        for v in 0..8 {
            assert_eq!(f.gradient_vertex(v), mu.to_vec());
        }
        let x = CubePoint::new(vec![0.1, -0.4, 0.9]).unwrap();
        assert_eq!(f.gradient_extension(&x).unwrap(), mu.to_vec());
        assert!((f.lipschitz_l1(20).unwrap() - 1.2).abs() < 1e-14);
        assert!(f.lipschitz_l2(20).unwrap() < 1e-14);
    }

    #[test]
    fn zero_function_is_accepted_everywhere() {
        let f = FourierExpansion::zero(4).unwrap();
        assert!(f.is_zero());
        assert_eq!(f.truth_table(20).unwrap(), vec![0.0; 16]);
        assert_eq!(f.lipschitz_l1(20).unwrap(), 0.0);
        assert!(f.lipschitz_l2(20).unwrap() < 1e-14);
        assert!(f.compose(|y| y, 20).unwrap().is_zero());
        let x = CubePoint::new(vec![0.2; 4]).unwrap();
        assert_eq!(f.gradient_extension(&x).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn compose_constant_gives_single_empty_set_term() {
        let f = FourierExpansion::constant(3, 0.5).unwrap();
        let g = f.compose(|y| y * y + 1.0, 20).unwrap();
        assert_eq!(g.terms().len(), 1);
        assert_eq!(g.terms()[0].0, 0);
        assert!((g.terms()[0].1 - 1.25).abs() < 1e-15);
    }

    #[test]
    fn truth_table_matches_direct_evaluation() {
        let f = FourierExpansion::from_subsets(
            4,
            &[(vec![], 0.5), (vec![0, 2], -1.5), (vec![1, 2, 3], 2.0), (vec![3], 0.25)],
        )
        .unwrap();
        let table = f.truth_table(20).unwrap();
        for (v, &t) in table.iter().enumerate() {
            assert!((t - f.eval_vertex(v)).abs() < 1e-12);
        }
        let back = FourierExpansion::from_truth_table(4, &table).unwrap();
        for (&(m, c), &(m2, c2)) in f.terms().iter().zip(back.terms()) {
            assert_eq!(m, m2);
            assert!((c - c2).abs() < 1e-14);
        }
    }

    #[test]
    fn caps_are_enforced() {
        let f = FourierExpansion::zero(12).unwrap();
        assert!(matches!(
            f.truth_table(10),
            Err(Error::CapExceeded { n: 12, cap: 10, .. })
        ));
        assert!(f.lipschitz_l1(11).is_err());
        assert!(f.lipschitz_l2(11).is_err());
        assert!(f.compose(|y| y, 11).is_err());
    }

    #[test]
    fn compose_rejects_non_finite_values() {
        let f = FourierExpansion::linear(&[1.0, 1.0]).unwrap();
        assert!(matches!(
            f.compose(|y| if y == 2.0 { f64::INFINITY } else { y }, 20),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn discrete_gradient_is_half_difference() {
        let f = FourierExpansion::from_subsets(3, &[(vec![0, 1], 1.0), (vec![2], 0.5), (vec![0, 1, 2], -0.75)])
            .unwrap();
        for v in 0..8 {
            let g = f.gradient_vertex(v);
            for (i, gi) in g.iter().enumerate() {
                let half = 0.5 * (f.eval_vertex(v | 1 << i) - f.eval_vertex(v & !(1 << i)));
                assert!((gi - half).abs() < 1e-14);
            }
        }
    }
}
