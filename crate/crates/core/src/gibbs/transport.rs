// Wasserstein-1 on the hypercube with Hamming ground cost.
//
// Hamming distance is the shortest-path metric of the cube graph, so the
// transport problem is an uncapacitated min-cost flow on the `n·2^n` cube
// arcs with unit cost. Masses are scaled to integers (denominator 10^12) and
// the flow is solved by successive shortest paths with Dijkstra potentials.
// The final potentials are a 1-Lipschitz dual whose value equals the primal
// cost in exact integer arithmetic.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::DenseMeasure;
use crate::{Error, Result};

pub const MASS_SCALE: i64 = 1_000_000_000_000;

const INF_CAP: i64 = i64::MAX / 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transport {
    /// Expected Hamming distance under the coupling found.
    pub cost: f64,
    /// True for the optimal solver, false for the greedy upper bound.
    pub exact: bool,
    /// Kantorovich potentials on the vertices (exact solver only).
    pub dual: Option<Vec<f64>>,
    /// Dual is 1-Lipschitz and its value matches the primal cost.
    pub certified: bool,
}

/// Integer masses summing to `MASS_SCALE`, residual put on the largest atom.
fn to_units(probs: &[f64]) -> Vec<i64> {
    let mut units: Vec<i64> = probs.iter().map(|p| (p * MASS_SCALE as f64).round() as i64).collect();
    let total: i64 = units.iter().sum();
    let (arg, _) = probs
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(ai, am), (i, &p)| if p > am { (i, p) } else { (ai, am) });
    units[arg] += MASS_SCALE - total;
    units
}

struct Network {
    to: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Self { to: Vec::new(), cap: Vec::new(), cost: Vec::new(), adj: vec![Vec::new(); nodes] }
    }

    /// Adds `u → v` and its residual twin; edge ids `e` and `e ^ 1`.
    fn add(&mut self, u: usize, v: usize, cap: i64, cost: i64) {
        let e = self.to.len();
        self.to.extend([v, u]);
        self.cap.extend([cap, 0]);
        self.cost.extend([cost, -cost]);
        self.adj[u].push(e);
        self.adj[v].push(e + 1);
    }
}

fn check_dims(a: &DenseMeasure, b: &DenseMeasure) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), got: b.n() });
    }
    Ok(())
}

/// Optimal transport cost between two measures with `n ≤ cap`.
pub fn w1_exact(a: &DenseMeasure, b: &DenseMeasure, cap: usize) -> Result<Transport> {
    check_dims(a, b)?;
    let n = a.n();
    if n > cap {
        return Err(Error::CapExceeded { what: "exact transport", n, cap });
    }
    let states = 1usize << n;
    let ua = to_units(a.probs());
    let ub = to_units(b.probs());
    let (source, sink) = (states, states + 1);
    let mut net = Network::new(states + 2);
    for v in 0..states {
        for i in 0..n {
            net.add(v, v ^ (1 << i), INF_CAP, 1);
        }
    }
    let mut remaining = 0i64;
    for v in 0..states {
        let s = ua[v] - ub[v];
        if s > 0 {
            net.add(source, v, s, 0);
            remaining += s;
        } else if s < 0 {
            net.add(v, sink, -s, 0);
        }
    }

    let nodes = states + 2;
    let mut h = vec![0i64; nodes];
    let mut dist = vec![i64::MAX; nodes];
    let mut prev_edge = vec![usize::MAX; nodes];
    let mut cost_units: i128 = 0;
    while remaining > 0 {
        dist.iter_mut().for_each(|d| *d = i64::MAX);
        dist[source] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0i64, source)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &e in &net.adj[u] {
                if net.cap[e] == 0 {
                    continue;
                }
                let v = net.to[e];
                let nd = d + net.cost[e] + h[u] - h[v];
                if nd < dist[v] {
                    dist[v] = nd;
                    prev_edge[v] = e;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        if dist[sink] == i64::MAX {
            return Err(Error::InvalidInput("transport network disconnected".into()));
        }
        for (hv, &dv) in h.iter_mut().zip(&dist) {
            if dv != i64::MAX {
                *hv += dv;
            }
        }
        let mut push = remaining;
        let mut v = sink;
        while v != source {
            let e = prev_edge[v];
            push = push.min(net.cap[e]);
            v = net.to[e ^ 1];
        }
        let mut v = sink;
        while v != source {
            let e = prev_edge[v];
            net.cap[e] -= push;
            net.cap[e ^ 1] += push;
            cost_units += push as i128 * net.cost[e] as i128;
            v = net.to[e ^ 1];
        }
        remaining -= push;
    }

    // potentials of the last search; unchanged (zero) when nothing moved
    let phi: Vec<i64> = h[..states].to_vec();
    let lipschitz = (0..states).all(|v| (0..n).all(|i| (phi[v] - phi[v ^ (1 << i)]).abs() <= 1));
    let dual_units: i128 = (0..states).map(|v| phi[v] as i128 * (ub[v] - ua[v]) as i128).sum();
    Ok(Transport {
        cost: cost_units as f64 / MASS_SCALE as f64,
        exact: true,
        dual: Some(phi.iter().map(|&x| x as f64).collect()),
        certified: lipschitz && dual_units == cost_units,
    })
}

/// Feasible (generally suboptimal) cost: sweep the net mass along each axis in turn.
pub fn w1_greedy_upper(a: &DenseMeasure, b: &DenseMeasure) -> Result<Transport> {
    check_dims(a, b)?;
    let n = a.n();
    let mut r: Vec<f64> = a.probs().iter().zip(b.probs()).map(|(p, q)| p - q).collect();
    let mut cost = 0.0;
    for i in 0..n {
        let bit = 1usize << i;
        for v in 0..r.len() {
            if v & bit != 0 && r[v] != 0.0 {
                cost += r[v].abs();
                r[v ^ bit] += r[v];
                r[v] = 0.0;
            }
        }
    }
    Ok(Transport { cost, exact: false, dual: None, certified: false })
}

/// Exact below the cap; above it, the greedy bound if `allow_greedy`, else an error.
pub fn w1(a: &DenseMeasure, b: &DenseMeasure, cap: usize, allow_greedy: bool) -> Result<Transport> {
    if a.n() > cap && allow_greedy {
        return w1_greedy_upper(a, b);
    }
    w1_exact(a, b, cap)
}
