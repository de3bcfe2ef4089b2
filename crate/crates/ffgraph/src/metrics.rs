//! The two suitability measures: averaged mixing time and minimax fidelity.
//!
//! Both are computed from the sink row of an operator power, maintained by
//! an `O(m)`-per-step row-vector iteration instead of materialized matrix
//! powers. The walk operator normalizes the adjacency matrix by sender
//! out-degree (column-stochastic); the diffusion operator normalizes by
//! receiver in-degree (row-stochastic). Per-step updates may fan out over
//! nodes (see [`crate::parallel`]); the step sequence itself is ordered.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{FeedforwardGraph, NodeId};
use crate::parallel;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("node {node} has no outgoing edges, so the walk operator is undefined")]
    ZeroOutDegree { node: NodeId },
    #[error("node {node} has no incoming edges, so the diffusion operator is undefined")]
    ZeroInDegree { node: NodeId },
    #[error("n = {n} exceeds the dense-computation limit of {limit}")]
    SizeLimit { n: usize, limit: usize },
}

/// Distance convention for the mixing threshold. `missmass` measures the
/// average probability of not having reached the sink; `l1` is the average
/// L1 distance to the point mass at the sink, which is exactly twice the
/// miss mass whenever the walk operator is column-stochastic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    L1,
    #[default]
    Missmass,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Convention::L1 => f.write_str("l1"),
            Convention::Missmass => f.write_str("missmass"),
        }
    }
}

/// Column-normalized walk operator: `w_ij = 1/outdeg(j)` iff `(j, i)` is an edge.
pub struct WalkOperator<'g> {
    g: &'g FeedforwardGraph,
    inv_out: Vec<f64>,
}

impl<'g> WalkOperator<'g> {
    pub fn new(g: &'g FeedforwardGraph) -> Result<Self, MetricError> {
        let mut inv_out = Vec::with_capacity(g.n());
        for j in 0..g.n() as NodeId {
            let d = g.out_degree(j);
            if d == 0 {
                return Err(MetricError::ZeroOutDegree { node: j });
            }
            inv_out.push(1.0 / d as f64);
        }
        Ok(Self { g, inv_out })
    }

    pub fn entry(&self, i: NodeId, j: NodeId) -> f64 {
        if self.g.has_edge(j, i) {
            self.inv_out[j as usize]
        } else {
            0.0
        }
    }

    /// One step of the sink-row iteration:
    /// `next[j] = (1/outdeg(j)) * sum over out-neighbors k of cur[k]`.
    fn step(&self, cur: &[f64], next: &mut [f64], parallel: bool) {
        let g = self.g;
        let inv_out = &self.inv_out;
        parallel::fill_indexed(next, parallel, |j| {
            let sum: f64 = g
                .out_neighbors(j as NodeId)
                .iter()
                .map(|&k| cur[k as usize])
                .sum();
            sum * inv_out[j]
        });
    }
}

/// Row-normalized diffusion operator: `d_ij = 1/indeg(i)` iff `(j, i)` is an edge.
pub struct DiffusionOperator<'g> {
    g: &'g FeedforwardGraph,
    inv_in: Vec<f64>,
}

impl<'g> DiffusionOperator<'g> {
    pub fn new(g: &'g FeedforwardGraph) -> Result<Self, MetricError> {
        let mut inv_in = Vec::with_capacity(g.n());
        for i in 0..g.n() as NodeId {
            let d = g.in_degree(i);
            if d == 0 {
                return Err(MetricError::ZeroInDegree { node: i });
            }
            inv_in.push(1.0 / d as f64);
        }
        Ok(Self { g, inv_in })
    }

    pub fn entry(&self, i: NodeId, j: NodeId) -> f64 {
        if self.g.has_edge(j, i) {
            self.inv_in[i as usize]
        } else {
            0.0
        }
    }

    /// One step of the sink-row iteration:
    /// `next[u] = sum over out-neighbors v of cur[v] / indeg(v)`.
    fn step(&self, cur: &[f64], next: &mut [f64], parallel: bool) {
        let g = self.g;
        let inv_in = &self.inv_in;
        parallel::fill_indexed(next, parallel, |u| {
            g.out_neighbors(u as NodeId)
                .iter()
                .map(|&v| cur[v as usize] * inv_in[v as usize])
                .sum()
        });
    }
}

/// Streaming iteration over the sink row of successive walk-operator powers:
/// after `t` steps, `row()[i]` is the probability that a random walk started
/// at `i` sits at the sink.
pub struct TauRowWalk<'g> {
    op: WalkOperator<'g>,
    cur: Vec<f64>,
    next: Vec<f64>,
    t: usize,
    parallel: bool,
}

impl<'g> TauRowWalk<'g> {
    pub fn new(g: &'g FeedforwardGraph) -> Result<Self, MetricError> {
        let op = WalkOperator::new(g)?;
        let mut cur = vec![0.0; g.n()];
        cur[g.sink() as usize] = 1.0;
        let parallel = parallel::parallelize_step(g.edge_count());
        Ok(Self { op, next: vec![0.0; g.n()], cur, t: 0, parallel })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn row(&self) -> &[f64] {
        &self.cur
    }

    pub fn advance(&mut self) {
        self.op.step(&self.cur, &mut self.next, self.parallel);
        std::mem::swap(&mut self.cur, &mut self.next);
        self.t += 1;
    }
}

/// Streaming iteration over the sink row of successive diffusion-operator
/// powers: after `t` steps, `row()[i]` is the fidelity of node `i`.
pub struct TauRowDiffusion<'g> {
    op: DiffusionOperator<'g>,
    cur: Vec<f64>,
    next: Vec<f64>,
    t: usize,
    parallel: bool,
}

impl<'g> TauRowDiffusion<'g> {
    pub fn new(g: &'g FeedforwardGraph) -> Result<Self, MetricError> {
        let op = DiffusionOperator::new(g)?;
        let mut cur = vec![0.0; g.n()];
        cur[g.sink() as usize] = 1.0;
        let parallel = parallel::parallelize_step(g.edge_count());
        Ok(Self { op, next: vec![0.0; g.n()], cur, t: 0, parallel })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn row(&self) -> &[f64] {
        &self.cur
    }

    pub fn advance(&mut self) {
        self.op.step(&self.cur, &mut self.next, self.parallel);
        std::mem::swap(&mut self.cur, &mut self.next);
        self.t += 1;
    }
}

/// Collects the sink rows of `W^0 .. W^t_max`. Memory is `O(t_max * n)`;
/// the metric functions below stream instead.
pub fn tau_row_walk(g: &FeedforwardGraph, t_max: usize) -> Result<Vec<Vec<f64>>, MetricError> {
    let mut walk = TauRowWalk::new(g)?;
    let mut rows = Vec::with_capacity(t_max + 1);
    rows.push(walk.row().to_vec());
    for _ in 0..t_max {
        walk.advance();
        rows.push(walk.row().to_vec());
    }
    Ok(rows)
}

/// Collects the sink rows of `D^0 .. D^t_max`.
pub fn tau_row_diffusion(g: &FeedforwardGraph, t_max: usize) -> Result<Vec<Vec<f64>>, MetricError> {
    let mut diffusion = TauRowDiffusion::new(g)?;
    let mut rows = Vec::with_capacity(t_max + 1);
    rows.push(diffusion.row().to_vec());
    for _ in 0..t_max {
        diffusion.advance();
        rows.push(diffusion.row().to_vec());
    }
    Ok(rows)
}

/// Result of a mixing-time measurement. `mixing_time` is `None` when the
/// threshold was never crossed within the horizon; the JSON form encodes
/// that as `-1`. `trace` holds the averaged distance at every step, up to
/// and including the reported time (or the full horizon).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingReport {
    #[serde(with = "step_or_minus_one")]
    pub mixing_time: Option<usize>,
    pub horizon: usize,
    pub convention: Convention,
    pub epsilon: f64,
    pub trace: Vec<f64>,
}

mod step_or_minus_one {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<usize>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(t) => s.serialize_i64(*t as i64),
            None => s.serialize_i64(-1),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<usize>, D::Error> {
        let raw = i64::deserialize(d)?;
        Ok(if raw < 0 { None } else { Some(raw as usize) })
    }
}

/// Default mixing threshold.
pub const DEFAULT_EPSILON: f64 = 0.25;
/// Default mixing horizon, as a multiple of `n`. The slowest family studied
/// mixes in `Theta(n)`; 8n leaves headroom before reporting not-mixed.
pub const DEFAULT_MIXING_HORIZON_MULT: f64 = 8.0;
/// Default fidelity horizon, as a multiple of `n`. The line graph's minimax
/// node peaks near `2(n-2)`; 4n doubles that.
pub const DEFAULT_FIDELITY_HORIZON_MULT: f64 = 4.0;

/// Smallest `t` at which the start-averaged distance between the `t`-step
/// walk and the sink point mass drops below `epsilon`.
///
/// Under `missmass` the distance is `(1/n) * sum_i (1 - (W^t)_{tau,i})`;
/// under `l1` it is twice that, the exact L1 distance for a
/// column-stochastic walk operator.
pub fn averaged_mixing_time(
    g: &FeedforwardGraph,
    epsilon: f64,
    convention: Convention,
    horizon: usize,
) -> Result<MixingReport, MetricError> {
    let mut walk = TauRowWalk::new(g)?;
    let n = g.n() as f64;
    let scale = match convention {
        Convention::Missmass => 1.0,
        Convention::L1 => 2.0,
    };
    let mut trace = Vec::new();
    let mut mixing_time = None;
    loop {
        let t = walk.t();
        let miss: f64 = walk.row().iter().map(|&r| 1.0 - r).sum::<f64>() / n;
        let value = scale * miss;
        trace.push(value);
        if value < epsilon {
            mixing_time = Some(t);
            break;
        }
        if t >= horizon {
            break;
        }
        walk.advance();
    }
    Ok(MixingReport { mixing_time, horizon, convention, epsilon, trace })
}

/// Per-node best-case fidelity and the minimax summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    /// `phi[i] = max_t (D^t)_{tau,i}` over `t` in `[0, horizon]`.
    pub phi: Vec<f64>,
    /// Step at which each node attains its maximum (earliest, on ties).
    pub argmax_t: Vec<usize>,
    pub minimax: f64,
    /// Node attaining the minimax; ties break toward the smallest index.
    pub argmin_node: NodeId,
    /// `n * minimax`, so a fully connected graph scores exactly 1.
    pub normalized_minimax: f64,
    pub horizon: usize,
}

/// Tracks every node's running-max fidelity over `t in [0, horizon]` and
/// reports the minimum over nodes (the sink included; its fidelity is 1 at
/// `t = 0`).
pub fn fidelity_report(g: &FeedforwardGraph, horizon: usize) -> Result<FidelityReport, MetricError> {
    let mut diffusion = TauRowDiffusion::new(g)?;
    let n = g.n();
    let mut phi = diffusion.row().to_vec();
    let mut argmax_t = vec![0usize; n];
    for _ in 0..horizon {
        diffusion.advance();
        let t = diffusion.t();
        let row = diffusion.row();
        for i in 0..n {
            if row[i] > phi[i] {
                phi[i] = row[i];
                argmax_t[i] = t;
            }
        }
    }
    let mut argmin_node = 0usize;
    for i in 1..n {
        if phi[i] < phi[argmin_node] {
            argmin_node = i;
        }
    }
    let minimax = phi[argmin_node];
    Ok(FidelityReport {
        minimax,
        argmin_node: argmin_node as NodeId,
        normalized_minimax: n as f64 * minimax,
        horizon,
        phi,
        argmax_t,
    })
}

/// The walk operator is lower triangular, so its spectrum is its diagonal:
/// the multiset of reciprocal out-degrees, returned in ascending order.
pub fn walk_spectrum(g: &FeedforwardGraph) -> Result<Vec<f64>, MetricError> {
    let mut degrees = Vec::with_capacity(g.n());
    for j in 0..g.n() as NodeId {
        let d = g.out_degree(j);
        if d == 0 {
            return Err(MetricError::ZeroOutDegree { node: j });
        }
        degrees.push(d);
    }
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    Ok(degrees.into_iter().map(|d| 1.0 / d as f64).collect())
}

/// Dense exact-integer matrix of path counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountMatrix {
    n: usize,
    data: Vec<BigUint>,
}

impl CountMatrix {
    fn identity(n: usize) -> Self {
        let mut data = vec![BigUint::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigUint::one();
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry (row `i`, column `j`): the number of oriented paths `j -> i`.
    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.data[i * self.n + j]
    }
}

pub const PATH_COUNT_SIZE_LIMIT: usize = 2048;

/// `A^t` with exact integer entries: entry `(i, j)` counts oriented paths of
/// length `t` from `j` to `i`.
pub fn path_count(g: &FeedforwardGraph, t: usize) -> Result<CountMatrix, MetricError> {
    let n = g.n();
    if n > PATH_COUNT_SIZE_LIMIT {
        return Err(MetricError::SizeLimit { n, limit: PATH_COUNT_SIZE_LIMIT });
    }
    let mut cur = CountMatrix::identity(n);
    for _ in 0..t {
        let mut next = vec![BigUint::zero(); n * n];
        // Row i of A*C is the sum of C's rows over i's in-neighbors.
        for i in 0..n {
            let row = &mut next[i * n..(i + 1) * n];
            for &k in g.in_neighbors(i as NodeId) {
                let src = &cur.data[k as usize * n..(k as usize + 1) * n];
                for (dst, s) in row.iter_mut().zip(src) {
                    *dst += s;
                }
            }
        }
        cur.data = next;
    }
    Ok(cur)
}
