//! Seeded constructors for every graph family under study.
//!
//! All generators are pure functions of their configuration and seed: the
//! same [`GeneratorConfig`] always yields the same edge set, byte for byte,
//! on every platform (see [`crate::rng`]).

use std::fmt;
use std::ops::Range;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{FeedforwardGraph, NodeId};
use crate::rng::{tag, RngStream};

#[derive(Debug, Error, PartialEq)]
pub enum GeneratorError {
    #[error("expander degree must be at least 1")]
    InvalidDegree,
    #[error("{family} needs at least {min} nodes (got {n})")]
    TooFewNodes { family: Family, min: usize, n: usize },
    #[error("parameter `{param}` {reason}")]
    InvalidParameter { param: &'static str, reason: String },
    #[error("{family} requires the `{param}` parameter")]
    MissingParameter { family: Family, param: &'static str },
}

/// Graph family tag. Matches the JSON/CLI spelling via snake_case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    FullyConnected,
    LocallyConnected,
    Line,
    Star,
    ErdosRenyi,
    OrientedExpander,
    Poisson,
    Fs,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::FullyConnected => "fully_connected",
            Family::LocallyConnected => "locally_connected",
            Family::Line => "line",
            Family::Star => "star",
            Family::ErdosRenyi => "erdos_renyi",
            Family::OrientedExpander => "oriented_expander",
            Family::Poisson => "poisson",
            Family::Fs => "fs",
        }
    }

    /// Whether the seed changes the output at all.
    pub fn is_seeded(&self) -> bool {
        matches!(self, Family::ErdosRenyi | Family::OrientedExpander | Family::Poisson | Family::Fs)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// In-degree budget as a function of the graph size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndegreeSchedule {
    Constant(usize),
    KLogN(f64),
    SqrtN,
}

/// Resolves a schedule at size `n`: `c`, `ceil(k * log2 n)`, or `ceil(sqrt n)`.
pub fn default_indegree(n: usize, schedule: IndegreeSchedule) -> usize {
    match schedule {
        IndegreeSchedule::Constant(c) => c,
        IndegreeSchedule::KLogN(k) => (k * (n as f64).log2()).ceil() as usize,
        IndegreeSchedule::SqrtN => (n as f64).sqrt().ceil() as usize,
    }
}

fn default_true() -> bool {
    true
}

/// Declarative description of one graph. Parameters irrelevant to the
/// chosen family are ignored; relevant ones fall back to defaults where a
/// sensible one exists (see the field docs), except `p`, which `poisson`
/// must always state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub family: Family,
    pub n: usize,
    /// Window width for `locally_connected`; defaults to `ceil(log2 n)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<usize>,
    /// Skip probability in `[0, 1]` for `poisson`. No default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// In-degree budget for `erdos_renyi`/`poisson`; defaults to `ceil(log2 n)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    /// Matching count for `oriented_expander` (default `ceil(log2 n)`) and
    /// top-level expander degree for `fs` (default `ceil(4 log2 n)`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expander_degree: Option<usize>,
    /// Geometric decay of the `fs` expander degree across recursion levels;
    /// defaults to 1/2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fs_decay_ratio: Option<f64>,
    /// Block size at which the `fs` recursion switches to a fully connected
    /// fill; defaults to 4.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fs_base_threshold: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    /// Off switches to the degenerate no-self-edge mode, which validation
    /// flags and the metrics may reject.
    #[serde(default = "default_true")]
    pub self_edges: bool,
}

impl GeneratorConfig {
    pub fn new(family: Family, n: usize) -> Self {
        Self {
            family,
            n,
            kappa: None,
            p: None,
            budget: None,
            expander_degree: None,
            fs_decay_ratio: None,
            fs_base_threshold: None,
            seed: 0,
            self_edges: true,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn log2_budget(&self) -> usize {
        default_indegree(self.n, IndegreeSchedule::KLogN(1.0)).max(1)
    }

    /// The in-degree-controlling parameter actually in effect, after
    /// defaulting: `kappa` for locally connected graphs, `budget` for
    /// Erdos-Renyi and Poisson, the expander degree for expander and fs
    /// graphs, and 0 for families without such a knob.
    pub fn effective_indegree_budget(&self) -> usize {
        match self.family {
            Family::FullyConnected | Family::Line | Family::Star => 0,
            Family::LocallyConnected => self.kappa.unwrap_or_else(|| self.log2_budget()),
            Family::ErdosRenyi | Family::Poisson => self.budget.unwrap_or_else(|| self.log2_budget()),
            Family::OrientedExpander => self.expander_degree.unwrap_or_else(|| self.log2_budget()),
            Family::Fs => self
                .expander_degree
                .unwrap_or_else(|| default_indegree(self.n, IndegreeSchedule::KLogN(4.0)).max(1)),
        }
    }
}

/// Builds the configured graph.
pub fn generate(config: &GeneratorConfig) -> Result<FeedforwardGraph, GeneratorError> {
    if config.n == 0 {
        return Err(GeneratorError::TooFewNodes { family: config.family, min: 1, n: 0 });
    }
    let n = config.n;
    let g = match config.family {
        Family::FullyConnected => gen_fully_connected(n),
        Family::Line => gen_line(n),
        Family::Star => gen_star(n),
        Family::LocallyConnected => gen_locally_connected(n, config.effective_indegree_budget()),
        Family::ErdosRenyi => gen_erdos_renyi(n, config.effective_indegree_budget(), config.seed)?,
        Family::OrientedExpander => {
            gen_oriented_expander(n, config.effective_indegree_budget(), config.seed)?
        }
        Family::Poisson => {
            let p = config.p.ok_or(GeneratorError::MissingParameter {
                family: Family::Poisson,
                param: "p",
            })?;
            gen_poisson(n, p, config.effective_indegree_budget(), config.seed)?
        }
        Family::Fs => gen_fs(
            n,
            config.effective_indegree_budget(),
            config.fs_decay_ratio.unwrap_or(0.5),
            config.fs_base_threshold.unwrap_or(4),
            config.seed,
        )?,
    };
    if config.self_edges {
        Ok(g)
    } else {
        Ok(strip_self_edges(&g))
    }
}

fn strip_self_edges(g: &FeedforwardGraph) -> FeedforwardGraph {
    let edges = g.edges().filter(|&(a, b)| a != b).collect();
    FeedforwardGraph::new(g.n(), edges).expect("stripping self-edges keeps the graph valid")
}

/// Every allowed pair: `(a, b)` for all `a <= b`.
pub fn gen_fully_connected(n: usize) -> FeedforwardGraph {
    assert!(n >= 1);
    let mut edges = Vec::with_capacity(n * (n + 1) / 2);
    for a in 0..n as NodeId {
        for b in a..n as NodeId {
            edges.push((a, b));
        }
    }
    FeedforwardGraph::new(n, edges).expect("fully connected edges are valid")
}

/// All pairs within distance `kappa`: `(a, b)` with `b - kappa <= a <= b`.
pub fn gen_locally_connected(n: usize, kappa: usize) -> FeedforwardGraph {
    assert!(n >= 1);
    let mut edges = Vec::new();
    for b in 0..n {
        for a in b.saturating_sub(kappa)..=b {
            edges.push((a as NodeId, b as NodeId));
        }
    }
    FeedforwardGraph::new(n, edges).expect("locally connected edges are valid")
}

/// The `kappa = 1` special case of [`gen_locally_connected`].
pub fn gen_line(n: usize) -> FeedforwardGraph {
    gen_locally_connected(n, 1)
}

/// Self-edges plus a direct edge from every node into the sink.
pub fn gen_star(n: usize) -> FeedforwardGraph {
    assert!(n >= 1);
    let sink = (n - 1) as NodeId;
    let mut edges = Vec::with_capacity(2 * n);
    for i in 0..n as NodeId {
        edges.push((i, i));
        edges.push((i, sink));
    }
    FeedforwardGraph::new(n, edges).expect("star edges are valid")
}

/// Fixed-indegree Erdos-Renyi: node `i` receives its self-edge plus
/// `min(budget - 1, i)` predecessors drawn uniformly without replacement.
/// Extra sinks are expected for small budgets.
pub fn gen_erdos_renyi(n: usize, budget: usize, seed: u64) -> Result<FeedforwardGraph, GeneratorError> {
    if budget == 0 {
        return Err(GeneratorError::InvalidParameter {
            param: "budget",
            reason: "must be at least 1".into(),
        });
    }
    let stream = RngStream::new(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((i as NodeId, i as NodeId));
        let picks = (budget - 1).min(i);
        if picks > 0 {
            let mut rng = stream.substream(&[tag::ERDOS_RENYI, i as u64]);
            for j in index::sample(&mut rng, i, picks) {
                edges.push((j as NodeId, i as NodeId));
            }
        }
    }
    Ok(FeedforwardGraph::new(n, edges).expect("sampled edges are valid"))
}

/// Right-to-left Poisson scan: node `i` keeps its self-edge (counted toward
/// the budget) and then walks `j = i-1, i-2, ...`, adding `(j, i)` whenever a
/// uniform draw exceeds `p`, until the budget is exhausted.
pub fn gen_poisson(n: usize, p: f64, budget: usize, seed: u64) -> Result<FeedforwardGraph, GeneratorError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GeneratorError::InvalidParameter {
            param: "p",
            reason: format!("must lie in [0, 1], got {p}"),
        });
    }
    if budget == 0 {
        return Err(GeneratorError::InvalidParameter {
            param: "budget",
            reason: "must be at least 1".into(),
        });
    }
    let stream = RngStream::new(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((i as NodeId, i as NodeId));
        let mut taken = 1usize;
        let mut rng = stream.substream(&[tag::POISSON, i as u64]);
        let mut j = i as i64 - 1;
        while j >= 0 && taken < budget {
            let rho: f64 = rng.random();
            if rho > p {
                edges.push((j as NodeId, i as NodeId));
                taken += 1;
            }
            j -= 1;
        }
    }
    Ok(FeedforwardGraph::new(n, edges).expect("sampled edges are valid"))
}

/// Orients a random `d`-regular multigraph: the union of `d` random perfect
/// matchings (one node sits out per matching when `n` is odd) is relabeled
/// by a uniform permutation and every edge is pointed from the lower to the
/// higher label. Self-edges are added afterwards.
pub fn gen_oriented_expander(n: usize, d: usize, seed: u64) -> Result<FeedforwardGraph, GeneratorError> {
    if d == 0 {
        return Err(GeneratorError::InvalidDegree);
    }
    if n < 2 {
        return Err(GeneratorError::TooFewNodes { family: Family::OrientedExpander, min: 2, n });
    }
    let stream = RngStream::new(seed);
    let mut pairs: Vec<(NodeId, NodeId)> = Vec::with_capacity(d * (n / 2));
    for m in 0..d {
        let mut order: Vec<NodeId> = (0..n as NodeId).collect();
        order.shuffle(&mut stream.substream(&[tag::EXPANDER_MATCHING, m as u64]));
        for pair in order.chunks_exact(2) {
            pairs.push((pair[0], pair[1]));
        }
    }
    let mut relabel: Vec<NodeId> = (0..n as NodeId).collect();
    relabel.shuffle(&mut stream.substream(&[tag::EXPANDER_RELABEL]));

    let mut edges = Vec::with_capacity(pairs.len() + n);
    for i in 0..n as NodeId {
        edges.push((i, i));
    }
    for (u, v) in pairs {
        let (a, b) = (relabel[u as usize], relabel[v as usize]);
        edges.push((a.min(b), a.max(b)));
    }
    Ok(FeedforwardGraph::new(n, edges).expect("oriented edges are valid"))
}

/// Near-equal contiguous partition into `ceil(log2 n)` blocks (sizes differ
/// by at most one). Returns a single full-range block for `n <= 2`.
pub fn fs_block_partition(n: usize) -> Vec<Range<usize>> {
    let b = ceil_log2(n).max(1);
    let base = n / b;
    let rem = n % b;
    let mut blocks = Vec::with_capacity(b);
    let mut start = 0;
    for i in 0..b {
        let len = base + usize::from(i < rem);
        blocks.push(start..start + len);
        start += len;
    }
    blocks
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Recursive block-expander construction. Nodes split into `ceil(log2 n)`
/// contiguous blocks; consecutive blocks are joined by a bipartite expander
/// of `min(degree, |right block|)` concatenated random matchings; each block
/// is filled by the same construction with the degree rescaled by
/// `decay_ratio`, bottoming out in a fully connected fill at
/// `base_threshold`. A final pass adds all self-edges and repairs any
/// stranded non-sink node with an edge to its successor.
pub fn gen_fs(
    n: usize,
    expander_degree: usize,
    decay_ratio: f64,
    base_threshold: usize,
    seed: u64,
) -> Result<FeedforwardGraph, GeneratorError> {
    if expander_degree == 0 {
        return Err(GeneratorError::InvalidDegree);
    }
    if !(decay_ratio > 0.0 && decay_ratio < 1.0) {
        return Err(GeneratorError::InvalidParameter {
            param: "fs_decay_ratio",
            reason: format!("must lie in (0, 1), got {decay_ratio}"),
        });
    }
    if base_threshold == 0 {
        return Err(GeneratorError::InvalidParameter {
            param: "fs_base_threshold",
            reason: "must be at least 1".into(),
        });
    }
    let stream = RngStream::new(seed);
    let mut edges = Vec::new();
    fill_fs(&mut edges, 0, n, expander_degree, decay_ratio, base_threshold, &stream, 0);
    for i in 0..n as NodeId {
        edges.push((i, i));
    }

    // Sink repair: the recursion can strand a block-final node with only its
    // self-edge; reconnect it to its nearest successor.
    let mut has_forward = vec![false; n];
    for &(a, b) in &edges {
        if a != b {
            has_forward[a as usize] = true;
        }
    }
    for (i, &ok) in has_forward.iter().enumerate().take(n.saturating_sub(1)) {
        if !ok {
            edges.push((i as NodeId, (i + 1) as NodeId));
        }
    }
    Ok(FeedforwardGraph::new(n, edges).expect("fs edges are valid"))
}

#[allow(clippy::too_many_arguments)]
fn fill_fs(
    edges: &mut Vec<(NodeId, NodeId)>,
    start: usize,
    len: usize,
    degree: usize,
    decay_ratio: f64,
    base_threshold: usize,
    stream: &RngStream,
    level: u64,
) {
    if len <= base_threshold || ceil_log2(len) < 2 {
        for a in 0..len {
            for b in a + 1..len {
                edges.push(((start + a) as NodeId, (start + b) as NodeId));
            }
        }
        return;
    }
    let blocks = fs_block_partition(len);
    for w in blocks.windows(2) {
        let (left, right) = (&w[0], &w[1]);
        let k = degree.min(right.len());
        for m in 0..k {
            let rng_path =
                [tag::FS_MATCHING, level, (start + left.start) as u64, m as u64];
            bipartite_matching(
                edges,
                start + left.start..start + left.end,
                start + right.start..start + right.end,
                &mut stream.substream(&rng_path),
            );
        }
    }
    let next_degree = ((degree as f64 * decay_ratio).round() as usize).max(1);
    for block in blocks {
        fill_fs(
            edges,
            start + block.start,
            block.len(),
            next_degree,
            decay_ratio,
            base_threshold,
            stream,
            level + 1,
        );
    }
}

/// One random matching between two consecutive node ranges. Equal sizes
/// give a perfect matching; otherwise the larger side is reduced cyclically
/// onto the smaller one so every node on both sides is covered at least
/// once. Edges always point from the earlier range into the later one.
fn bipartite_matching(
    edges: &mut Vec<(NodeId, NodeId)>,
    left: Range<usize>,
    right: Range<usize>,
    rng: &mut impl Rng,
) {
    let mut ls: Vec<NodeId> = left.map(|v| v as NodeId).collect();
    let mut rs: Vec<NodeId> = right.map(|v| v as NodeId).collect();
    ls.shuffle(rng);
    rs.shuffle(rng);
    if ls.len() >= rs.len() {
        for (idx, &u) in ls.iter().enumerate() {
            edges.push((u, rs[idx % rs.len()]));
        }
    } else {
        for (idx, &v) in rs.iter().enumerate() {
            edges.push((ls[idx % ls.len()], v));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fully_connected_small() {
        assert_eq!(gen_fully_connected(1).edges().collect::<Vec<_>>(), vec![(0, 0)]);
        assert_eq!(
            gen_fully_connected(3).edges().collect::<Vec<_>>(),
            vec![(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
        );
        let g = gen_fully_connected(5);
        let in_degrees: Vec<usize> = (0..5).map(|i| g.in_degree(i)).collect();
        assert_eq!(in_degrees, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn locally_connected_cases() {
        assert_eq!(gen_locally_connected(3, 1), gen_line(3));
        let kappa0 = gen_locally_connected(4, 0);
        assert_eq!(kappa0.edge_count(), 4);
        assert!(kappa0.edges().all(|(a, b)| a == b));
        let g = gen_locally_connected(10, 2);
        assert_eq!(g.in_neighbors(5), &[3, 4, 5]);
        assert_eq!(g.in_degree(5), 3);
        assert_eq!(g.out_degree(5), 3);
    }

    #[test]
    fn locally_connected_equals_fully_connected_for_tiny_n() {
        for n in 1..=2 {
            assert_eq!(gen_locally_connected(n, 1), gen_fully_connected(n));
        }
        assert_ne!(gen_locally_connected(3, 1), gen_fully_connected(3));
    }

    #[test]
    fn star_shape() {
        assert_eq!(gen_star(1).edges().collect::<Vec<_>>(), vec![(0, 0)]);
        let g = gen_star(4);
        let expected = vec![(0, 0), (0, 3), (1, 1), (1, 3), (2, 2), (2, 3), (3, 3)];
        assert_eq!(g.edges().collect::<Vec<_>>(), expected);
        let report = g.validate();
        assert!(report.unique_sink);
        assert_eq!(report.sinks, vec![3]);
    }

    #[test]
    fn erdos_renyi_budget_saturation() {
        // budget >= n exhausts every predecessor: the result is fully connected.
        let g = gen_erdos_renyi(6, 6, 7).unwrap();
        assert_eq!(g, gen_fully_connected(6));
        // budget = 1 leaves only self-edges.
        let g1 = gen_erdos_renyi(5, 1, 7).unwrap();
        assert_eq!(g1.edge_count(), 5);
        assert_eq!(g1.validate().sinks.len(), 5);
    }

    #[test]
    fn erdos_renyi_respects_budget_and_makes_extra_sinks() {
        let budget = 10; // ceil(log2 1024)
        let mut non_unique = 0;
        for seed in 0..20 {
            let g = gen_erdos_renyi(1024, budget, seed).unwrap();
            for i in 0..1024u32 {
                assert!(g.in_degree(i) <= budget);
                assert_eq!(g.in_degree(i), budget.min(i as usize + 1));
            }
            if !g.validate().unique_sink {
                non_unique += 1;
            }
        }
        assert!(non_unique >= 19, "only {non_unique}/20 seeds had extra sinks");
    }

    #[test]
    fn oriented_expander_small_cases() {
        assert_eq!(gen_oriented_expander(4, 0, 0).unwrap_err(), GeneratorError::InvalidDegree);
        let g = gen_oriented_expander(2, 1, 123).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 0), (0, 1), (1, 1)]);
    }

    #[test]
    fn oriented_expander_mean_indegree() {
        // Each undirected edge lands as an in-edge on exactly one endpoint,
        // so the mean non-self in-degree is about d/2.
        let (n, d) = (512usize, 8usize);
        let mut total = 0usize;
        for seed in 0..20 {
            let g = gen_oriented_expander(n, d, seed).unwrap();
            total += g.edge_count() - n;
        }
        let mean = total as f64 / (20.0 * n as f64);
        assert!((mean - d as f64 / 2.0).abs() < 0.1, "mean non-self in-degree {mean}");
    }

    #[test]
    fn poisson_degenerate_cases() {
        // p = 0 accepts every predecessor until the budget is used up.
        let g = gen_poisson(4, 0.0, 2, 3).unwrap();
        for i in 1..4u32 {
            assert_eq!(g.in_neighbors(i), &[i - 1, i]);
        }
        // p = 1 never accepts: a uniform draw in [0, 1) cannot exceed 1.
        let g1 = gen_poisson(8, 1.0, 4, 3).unwrap();
        assert_eq!(g1.edge_count(), 8);
        assert!(g1.edges().all(|(a, b)| a == b));
    }

    #[test]
    fn poisson_gap_expectation() {
        // Gaps between consecutive accepted predecessors are geometric with
        // success probability 1 - p, so their mean is 1/(1 - p) = 1.25.
        let budget = 10;
        let mut gaps = 0usize;
        let mut gap_total = 0usize;
        for seed in 0..20 {
            let g = gen_poisson(1024, 0.2, budget, seed).unwrap();
            for i in (64..1024).step_by(7) {
                let preds = g.in_neighbors(i as NodeId);
                for w in preds.windows(2) {
                    gaps += 1;
                    gap_total += (w[1] - w[0]) as usize;
                }
            }
        }
        let mean = gap_total as f64 / gaps as f64;
        assert!((mean - 1.25).abs() < 0.05, "mean gap {mean}");
    }

    #[test]
    fn poisson_respects_budget() {
        for seed in 0..5 {
            let g = gen_poisson(256, 0.2, 6, seed).unwrap();
            for i in 0..256u32 {
                assert!(g.in_degree(i) <= 6);
            }
        }
    }

    #[test]
    fn fs_base_case_is_fully_connected() {
        for n in 1..=4 {
            let g = gen_fs(n, 4, 0.5, 4, 9).unwrap();
            assert_eq!(g, gen_fully_connected(n));
        }
    }

    #[test]
    fn fs_16_structure() {
        let g = gen_fs(16, 4, 0.5, 4, 11).unwrap();
        let blocks = fs_block_partition(16);
        assert_eq!(blocks, vec![0..4, 4..8, 8..12, 12..16]);
        let block_of = |v: NodeId| (v / 4) as usize;
        for (a, b) in g.edges() {
            let (ba, bb) = (block_of(a), block_of(b));
            assert!(bb == ba || bb == ba + 1, "edge ({a}, {b}) skips blocks");
            if ba == bb {
                // Intra-block edges are the fully connected fill.
                continue;
            }
        }
        // Each block is fully connected internally.
        for blk in 0..4u32 {
            for a in blk * 4..blk * 4 + 4 {
                for b in a..blk * 4 + 4 {
                    assert!(g.has_edge(a, b), "missing intra-block edge ({a}, {b})");
                }
            }
        }
        assert!(g.validate().unique_sink);
    }

    #[test]
    fn fs_block_partition_counts() {
        for n in 2..200usize {
            let blocks = fs_block_partition(n);
            assert_eq!(blocks.len(), ceil_log2(n).max(1));
            assert_eq!(blocks.iter().map(|b| b.len()).sum::<usize>(), n);
            let sizes: Vec<usize> = blocks.iter().map(|b| b.len()).collect();
            let (min, max) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
            assert!(max - min <= 1);
        }
    }

    #[test]
    fn fs_indegree_stays_logarithmic() {
        // Geometric decay keeps the total in-degree near k/(1-r) = 2k.
        let n = 1024;
        let degree = 40; // 4 * log2(1024)
        for seed in 0..5 {
            let g = gen_fs(n, degree, 0.5, 4, seed).unwrap();
            let max_in = (0..n as NodeId).map(|i| g.in_degree(i)).max().unwrap();
            assert!(max_in <= 2 * degree, "seed {seed}: max in-degree {max_in}");
            assert!(g.validate().unique_sink, "seed {seed}");
        }
    }

    #[test]
    fn fs_always_unique_sink() {
        for n in [2usize, 3, 5, 9, 17, 33, 100, 257] {
            for seed in 0..3 {
                let g = gen_fs(n, 3, 0.5, 2, seed).unwrap();
                let report = g.validate();
                assert!(report.unique_sink, "n={n} seed={seed}: sinks {:?}", report.sinks);
                assert!(report.has_all_self_edges);
            }
        }
    }

    #[test]
    fn generate_is_deterministic() {
        for family in [
            Family::FullyConnected,
            Family::LocallyConnected,
            Family::Line,
            Family::Star,
            Family::ErdosRenyi,
            Family::OrientedExpander,
            Family::Poisson,
            Family::Fs,
        ] {
            let mut config = GeneratorConfig::new(family, 100).with_seed(77);
            config.p = Some(0.2);
            let a = generate(&config).unwrap();
            let b = generate(&config).unwrap();
            assert_eq!(a.to_text(), b.to_text(), "{family} is not deterministic");
        }
    }

    #[test]
    fn generate_without_self_edges() {
        let mut config = GeneratorConfig::new(Family::Line, 5);
        config.self_edges = false;
        let g = generate(&config).unwrap();
        assert!(g.edges().all(|(a, b)| a != b));
        assert!(!g.validate().has_all_self_edges);
    }

    #[test]
    fn generate_requires_p_for_poisson() {
        let config = GeneratorConfig::new(Family::Poisson, 8);
        assert_eq!(
            generate(&config).unwrap_err(),
            GeneratorError::MissingParameter { family: Family::Poisson, param: "p" }
        );
    }

    #[test]
    fn indegree_schedules() {
        assert_eq!(default_indegree(256, IndegreeSchedule::KLogN(4.0)), 32);
        assert_eq!(default_indegree(1024, IndegreeSchedule::SqrtN), 32);
        assert_eq!(default_indegree(999, IndegreeSchedule::Constant(3)), 3);
    }

    #[test]
    fn config_json_round_trip() {
        let mut config = GeneratorConfig::new(Family::Poisson, 64).with_seed(5);
        config.p = Some(0.2);
        config.budget = Some(6);
        let json = serde_json::to_string(&config).unwrap();
        let back: GeneratorConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, config);
        let err = serde_json::from_str::<GeneratorConfig>("{\"family\":\"warp\",\"n\":4}");
        assert!(err.is_err());
    }
}
