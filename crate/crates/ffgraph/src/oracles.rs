//! Independent brute-force references for validating the metric engines:
//! dense matrix powers, Monte Carlo walks, exhaustive path enumeration, and
//! exact closed forms. Everything here recomputes from first principles and
//! shares no code path with the row-vector engines it checks.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

use crate::graph::{FeedforwardGraph, NodeId};
use crate::metrics::{averaged_mixing_time, Convention, MetricError, TauRowDiffusion};
use crate::parallel;
use crate::rng::{tag, RngStream};

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("precondition failed: {reason}")]
    PreconditionFailed { reason: String },
    #[error("n = {n} exceeds the oracle limit of {limit}")]
    SizeLimit { n: usize, limit: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

fn precondition(reason: impl Into<String>) -> OracleError {
    OracleError::PreconditionFailed { reason: reason.into() }
}

/// Dense row-major matrix; row = receiver, column = sender, matching the
/// lower-triangular adjacency convention.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn col_sum(&self, j: usize) -> f64 {
        (0..self.n).map(|i| self.get(i, j)).sum()
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.row(i).iter().sum()
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = DenseMatrix::zeros(n);
        let go_parallel = n >= 64;
        parallel::for_each_chunk_mut(&mut out.data, n, go_parallel, |i, row| {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a != 0.0 {
                    let src = &other.data[k * n..(k + 1) * n];
                    for (dst, &b) in row.iter_mut().zip(src) {
                        *dst += a * b;
                    }
                }
            }
        });
        out
    }

    /// `y = M x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(&m, &v)| m * v).sum())
            .collect()
    }
}

/// Which operator to densify.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// Raw adjacency: entry `(i, j)` is 1 iff edge `(j, i)` exists.
    Adjacency,
    /// Column-normalized walk operator.
    Walk,
    /// Row-normalized diffusion operator.
    Diffusion,
}

pub const DENSE_SIZE_LIMIT: usize = 512;

/// Materializes the chosen operator straight from the edge set.
pub fn dense_operator(g: &FeedforwardGraph, kind: OperatorKind) -> Result<DenseMatrix, OracleError> {
    let n = g.n();
    if n > DENSE_SIZE_LIMIT {
        return Err(OracleError::SizeLimit { n, limit: DENSE_SIZE_LIMIT });
    }
    let mut m = DenseMatrix::zeros(n);
    for (src, dst) in g.edges() {
        let value = match kind {
            OperatorKind::Adjacency => 1.0,
            OperatorKind::Walk => {
                let d = g.out_degree(src);
                debug_assert!(d > 0);
                1.0 / d as f64
            }
            OperatorKind::Diffusion => {
                let d = g.in_degree(dst);
                debug_assert!(d > 0);
                1.0 / d as f64
            }
        };
        m.set(dst as usize, src as usize, value);
    }
    match kind {
        OperatorKind::Walk => {
            for j in 0..n as NodeId {
                if g.out_degree(j) == 0 {
                    return Err(MetricError::ZeroOutDegree { node: j }.into());
                }
            }
        }
        OperatorKind::Diffusion => {
            for i in 0..n as NodeId {
                if g.in_degree(i) == 0 {
                    return Err(MetricError::ZeroInDegree { node: i }.into());
                }
            }
        }
        OperatorKind::Adjacency => {}
    }
    Ok(m)
}

/// `M^t` by plain repeated multiplication.
pub fn dense_power(g: &FeedforwardGraph, kind: OperatorKind, t: usize) -> Result<DenseMatrix, OracleError> {
    let base = dense_operator(g, kind)?;
    let mut power = DenseMatrix::identity(g.n());
    for _ in 0..t {
        power = power.mul(&base);
    }
    Ok(power)
}

/// One simulated walk: uniform choice among outgoing edges each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkSample {
    pub start: NodeId,
    /// First step at which the walk sits on the sink; `None` if censored at
    /// the horizon.
    pub steps_to_sink: Option<usize>,
}

pub fn sample_walk(
    g: &FeedforwardGraph,
    start: NodeId,
    horizon: usize,
    rng: &mut impl Rng,
) -> WalkSample {
    let sink = g.sink();
    let mut pos = start;
    if pos == sink {
        return WalkSample { start, steps_to_sink: Some(0) };
    }
    for step in 1..=horizon {
        let out = g.out_neighbors(pos);
        pos = out[rng.random_range(0..out.len())];
        if pos == sink {
            return WalkSample { start, steps_to_sink: Some(step) };
        }
    }
    WalkSample { start, steps_to_sink: None }
}

/// Monte Carlo estimate of the averaged miss-mass curve: entry `t` is the
/// fraction of walks not yet at the sink after `t` steps, averaged over all
/// starting nodes. Trials use one RNG sub-stream per (start, trial), so the
/// estimate does not depend on execution order.
pub fn monte_carlo_mixing(
    g: &FeedforwardGraph,
    trials_per_start: usize,
    horizon: usize,
    seed: u64,
) -> Result<Vec<f64>, OracleError> {
    assert!(trials_per_start >= 1);
    for j in 0..g.n() as NodeId {
        if g.out_degree(j) == 0 {
            return Err(MetricError::ZeroOutDegree { node: j }.into());
        }
    }
    let stream = RngStream::new(seed);
    let n = g.n();
    let per_start: Vec<Vec<f64>> = parallel::map_range(n, |start| {
        // Histogram of first-arrival steps; the last slot collects censored walks.
        let mut arrivals = vec![0u64; horizon + 2];
        for trial in 0..trials_per_start {
            let mut rng = stream.substream(&[tag::MONTE_CARLO, start as u64, trial as u64]);
            let sample = sample_walk(g, start as NodeId, horizon, &mut rng);
            let slot = sample.steps_to_sink.unwrap_or(horizon + 1);
            arrivals[slot] += 1;
        }
        let mut miss = Vec::with_capacity(horizon + 1);
        let mut absorbed = 0u64;
        for &count in arrivals.iter().take(horizon + 1) {
            absorbed += count;
            miss.push(1.0 - absorbed as f64 / trials_per_start as f64);
        }
        miss
    });
    let mut curve = vec![0.0; horizon + 1];
    for miss in &per_start {
        for (acc, &v) in curve.iter_mut().zip(miss) {
            *acc += v;
        }
    }
    for v in &mut curve {
        *v /= n as f64;
    }
    Ok(curve)
}

/// First index at which the curve drops below `epsilon`.
pub fn first_step_below(curve: &[f64], epsilon: f64) -> Option<usize> {
    curve.iter().position(|&v| v < epsilon)
}

pub const ENUM_SIZE_LIMIT: usize = 14;

/// Exhaustive DFS count of oriented paths of length exactly `t` from `i` to
/// the sink (self-loop steps included).
pub fn enumerate_paths(g: &FeedforwardGraph, i: NodeId, t: usize) -> Result<u64, OracleError> {
    if g.n() > ENUM_SIZE_LIMIT {
        return Err(OracleError::SizeLimit { n: g.n(), limit: ENUM_SIZE_LIMIT });
    }
    if t > ENUM_SIZE_LIMIT {
        return Err(OracleError::SizeLimit { n: t, limit: ENUM_SIZE_LIMIT });
    }
    fn dfs(g: &FeedforwardGraph, v: NodeId, remaining: usize, sink: NodeId) -> u64 {
        if remaining == 0 {
            return u64::from(v == sink);
        }
        g.out_neighbors(v).iter().map(|&w| dfs(g, w, remaining - 1, sink)).sum()
    }
    Ok(dfs(g, i, t, g.sink()))
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut res = BigUint::one();
    for i in 0..k {
        res = res * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    res
}

/// `c / 2^e` as a double, staying exact until the final rounding even when
/// `c` has thousands of bits.
fn biguint_over_pow2(c: &BigUint, e: i64) -> f64 {
    if c.is_zero() {
        return 0.0;
    }
    let bits = c.bits();
    if bits <= 64 {
        return c.to_u64().unwrap() as f64 * 2f64.powi(-e as i32);
    }
    let shift = bits - 64;
    let top = (c >> shift).to_u64().unwrap() as f64;
    top * 2f64.powi(shift as i32 - e as i32)
}

/// Closed-form line-graph minimax fidelity.
///
/// `paper_value` is the idealized binomial formula `C(2(n-1), n-1) / 4^(n-1)`,
/// which models the first node as halving every step. Under the actual
/// dynamics the first node has in-degree 1 and retains mass, so the exact
/// minimax sits at node 1 with value `C(2(n-2), n-2) / 4^(n-2)`; that value
/// is returned for `n >= 3` (for `n = 2` no interior node exists). Both
/// formulas grow as `sqrt(n/pi)` after normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFidelityClosedForm {
    pub paper_value: f64,
    pub exact_value: Option<f64>,
}

pub fn closed_form_line_fidelity(n: usize) -> LineFidelityClosedForm {
    assert!(n >= 2);
    let central = |k: u64| biguint_over_pow2(&binomial(2 * k, k), 2 * k as i64);
    let paper_value = central((n - 1) as u64);
    let exact_value = (n >= 3).then(|| central((n - 2) as u64));
    LineFidelityClosedForm { paper_value, exact_value }
}

/// Outcome of the exponential-path-count check: at some step `s` no later
/// than the mixing time, the average number of length-`s` paths into the
/// sink must reach `(3/4t) * 2^s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Prop42Report {
    pub mixing_time: usize,
    pub witness_s: Option<usize>,
    pub average_path_count: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn check_prop_4_2(g: &FeedforwardGraph) -> Result<Prop42Report, OracleError> {
    let n = g.n();
    if n > ENUM_SIZE_LIMIT {
        return Err(OracleError::SizeLimit { n, limit: ENUM_SIZE_LIMIT });
    }
    for v in 0..g.sink() {
        if g.out_degree(v) < 2 {
            return Err(precondition(format!("node {v} has out-degree < 2")));
        }
    }
    // Miss-mass reading of the hypothesis: (1/n) sum_i (W^t)_{tau,i} >= 3/4.
    let report = averaged_mixing_time(g, 0.25, Convention::Missmass, 8 * n)?;
    let t = report
        .mixing_time
        .ok_or_else(|| precondition("graph did not mix within the horizon".to_string()))?;
    if t == 0 {
        return Err(precondition("mixing time 0 makes the bound degenerate".to_string()));
    }

    let mut best: Option<(usize, f64, f64)> = None;
    for s in 0..=t {
        let total: u64 = (0..n as NodeId)
            .map(|i| enumerate_paths(g, i, s))
            .sum::<Result<u64, _>>()?;
        let average = total as f64 / n as f64;
        let bound = (3.0 / (4.0 * t as f64)) * 2f64.powi(s as i32);
        if average >= bound {
            return Ok(Prop42Report {
                mixing_time: t,
                witness_s: Some(s),
                average_path_count: average,
                bound,
                holds: true,
            });
        }
        let ratio = average / bound;
        if best.is_none_or(|(_, a, b)| ratio > a / b) {
            best = Some((s, average, bound));
        }
    }
    let (s, average, bound) = best.expect("loop ran at least once");
    let _ = s;
    Ok(Prop42Report {
        mixing_time: t,
        witness_s: None,
        average_path_count: average,
        bound,
        holds: false,
    })
}

/// Outcome of the sink-neighbor fidelity decay check: `(D^h)_{tau,n-2}`
/// must fall below 1e-6 by the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop51Report {
    pub decays: bool,
    pub final_value: f64,
}

pub fn check_prop_5_1(g: &FeedforwardGraph, horizon: usize) -> Result<Prop51Report, OracleError> {
    let n = g.n();
    if n < 2 {
        return Err(precondition("needs at least two nodes".to_string()));
    }
    let validation = g.validate();
    if !validation.unique_sink {
        return Err(precondition(format!("sink is not unique: {:?}", validation.sinks)));
    }
    if !validation.has_all_self_edges {
        return Err(precondition("self-edges are not all present".to_string()));
    }
    let neighbor = (n - 2) as NodeId;
    if g.in_degree(neighbor) <= 1 {
        return Err(precondition(format!("node {neighbor} has no nontrivial incoming edge")));
    }
    let horizon = horizon.max(64);
    let mut diffusion = TauRowDiffusion::new(g)?;
    for _ in 0..horizon {
        diffusion.advance();
    }
    let final_value = diffusion.row()[neighbor as usize];
    Ok(Prop51Report { decays: final_value < 1e-6, final_value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{
        gen_fs, gen_fully_connected, gen_line, gen_locally_connected, gen_poisson, gen_star,
    };
    use crate::metrics::tau_row_walk;

    #[test]
    fn dense_power_zero_is_identity() {
        let g = gen_line(4);
        for kind in [OperatorKind::Adjacency, OperatorKind::Walk, OperatorKind::Diffusion] {
            assert_eq!(dense_power(&g, kind, 0).unwrap(), DenseMatrix::identity(4));
        }
    }

    #[test]
    fn dense_diffusion_examples() {
        let fc2 = gen_fully_connected(2);
        let d = dense_power(&fc2, OperatorKind::Diffusion, 1).unwrap();
        assert_eq!(d.row(0), &[1.0, 0.0]);
        assert_eq!(d.row(1), &[0.5, 0.5]);

        let line3 = gen_line(3);
        let d2 = dense_power(&line3, OperatorKind::Diffusion, 2).unwrap();
        assert_eq!(d2.get(2, 0), 0.25);
    }

    #[test]
    fn dense_powers_stay_stochastic_and_triangular() {
        let g = gen_locally_connected(12, 3);
        let w = dense_power(&g, OperatorKind::Walk, 7).unwrap();
        let d = dense_power(&g, OperatorKind::Diffusion, 7).unwrap();
        for idx in 0..12 {
            assert!((w.col_sum(idx) - 1.0).abs() < 1e-12);
            assert!((d.row_sum(idx) - 1.0).abs() < 1e-12);
        }
        for i in 0..12 {
            for j in i + 1..12 {
                assert_eq!(w.get(i, j), 0.0);
                assert_eq!(d.get(i, j), 0.0);
            }
        }
    }

    #[test]
    fn engine_matches_dense_walk_rows() {
        let g = gen_poisson(24, 0.2, 4, 5).unwrap();
        let rows = tau_row_walk(&g, 24).unwrap();
        let base = dense_operator(&g, OperatorKind::Walk).unwrap();
        let mut power = DenseMatrix::identity(24);
        let tau = g.sink() as usize;
        for row in rows.iter() {
            for (i, &v) in row.iter().enumerate() {
                assert!((v - power.get(tau, i)).abs() < 1e-12);
            }
            power = power.mul(&base);
        }
    }

    #[test]
    fn walk_step_shrinks_smallest_supported_vertex() {
        // One application of W multiplies the mass at the smallest supported
        // vertex by 1/outdeg, which strictly shrinks it when outdeg > 1.
        let g = gen_fs(20, 3, 0.5, 4, 2).unwrap();
        let w = dense_operator(&g, OperatorKind::Walk).unwrap();
        let mut x = vec![0.0; 20];
        x[3] = 0.4;
        x[7] = 0.6;
        let y = w.apply(&x);
        assert!(g.out_degree(3) > 1);
        assert!(y[3] < x[3]);
        assert!((y[3] - x[3] / g.out_degree(3) as f64).abs() < 1e-15);
    }

    #[test]
    fn monte_carlo_star_matches_closed_form() {
        let g = gen_star(16);
        let trials = 10_000;
        let curve = monte_carlo_mixing(&g, trials, 16, 99).unwrap();
        // Non-sink starts miss with probability 1/2 at t = 1; three standard
        // errors of the start-averaged estimate.
        let expected = 15.0 / 32.0;
        let se = (15.0 * 0.25 / trials as f64).sqrt() / 16.0;
        assert!((curve[1] - expected).abs() < 3.0 * se, "got {}", curve[1]);
        assert_eq!(curve[0], 15.0 / 16.0);
    }

    #[test]
    fn monte_carlo_line_hitting_time() {
        let n = 16;
        let g = gen_line(n);
        let trials = 10_000;
        let stream = RngStream::new(4);
        let mut total = 0usize;
        for trial in 0..trials {
            let mut rng = stream.substream(&[tag::MONTE_CARLO, 0, trial as u64]);
            let sample = sample_walk(&g, 0, 64 * n, &mut rng);
            total += sample.steps_to_sink.expect("horizon generous enough");
        }
        let mean = total as f64 / trials as f64;
        let expected = 2.0 * (n as f64 - 1.0);
        let se = (2.0 * (n as f64 - 1.0) / trials as f64).sqrt();
        assert!((mean - expected).abs() < 3.0 * se, "mean {mean}");
    }

    #[test]
    fn walk_from_sink_takes_zero_steps() {
        let g = gen_line(3);
        let mut rng = RngStream::new(0).substream(&[tag::MONTE_CARLO, 2, 0]);
        assert_eq!(sample_walk(&g, 2, 0, &mut rng).steps_to_sink, Some(0));
    }

    #[test]
    fn enumerate_path_examples() {
        let line = gen_line(3);
        assert_eq!(enumerate_paths(&line, 0, 2).unwrap(), 1);
        let fc = gen_fully_connected(3);
        assert_eq!(enumerate_paths(&fc, 0, 2).unwrap(), 3);
        assert_eq!(enumerate_paths(&fc, fc.sink(), 0).unwrap(), 1);
    }

    #[test]
    fn enumerate_matches_adjacency_power() {
        let g = gen_poisson(9, 0.3, 3, 8).unwrap();
        for t in 0..=5 {
            let a = dense_power(&g, OperatorKind::Adjacency, t).unwrap();
            for i in 0..9u32 {
                let count = enumerate_paths(&g, i, t).unwrap();
                assert_eq!(count as f64, a.get(8, i as usize), "i={i} t={t}");
            }
        }
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(2, 5), BigUint::zero());
        // Past the u64 overflow point of the central coefficient.
        let c68 = binomial(68, 34);
        assert!(c68.bits() > 64);
    }

    #[test]
    fn closed_form_examples() {
        let f3 = closed_form_line_fidelity(3);
        assert_eq!(f3.paper_value, 0.375);
        assert_eq!(f3.exact_value, Some(0.5));
        let f2 = closed_form_line_fidelity(2);
        assert_eq!(f2.paper_value, 0.5);
        assert_eq!(f2.exact_value, None);
    }

    #[test]
    fn closed_form_matches_stirling_growth() {
        // n * paper_value converges to sqrt(n / pi) from above.
        let n = 4096usize;
        let v = closed_form_line_fidelity(n).paper_value;
        let ratio = n as f64 * v / (n as f64 / std::f64::consts::PI).sqrt();
        assert!((ratio - 1.0).abs() < 0.02, "ratio {ratio}");
    }

    #[test]
    fn prop_4_2_holds_on_small_graphs() {
        for n in [4usize, 8] {
            let report = check_prop_4_2(&gen_fully_connected(n)).unwrap();
            assert!(report.holds, "fully connected n={n}: {report:?}");
            assert!(report.witness_s.unwrap() <= report.mixing_time);
        }
        let report = check_prop_4_2(&gen_line(8)).unwrap();
        assert!(report.holds, "line n=8: {report:?}");
    }

    #[test]
    fn prop_4_2_rejects_low_outdegree() {
        let g = gen_locally_connected(4, 0);
        assert!(matches!(check_prop_4_2(&g), Err(OracleError::PreconditionFailed { .. })));
    }

    #[test]
    fn prop_5_1_examples() {
        let fc = gen_fully_connected(16);
        let report = check_prop_5_1(&fc, 256).unwrap();
        assert!(report.decays, "final value {}", report.final_value);

        let line = gen_line(3);
        let report = check_prop_5_1(&line, 64).unwrap();
        assert!(report.decays);

        // Star: node n-2 has in-degree 1, so the hypothesis fails.
        let star = gen_star(4);
        assert!(matches!(check_prop_5_1(&star, 64), Err(OracleError::PreconditionFailed { .. })));
    }
}
