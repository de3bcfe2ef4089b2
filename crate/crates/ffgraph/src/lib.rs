//! Feedforward computational graph toolkit.
//!
//! A feedforward graph orders its nodes `0..n` and only allows edges
//! `(a, b)` with `a <= b`; the final node is the decision-driving sink.
//! This crate generates the graph families commonly used as such
//! computational substrates (fully connected, sliding-window, star,
//! fixed-indegree Erdos-Renyi, oriented expanders, Poisson scans, and a
//! recursive block-expander construction) and scores them with two
//! complementary measures:
//!
//! - **averaged mixing time** — how fast a random walk started anywhere
//!   concentrates on the sink (lower is better), and
//! - **minimax fidelity** — the worst node's best-ever coefficient in the
//!   sink's averaged representation (higher is better), usually reported
//!   normalized so a fully connected graph scores 1.
//!
//! Brute-force oracles (dense matrix powers, Monte Carlo walks, exhaustive
//! path enumeration, exact closed forms) validate the engines, and the
//! [`runner`] module drives sweeps over doubling sizes, scaling-law fits,
//! and adjacency galleries.
//!
//! Everything is deterministic given a seed. With the default `parallel`
//! feature the heavy loops fan out over rayon without changing any result
//! bit; build with `--no-default-features` for a fully sequential library.

pub mod generators;
pub mod graph;
pub mod metrics;
pub mod oracles;
pub mod rng;
pub mod runner;

mod parallel;

pub use generators::{
    default_indegree, generate, Family, GeneratorConfig, GeneratorError, IndegreeSchedule,
};
pub use graph::{FeedforwardGraph, GraphError, NodeId, ValidationReport};
pub use metrics::{
    averaged_mixing_time, fidelity_report, path_count, tau_row_diffusion, tau_row_walk,
    walk_spectrum, Convention, FidelityReport, MetricError, MixingReport,
};
pub use oracles::{
    check_prop_4_2, check_prop_5_1, closed_form_line_fidelity, dense_power, enumerate_paths,
    monte_carlo_mixing, DenseMatrix, OperatorKind, OracleError,
};
pub use rng::RngStream;
