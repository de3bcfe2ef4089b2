//! Sweep orchestration: single-graph reports, doubling-size sweeps with
//! per-point seeding, scaling-law fits, and adjacency galleries.
//!
//! Sweeps are deterministic: point seeds derive from the root seed and the
//! point's (label, size, index) address, points run as independent jobs,
//! and assembly sorts records by (family, n, seed), so two runs of the same
//! spec produce byte-identical CSV. Wall-time measurement is opt-in for the
//! same reason. Families whose output ignores the seed are computed once
//! per size and replicated across seed points.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::{
    default_indegree, gen_fs, gen_fully_connected, gen_line, gen_poisson, generate, Family,
    GeneratorConfig, GeneratorError, IndegreeSchedule,
};
use crate::graph::{FeedforwardGraph, GraphError, ValidationReport};
use crate::metrics::{
    averaged_mixing_time, fidelity_report, walk_spectrum, Convention, FidelityReport, MetricError,
    MixingReport, DEFAULT_EPSILON, DEFAULT_FIDELITY_HORIZON_MULT, DEFAULT_MIXING_HORIZON_MULT,
};
use crate::oracles::{
    check_prop_4_2, check_prop_5_1, closed_form_line_fidelity, dense_power, enumerate_paths,
    first_step_below, monte_carlo_mixing, OperatorKind,
};
use crate::parallel;
use crate::rng::{hash_label, tag, RngStream};

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("scaling fit needs medians at {needed}+ sizes and found no qualifying group")]
    InsufficientData { needed: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Metric knobs shared by reports and sweeps. Horizons are multiples of the
/// graph size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MetricOptions {
    pub convention: Convention,
    pub epsilon: f64,
    pub mixing_horizon_mult: f64,
    pub fidelity_horizon_mult: f64,
}

impl Default for MetricOptions {
    fn default() -> Self {
        Self {
            convention: Convention::Missmass,
            epsilon: DEFAULT_EPSILON,
            mixing_horizon_mult: DEFAULT_MIXING_HORIZON_MULT,
            fidelity_horizon_mult: DEFAULT_FIDELITY_HORIZON_MULT,
        }
    }
}

impl MetricOptions {
    pub fn mixing_horizon(&self, n: usize) -> usize {
        ((self.mixing_horizon_mult * n as f64).ceil() as usize).max(1)
    }

    pub fn fidelity_horizon(&self, n: usize) -> usize {
        ((self.fidelity_horizon_mult * n as f64).ceil() as usize).max(1)
    }
}

/// Everything the `report` command emits for one graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphReport {
    pub config: GeneratorConfig,
    pub edge_count: usize,
    pub validation: ValidationReport,
    pub mixing: MixingReport,
    pub fidelity: FidelityReport,
    pub spectrum: Vec<f64>,
}

/// Builds the configured graph and runs validation, both metrics, and the
/// walk spectrum.
pub fn run_report(config: &GeneratorConfig, opts: &MetricOptions) -> Result<GraphReport, RunnerError> {
    let g = generate(config)?;
    let validation = g.validate();
    let mixing =
        averaged_mixing_time(&g, opts.epsilon, opts.convention, opts.mixing_horizon(g.n()))?;
    let fidelity = fidelity_report(&g, opts.fidelity_horizon(g.n()))?;
    let spectrum = walk_spectrum(&g)?;
    Ok(GraphReport {
        config: config.clone(),
        edge_count: g.edge_count(),
        validation,
        mixing,
        fidelity,
        spectrum,
    })
}

/// One family entry of a sweep. Size-dependent knobs are schedules so a
/// single entry can cover every size in the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFamily {
    pub family: Family,
    /// CSV label; defaults to the family name. Distinct labels let the same
    /// family appear twice (e.g. poisson at two values of p).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<IndegreeSchedule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<IndegreeSchedule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expander_degree: Option<IndegreeSchedule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fs_decay_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fs_base_threshold: Option<usize>,
    #[serde(default = "default_true")]
    pub self_edges: bool,
}

fn default_true() -> bool {
    true
}

impl SweepFamily {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            label: None,
            kappa: None,
            p: None,
            budget: None,
            expander_degree: None,
            fs_decay_ratio: None,
            fs_base_threshold: None,
            self_edges: true,
        }
    }

    pub fn labeled(family: Family, label: &str) -> Self {
        let mut f = Self::new(family);
        f.label = Some(label.to_string());
        f
    }

    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or(self.family.name())
    }

    fn resolve(&self, n: usize, seed: u64) -> GeneratorConfig {
        let mut config = GeneratorConfig::new(self.family, n).with_seed(seed);
        config.kappa = self.kappa.map(|s| default_indegree(n, s));
        config.p = self.p;
        config.budget = self.budget.map(|s| default_indegree(n, s).max(1));
        config.expander_degree = self.expander_degree.map(|s| default_indegree(n, s).max(1));
        config.fs_decay_ratio = self.fs_decay_ratio;
        config.fs_base_threshold = self.fs_base_threshold;
        config.self_edges = self.self_edges;
        config
    }
}

/// A full sweep description: which families at which sizes, how many seeds
/// per point, and the metric knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSpec {
    pub sizes: Vec<usize>,
    pub families: Vec<SweepFamily>,
    pub seeds_per_point: usize,
    pub root_seed: u64,
    pub convention: Convention,
    pub epsilon: f64,
    pub mixing_horizon_mult: f64,
    pub fidelity_horizon_mult: f64,
    /// When set, `wall_time_ms` carries real measurements and the CSV is no
    /// longer byte-stable across runs; off by default.
    pub timing: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            sizes: doubling_sizes(16, 1024),
            families: default_families(),
            seeds_per_point: 5,
            root_seed: 0,
            convention: Convention::Missmass,
            epsilon: DEFAULT_EPSILON,
            mixing_horizon_mult: DEFAULT_MIXING_HORIZON_MULT,
            fidelity_horizon_mult: DEFAULT_FIDELITY_HORIZON_MULT,
            timing: false,
        }
    }
}

impl SweepSpec {
    pub fn metric_options(&self) -> MetricOptions {
        MetricOptions {
            convention: self.convention,
            epsilon: self.epsilon,
            mixing_horizon_mult: self.mixing_horizon_mult,
            fidelity_horizon_mult: self.fidelity_horizon_mult,
        }
    }
}

/// Sizes doubling from `from` up to `to` inclusive.
pub fn doubling_sizes(from: usize, to: usize) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut n = from;
    while n <= to {
        sizes.push(n);
        n *= 2;
    }
    sizes
}

/// The default family set: both workhorse graphs, the star, the random
/// baselines at a `log2 n` budget, both Poisson variants, and the recursive
/// block-expander generator at its favored `4 log2 n` degree.
pub fn default_families() -> Vec<SweepFamily> {
    let log_budget = IndegreeSchedule::KLogN(1.0);
    let mut families = vec![
        SweepFamily::new(Family::FullyConnected),
        SweepFamily::new(Family::Line),
        SweepFamily::new(Family::LocallyConnected),
        SweepFamily::new(Family::Star),
        SweepFamily::new(Family::ErdosRenyi),
        SweepFamily::new(Family::OrientedExpander),
        SweepFamily::labeled(Family::Poisson, "poisson(0.2)"),
        SweepFamily::labeled(Family::Poisson, "poisson(0.8)"),
        SweepFamily::new(Family::Fs),
    ];
    families[2].kappa = Some(log_budget);
    families[4].budget = Some(log_budget);
    families[5].expander_degree = Some(log_budget);
    families[6].p = Some(0.2);
    families[6].budget = Some(log_budget);
    families[7].p = Some(0.8);
    families[7].budget = Some(log_budget);
    families[8].expander_degree = Some(IndegreeSchedule::KLogN(4.0));
    families
}

/// One CSV row of a sweep: a (family, seed, n) point with both metrics.
/// `mixing_time = -1` encodes not-mixed-within-horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub family: String,
    pub seed: u64,
    pub n: usize,
    pub indegree_budget: usize,
    pub mixing_time: i64,
    pub mixing_convention: String,
    pub minimax_fidelity: f64,
    pub normalized_minimax: f64,
    pub argmin_node: u32,
    pub argmax_t: usize,
    pub edge_count: usize,
    pub wall_time_ms: f64,
}

fn run_point(
    label: &str,
    config: &GeneratorConfig,
    opts: &MetricOptions,
    timing: bool,
) -> Result<SweepRecord, RunnerError> {
    let started = Instant::now();
    let g = generate(config)?;
    let mixing =
        averaged_mixing_time(&g, opts.epsilon, opts.convention, opts.mixing_horizon(g.n()))?;
    let fidelity = fidelity_report(&g, opts.fidelity_horizon(g.n()))?;
    let wall_time_ms = if timing { started.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
    let argmin = fidelity.argmin_node as usize;
    Ok(SweepRecord {
        family: label.to_string(),
        seed: config.seed,
        n: config.n,
        indegree_budget: config.effective_indegree_budget(),
        mixing_time: mixing.mixing_time.map_or(-1, |t| t as i64),
        mixing_convention: opts.convention.to_string(),
        minimax_fidelity: fidelity.minimax,
        normalized_minimax: fidelity.normalized_minimax,
        argmin_node: fidelity.argmin_node,
        argmax_t: fidelity.argmax_t[argmin],
        edge_count: g.edge_count(),
        wall_time_ms,
    })
}

/// Runs every (family, size, seed) point of the spec. Points execute as
/// independent jobs; per-point failures are logged to stderr and skipped.
/// Records come back sorted by (family, n, seed).
pub fn run_sweep(spec: &SweepSpec) -> Vec<SweepRecord> {
    let opts = spec.metric_options();
    let stream = RngStream::new(spec.root_seed);
    let point_seed = |label: &str, n: usize, point: usize| {
        stream.key(&[tag::SWEEP_POINT, hash_label(label), n as u64, point as u64])
    };

    // One job per distinct computation; seed-independent families need a
    // single point per size.
    let mut jobs: Vec<(usize, usize, usize)> = Vec::new();
    for (fam_idx, family) in spec.families.iter().enumerate() {
        let distinct = if family.family.is_seeded() { spec.seeds_per_point } else { 1 };
        for &n in &spec.sizes {
            for point in 0..distinct {
                jobs.push((fam_idx, n, point));
            }
        }
    }
    let results = parallel::map_collect(jobs.clone(), |(fam_idx, n, point)| {
        let family = &spec.families[fam_idx];
        let config = family.resolve(n, point_seed(family.label(), n, point));
        run_point(family.label(), &config, &opts, spec.timing)
    });
    let by_job: HashMap<(usize, usize, usize), &Result<SweepRecord, RunnerError>> =
        jobs.iter().copied().zip(results.iter()).collect();

    let mut records = Vec::new();
    for (fam_idx, family) in spec.families.iter().enumerate() {
        let seeded = family.family.is_seeded();
        for &n in &spec.sizes {
            for point in 0..spec.seeds_per_point {
                let job_point = if seeded { point } else { 0 };
                let seed = point_seed(family.label(), n, point);
                match by_job[&(fam_idx, n, job_point)] {
                    Ok(record) => {
                        let mut record = record.clone();
                        record.seed = seed;
                        records.push(record);
                    }
                    Err(err) => {
                        eprintln!(
                            "sweep point {} n={n} seed={seed} failed: {err}",
                            family.label()
                        );
                    }
                }
            }
        }
    }
    records.sort_by(|a, b| (&a.family, a.n, a.seed).cmp(&(&b.family, b.n, b.seed)));
    records
}

/// Per-(family, n) medians over seeds. The median is the lower order
/// statistic, which stays in-sample (relevant for the -1 not-mixed marker).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub family: String,
    pub n: usize,
    pub seeds: usize,
    pub median_mixing_time: i64,
    pub median_minimax_fidelity: f64,
    pub median_normalized_minimax: f64,
    pub median_edge_count: usize,
}

fn median<T: Copy + PartialOrd>(values: &mut Vec<T>) -> T {
    values.sort_by(|a, b| a.partial_cmp(b).expect("no NaN in medians"));
    values[(values.len() - 1) / 2]
}

/// Collapses records into per-(family, n) medians. Output order and values
/// are independent of record arrival order.
pub fn summarize(records: &[SweepRecord]) -> Vec<SummaryRow> {
    let mut groups: Vec<(String, usize)> =
        records.iter().map(|r| (r.family.clone(), r.n)).collect();
    groups.sort();
    groups.dedup();
    groups
        .into_iter()
        .map(|(family, n)| {
            let group: Vec<&SweepRecord> =
                records.iter().filter(|r| r.family == family && r.n == n).collect();
            let mut mixing: Vec<i64> = group.iter().map(|r| r.mixing_time).collect();
            let mut minimax: Vec<f64> = group.iter().map(|r| r.minimax_fidelity).collect();
            let mut normalized: Vec<f64> = group.iter().map(|r| r.normalized_minimax).collect();
            let mut edges: Vec<usize> = group.iter().map(|r| r.edge_count).collect();
            SummaryRow {
                family,
                n,
                seeds: group.len(),
                median_mixing_time: median(&mut mixing),
                median_minimax_fidelity: median(&mut minimax),
                median_normalized_minimax: median(&mut normalized),
                median_edge_count: median(&mut edges),
            }
        })
        .collect()
}

/// Ordinary least squares of `log(median minimax fidelity)` against `log n`
/// for one family/budget-schedule group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub family: String,
    pub budget_schedule: String,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

const FIT_MIN_SIZES: usize = 3;

/// Fits log-log scaling laws of the median minimax fidelity. Families whose
/// records carry an in-degree budget are grouped per `k log2 n` schedule
/// (records match a `k` when their budget equals `ceil(k log2 n)` at their
/// size); budget-free families get a single fit labeled `none`. Groups with
/// fewer than three sizes or non-positive medians are skipped; the call
/// errors out only when nothing qualifies.
pub fn fit_scaling(records: &[SweepRecord], schedules: &[f64]) -> Result<Vec<ScalingFit>, RunnerError> {
    let summary = summarize(records);
    let mut families: Vec<String> = summary.iter().map(|row| row.family.clone()).collect();
    families.sort();
    families.dedup();

    let mut fits = Vec::new();
    for family in families {
        let rows: Vec<&SummaryRow> = summary.iter().filter(|r| r.family == family).collect();
        let budget_free =
            records.iter().filter(|r| r.family == family).all(|r| r.indegree_budget == 0);
        let groups: Vec<(String, Vec<&SummaryRow>)> = if budget_free {
            vec![("none".to_string(), rows)]
        } else {
            schedules
                .iter()
                .map(|&k| {
                    let matching = rows
                        .iter()
                        .filter(|row| {
                            let expected =
                                default_indegree(row.n, IndegreeSchedule::KLogN(k)).max(1);
                            records.iter().any(|r| {
                                r.family == family && r.n == row.n && r.indegree_budget == expected
                            })
                        })
                        .copied()
                        .collect();
                    (format!("k_logn({k})"), matching)
                })
                .collect()
        };
        for (schedule, rows) in groups {
            let points: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.median_minimax_fidelity > 0.0)
                .map(|r| ((r.n as f64).ln(), r.median_minimax_fidelity.ln()))
                .collect();
            if let Some((slope, intercept, r_squared)) = ols(&points) {
                fits.push(ScalingFit {
                    family: family.clone(),
                    budget_schedule: schedule,
                    slope,
                    intercept,
                    r_squared,
                });
            }
        }
    }
    if fits.is_empty() {
        return Err(RunnerError::InsufficientData { needed: FIT_MIN_SIZES });
    }
    Ok(fits)
}

fn ols(points: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    if points.len() < FIT_MIN_SIZES {
        return None;
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Some((slope, intercept, r_squared))
}

/// Writes one PGM per config into `out_dir`, named
/// `<family>_n<size>_seed<seed>.pgm`. Returns the written paths.
pub fn gallery(configs: &[GeneratorConfig], out_dir: &Path) -> Result<Vec<PathBuf>, RunnerError> {
    fs::create_dir_all(out_dir)?;
    let mut paths = Vec::with_capacity(configs.len());
    for config in configs {
        let g = generate(config)?;
        let name = format!("{}_n{}_seed{}.pgm", config.family, config.n, config.seed);
        let path = out_dir.join(name);
        fs::write(&path, g.to_pgm())?;
        paths.push(path);
    }
    Ok(paths)
}

/// The default gallery set: one sample of each family at n = 128.
pub fn default_gallery_configs(seed: u64) -> Vec<GeneratorConfig> {
    let n = 128;
    let mut configs: Vec<GeneratorConfig> = [
        Family::FullyConnected,
        Family::Line,
        Family::LocallyConnected,
        Family::Star,
        Family::ErdosRenyi,
        Family::OrientedExpander,
        Family::Poisson,
        Family::Fs,
    ]
    .into_iter()
    .map(|family| GeneratorConfig::new(family, n).with_seed(seed))
    .collect();
    configs[6].p = Some(0.2);
    configs
}

// --- CSV encoding ----------------------------------------------------------

pub fn records_to_csv(records: &[SweepRecord]) -> Result<String, RunnerError> {
    to_csv(records)
}

pub fn records_from_csv(text: &str) -> Result<Vec<SweepRecord>, RunnerError> {
    from_csv(text)
}

pub fn summary_to_csv(rows: &[SummaryRow]) -> Result<String, RunnerError> {
    to_csv(rows)
}

pub fn fits_to_csv(fits: &[ScalingFit]) -> Result<String, RunnerError> {
    to_csv(fits)
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, RunnerError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    let bytes = writer.into_inner().expect("vec writer cannot fail");
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn from_csv<T: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<T>, RunnerError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for row in reader.deserialize() {
        rows.push(row?);
    }
    Ok(rows)
}

// --- Oracle check battery ----------------------------------------------------

/// One machine-readable oracle verdict.
#[derive(Debug, Clone, Serialize)]
pub struct CheckVerdict {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

fn verdict(name: impl Into<String>, holds: bool, detail: impl Into<String>) -> CheckVerdict {
    CheckVerdict { name: name.into(), holds, detail: detail.into() }
}

/// Runs the fast oracle battery: exponential-path-count and fidelity-decay
/// propositions, the line-graph closed form against the engine, exhaustive
/// path enumeration against dense adjacency powers, and a Monte Carlo
/// cross-check of the mixing engine.
pub fn run_checks() -> Vec<CheckVerdict> {
    let mut verdicts = Vec::new();

    for n in [4usize, 8, 12] {
        for (tag, g) in [("fully_connected", gen_fully_connected(n)), ("line", gen_line(n))] {
            let name = format!("prop_4_2_{tag}_n{n}");
            match check_prop_4_2(&g) {
                Ok(report) => verdicts.push(verdict(
                    name,
                    report.holds,
                    format!(
                        "t={} s={:?} avg={:.4} bound={:.4}",
                        report.mixing_time,
                        report.witness_s,
                        report.average_path_count,
                        report.bound
                    ),
                )),
                Err(err) => verdicts.push(verdict(name, false, err.to_string())),
            }
        }
    }

    for n in [16usize, 64] {
        let log_budget = default_indegree(n, IndegreeSchedule::KLogN(1.0)).max(1);
        let fs_degree = default_indegree(n, IndegreeSchedule::KLogN(4.0)).max(1);
        let cases: Vec<(String, Result<FeedforwardGraph, GeneratorError>)> = vec![
            (format!("fully_connected_n{n}"), Ok(gen_fully_connected(n))),
            (format!("fs_n{n}"), gen_fs(n, fs_degree, 0.5, 4, 0)),
            (format!("poisson02_n{n}"), gen_poisson(n, 0.2, log_budget, 0)),
        ];
        for (tag, built) in cases {
            let name = format!("prop_5_1_{tag}");
            let outcome = built
                .map_err(|e| e.to_string())
                .and_then(|g| check_prop_5_1(&g, 4 * n).map_err(|e| e.to_string()));
            match outcome {
                Ok(report) => verdicts.push(verdict(
                    name,
                    report.decays,
                    format!("final value {:.3e}", report.final_value),
                )),
                Err(detail) => verdicts.push(verdict(name, false, detail)),
            }
        }
    }

    // Closed-form line fidelity against the streaming engine.
    let mut worst: f64 = 0.0;
    for n in 3..=32usize {
        let expected = closed_form_line_fidelity(n).exact_value.expect("n >= 3");
        let engine =
            fidelity_report(&gen_line(n), 4 * n).expect("line graphs have positive in-degrees");
        worst = worst.max((engine.minimax - expected).abs());
    }
    verdicts.push(verdict(
        "line_fidelity_closed_form",
        worst < 1e-10,
        format!("max |engine - closed form| = {worst:.3e}"),
    ));

    // Exhaustive enumeration against dense adjacency powers.
    let mut enum_ok = true;
    for seed in 0..4u64 {
        let g = gen_poisson(10, 0.3, 3, seed).expect("valid poisson parameters");
        for t in 0..=5usize {
            let a = dense_power(&g, OperatorKind::Adjacency, t).expect("small dense power");
            for i in 0..10u32 {
                let count = enumerate_paths(&g, i, t).expect("within enumeration limits");
                if count as f64 != a.get(9, i as usize) {
                    enum_ok = false;
                }
            }
        }
    }
    verdicts.push(verdict("paths_match_adjacency_power", enum_ok, "n=10, t<=5, 4 seeds"));

    // Monte Carlo estimate of the mixing time within one step of the engine.
    let g = gen_fully_connected(32);
    let engine = averaged_mixing_time(&g, DEFAULT_EPSILON, Convention::Missmass, 256)
        .expect("fully connected walks are defined")
        .mixing_time
        .expect("fully connected mixes");
    let curve = monte_carlo_mixing(&g, 20_000, 256, 1).expect("walkable graph");
    let estimate = first_step_below(&curve, DEFAULT_EPSILON);
    let close = estimate.is_some_and(|e| e.abs_diff(engine) <= 1);
    verdicts.push(verdict(
        "monte_carlo_mixing_agreement",
        close,
        format!("engine {engine}, monte carlo {estimate:?}"),
    ));

    verdicts
}
