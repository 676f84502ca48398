//! Benchmark harness: configured experiment sweeps over planner
//! variants, raw per-trial cost traces, and aggregation into per-bucket
//! medians with nonparametric confidence intervals.
//!
//! Raw CSV rows are `trial,iteration,wall_ms,cost`, one row per cost
//! improvement, so traces stay small and the cost column is strictly
//! decreasing within a trial. Aggregates interpolate each trace as a
//! step function on a 1 ms grid and carry `+inf` for trials without a
//! solution, which keeps medians honest when fewer than half the
//! trials have solved.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{convergence_experiment, RewireSchedule};
use crate::error::{Error, Result};
use crate::phs::ProlateHyperspheroid;
use crate::planner::{Budget, PlannerConfig, Variant};
use crate::rng::RngStream;
use crate::stats::median_ci;
use crate::world::{grid_world, toy_optimum, toy_world, ProblemInstance};
use crate::state;

/// Which experiment a benchmark run performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Time to reach a cost tolerance on the single-obstacle world,
    /// obstacle width randomized per trial.
    ToyTolerance,
    /// Same world at growing domain widths, fixed obstacle.
    MapWidth,
    /// Cost-versus-time curves on the regular obstacle grid.
    Grid,
    /// Convergence-rate experiment (per-iteration error curves).
    Converge,
    /// Per-sample timing of direct versus rejection sampling.
    SampleBench,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::ToyTolerance => "toy-tolerance",
            ExperimentKind::MapWidth => "map-width",
            ExperimentKind::Grid => "grid",
            ExperimentKind::Converge => "converge",
            ExperimentKind::SampleBench => "sample-bench",
        }
    }
}

/// How trial progress is clocked.
///
/// `Wall` stamps rows with elapsed milliseconds and spends the
/// per-dimension wall budgets. `Iteration` stamps rows with the
/// iteration number and spends `budget_iterations`, which makes reruns
/// with the same config byte-identical (real timers cannot replay).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Timing {
    Wall,
    Iteration,
}

fn default_variants() -> Vec<String> {
    Variant::ALL.iter().map(|v| v.name().to_string()).collect()
}

fn default_dimensions() -> Vec<usize> {
    vec![2, 4, 8]
}

fn default_etas() -> Vec<f64> {
    vec![0.3, 0.5, 0.9]
}

fn default_budgets() -> Vec<f64> {
    vec![3.0, 10.0, 30.0]
}

fn default_trials() -> usize {
    30
}

fn default_tolerance() -> f64 {
    1.02
}

fn default_true() -> bool {
    true
}

fn default_map_widths() -> Vec<f64> {
    vec![2.0, 4.0, 8.0, 16.0]
}

fn default_converge_trials() -> usize {
    500
}

fn default_converge_iterations() -> u64 {
    200
}

fn default_samples_per_dim() -> u64 {
    100_000
}

fn default_rejection_cap_s() -> f64 {
    30.0
}

fn default_timing() -> Timing {
    Timing::Wall
}

/// Full description of a benchmark run. Serializes to TOML; the
/// effective settings are echoed into the output directory so a run
/// can be replayed from its artifacts alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub experiment: ExperimentKind,
    #[serde(default = "default_dimensions")]
    pub dimensions: Vec<usize>,
    /// Edge-length cap per entry of `dimensions`.
    #[serde(default = "default_etas")]
    pub etas: Vec<f64>,
    /// Wall budget in seconds per entry of `dimensions`.
    #[serde(default = "default_budgets")]
    pub budgets_s: Vec<f64>,
    /// Iteration budget per entry of `dimensions`; required when
    /// `timing = "iteration"`.
    #[serde(default)]
    pub budget_iterations: Option<Vec<u64>>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    pub out_dir: PathBuf,
    #[serde(default = "default_variants")]
    pub variants: Vec<String>,
    #[serde(default = "default_timing")]
    pub timing: Timing,
    /// Solved means cost <= tolerance * c_opt (where c_opt is known).
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// End a trial as soon as it reaches the tolerance.
    #[serde(default = "default_true")]
    pub stop_at_target: bool,
    /// Domain widths for the map-width experiment.
    #[serde(default = "default_map_widths")]
    pub map_widths: Vec<f64>,
    /// Fixed obstacle width; `None` draws one per trial from
    /// U[0.25, 0.5].
    #[serde(default)]
    pub obstacle_width: Option<f64>,
    #[serde(default = "default_converge_trials")]
    pub converge_trials: usize,
    #[serde(default = "default_converge_iterations")]
    pub converge_iterations: u64,
    #[serde(default = "default_samples_per_dim")]
    pub samples_per_dim: u64,
    /// Per-dimension wall cap on the rejection half of sample-bench.
    #[serde(default = "default_rejection_cap_s")]
    pub rejection_cap_s: f64,
}

impl BenchConfig {
    pub fn new(experiment: ExperimentKind, out_dir: impl Into<PathBuf>) -> Self {
        BenchConfig {
            experiment,
            dimensions: default_dimensions(),
            etas: default_etas(),
            budgets_s: default_budgets(),
            budget_iterations: None,
            trials: default_trials(),
            seed: 0,
            out_dir: out_dir.into(),
            variants: default_variants(),
            timing: default_timing(),
            tolerance: default_tolerance(),
            stop_at_target: true,
            map_widths: default_map_widths(),
            obstacle_width: None,
            converge_trials: default_converge_trials(),
            converge_iterations: default_converge_iterations(),
            samples_per_dim: default_samples_per_dim(),
            rejection_cap_s: default_rejection_cap_s(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: BenchConfig =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trial count must be at least 1".into()));
        }
        if self.dimensions.is_empty() {
            return Err(Error::InvalidConfig("need at least one dimension".into()));
        }
        if self.dimensions.len() != self.etas.len()
            || self.dimensions.len() != self.budgets_s.len()
        {
            return Err(Error::InvalidConfig(
                "dimensions, etas and budgets_s must have equal lengths".into(),
            ));
        }
        if self.etas.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::InvalidConfig("every eta must be positive".into()));
        }
        if self.budgets_s.iter().any(|&b| !(b > 0.0)) {
            return Err(Error::InvalidConfig("every budget must be positive".into()));
        }
        if self.timing == Timing::Iteration {
            match &self.budget_iterations {
                None => {
                    return Err(Error::InvalidConfig(
                        "iteration timing needs budget_iterations".into(),
                    ))
                }
                Some(list) => {
                    if list.len() != self.dimensions.len() {
                        return Err(Error::InvalidConfig(
                            "budget_iterations must match dimensions".into(),
                        ));
                    }
                    if list.iter().any(|&b| b == 0) {
                        return Err(Error::InvalidConfig(
                            "every iteration budget must be positive".into(),
                        ));
                    }
                }
            }
        }
        if !(self.tolerance >= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance {} must be at least 1",
                self.tolerance
            )));
        }
        if let Some(w) = self.obstacle_width {
            if !(0.0..1.0).contains(&w) || w == 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "obstacle width {w} must lie in (0, 1)"
                )));
            }
        }
        for name in &self.variants {
            name.parse::<Variant>()?;
        }
        if self.variants.is_empty() {
            return Err(Error::InvalidConfig("need at least one variant".into()));
        }
        Ok(())
    }

    fn parsed_variants(&self) -> Vec<Variant> {
        self.variants
            .iter()
            .map(|name| name.parse().expect("validated"))
            .collect()
    }
}

/// One improvement in a trial's cost trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    /// Planner iteration at which the improvement landed.
    pub iteration: u64,
    /// Clock stamp under the run's `Timing`: elapsed milliseconds for
    /// `Wall`, the iteration number for `Iteration`.
    pub stamp_ms: f64,
    pub cost: f64,
}

/// One trial's cost trace: a row per improvement, plus the trial's
/// solve target and known optimum when they exist.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialTrace {
    pub rows: Vec<TraceRow>,
    pub target: Option<f64>,
    pub c_opt: Option<f64>,
    /// Clock stamp at which the trace first reached its target.
    pub solved_ms: Option<f64>,
}

impl TrialTrace {
    /// Step-function cost at time `t_ms`: the last improvement at or
    /// before `t_ms`, `+inf` before the first.
    pub fn cost_at(&self, t_ms: f64) -> f64 {
        self.rows
            .iter()
            .take_while(|row| row.stamp_ms <= t_ms)
            .last()
            .map_or(f64::INFINITY, |row| row.cost)
    }

    fn solved_at(&self, t_ms: f64) -> bool {
        let cost = self.cost_at(t_ms);
        match self.target {
            Some(target) => cost <= target,
            None => cost.is_finite(),
        }
    }
}

/// Aggregate statistics at one time bucket. Costs are normalized by
/// each trial's optimum when every trace carries one, so medians stay
/// comparable across trials with different obstacle widths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateRow {
    pub bucket_ms: u64,
    pub median_cost: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub pct_solved: f64,
}

/// Aggregates traces over buckets 1..=bucket_count at 1 ms
/// granularity, with a `level` confidence interval on the median.
pub fn aggregate(
    traces: &[TrialTrace],
    bucket_count: u64,
    level: f64,
) -> Result<Vec<AggregateRow>> {
    if traces.is_empty() {
        return Err(Error::InsufficientData("no traces to aggregate".into()));
    }
    let normalize = traces.iter().all(|t| t.c_opt.is_some());
    let mut rows = Vec::with_capacity(bucket_count as usize);
    for bucket in 1..=bucket_count {
        let t = bucket as f64;
        let costs: Vec<f64> = traces
            .iter()
            .map(|trace| {
                let cost = trace.cost_at(t);
                if normalize {
                    cost / trace.c_opt.unwrap()
                } else {
                    cost
                }
            })
            .collect();
        let (median, lo, hi) = median_ci(&costs, level)?;
        let solved = traces.iter().filter(|trace| trace.solved_at(t)).count();
        rows.push(AggregateRow {
            bucket_ms: bucket,
            median_cost: median,
            ci_lo: lo,
            ci_hi: hi,
            pct_solved: 100.0 * solved as f64 / traces.len() as f64,
        });
    }
    Ok(rows)
}

/// Writes raw rows `trial,iteration,wall_ms,cost`, one per improvement.
pub fn write_raw_csv<W: Write>(writer: W, traces: &[(u64, &TrialTrace)]) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["trial", "iteration", "wall_ms", "cost"])?;
    for (trial, trace) in traces {
        for row in &trace.rows {
            out.write_record([
                trial.to_string(),
                row.iteration.to_string(),
                format!("{:.3}", row.stamp_ms),
                format!("{:.12e}", row.cost),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Writes `bucket_ms,median_cost,ci_lo,ci_hi,pct_solved`.
pub fn write_aggregate_csv<W: Write>(writer: W, rows: &[AggregateRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["bucket_ms", "median_cost", "ci_lo", "ci_hi", "pct_solved"])?;
    for row in rows {
        out.write_record([
            row.bucket_ms.to_string(),
            format!("{:.12e}", row.median_cost),
            format!("{:.12e}", row.ci_lo),
            format!("{:.12e}", row.ci_hi),
            format!("{:.3}", row.pct_solved),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn trial_world_seed(base: u64, trial: u64) -> u64 {
    base.wrapping_add(trial) ^ 0x9E37_79B9_7F4A_7C15
}

/// Obstacle width for one trial: the configured fixed width, or a draw
/// from U[0.25, 0.5] on a stream independent of the planner's.
fn trial_obstacle_width(config: &BenchConfig, trial: u64) -> f64 {
    match config.obstacle_width {
        Some(w) => w,
        None => {
            let mut rng = RngStream::from_seed(trial_world_seed(config.seed, trial));
            rng.random_range(0.25..0.5)
        }
    }
}

struct TrialSetup {
    instance: ProblemInstance,
    target: Option<f64>,
    budget: Budget,
    eta: f64,
    seed: u64,
}

fn run_trial(setup: &TrialSetup, variant: Variant, timing: Timing) -> Result<TrialTrace> {
    let mut budget = setup.budget;
    if let Some(target) = setup.target {
        if budget.stop_cost.is_some() {
            budget = budget.with_stop_cost(target);
        }
    }
    let config = PlannerConfig::new(setup.eta, budget, setup.seed).with_variant(variant);
    let result = crate::planner::plan(&setup.instance, config)?;

    let mut rows: Vec<TraceRow> = Vec::new();
    let mut solved_ms = None;
    let mut last = f64::INFINITY;
    for record in &result.records {
        if record.best_cost < last {
            last = record.best_cost;
            let stamp_ms = match timing {
                Timing::Wall => record.wall.as_secs_f64() * 1000.0,
                Timing::Iteration => record.iteration as f64,
            };
            rows.push(TraceRow {
                iteration: record.iteration,
                stamp_ms,
                cost: record.best_cost,
            });
            if solved_ms.is_none() {
                if let Some(target) = setup.target {
                    if record.best_cost <= target {
                        solved_ms = Some(stamp_ms);
                    }
                }
            }
        }
    }
    if setup.target.is_none() {
        solved_ms = rows.first().map(|row| row.stamp_ms);
    }
    Ok(TrialTrace {
        rows,
        target: setup.target,
        c_opt: setup.instance.c_opt(),
        solved_ms,
    })
}

/// Output files written by one benchmark run.
#[derive(Debug, Clone, Default)]
pub struct BenchOutput {
    pub raw_files: Vec<PathBuf>,
    pub aggregate_files: Vec<PathBuf>,
    pub trial_files: Vec<PathBuf>,
}

fn write_trials_csv(path: &Path, traces: &[TrialTrace]) -> Result<()> {
    let mut out = csv::Writer::from_writer(fs::File::create(path)?);
    out.write_record(["trial", "c_opt", "target_cost", "solved_ms", "final_cost"])?;
    for (trial, trace) in traces.iter().enumerate() {
        let final_cost = trace.rows.last().map_or(f64::INFINITY, |row| row.cost);
        out.write_record([
            trial.to_string(),
            trace.c_opt.map_or("".into(), |c| format!("{c:.12e}")),
            trace.target.map_or("".into(), |t| format!("{t:.12e}")),
            trace.solved_ms.map_or("".into(), |s| format!("{s:.3}")),
            format!("{final_cost:.12e}"),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn group_outputs(
    config: &BenchConfig,
    group: &str,
    traces: &[TrialTrace],
    bucket_count: u64,
    output: &mut BenchOutput,
) -> Result<()> {
    let raw_path = config.out_dir.join(format!("{group}_raw.csv"));
    let indexed: Vec<(u64, &TrialTrace)> = traces
        .iter()
        .enumerate()
        .map(|(i, t)| (i as u64, t))
        .collect();
    write_raw_csv(fs::File::create(&raw_path)?, &indexed)?;
    output.raw_files.push(raw_path);

    let agg_path = config.out_dir.join(format!("{group}_agg.csv"));
    let rows = aggregate(traces, bucket_count, 0.99)?;
    write_aggregate_csv(fs::File::create(&agg_path)?, &rows)?;
    output.aggregate_files.push(agg_path);

    let trials_path = config.out_dir.join(format!("{group}_trials.csv"));
    write_trials_csv(&trials_path, traces)?;
    output.trial_files.push(trials_path);
    Ok(())
}

fn dimension_budget(config: &BenchConfig, index: usize) -> (Budget, u64) {
    match config.timing {
        Timing::Wall => {
            let seconds = config.budgets_s[index];
            let budget = Budget::duration(Duration::from_secs_f64(seconds));
            let buckets = (seconds * 1000.0).ceil() as u64;
            (budget, buckets)
        }
        Timing::Iteration => {
            let iterations = config.budget_iterations.as_ref().expect("validated")[index];
            (Budget::iterations(iterations), iterations)
        }
    }
}

fn apply_stop(mut budget: Budget, stop: bool) -> Budget {
    if stop {
        // Marker replaced per trial with the trial's own target.
        budget.stop_cost = Some(f64::MAX);
    }
    budget
}

fn toy_like_setups(
    config: &BenchConfig,
    n: usize,
    domain_width: f64,
    budget: Budget,
    eta: f64,
) -> Result<Vec<TrialSetup>> {
    (0..config.trials as u64)
        .map(|trial| {
            let w = trial_obstacle_width(config, trial);
            let instance = toy_world(n, domain_width, w)?;
            let c_opt = toy_optimum(n, w);
            Ok(TrialSetup {
                instance,
                target: Some(config.tolerance * c_opt),
                budget,
                eta,
                seed: config.seed.wrapping_add(trial),
            })
        })
        .collect()
}

fn run_group(
    setups: &[TrialSetup],
    variant: Variant,
    timing: Timing,
) -> Result<Vec<TrialTrace>> {
    setups
        .par_iter()
        .map(|setup| run_trial(setup, variant, timing))
        .collect()
}

/// Runs the configured experiment, writing raw, aggregate and
/// per-trial CSV files plus an echo of the effective config into the
/// output directory.
pub fn run_benchmark(config: &BenchConfig) -> Result<BenchOutput> {
    config.validate()?;
    fs::create_dir_all(&config.out_dir)?;
    fs::write(config.out_dir.join("config.toml"), config.to_toml()?)?;

    let mut output = BenchOutput::default();
    match config.experiment {
        ExperimentKind::ToyTolerance => {
            for (i, &n) in config.dimensions.iter().enumerate() {
                let (budget, buckets) = dimension_budget(config, i);
                let budget = apply_stop(budget, config.stop_at_target);
                let setups = toy_like_setups(config, n, 2.0, budget, config.etas[i])?;
                for variant in config.parsed_variants() {
                    let traces = run_group(&setups, variant, config.timing)?;
                    let group = format!("toy_{n}d_{}", variant.name());
                    group_outputs(config, &group, &traces, buckets, &mut output)?;
                }
            }
        }
        ExperimentKind::MapWidth => {
            let n = 2;
            let (budget, buckets) = dimension_budget(config, 0);
            let budget = apply_stop(budget, config.stop_at_target);
            for &l in &config.map_widths {
                let width_config = BenchConfig {
                    obstacle_width: Some(config.obstacle_width.unwrap_or(0.4)),
                    ..config.clone()
                };
                let setups =
                    toy_like_setups(&width_config, n, l, budget, config.etas[0])?;
                for variant in config.parsed_variants() {
                    let traces = run_group(&setups, variant, config.timing)?;
                    let group = format!("mapwidth_l{l}_{}", variant.name());
                    group_outputs(config, &group, &traces, buckets, &mut output)?;
                }
            }
        }
        ExperimentKind::Grid => {
            for (i, &n) in config.dimensions.iter().enumerate() {
                let (budget, buckets) = dimension_budget(config, i);
                let instance = grid_world(n)?;
                instance.save(&config.out_dir.join(format!("grid_{n}d_instance.json")))?;
                let setups: Vec<TrialSetup> = (0..config.trials as u64)
                    .map(|trial| TrialSetup {
                        instance: instance.clone(),
                        target: None,
                        budget,
                        eta: config.etas[i],
                        seed: config.seed.wrapping_add(trial),
                    })
                    .collect();
                for variant in config.parsed_variants() {
                    let traces = run_group(&setups, variant, config.timing)?;
                    let group = format!("grid_{n}d_{}", variant.name());
                    group_outputs(config, &group, &traces, buckets, &mut output)?;
                }
            }
        }
        ExperimentKind::Converge => {
            for &n in &config.dimensions {
                let report = convergence_experiment(
                    n,
                    RewireSchedule::Infinite,
                    config.converge_trials,
                    config.converge_iterations as usize,
                    config.seed,
                )?;
                let path = config.out_dir.join(format!("rates_{n}d.csv"));
                report.write_csv(fs::File::create(&path)?)?;
                output.raw_files.push(path);
            }
        }
        ExperimentKind::SampleBench => {
            let rows = sample_bench(
                &config.dimensions,
                config.samples_per_dim,
                Duration::from_secs_f64(config.rejection_cap_s),
                config.seed,
            )?;
            let path = config.out_dir.join("sample_bench.csv");
            write_sample_bench_csv(fs::File::create(&path)?, &rows)?;
            output.raw_files.push(path);
        }
    }
    Ok(output)
}

/// One uniform draw from the tight axis-aligned bounding rectangle of
/// the improving spheroid (transverse side `c`, conjugate sides
/// `sqrt(c^2 - c_min^2)`), tested for spheroid membership by focal
/// sum. Returns whether the draw was accepted.
pub fn rejection_attempt(n: usize, c_min: f64, c: f64, rng: &mut RngStream) -> bool {
    assert!(n >= 2, "dimension must be at least 2");
    assert!(c > c_min && c_min > 0.0);
    let half_focal = c_min / 2.0;
    let conjugate = (c * c - c_min * c_min).sqrt();
    let x1: f64 = rng.random_range(-c / 2.0..c / 2.0);
    let mut rho_sq = 0.0;
    for _ in 1..n {
        let xi: f64 = rng.random_range(-conjugate / 2.0..conjugate / 2.0);
        rho_sq += xi * xi;
    }
    let da = ((x1 + half_focal) * (x1 + half_focal) + rho_sq).sqrt();
    let db = ((x1 - half_focal) * (x1 - half_focal) + rho_sq).sqrt();
    da + db <= c
}

/// Per-method timing row from [`sample_bench`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBenchRow {
    pub dimension: usize,
    pub method: String,
    /// Accepted samples produced within the cap.
    pub samples: u64,
    pub mean_sample_seconds: f64,
    /// Accepted/attempted for the rejection method.
    pub acceptance: Option<f64>,
}

/// Times direct spheroid sampling against tight-rectangle rejection
/// sampling at c_min = 1, c = 1.25 for each dimension. The rejection
/// half of a dimension aborts at `rejection_cap`; its row then reports
/// however many samples it produced.
pub fn sample_bench(
    dimensions: &[usize],
    samples_per_dim: u64,
    rejection_cap: Duration,
    seed: u64,
) -> Result<Vec<SampleBenchRow>> {
    if dimensions.iter().any(|&n| n < 2) {
        return Err(Error::InvalidConfig("dimensions must be at least 2".into()));
    }
    if samples_per_dim == 0 {
        return Err(Error::InvalidConfig("need at least one sample".into()));
    }
    let c_min = 1.0;
    let c = 1.25;
    let mut rows = Vec::new();
    for (i, &n) in dimensions.iter().enumerate() {
        let mut rng = RngStream::from_seed(seed.wrapping_add(i as u64));
        let mut focus_a = vec![0.0; n];
        let mut focus_b = vec![0.0; n];
        focus_a[0] = -c_min / 2.0;
        focus_b[0] = c_min / 2.0;
        let phs = ProlateHyperspheroid::new(state(&focus_a), state(&focus_b), c)?;

        let started = Instant::now();
        for _ in 0..samples_per_dim {
            std::hint::black_box(phs.sample(&mut rng));
        }
        let direct_elapsed = started.elapsed().as_secs_f64();
        rows.push(SampleBenchRow {
            dimension: n,
            method: "direct".into(),
            samples: samples_per_dim,
            mean_sample_seconds: direct_elapsed / samples_per_dim as f64,
            acceptance: None,
        });

        let started = Instant::now();
        let mut accepted = 0u64;
        let mut attempts = 0u64;
        while accepted < samples_per_dim {
            attempts += 1;
            if rejection_attempt(n, c_min, c, &mut rng) {
                accepted += 1;
            }
            if attempts % 4096 == 0 && started.elapsed() >= rejection_cap {
                break;
            }
        }
        let rejection_elapsed = started.elapsed().as_secs_f64();
        rows.push(SampleBenchRow {
            dimension: n,
            method: "rejection".into(),
            samples: accepted,
            mean_sample_seconds: if accepted > 0 {
                rejection_elapsed / accepted as f64
            } else {
                f64::INFINITY
            },
            acceptance: Some(accepted as f64 / attempts as f64),
        });
    }
    Ok(rows)
}

/// Writes `dimension,method,samples,mean_sample_seconds,acceptance`.
pub fn write_sample_bench_csv<W: Write>(writer: W, rows: &[SampleBenchRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record([
        "dimension",
        "method",
        "samples",
        "mean_sample_seconds",
        "acceptance",
    ])?;
    for row in rows {
        out.write_record([
            row.dimension.to_string(),
            row.method.clone(),
            row.samples.to_string(),
            format!("{:.6e}", row.mean_sample_seconds),
            row.acceptance.map_or("".into(), |a| format!("{a:.9}")),
        ])?;
    }
    out.flush()?;
    Ok(())
}
