//! Closed-form bounds on sampling and convergence, and the empirical
//! convergence-rate experiment that checks them.
//!
//! The calculators are pure functions of the problem constants. The
//! experiment harness runs many independent planner trials from a
//! shared initial solution and compares the measured per-iteration
//! error against the curve obtained by iterating the expected-cost
//! lower bound.

use std::io::Write;

use rayon::prelude::*;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::phs::unit_ball_measure;
use crate::planner::{Budget, Planner, PlannerConfig, RewireMode, Variant};
use crate::state;
use crate::stats::ols_fit;
use crate::world::{ProblemInstance, World};

/// Problem constants shared by the bound calculators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    pub n: usize,
    /// Current solution cost.
    pub c: f64,
    /// Theoretical minimum cost.
    pub c_min: f64,
    /// Lebesgue measure of the planning domain.
    pub domain_measure: f64,
    /// Per-iteration probability of improving the solution.
    pub p: f64,
}

impl BoundInputs {
    pub fn new(n: usize, c: f64, c_min: f64, domain_measure: f64, p: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidConfig("dimension must be at least 1".into()));
        }
        if !(c_min > 0.0) || !c_min.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "minimum cost {c_min} must be positive and finite"
            )));
        }
        if !(c >= c_min) || !c.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "cost {c} must be finite and at least the minimum {c_min}"
            )));
        }
        if !(domain_measure > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "domain measure {domain_measure} must be positive"
            )));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidConfig(format!(
                "probability {p} must lie in [0, 1]"
            )));
        }
        Ok(BoundInputs {
            n,
            c,
            c_min,
            domain_measure,
            p,
        })
    }
}

/// Probability that a uniform domain sample can improve a solution of
/// cost `c`: the measure ratio of the improving spheroid to the domain,
/// capped at 1.
///
/// `min(1, pi^(n/2) c (c^2 - c_min^2)^((n-1)/2) / (2^n Gamma(n/2+1) lambda))`
pub fn sampling_prob_bound(inputs: &BoundInputs) -> f64 {
    assert!(
        inputs.domain_measure.is_finite(),
        "domain measure must be finite"
    );
    let n = inputs.n as f64;
    let spheroid = std::f64::consts::PI.powf(n / 2.0)
        * inputs.c
        * (inputs.c * inputs.c - inputs.c_min * inputs.c_min).powf((n - 1.0) / 2.0)
        / (2f64.powf(n) * gamma(n / 2.0 + 1.0));
    (spheroid / inputs.domain_measure).min(1.0)
}

/// Best-case acceptance probability of rejection sampling the improving
/// spheroid from its tight bounding rectangle:
/// `pi^(n/2) / (2^n Gamma(n/2+1))`. Decays factorially in `n`.
pub fn rejection_bound(n: usize) -> f64 {
    assert!(n >= 1, "dimension must be at least 1");
    unit_ball_measure(n) / 2f64.powi(n as i32)
}

/// Lower bound on the expected next solution cost when the current
/// cost is `c` and each iteration improves with probability `p`:
///
/// `p (n c^2 + c_min^2) / ((n+1) c) + (1 - p) c`
pub fn expected_next_cost_lower(inputs: &BoundInputs) -> f64 {
    let n = inputs.n as f64;
    let improved =
        (n * inputs.c * inputs.c + inputs.c_min * inputs.c_min) / ((n + 1.0) * inputs.c);
    inputs.p * improved + (1.0 - inputs.p) * inputs.c
}

/// Best-case linear convergence rates (lower is faster).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBounds {
    /// Uniform domain sampling: rate 1 (sublinear convergence).
    pub rrtstar: f64,
    /// Heuristic rejection sampling; approaches 1 factorially in n.
    pub reject: f64,
    /// Direct informed sampling: (n-1)/(n+1).
    pub informed: f64,
}

/// Convergence-rate bounds for the three sampling strategies in R^n.
/// Satisfies `informed <= reject <= rrtstar` for every n >= 2.
pub fn rate_bounds(n: usize) -> RateBounds {
    assert!(n >= 2, "rates are defined for dimension at least 2");
    let n_f = n as f64;
    RateBounds {
        rrtstar: 1.0,
        reject: 1.0 - 2.0 * rejection_bound(n) / (n_f + 1.0),
        informed: (n_f - 1.0) / (n_f + 1.0),
    }
}

/// Rewiring neighborhood schedule for the convergence experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RewireSchedule {
    /// No edge-length cap and a neighborhood of every vertex.
    Infinite,
    /// Constant edge-length cap and fixed rewiring radius.
    ConstantEta(f64),
    /// Measure-based shrinking rewiring radius.
    ShrinkingRadius,
}

impl RewireSchedule {
    pub fn name(self) -> &'static str {
        match self {
            RewireSchedule::Infinite => "infinite",
            RewireSchedule::ConstantEta(_) => "constant-eta",
            RewireSchedule::ShrinkingRadius => "shrinking-radius",
        }
    }
}

/// Result of one convergence experiment: per-iteration empirical error
/// statistics next to the predicted lower-bound curve.
#[derive(Debug, Clone)]
pub struct RateReport {
    pub n: usize,
    pub trials: usize,
    pub iterations: usize,
    pub initial_cost: f64,
    pub c_opt: f64,
    /// Mean of (cost - c_opt) over trials, per iteration.
    pub mean_errors: Vec<f64>,
    /// Standard error of that mean, per iteration.
    pub error_std_errors: Vec<f64>,
    /// Mean of ln(cost - c_opt) over trials, per iteration.
    pub mean_log_errors: Vec<f64>,
    /// Error curve from iterating the expected-cost lower bound with
    /// p = 1 from the same initial cost.
    pub predicted_errors: Vec<f64>,
    /// exp(slope) of an ordinary least-squares fit of mean log-error
    /// over the final half of iterations.
    pub fitted_rate: f64,
    /// Best-case rate bound for informed sampling in this dimension.
    pub theoretical_rate: f64,
    /// Total count, over all trials, of iterations that strictly
    /// improved the solution.
    pub improving_iterations: u64,
}

impl RateReport {
    pub fn predicted_log_errors(&self) -> Vec<f64> {
        self.predicted_errors.iter().map(|e| e.ln()).collect()
    }

    /// Per-iteration relative difference between the empirical mean
    /// error and the predicted lower-bound error.
    pub fn relative_differences(&self) -> Vec<f64> {
        self.mean_errors
            .iter()
            .zip(&self.predicted_errors)
            .map(|(m, p)| (m - p).abs() / p)
            .collect()
    }

    /// exp(slope) of the mean log-error fit over iterations
    /// [start, end) (0-based indices into the record).
    pub fn fitted_rate_over(&self, start: usize, end: usize) -> Result<f64> {
        if start >= end || end > self.mean_log_errors.len() {
            return Err(Error::InsufficientData(format!(
                "fit window [{start}, {end}) out of range"
            )));
        }
        let xs: Vec<f64> = (start..end).map(|i| (i + 1) as f64).collect();
        let (slope, _) = ols_fit(&xs, &self.mean_log_errors[start..end])?;
        Ok(slope.exp())
    }

    /// Writes `iteration,mean_log_error,predicted_log_error,n_trials`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["iteration", "mean_log_error", "predicted_log_error", "n_trials"])?;
        let predicted = self.predicted_log_errors();
        for i in 0..self.mean_log_errors.len() {
            out.write_record([
                (i + 1).to_string(),
                format!("{:.12e}", self.mean_log_errors[i]),
                format!("{:.12e}", predicted[i]),
                self.trials.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Obstacle-free unit-scale instance used by the convergence runs:
/// domain [-1,1]^n with start and goal at -+0.5 along the first axis.
pub fn convergence_instance(n: usize) -> Result<ProblemInstance> {
    assert!(n >= 2, "dimension must be at least 2");
    let world = World::new(vec![-1.0; n], vec![1.0; n], vec![])?;
    let mut start = vec![0.0; n];
    start[0] = -0.5;
    let mut goal = vec![0.0; n];
    goal[0] = 0.5;
    ProblemInstance::new(world, state(&start), vec![state(&goal)], Some(1.0))
}

/// Two-segment initial path through (0, h, 0, ...) with total cost
/// `factor * c_min`.
fn initial_path(instance: &ProblemInstance, factor: f64) -> Vec<crate::State> {
    assert!(factor > 1.0, "initial cost factor must exceed 1");
    let n = instance.start().len();
    let h = (factor * factor / 4.0 - 0.25).sqrt();
    let mut mid = vec![0.0; n];
    mid[1] = h;
    vec![
        instance.start().clone(),
        state(&mid),
        instance.goals()[0].clone(),
    ]
}

fn schedule_config(
    schedule: RewireSchedule,
    iterations: u64,
    seed: u64,
) -> PlannerConfig {
    let budget = Budget::iterations(iterations);
    let (eta, mode) = match schedule {
        RewireSchedule::Infinite => (f64::INFINITY, RewireMode::All),
        RewireSchedule::ConstantEta(eta) => (eta, RewireMode::FixedRadius(eta)),
        RewireSchedule::ShrinkingRadius => (f64::INFINITY, RewireMode::RDisc),
    };
    let mut config = PlannerConfig::new(eta, budget, seed).with_variant(Variant::Informed);
    config.rewire_mode = mode;
    config
}

/// Runs `trials` independent planner trials of `iterations` iterations
/// each, all seeded with the same initial solution at 1.4 times the
/// optimum, and reports per-iteration error statistics against the
/// predicted lower-bound curve.
pub fn convergence_experiment(
    n: usize,
    schedule: RewireSchedule,
    trials: usize,
    iterations: usize,
    seed: u64,
) -> Result<RateReport> {
    convergence_experiment_from(n, schedule, trials, iterations, seed, 1.4)
}

/// As [`convergence_experiment`] with an explicit initial-cost factor.
pub fn convergence_experiment_from(
    n: usize,
    schedule: RewireSchedule,
    trials: usize,
    iterations: usize,
    seed: u64,
    initial_cost_factor: f64,
) -> Result<RateReport> {
    if trials < 2 {
        return Err(Error::InvalidConfig("need at least two trials".into()));
    }
    if iterations < 2 {
        return Err(Error::InvalidConfig("need at least two iterations".into()));
    }
    let instance = convergence_instance(n)?;
    let path = initial_path(&instance, initial_cost_factor);
    let c_opt = instance.c_opt().expect("instance carries its optimum");
    let initial_cost = initial_cost_factor * c_opt;

    let traces: Vec<Result<(Vec<f64>, u64)>> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let config = schedule_config(schedule, iterations as u64, seed.wrapping_add(trial));
            let mut planner = Planner::new(&instance, config)?;
            planner.seed_initial_path(&path)?;
            let result = planner.plan();
            let mut costs = Vec::with_capacity(iterations);
            let mut improving = 0;
            let mut last = initial_cost;
            for record in &result.records {
                if record.best_cost < last {
                    improving += 1;
                }
                last = record.best_cost;
                costs.push(record.best_cost);
            }
            // A trial that hits terminal sampling precision keeps its
            // final cost for the remaining iterations.
            while costs.len() < iterations {
                costs.push(last);
            }
            Ok((costs, improving))
        })
        .collect();

    let mut per_trial = Vec::with_capacity(trials);
    let mut improving_iterations = 0;
    for trace in traces {
        let (costs, improving) = trace?;
        improving_iterations += improving;
        per_trial.push(costs);
    }
    if improving_iterations < 100 {
        return Err(Error::InsufficientData(format!(
            "only {improving_iterations} improving iterations across {trials} trials"
        )));
    }

    let t = trials as f64;
    let mut mean_errors = Vec::with_capacity(iterations);
    let mut error_std_errors = Vec::with_capacity(iterations);
    let mut mean_log_errors = Vec::with_capacity(iterations);
    for i in 0..iterations {
        let errs: Vec<f64> = per_trial
            .iter()
            .map(|costs| (costs[i] - c_opt).max(f64::MIN_POSITIVE))
            .collect();
        let mean = errs.iter().sum::<f64>() / t;
        let var = errs.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (t - 1.0);
        mean_errors.push(mean);
        error_std_errors.push((var / t).sqrt());
        mean_log_errors.push(errs.iter().map(|e| e.ln()).sum::<f64>() / t);
    }

    let mut predicted_errors = Vec::with_capacity(iterations);
    let mut c = initial_cost;
    for _ in 0..iterations {
        let inputs = BoundInputs::new(n, c.max(c_opt), c_opt, 1.0, 1.0)?;
        c = expected_next_cost_lower(&inputs);
        predicted_errors.push((c - c_opt).max(f64::MIN_POSITIVE));
    }

    let half = iterations / 2;
    let report = RateReport {
        n,
        trials,
        iterations,
        initial_cost,
        c_opt,
        mean_errors,
        error_std_errors,
        mean_log_errors,
        predicted_errors,
        fitted_rate: f64::NAN,
        theoretical_rate: rate_bounds(n).informed,
        improving_iterations,
    };
    let fitted = report.fitted_rate_over(half, iterations)?;
    Ok(RateReport {
        fitted_rate: fitted,
        ..report
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phs::phs_measure;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn sampling_prob_bound_matches_measure_ratio() {
        let inputs = BoundInputs::new(2, 2.0, 1.0, 4.0, 1.0).unwrap();
        let expected = std::f64::consts::PI * 3f64.sqrt() / 2.0 / 4.0;
        assert_relative_eq!(sampling_prob_bound(&inputs), expected, max_relative = 1e-12);
        assert_abs_diff_eq!(sampling_prob_bound(&inputs), 0.680175, epsilon = 1e-6);

        for (n, c_min, c, lambda) in [
            (2, 1.0, 1.5, 9.0),
            (3, 2.0, 2.2, 40.0),
            (5, 0.7, 1.1, 12.0),
        ] {
            let inputs = BoundInputs::new(n, c, c_min, lambda, 1.0).unwrap();
            let ratio = phs_measure(c_min, c, n).unwrap() / lambda;
            assert!(ratio <= 1.0);
            assert_relative_eq!(sampling_prob_bound(&inputs), ratio, max_relative = 1e-12);
        }

        let degenerate = BoundInputs::new(3, 1.0, 1.0, 4.0, 1.0).unwrap();
        assert_eq!(sampling_prob_bound(&degenerate), 0.0);
        let tiny_domain = BoundInputs::new(2, 2.0, 1.0, 0.5, 1.0).unwrap();
        assert_eq!(sampling_prob_bound(&tiny_domain), 1.0);
    }

    #[test]
    fn rejection_bound_reference_values() {
        assert_relative_eq!(
            rejection_bound(2),
            std::f64::consts::PI / 4.0,
            max_relative = 1e-12
        );
        let pi4 = std::f64::consts::PI.powi(4);
        assert_relative_eq!(rejection_bound(8), pi4 / (256.0 * 24.0), max_relative = 1e-12);
        assert_abs_diff_eq!(rejection_bound(8), 0.01585, epsilon = 5e-5);
        assert_relative_eq!(rejection_bound(16), 3.59e-6, max_relative = 1e-2);
    }

    #[test]
    fn rejection_bound_factorial_decay() {
        for n in 1..=30 {
            let ratio = rejection_bound(n + 2) / rejection_bound(n);
            let expected = std::f64::consts::PI / (4.0 * (n as f64 / 2.0 + 1.0));
            assert_relative_eq!(ratio, expected, max_relative = 1e-10);
        }
    }

    #[test]
    fn expected_next_cost_examples() {
        let stay = BoundInputs::new(2, 2.0, 1.0, 4.0, 0.0).unwrap();
        assert_eq!(expected_next_cost_lower(&stay), 2.0);

        let improve = BoundInputs::new(2, 2.0, 1.0, 4.0, 1.0).unwrap();
        assert_relative_eq!(expected_next_cost_lower(&improve), 1.5, max_relative = 1e-12);

        let at_opt = BoundInputs::new(4, 1.0, 1.0, 4.0, 1.0).unwrap();
        assert_relative_eq!(expected_next_cost_lower(&at_opt), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn expected_next_cost_monotone_and_bounded() {
        for n in [2usize, 3, 8] {
            for c in [1.0, 1.2, 2.0, 10.0] {
                let mut last = f64::INFINITY;
                for k in 0..=20 {
                    let p = k as f64 / 20.0;
                    let inputs = BoundInputs::new(n, c, 1.0, 4.0, p).unwrap();
                    let value = expected_next_cost_lower(&inputs);
                    assert!(value <= last + 1e-12, "not monotone in p");
                    assert!((1.0..=c + 1e-12).contains(&value));
                    last = value;
                }
            }
        }
    }

    #[test]
    fn rate_bound_reference_values() {
        let r2 = rate_bounds(2);
        assert_eq!(r2.rrtstar, 1.0);
        assert_relative_eq!(r2.informed, 1.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(
            r2.reject,
            1.0 - std::f64::consts::PI / 6.0,
            max_relative = 1e-12
        );
        assert_abs_diff_eq!(r2.reject, 0.47640, epsilon = 1e-5);
    }

    #[test]
    fn rate_bounds_ordered_for_all_dimensions() {
        for n in 2..=32 {
            let r = rate_bounds(n);
            assert!(r.informed <= r.reject + 1e-12, "n = {n}");
            assert!(r.reject <= r.rrtstar + 1e-12, "n = {n}");
            let identity = 1.0 - 2.0 * rejection_bound(n) / (n as f64 + 1.0);
            assert_relative_eq!(r.reject, identity, max_relative = 1e-12);
        }
    }

    #[test]
    fn predicted_recurrence_approaches_informed_rate() {
        // The error-contraction ratio of the p = 1 recurrence tends to
        // (n-1)/(n+1) as the cost approaches the optimum.
        for n in [2usize, 4] {
            let mut c = 1.4;
            let mut prev_err = c - 1.0;
            let mut ratio = f64::NAN;
            for _ in 0..15 {
                let inputs = BoundInputs::new(n, c, 1.0, 1.0, 1.0).unwrap();
                c = expected_next_cost_lower(&inputs);
                let err = c - 1.0;
                ratio = err / prev_err;
                prev_err = err;
            }
            assert_relative_eq!(ratio, rate_bounds(n).informed, max_relative = 1e-3);
        }
    }

    #[test]
    fn experiment_smoke_run() {
        let report =
            convergence_experiment(2, RewireSchedule::Infinite, 32, 60, 99).unwrap();
        assert_eq!(report.mean_errors.len(), 60);
        assert_eq!(report.predicted_errors.len(), 60);
        assert!(report.improving_iterations >= 100);
        for pair in report.mean_errors.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-15, "mean error must not increase");
        }
        assert!(report.mean_errors.iter().all(|&e| e >= 0.0));
        assert!(report.fitted_rate.is_finite());
        assert_relative_eq!(report.initial_cost, 1.4, max_relative = 1e-12);

        let mut csv_bytes = Vec::new();
        report.write_csv(&mut csv_bytes).unwrap();
        let text = String::from_utf8(csv_bytes).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "iteration,mean_log_error,predicted_log_error,n_trials"
        );
        assert_eq!(lines.count(), 60);
    }

    #[test]
    fn experiment_is_deterministic() {
        let a = convergence_experiment(2, RewireSchedule::Infinite, 8, 40, 7).unwrap();
        let b = convergence_experiment(2, RewireSchedule::Infinite, 8, 40, 7).unwrap();
        assert_eq!(a.mean_errors, b.mean_errors);
        assert_eq!(a.fitted_rate, b.fitted_rate);
    }

    #[test]
    fn experiment_rejects_thin_data() {
        let err = convergence_experiment(2, RewireSchedule::Infinite, 2, 3, 1);
        assert!(matches!(err, Err(Error::InsufficientData(_))));
    }

    #[test]
    fn empirical_mean_respects_lower_bound_early() {
        // Within the first dozen iterations the error distribution is
        // light-tailed enough for the trial mean to be trustworthy, so
        // the measured mean must sit above the bound minus 3 sigma.
        let report =
            convergence_experiment(2, RewireSchedule::Infinite, 200, 12, 11).unwrap();
        for i in 0..report.iterations {
            let floor = report.predicted_errors[i] - 3.0 * report.error_std_errors[i];
            assert!(
                report.mean_errors[i] >= floor,
                "iteration {}: mean {} below bound {} - 3 sigma",
                i + 1,
                report.mean_errors[i],
                floor
            );
        }
    }
}
