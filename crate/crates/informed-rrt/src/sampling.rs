//! Informed sampling: the focal-sum heuristic, per-goal spheroid caches
//! and uniform sampling of the informed set for one goal or a union
//! over a goal set.
//!
//! With a current solution cost `c`, only states `x` with
//! `f_hat(x) < c` for some goal can improve the solution. The sampler
//! draws uniformly from that union intersected with the domain: each
//! goal spheroid is selected in proportion to its measure, a direct
//! spheroid draw is thinned by one over its union membership count to
//! cancel overlap, and everything falls back to plain domain sampling
//! whenever that is cheaper or `c` is still infinite.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::phs::ProlateHyperspheroid;
use crate::rng::RngStream;
use crate::world::World;
use crate::{check_dim, check_finite, State, DEGENERACY_FLOOR, RETRY_CAP};

/// Focal-sum heuristic: `||x - x_start|| + ||x_goal - x||`, the
/// shortest possible cost of a path from start to goal through `x`.
pub fn f_hat(x: &State, x_start: &State, x_goal: &State) -> f64 {
    assert_eq!(x.len(), x_start.len(), "state dimension mismatch");
    assert_eq!(x.len(), x_goal.len(), "state dimension mismatch");
    (x - x_start).norm() + (x_goal - x).norm()
}

/// Ordered, duplicate-free set of goal states sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct GoalSet {
    goals: Vec<State>,
}

impl GoalSet {
    pub fn new(goals: Vec<State>) -> Result<Self> {
        if goals.is_empty() {
            return Err(Error::InvalidGoalSet("no goals".into()));
        }
        let dim = goals[0].len();
        for (i, g) in goals.iter().enumerate() {
            check_dim(dim, g.len())?;
            check_finite(g, "goal")?;
            if goals[..i].contains(g) {
                return Err(Error::InvalidGoalSet(format!("goal {i} repeated")));
            }
        }
        Ok(GoalSet { goals })
    }

    pub fn len(&self) -> usize {
        self.goals.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dimension(&self) -> usize {
        self.goals[0].len()
    }

    pub fn states(&self) -> &[State] {
        &self.goals
    }
}

impl std::ops::Index<usize> for GoalSet {
    type Output = State;

    fn index(&self, i: usize) -> &State {
        &self.goals[i]
    }
}

/// Sampler over the informed set of a start, a goal set and a domain.
///
/// Per-goal spheroids are cached and rebuilt only when the queried cost
/// changes. Goals that cannot be reached below the current cost
/// (`c <= c_min_j`, or within the degeneracy floor of it) carry zero
/// measure: they are never selected and do not count toward union
/// membership.
#[derive(Debug, Clone)]
pub struct InformedSampler {
    start: State,
    goals: GoalSet,
    world: Arc<World>,
    /// Attempts before a sampling loop reports failure.
    pub retry_cap: u64,
    cached_cost: Option<f64>,
    spheroids: Vec<Option<ProlateHyperspheroid>>,
    measures: Vec<f64>,
    total_measure: f64,
}

impl InformedSampler {
    pub fn new(start: State, goals: GoalSet, world: Arc<World>) -> Result<Self> {
        check_dim(world.dimension(), start.len())?;
        check_dim(world.dimension(), goals.dimension())?;
        check_finite(&start, "start")?;
        if !world.contains_point(&start) {
            return Err(Error::InvalidWorld("start outside the domain".into()));
        }
        for g in goals.states() {
            if !world.contains_point(g) {
                return Err(Error::InvalidWorld("goal outside the domain".into()));
            }
        }
        let m = goals.len();
        Ok(InformedSampler {
            start,
            goals,
            world,
            retry_cap: RETRY_CAP,
            cached_cost: None,
            spheroids: vec![None; m],
            measures: vec![0.0; m],
            total_measure: 0.0,
        })
    }

    pub fn start(&self) -> &State {
        &self.start
    }

    pub fn goals(&self) -> &GoalSet {
        &self.goals
    }

    pub fn world(&self) -> &Arc<World> {
        &self.world
    }

    /// Smallest straight-line cost over the goal set.
    pub fn min_c_min(&self) -> f64 {
        self.goals
            .states()
            .iter()
            .map(|g| (g - &self.start).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest focal sum of `x` over the goal set.
    pub fn heuristic(&self, x: &State) -> f64 {
        self.goals
            .states()
            .iter()
            .map(|g| f_hat(x, &self.start, g))
            .fold(f64::INFINITY, f64::min)
    }

    /// Rebuilds the per-goal spheroid cache for cost `c` if it is not
    /// already current.
    pub fn set_cost(&mut self, c: f64) {
        assert!(!c.is_nan(), "cost must not be NaN");
        if self.cached_cost == Some(c) {
            return;
        }
        for (j, goal) in self.goals.states().iter().enumerate() {
            let c_min_j = (goal - &self.start).norm();
            if !c.is_finite() {
                self.spheroids[j] = None;
                self.measures[j] = f64::INFINITY;
            } else if c <= c_min_j || c - c_min_j < DEGENERACY_FLOOR * c_min_j {
                self.spheroids[j] = None;
                self.measures[j] = 0.0;
            } else {
                match self.spheroids[j].as_mut() {
                    Some(phs) => phs
                        .set_transverse_diameter(c)
                        .expect("validated above the degeneracy floor"),
                    None => {
                        self.spheroids[j] = Some(
                            ProlateHyperspheroid::new(self.start.clone(), goal.clone(), c)
                                .expect("validated above the degeneracy floor"),
                        );
                    }
                }
                self.measures[j] = self.spheroids[j].as_ref().unwrap().measure();
            }
        }
        self.total_measure = self.measures.iter().sum();
        self.cached_cost = Some(c);
    }

    /// Sum of the per-goal spheroid measures at cost `c` (infinite when
    /// `c` is).
    pub fn union_measure_bound(&mut self, c: f64) -> f64 {
        self.set_cost(c);
        self.total_measure
    }

    /// Per-goal spheroid measures at cost `c`.
    pub fn goal_measures(&mut self, c: f64) -> &[f64] {
        self.set_cost(c);
        &self.measures
    }

    /// Number of goals whose informed set strictly contains `x` at cost
    /// `c`, counting only goals with positive measure.
    pub fn membership_count(&mut self, x: &State, c: f64) -> usize {
        self.set_cost(c);
        self.membership_count_cached(x, c)
    }

    fn membership_count_cached(&self, x: &State, c: f64) -> usize {
        self.goals
            .states()
            .iter()
            .zip(&self.measures)
            .filter(|(g, &m)| m > 0.0 && f_hat(x, &self.start, g) < c)
            .count()
    }

    /// Draws a state that can improve a solution of cost `c`: uniform
    /// over the intersection of the domain with the union of per-goal
    /// informed sets. With `c = +inf` this is exactly one plain domain
    /// draw (same stream, same sequence). With a single goal the union
    /// thinning disappears and the loop reduces to direct spheroid
    /// sampling.
    pub fn sample_informed(&mut self, c: f64, rng: &mut RngStream) -> Result<State> {
        if c.is_infinite() && c > 0.0 {
            return Ok(self.world.sample_domain(rng));
        }
        assert!(
            c > 0.0 && c.is_finite(),
            "cost must be positive and finite or +inf"
        );
        self.set_cost(c);
        if self.total_measure == 0.0 {
            return Err(Error::NoImprovingSet);
        }
        let m = self.goals.len() as f64;
        let direct = self.total_measure / m < self.world.measure();
        for _ in 0..self.retry_cap {
            let x = if direct {
                let j = self.pick_goal(rng);
                self.spheroids[j]
                    .as_ref()
                    .expect("selected goals have positive measure")
                    .sample(rng)
            } else {
                self.world.sample_domain(rng)
            };
            if !self.world.contains_point(&x) {
                continue;
            }
            let a = self.membership_count_cached(&x, c);
            if a == 0 {
                continue;
            }
            if direct && self.goals.len() > 1 {
                let p: f64 = rng.random();
                if p > 1.0 / a as f64 {
                    continue;
                }
            }
            debug_assert!(self.heuristic(&x) < c);
            return Ok(x);
        }
        Err(Error::RetryBudgetExhausted {
            attempts: self.retry_cap,
        })
    }

    fn pick_goal(&self, rng: &mut RngStream) -> usize {
        let positive = self.measures.iter().filter(|m| **m > 0.0).count();
        debug_assert!(positive > 0);
        if !self.total_measure.is_finite() {
            let mut k = (rng.random::<f64>() * self.goals.len() as f64) as usize;
            k = k.min(self.goals.len() - 1);
            return k;
        }
        let target: f64 = rng.random::<f64>() * self.total_measure;
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (j, &measure) in self.measures.iter().enumerate() {
            if measure <= 0.0 {
                continue;
            }
            acc += measure;
            last_positive = j;
            if target < acc {
                return j;
            }
        }
        last_positive
    }

    /// Selects a goal index with probability proportional to its
    /// spheroid measure at cost `c`. With `c = +inf` all reachable
    /// goals have equal (infinite) measure and the choice is uniform.
    pub fn random_goal(&mut self, c: f64, rng: &mut RngStream) -> Result<usize> {
        self.set_cost(c);
        if self.total_measure == 0.0 {
            return Err(Error::NoImprovingSet);
        }
        Ok(self.pick_goal(rng))
    }

    /// Accepts `x` with probability one over its union membership
    /// count, so that overlapping spheroids do not oversample their
    /// intersection. Errs when `x` lies in no positive-measure informed
    /// set.
    pub fn keep_sample(&mut self, x: &State, c: f64, rng: &mut RngStream) -> Result<bool> {
        check_dim(self.start.len(), x.len())?;
        self.set_cost(c);
        let a = self.membership_count_cached(x, c);
        if a == 0 {
            return Err(Error::OutsideInformedSet);
        }
        let p: f64 = rng.random();
        Ok(p <= 1.0 / a as f64)
    }
}

/// Draws through `sample_informed`, replaced by an exact goal state on
/// a Bernoulli(`bias`) subsequence. Goal states are chosen uniformly
/// from the goal set.
pub fn sample_with_goal_bias(
    sampler: &mut InformedSampler,
    c: f64,
    bias: f64,
    rng: &mut RngStream,
) -> Result<State> {
    assert!((0.0..1.0).contains(&bias), "bias must lie in [0, 1)");
    let u: f64 = rng.random();
    if u < bias {
        let m = sampler.goals().len();
        let k = ((rng.random::<f64>() * m as f64) as usize).min(m - 1);
        return Ok(sampler.goals()[k].clone());
    }
    sampler.sample_informed(c, rng)
}

/// Monte Carlo estimate of a set-membership fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetEstimate {
    /// Estimated ratio, or `None` when the denominator set was never
    /// hit.
    pub value: Option<f64>,
    /// Binomial standard error of `value`.
    pub std_error: Option<f64>,
    pub hits: u64,
    pub denominator: u64,
}

impl SetEstimate {
    fn from_counts(hits: u64, denominator: u64) -> Self {
        if denominator == 0 {
            return SetEstimate {
                value: None,
                std_error: None,
                hits,
                denominator,
            };
        }
        let p = hits as f64 / denominator as f64;
        SetEstimate {
            value: Some(p),
            std_error: Some((p * (1.0 - p) / denominator as f64).sqrt()),
            hits,
            denominator,
        }
    }
}

/// Precision and recall of a candidate informed-set description against
/// an omniscient membership oracle, estimated from uniform domain
/// samples.
///
/// Precision is the fraction of the described set that can actually
/// improve the solution; recall is the fraction of the true improving
/// set the description retains. Zero-measure denominators are reported
/// as undefined rather than zero.
pub fn informed_set_precision_recall(
    domain: &World,
    informed: impl Fn(&State) -> bool,
    omniscient: impl Fn(&State) -> bool,
    rng: &mut RngStream,
    budget: u64,
) -> (SetEstimate, SetEstimate) {
    assert!(budget >= 1000, "budget must be at least 10^3");
    let mut in_informed = 0u64;
    let mut in_omniscient = 0u64;
    let mut in_both = 0u64;
    for _ in 0..budget {
        let x = domain.sample_domain(rng);
        let i = informed(&x);
        let o = omniscient(&x);
        in_informed += i as u64;
        in_omniscient += o as u64;
        in_both += (i && o) as u64;
    }
    (
        SetEstimate::from_counts(in_both, in_informed),
        SetEstimate::from_counts(in_both, in_omniscient),
    )
}
