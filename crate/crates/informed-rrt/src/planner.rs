//! RRT* and the variant toggles used to study informed planning:
//! graph pruning, heuristic rejection of `x_rand` or `x_new`, and
//! direct informed sampling.
//!
//! One iteration follows the classic anytime loop: recompute the best
//! solution cost, draw a sample (variant-dependent), steer from the
//! nearest vertex, attach to the cost-minimizing collision-free parent
//! among the rewiring neighborhood, rewire neighbors through the new
//! vertex, and prune the tree when the best cost has improved enough.
//! All randomness flows through one seeded stream per planner, and all
//! tie-breaking is by lowest vertex index, so runs are reproducible
//! bit-for-bit from `(config, seed)`.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use crate::error::{Error, Result};
use crate::phs::unit_ball_measure;
use crate::rng::RngStream;
use crate::sampling::{GoalSet, InformedSampler};
use crate::tree::{Tree, ROOT};
use crate::world::{ProblemInstance, World};
use crate::{State, GOAL_EPSILON, RETRY_CAP};

/// Moves from `v` toward `x`, at most `eta` far: returns `x` itself
/// when it is within reach, otherwise the point at distance `eta` from
/// `v` along the ray to `x`.
pub fn steer(v: &State, x: &State, eta: f64) -> State {
    assert!(eta > 0.0, "eta must be positive");
    let delta = x - v;
    let dist = delta.norm();
    if dist <= eta {
        x.clone()
    } else {
        v + delta * (eta / dist)
    }
}

/// Minimum r-disc rewiring radius for a tree of `card` vertices drawn
/// from a region of the given Lebesgue `measure` in R^n, scaled by
/// `scale`:
///
/// `scale * (2 (1 + 1/n) * (measure / zeta_n) * (ln card / card))^(1/n)`
///
/// In informed mode callers pass `measure = min(domain, informed set)`
/// and `card = |V intersect X_f_hat|`. The working neighborhood radius
/// is `min(eta, rewire_radius(..))`.
pub fn rewire_radius(n: usize, measure: f64, card: usize, scale: f64) -> Result<f64> {
    assert!(n >= 1, "dimension must be at least 1");
    assert!(measure > 0.0, "measure must be positive or +inf");
    assert!(scale > 0.0, "scale must be positive");
    if card < 2 {
        return Err(Error::TreeTooSmall { card });
    }
    if measure.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let n_f = n as f64;
    let card_f = card as f64;
    let inner =
        2.0 * (1.0 + 1.0 / n_f) * (measure / unit_ball_measure(n)) * (card_f.ln() / card_f);
    Ok(scale * inner.powf(1.0 / n_f))
}

/// Minimum k-nearest rewiring count for a tree of `card` vertices,
/// scaled by `scale`: `ceil(scale * e * (1 + 1/n) * ln card)`.
pub fn rewire_k(n: usize, card: usize, scale: f64) -> usize {
    assert!(n >= 1, "dimension must be at least 1");
    assert!(card >= 2, "k-nearest rewiring needs at least two vertices");
    assert!(scale > 0.0, "scale must be positive");
    let n_f = n as f64;
    (scale * std::f64::consts::E * (1.0 + 1.0 / n_f) * (card as f64).ln()).ceil() as usize
}

/// How the rewiring neighborhood of a new vertex is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RewireMode {
    /// All live vertices within `min(eta, rewire_radius(..))`.
    RDisc,
    /// The `rewire_k(..)` nearest live vertices.
    KNearest,
    /// Every live vertex. Used by the convergence experiments.
    All,
    /// All live vertices within a fixed radius, bypassing the formula.
    FixedRadius(f64),
}

/// Stopping rule for [`Planner::plan`]: any combination of an iteration
/// cap, a wall-clock cap and a target cost, with at least one of the
/// two caps set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub max_iterations: Option<u64>,
    pub max_duration: Option<Duration>,
    /// Stop as soon as the best cost reaches this value.
    pub stop_cost: Option<f64>,
}

impl Budget {
    pub fn iterations(n: u64) -> Self {
        Budget {
            max_iterations: Some(n),
            max_duration: None,
            stop_cost: None,
        }
    }

    pub fn duration(d: Duration) -> Self {
        Budget {
            max_iterations: None,
            max_duration: Some(d),
            stop_cost: None,
        }
    }

    pub fn with_stop_cost(mut self, c: f64) -> Self {
        self.stop_cost = Some(c);
        self
    }

    fn validate(&self) -> Result<()> {
        let has_iterations = matches!(self.max_iterations, Some(n) if n > 0);
        let has_duration = matches!(self.max_duration, Some(d) if d > Duration::ZERO);
        if !has_iterations && !has_duration {
            return Err(Error::InvalidConfig(
                "budget needs a positive iteration or wall-clock cap".into(),
            ));
        }
        if let Some(c) = self.stop_cost {
            if !(c > 0.0) {
                return Err(Error::InvalidConfig(format!("stop cost {c} must be positive")));
            }
        }
        Ok(())
    }
}

/// The six planner configurations compared throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// RRT* as published.
    Plain,
    /// RRT* with admissible graph pruning.
    Pruning,
    /// RRT* rejecting `x_new` by the heuristic.
    RejectNew,
    /// RRT* rejecting `x_rand` by the heuristic.
    RejectRand,
    /// Pruning plus both rejection filters.
    Combined,
    /// Informed sampling plus graph pruning.
    Informed,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::Plain,
        Variant::Pruning,
        Variant::RejectNew,
        Variant::RejectRand,
        Variant::Combined,
        Variant::Informed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::Pruning => "pruning",
            Variant::RejectNew => "reject-new",
            Variant::RejectRand => "reject-rand",
            Variant::Combined => "combined",
            Variant::Informed => "informed",
        }
    }

    /// Whether the variant filters samples by the heuristic.
    pub fn uses_rejection(self) -> bool {
        matches!(
            self,
            Variant::RejectNew | Variant::RejectRand | Variant::Combined
        )
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown variant '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerConfig {
    /// Maximum edge length; may be `+inf` to disable clamping.
    pub eta: f64,
    pub rewire_mode: RewireMode,
    /// Multiplier on the minimum rewiring bound.
    pub rewire_scale: f64,
    /// Probability of proposing an exact goal state instead of a sample.
    pub goal_bias: f64,
    /// Keep the goal bias active once a solution exists.
    pub goal_bias_after_solution: bool,
    /// Fractional cost improvement that triggers pruning.
    pub prune_threshold: f64,
    pub informed_sampling: bool,
    pub graph_pruning: bool,
    pub reject_x_rand: bool,
    pub reject_x_new: bool,
    pub budget: Budget,
    pub seed: u64,
}

impl PlannerConfig {
    /// Defaults: r-disc rewiring at twice the minimum bound, 5% goal
    /// bias while unsolved, 5% prune threshold, all variant flags off.
    pub fn new(eta: f64, budget: Budget, seed: u64) -> Self {
        PlannerConfig {
            eta,
            rewire_mode: RewireMode::RDisc,
            rewire_scale: 2.0,
            goal_bias: 0.05,
            goal_bias_after_solution: false,
            prune_threshold: 0.05,
            informed_sampling: false,
            graph_pruning: false,
            reject_x_rand: false,
            reject_x_new: false,
            budget,
            seed,
        }
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.informed_sampling = false;
        self.graph_pruning = false;
        self.reject_x_rand = false;
        self.reject_x_new = false;
        match variant {
            Variant::Plain => {}
            Variant::Pruning => self.graph_pruning = true,
            Variant::RejectNew => self.reject_x_new = true,
            Variant::RejectRand => self.reject_x_rand = true,
            Variant::Combined => {
                self.graph_pruning = true;
                self.reject_x_new = true;
                self.reject_x_rand = true;
            }
            Variant::Informed => {
                self.informed_sampling = true;
                self.graph_pruning = true;
            }
        }
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0) {
            return Err(Error::InvalidConfig(format!("eta {} must be positive", self.eta)));
        }
        if !(self.rewire_scale > 1.0) {
            return Err(Error::InvalidConfig(format!(
                "rewire scale {} must exceed 1",
                self.rewire_scale
            )));
        }
        if !(0.0..1.0).contains(&self.goal_bias) {
            return Err(Error::InvalidConfig(format!(
                "goal bias {} must lie in [0, 1)",
                self.goal_bias
            )));
        }
        if !(0.0..1.0).contains(&self.prune_threshold) {
            return Err(Error::InvalidConfig(format!(
                "prune threshold {} must lie in [0, 1)",
                self.prune_threshold
            )));
        }
        if let RewireMode::FixedRadius(r) = self.rewire_mode {
            if !(r > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "fixed rewiring radius {r} must be positive"
                )));
            }
        }
        self.budget.validate()
    }
}

/// Snapshot of the best cost after one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: u64,
    pub wall: Duration,
    pub best_cost: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub samples_drawn: u64,
    pub samples_rejected: u64,
    pub rewirings: u64,
    pub pruned_vertices: u64,
}

/// Everything a planning run produced: the per-iteration cost trace,
/// the best path found (if any), and effort counters.
#[derive(Debug, Clone)]
pub struct PlanResult {
    pub records: Vec<IterationRecord>,
    /// Start-to-goal states of the best solution, `None` when the
    /// budget ended before any goal connection.
    pub path: Option<Vec<State>>,
    pub best_cost: f64,
    pub iterations: u64,
    pub counters: Counters,
    /// Ordinals (in draw order) of samples that passed the heuristic
    /// filters, for cross-variant sampling audits.
    pub accepted_draws: Vec<u64>,
    pub live_vertices: usize,
}

/// Repeatedly deletes live leaves whose focal-sum heuristic exceeds
/// `c`, to a fixpoint. The root and every vertex with `f_hat <= c` are
/// never touched; interior vertices above the bound survive while they
/// shelter a descendant below it. Returns the number removed.
pub fn prune(tree: &mut Tree, c: f64, mut heuristic: impl FnMut(&State) -> f64) -> u64 {
    if c.is_infinite() {
        return 0;
    }
    let mut removed = 0;
    loop {
        let doomed: Vec<usize> = tree
            .live_vertices()
            .filter(|&v| v != ROOT && tree.is_leaf(v) && heuristic(tree.state(v)) > c)
            .collect();
        if doomed.is_empty() {
            return removed;
        }
        for v in doomed {
            tree.remove_leaf(v);
            removed += 1;
        }
    }
}

/// Outcome of one extension attempt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendOutcome {
    /// Index of the inserted vertex, `None` when no collision-free
    /// parent existed (tree left unchanged).
    pub vertex: Option<usize>,
    pub rewirings: u64,
}

/// Attaches `x_new` to the cost-minimizing collision-free parent among
/// `{v_nearest} ∪ neighbors`, then rewires every neighbor whose
/// cost-to-come strictly decreases through `x_new` (collision checked),
/// refreshing descendant costs. Candidates are tried in ascending
/// (cost, index) order.
pub fn extend(
    tree: &mut Tree,
    x_new: &State,
    v_nearest: usize,
    neighbors: &[usize],
    world: &World,
    spacing: f64,
) -> ExtendOutcome {
    let mut candidates: Vec<(f64, usize)> = neighbors
        .iter()
        .copied()
        .chain(std::iter::once(v_nearest))
        .map(|v| (tree.cost(v) + (x_new - tree.state(v)).norm(), v))
        .collect();
    candidates.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    candidates.dedup_by_key(|c| c.1);

    let mut parent = None;
    for &(_, v) in &candidates {
        if world.segment_free(tree.state(v), x_new, spacing) {
            parent = Some(v);
            break;
        }
    }
    let Some(parent) = parent else {
        return ExtendOutcome {
            vertex: None,
            rewirings: 0,
        };
    };

    let edge = (x_new - tree.state(parent)).norm();
    let v_new = tree.insert(x_new.clone(), parent, edge);
    let g_new = tree.cost(v_new);

    let mut order: Vec<(f64, usize)> = neighbors
        .iter()
        .copied()
        .filter(|&v| v != parent)
        .map(|v| (g_new + (x_new - tree.state(v)).norm(), v))
        .collect();
    order.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut rewirings = 0;
    for (through, v) in order {
        if through < tree.cost(v) && world.segment_free(x_new, tree.state(v), spacing) {
            tree.reparent(v, v_new, through - g_new);
            rewirings += 1;
        }
    }
    ExtendOutcome {
        vertex: Some(v_new),
        rewirings,
    }
}

/// Anytime RRT* planner over one problem instance.
pub struct Planner {
    world: Arc<World>,
    sampler: InformedSampler,
    config: PlannerConfig,
    rng: RngStream,
    tree: Tree,
    x_soln: Vec<usize>,
    solution_found: bool,
    last_prune_cost: f64,
    informed_count: usize,
    informed_count_cost: f64,
    counters: Counters,
    records: Vec<IterationRecord>,
    accepted_draws: Vec<u64>,
    iterations: u64,
    terminal: bool,
    spacing: f64,
    started: Instant,
}

impl Planner {
    pub fn new(instance: &ProblemInstance, config: PlannerConfig) -> Result<Self> {
        config.validate()?;
        let world = instance.world().clone();
        if !world.point_free(instance.start()) {
            return Err(Error::InvalidWorld("start is not collision-free".into()));
        }
        let goals = GoalSet::new(instance.goals().to_vec())?;
        let sampler = InformedSampler::new(instance.start().clone(), goals, world.clone())?;
        let spacing = 0.002 * config.eta.min(world.diameter());
        Ok(Planner {
            world,
            sampler,
            rng: RngStream::from_seed(config.seed),
            config,
            tree: Tree::new(instance.start().clone()),
            x_soln: Vec::new(),
            solution_found: false,
            last_prune_cost: f64::INFINITY,
            informed_count: 0,
            informed_count_cost: f64::NAN,
            counters: Counters::default(),
            records: Vec::new(),
            accepted_draws: Vec::new(),
            iterations: 0,
            terminal: false,
            spacing,
            started: Instant::now(),
        })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn config(&self) -> &PlannerConfig {
        &self.config
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    /// Current best solution cost: minimum cost-to-come over goal
    /// vertices, `+inf` while unsolved.
    pub fn best_cost(&self) -> f64 {
        self.x_soln
            .iter()
            .map(|&v| self.tree.cost(v))
            .fold(f64::INFINITY, f64::min)
    }

    /// Goal vertices currently in the tree.
    pub fn solution_vertices(&self) -> &[usize] {
        &self.x_soln
    }

    /// Installs an initial solution path (start to goal, collision-free
    /// edges) before planning, as the convergence experiments require.
    pub fn seed_initial_path(&mut self, path: &[State]) -> Result<()> {
        if path.len() < 2 {
            return Err(Error::InvalidConfig("initial path needs two states".into()));
        }
        if path[0] != *self.tree.state(ROOT) {
            return Err(Error::InvalidConfig("initial path must begin at the start".into()));
        }
        if self.goal_index(path.last().unwrap()).is_none() {
            return Err(Error::InvalidConfig("initial path must end at a goal".into()));
        }
        let mut prev = ROOT;
        for window in path.windows(2) {
            if !self.world.segment_free(&window[0], &window[1], self.spacing) {
                return Err(Error::InvalidWorld("initial path edge collides".into()));
            }
            let edge = (&window[1] - &window[0]).norm();
            prev = self.tree.insert(window[1].clone(), prev, edge);
        }
        self.x_soln.push(prev);
        self.solution_found = true;
        Ok(())
    }

    fn goal_index(&self, x: &State) -> Option<usize> {
        self.sampler
            .goals()
            .states()
            .iter()
            .position(|g| (g - x).norm() <= GOAL_EPSILON)
    }

    /// One sample draw: a goal-bias coin (while active), then an exact
    /// goal state, an informed draw or a plain domain draw. Every
    /// variant consumes the stream identically until a solution exists.
    fn propose(&mut self, c: f64) -> Result<State> {
        self.counters.samples_drawn += 1;
        let bias_active = self.config.goal_bias > 0.0
            && (!self.solution_found || self.config.goal_bias_after_solution);
        if bias_active {
            let u: f64 = self.rng.random();
            if u < self.config.goal_bias {
                let m = self.sampler.goals().len();
                let k = ((self.rng.random::<f64>() * m as f64) as usize).min(m - 1);
                return Ok(self.sampler.goals()[k].clone());
            }
        }
        if self.config.informed_sampling {
            self.sampler.sample_informed(c, &mut self.rng)
        } else {
            Ok(self.world.sample_domain(&mut self.rng))
        }
    }

    fn draw_x_rand(&mut self, c: f64) -> Result<State> {
        if !(self.config.reject_x_rand && c.is_finite()) {
            return self.propose(c);
        }
        for _ in 0..RETRY_CAP {
            let x = self.propose(c)?;
            if self.sampler.heuristic(&x) < c {
                return Ok(x);
            }
            self.counters.samples_rejected += 1;
        }
        Err(Error::RetryBudgetExhausted { attempts: RETRY_CAP })
    }

    fn ensure_informed_count(&mut self, c: f64) {
        if self.informed_count_cost == c {
            return;
        }
        self.informed_count = if c.is_finite() {
            self.tree
                .live_vertices()
                .filter(|&v| self.sampler.heuristic(self.tree.state(v)) < c)
                .count()
        } else {
            self.tree.live_count()
        };
        self.informed_count_cost = c;
    }

    fn neighborhood(&mut self, x_new: &State, c: f64) -> Vec<usize> {
        let n = self.world.dimension();
        let card = if self.config.informed_sampling {
            self.ensure_informed_count(c);
            self.informed_count
        } else {
            self.tree.live_count()
        };
        match self.config.rewire_mode {
            RewireMode::All => self.tree.live_vertices().collect(),
            RewireMode::FixedRadius(r) => self.tree.near_radius(x_new, r),
            RewireMode::RDisc => {
                let r = if card < 2 {
                    self.config.eta
                } else {
                    let measure = if self.config.informed_sampling {
                        self.world
                            .measure()
                            .min(self.sampler.union_measure_bound(c))
                    } else {
                        self.world.measure()
                    };
                    rewire_radius(n, measure, card, self.config.rewire_scale)
                        .expect("card checked above")
                        .min(self.config.eta)
                };
                if r.is_finite() {
                    self.tree.near_radius(x_new, r)
                } else {
                    self.tree.live_vertices().collect()
                }
            }
            RewireMode::KNearest => {
                let k = if card < 2 {
                    1
                } else {
                    rewire_k(n, card, self.config.rewire_scale)
                };
                self.tree.near_k(x_new, k)
            }
        }
    }

    /// Runs one iteration. Returns `false` once the budget is exhausted
    /// or sampling reports that no state can improve the solution.
    pub fn step(&mut self) -> bool {
        if self.terminal || self.budget_exhausted() {
            return false;
        }
        self.iterations += 1;
        let c = self.best_cost();

        let x_rand = match self.draw_x_rand(c) {
            Ok(x) => x,
            Err(_) => {
                self.terminal = true;
                self.push_record(c);
                return false;
            }
        };
        let v_nearest = self.tree.nearest(&x_rand);
        let x_new = steer(self.tree.state(v_nearest), &x_rand, self.config.eta);

        if self.config.reject_x_new && c.is_finite() && self.sampler.heuristic(&x_new) >= c {
            self.counters.samples_rejected += 1;
            self.push_record(c);
            return true;
        }
        self.accepted_draws.push(self.counters.samples_drawn);

        let neighbors = self.neighborhood(&x_new, c);
        let outcome = extend(
            &mut self.tree,
            &x_new,
            v_nearest,
            &neighbors,
            &self.world,
            self.spacing,
        );
        self.counters.rewirings += outcome.rewirings;

        if let Some(v_new) = outcome.vertex {
            if self.goal_index(&x_new).is_some() {
                self.x_soln.push(v_new);
                self.solution_found = true;
            }
            if c.is_finite() && self.sampler.heuristic(&x_new) < c {
                self.informed_count += 1;
            } else if c.is_infinite() {
                self.informed_count += 1;
            }
        }

        let best = self.best_cost();
        if self.config.graph_pruning
            && best < self.last_prune_cost * (1.0 - self.config.prune_threshold)
        {
            let sampler = &self.sampler;
            self.counters.pruned_vertices += prune(&mut self.tree, best, |x| sampler.heuristic(x));
            self.last_prune_cost = best;
            self.informed_count_cost = f64::NAN;
        }
        if best < c {
            self.informed_count_cost = f64::NAN;
        }
        self.push_record(best);
        true
    }

    fn push_record(&mut self, best_cost: f64) {
        self.records.push(IterationRecord {
            iteration: self.iterations,
            wall: self.started.elapsed(),
            best_cost,
        });
    }

    fn budget_exhausted(&self) -> bool {
        let b = &self.config.budget;
        if let Some(n) = b.max_iterations {
            if self.iterations >= n {
                return true;
            }
        }
        if let Some(d) = b.max_duration {
            if self.started.elapsed() >= d {
                return true;
            }
        }
        if let Some(target) = b.stop_cost {
            if self.best_cost() <= target {
                return true;
            }
        }
        false
    }

    /// Best path as a state sequence, `None` while unsolved.
    pub fn best_path(&self) -> Option<Vec<State>> {
        let (&v_best, _) = self
            .x_soln
            .iter()
            .map(|v| (v, self.tree.cost(*v)))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(b.0)))?;
        Some(
            self.tree
                .path_from_root(v_best)
                .into_iter()
                .map(|v| self.tree.state(v).clone())
                .collect(),
        )
    }

    fn into_result(self) -> PlanResult {
        PlanResult {
            path: self.best_path(),
            best_cost: self.best_cost(),
            iterations: self.iterations,
            counters: self.counters,
            live_vertices: self.tree.live_count(),
            records: self.records,
            accepted_draws: self.accepted_draws,
        }
    }

    /// Runs to budget exhaustion and reports the result. A run that
    /// never connects to a goal reports `path: None` with the full
    /// exploration record.
    pub fn plan(mut self) -> PlanResult {
        self.started = Instant::now();
        while self.step() {}
        self.into_result()
    }
}

/// Convenience wrapper: build a planner for `instance` and run it.
pub fn plan(instance: &ProblemInstance, config: PlannerConfig) -> Result<PlanResult> {
    Ok(Planner::new(instance, config)?.plan())
}
