//! Planning worlds: axis-aligned box domains with axis-aligned
//! obstacles, plus the two benchmark families used throughout the crate
//! (a single centered cube and a regular obstacle lattice).
//!
//! Obstacles block their open interior only, so states and segments may
//! graze obstacle boundaries. Collision checking is by sampled
//! checkpoints at a caller-chosen spacing; see [`World::segment_free`].

use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::{check_dim, check_finite, State};

/// Axis-aligned box, stored as per-axis lower/upper corners.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Aabb {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::InvalidWorld("box corner dimensions differ".into()));
        }
        for (lo, hi) in lower.iter().zip(&upper) {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidWorld("box corners must be finite".into()));
            }
            if lo > hi {
                return Err(Error::InvalidWorld(format!(
                    "box lower corner {lo} above upper {hi}"
                )));
            }
        }
        Ok(Aabb { lower, upper })
    }

    /// Cube of side `side` centered at `centre`.
    pub fn cube(centre: &[f64], side: f64) -> Result<Self> {
        assert!(side >= 0.0, "side must be nonnegative");
        let half = side / 2.0;
        Aabb::new(
            centre.iter().map(|c| c - half).collect(),
            centre.iter().map(|c| c + half).collect(),
        )
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    /// Whether `x` lies strictly inside the box.
    pub fn contains_interior(&self, x: &State) -> bool {
        debug_assert_eq!(x.len(), self.dimension());
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&v, (&lo, &hi))| v > lo && v < hi)
    }

    /// Whether `x` lies inside or on the boundary.
    pub fn contains_closed(&self, x: &State) -> bool {
        debug_assert_eq!(x.len(), self.dimension());
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&v, (&lo, &hi))| v >= lo && v <= hi)
    }
}

/// Infinite axis-aligned obstacle lattice: cubes of side `width` at
/// every point of the integer grid scaled by `period`, on all axes.
/// The realized obstacle set is the lattice clipped to the domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub period: f64,
    pub width: f64,
}

impl LatticeSpec {
    fn validate(&self) -> Result<()> {
        if !self.period.is_finite() || !self.width.is_finite() {
            return Err(Error::InvalidWorld("lattice parameters must be finite".into()));
        }
        if self.period <= 0.0 || self.width <= 0.0 || self.width >= self.period {
            return Err(Error::InvalidWorld(format!(
                "lattice needs 0 < width < period, got width {} period {}",
                self.width, self.period
            )));
        }
        Ok(())
    }

    fn contains_interior(&self, x: &State) -> bool {
        let half = self.width / 2.0;
        x.iter().all(|&v| {
            let nearest = (v / self.period).round() * self.period;
            (v - nearest).abs() < half
        })
    }
}

/// Obstacle storage: an explicit box list, or a lattice pattern for
/// worlds whose box count would be exponential in the dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Obstacles {
    Boxes(Vec<Aabb>),
    Lattice(LatticeSpec),
}

/// A bounded box domain with obstacles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct World {
    lower: Vec<f64>,
    upper: Vec<f64>,
    obstacles: Obstacles,
}

impl World {
    /// Domain `[lower, upper]` with an explicit obstacle list. Obstacles
    /// must fit inside the domain.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, obstacles: Vec<Aabb>) -> Result<Self> {
        let world = World {
            lower,
            upper,
            obstacles: Obstacles::Boxes(obstacles),
        };
        world.validate()?;
        Ok(world)
    }

    /// Domain `[lower, upper]` with a lattice obstacle pattern.
    pub fn with_lattice(lower: Vec<f64>, upper: Vec<f64>, lattice: LatticeSpec) -> Result<Self> {
        let world = World {
            lower,
            upper,
            obstacles: Obstacles::Lattice(lattice),
        };
        world.validate()?;
        Ok(world)
    }

    fn validate(&self) -> Result<()> {
        if self.lower.len() != self.upper.len() || self.lower.is_empty() {
            return Err(Error::InvalidWorld("domain corner dimensions differ".into()));
        }
        for (lo, hi) in self.lower.iter().zip(&self.upper) {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidWorld("domain bounds must be finite".into()));
            }
            if lo >= hi {
                return Err(Error::InvalidWorld(format!(
                    "empty domain extent [{lo}, {hi}]"
                )));
            }
        }
        match &self.obstacles {
            Obstacles::Boxes(boxes) => {
                for b in boxes {
                    if b.dimension() != self.lower.len() {
                        return Err(Error::InvalidWorld(
                            "obstacle dimension differs from domain".into(),
                        ));
                    }
                    let inside = b
                        .lower
                        .iter()
                        .zip(&b.upper)
                        .zip(self.lower.iter().zip(&self.upper))
                        .all(|((blo, bhi), (lo, hi))| blo >= lo && bhi <= hi);
                    if !inside {
                        return Err(Error::InvalidWorld("obstacle outside domain".into()));
                    }
                }
            }
            Obstacles::Lattice(spec) => spec.validate()?,
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn obstacles(&self) -> &Obstacles {
        &self.obstacles
    }

    /// Lebesgue measure of the domain box (obstacles are not deducted).
    pub fn measure(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| hi - lo)
            .product()
    }

    /// Length of the domain diagonal.
    pub fn diameter(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| (hi - lo) * (hi - lo))
            .sum::<f64>()
            .sqrt()
    }

    /// Whether `x` lies in the closed domain box.
    pub fn contains_point(&self, x: &State) -> bool {
        x.len() == self.dimension()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| v >= lo && v <= hi)
    }

    /// Whether `x` is inside the domain and outside every obstacle
    /// interior.
    pub fn point_free(&self, x: &State) -> bool {
        if !self.contains_point(x) {
            return false;
        }
        match &self.obstacles {
            Obstacles::Boxes(boxes) => !boxes.iter().any(|b| b.contains_interior(x)),
            Obstacles::Lattice(spec) => !spec.contains_interior(x),
        }
    }

    /// Whether the segment from `a` to `b` stays free, checked at both
    /// endpoints and interior points no further than `spacing` apart.
    /// `a == b` reduces to a point check.
    pub fn segment_free(&self, a: &State, b: &State, spacing: f64) -> bool {
        assert!(spacing > 0.0, "checkpoint spacing must be positive");
        debug_assert_eq!(a.len(), self.dimension());
        debug_assert_eq!(b.len(), self.dimension());
        if !self.point_free(a) || !self.point_free(b) {
            return false;
        }
        let length = (b - a).norm();
        if length == 0.0 {
            return true;
        }
        let steps = (length / spacing).ceil() as u64;
        for i in 1..steps {
            let t = i as f64 / steps as f64;
            let x = a + (b - a) * t;
            if !self.point_free(&x) {
                return false;
            }
        }
        true
    }

    /// Draws a uniform state from the domain box (ignoring obstacles).
    pub fn sample_domain(&self, rng: &mut RngStream) -> State {
        State::from_iterator(
            self.dimension(),
            self.lower
                .iter()
                .zip(&self.upper)
                .map(|(&lo, &hi)| rng.random_range(lo..hi)),
        )
    }
}

/// A planning problem: a world, a start, one or more goals and, when
/// known, the optimal cost for benchmark normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    world: Arc<World>,
    start: State,
    goals: Vec<State>,
    c_opt: Option<f64>,
}

impl ProblemInstance {
    pub fn new(
        world: World,
        start: State,
        goals: Vec<State>,
        c_opt: Option<f64>,
    ) -> Result<Self> {
        let world = Arc::new(world);
        check_dim(world.dimension(), start.len())?;
        check_finite(&start, "start")?;
        if !world.point_free(&start) {
            return Err(Error::InvalidWorld("start is not collision-free".into()));
        }
        if goals.is_empty() {
            return Err(Error::InvalidGoalSet("no goals".into()));
        }
        for (i, g) in goals.iter().enumerate() {
            check_dim(world.dimension(), g.len())?;
            check_finite(g, "goal")?;
            if !world.point_free(g) {
                return Err(Error::InvalidWorld(format!(
                    "goal {i} is not collision-free"
                )));
            }
            if goals[..i].contains(g) {
                return Err(Error::InvalidGoalSet(format!("goal {i} repeated")));
            }
        }
        if let Some(c) = c_opt {
            if !c.is_finite() || c <= 0.0 {
                return Err(Error::InvalidConfig(format!("optimum {c} must be positive")));
            }
            let c_min = goals
                .iter()
                .map(|g| (g - &start).norm())
                .fold(f64::INFINITY, f64::min);
            if c < c_min {
                return Err(Error::InvalidConfig(format!(
                    "optimum {c} below the straight-line bound {c_min}"
                )));
            }
        }
        Ok(ProblemInstance {
            world,
            start,
            goals,
            c_opt,
        })
    }

    pub fn world(&self) -> &Arc<World> {
        &self.world
    }

    pub fn start(&self) -> &State {
        &self.start
    }

    pub fn goals(&self) -> &[State] {
        &self.goals
    }

    pub fn c_opt(&self) -> Option<f64> {
        self.c_opt
    }

    /// Minimum straight-line cost over the goal set.
    pub fn c_min(&self) -> f64 {
        self.goals
            .iter()
            .map(|g| (g - &self.start).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            dimension: self.world.dimension(),
            lower: self.world.lower.clone(),
            upper: self.world.upper.clone(),
            obstacles: self.world.obstacles.clone(),
            start: self.start.iter().copied().collect(),
            goals: self
                .goals
                .iter()
                .map(|g| g.iter().copied().collect())
                .collect(),
            c_opt: self.c_opt,
        };
        serde_json::to_string_pretty(&file).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        let world = World {
            lower: file.lower,
            upper: file.upper,
            obstacles: file.obstacles,
        };
        world.validate()?;
        if file.start.len() != file.dimension {
            return Err(Error::DimensionMismatch {
                expected: file.dimension,
                found: file.start.len(),
            });
        }
        ProblemInstance::new(
            world,
            State::from_vec(file.start),
            file.goals.into_iter().map(State::from_vec).collect(),
            file.c_opt,
        )
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    dimension: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    obstacles: Obstacles,
    start: Vec<f64>,
    goals: Vec<Vec<f64>>,
    #[serde(default)]
    c_opt: Option<f64>,
}

fn axis_state(n: usize, first: f64) -> State {
    let mut x = State::zeros(n);
    x[0] = first;
    x
}

/// Single-obstacle benchmark: domain `[-l/2, l/2]^n`, start and goal at
/// `-+0.5` on the first axis, and a cube of side `w` centered at the
/// origin blocking the straight line between them.
///
/// Requires `n >= 2`, `l > 1` and `0 < w < 1`. The known optimum
/// [`toy_optimum`] is attached to the instance.
pub fn toy_world(n: usize, l: f64, w: f64) -> Result<ProblemInstance> {
    if n < 2 {
        return Err(Error::InvalidWorld("toy world needs n >= 2".into()));
    }
    if !(l.is_finite() && l > 1.0) {
        return Err(Error::InvalidWorld(format!("toy world needs l > 1, got {l}")));
    }
    if !(w.is_finite() && w > 0.0 && w < 1.0) {
        return Err(Error::InvalidWorld(format!(
            "toy world needs 0 < w < 1, got {w}"
        )));
    }
    let half = l / 2.0;
    let world = World::new(
        vec![-half; n],
        vec![half; n],
        vec![Aabb::cube(&vec![0.0; n], w)?],
    )?;
    ProblemInstance::new(
        world,
        axis_state(n, -0.5),
        vec![axis_state(n, 0.5)],
        Some(toy_optimum(n, w)),
    )
}

/// Optimal cost of [`toy_world`]: the taut path around the cube, which
/// detours to two adjacent cube corners in any plane containing the
/// first axis. Independent of the dimension for `n >= 2`.
pub fn toy_optimum(n: usize, w: f64) -> f64 {
    assert!(n >= 2, "toy world needs n >= 2");
    assert!((0.0..1.0).contains(&w), "toy world needs 0 <= w < 1");
    if w == 0.0 {
        return 1.0;
    }
    let half = w / 2.0;
    2.0 * ((0.5 - half) * (0.5 - half) + half * half).sqrt() + w
}

/// Lattice benchmark: domain `[-2, 2]^n` filled with a regular grid of
/// cubes (side 0.1, period 0.2, centered on multiples of the period on
/// every axis). Start and goal sit at `-+0.5` on the first axis in gap
/// centers, with five obstacle columns between them and the origin cube
/// blocking the straight line.
pub fn grid_world(n: usize) -> Result<ProblemInstance> {
    if n < 2 {
        return Err(Error::InvalidWorld("grid world needs n >= 2".into()));
    }
    let world = World::with_lattice(
        vec![-2.0; n],
        vec![2.0; n],
        LatticeSpec {
            period: 0.2,
            width: 0.1,
        },
    )?;
    ProblemInstance::new(world, axis_state(n, -0.5), vec![axis_state(n, 0.5)], None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Exact parametric slab test: does the segment cross the open box
    /// with a positive-length chord, and if so how long is the chord?
    fn slab_chord(a: &State, b: &State, obstacle: &Aabb) -> Option<f64> {
        let mut t0 = 0.0f64;
        let mut t1 = 1.0f64;
        for i in 0..a.len() {
            let d = b[i] - a[i];
            if d == 0.0 {
                if a[i] <= obstacle.lower[i] || a[i] >= obstacle.upper[i] {
                    return None;
                }
            } else {
                let ta = (obstacle.lower[i] - a[i]) / d;
                let tb = (obstacle.upper[i] - a[i]) / d;
                let (tmin, tmax) = if ta < tb { (ta, tb) } else { (tb, ta) };
                t0 = t0.max(tmin);
                t1 = t1.min(tmax);
                if t0 >= t1 {
                    return None;
                }
            }
        }
        Some((t1 - t0) * (b - a).norm())
    }

    #[test]
    fn construction_validates() {
        assert!(World::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![]).is_ok());
        assert!(World::new(vec![0.0], vec![0.0], vec![]).is_err());
        assert!(World::new(vec![0.0, 0.0], vec![1.0], vec![]).is_err());
        let outside = Aabb::new(vec![0.5, 0.5], vec![1.5, 1.5]).unwrap();
        assert!(World::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![outside]).is_err());
        assert!(World::with_lattice(
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            LatticeSpec {
                period: 0.2,
                width: 0.3
            }
        )
        .is_err());
        assert!(Aabb::new(vec![1.0], vec![0.0]).is_err());
    }

    #[test]
    fn measure_is_domain_volume() {
        let w = World::new(vec![-1.0, -1.0], vec![1.0, 1.0], vec![]).unwrap();
        assert_relative_eq!(w.measure(), 4.0);
        let toy = toy_world(3, 2.0, 0.4).unwrap();
        assert_relative_eq!(toy.world().measure(), 8.0);
        let grid = grid_world(2).unwrap();
        assert_relative_eq!(grid.world().measure(), 16.0);
    }

    #[test]
    fn point_free_blocks_interior_only() {
        let toy = toy_world(2, 2.0, 0.4).unwrap();
        let w = toy.world();
        assert!(!w.point_free(&state(&[0.0, 0.0])));
        assert!(w.point_free(&state(&[-0.5, 0.0])));
        assert!(w.point_free(&state(&[0.5, 0.0])));
        assert!(w.point_free(&state(&[0.2, 0.0])), "cube face is free");
        assert!(w.point_free(&state(&[0.2, 0.2])), "cube corner is free");
        assert!(!w.point_free(&state(&[0.19, 0.0])));
        assert!(!w.point_free(&state(&[1.5, 0.0])), "outside the domain");
    }

    #[test]
    fn segments_block_and_graze() {
        let toy = toy_world(2, 2.0, 0.4).unwrap();
        let w = toy.world();
        let start = state(&[-0.5, 0.0]);
        let goal = state(&[0.5, 0.0]);
        assert!(!w.segment_free(&start, &goal, 0.001));
        let above = state(&[0.5, 0.5]);
        assert!(w.segment_free(&state(&[-0.5, 0.5]), &above, 0.001));
        let graze_a = state(&[-0.5, 0.2]);
        let graze_b = state(&[0.5, 0.2]);
        assert!(w.segment_free(&graze_a, &graze_b, 0.001), "boundary contact is free");
        assert!(w.segment_free(&start, &start, 0.001));
        assert!(!w.segment_free(&state(&[0.0, 0.0]), &state(&[0.0, 0.0]), 0.001));
    }

    #[test]
    fn segment_checks_match_exact_slab_test() {
        // Sampled checkpoints may only disagree with the exact test when
        // the intersection chord is shorter than the spacing.
        let obstacle = Aabb::new(vec![-0.3, -0.2, -0.25], vec![0.1, 0.3, 0.2]).unwrap();
        let w = World::new(vec![-1.0; 3], vec![1.0; 3], vec![obstacle.clone()]).unwrap();
        let spacing = 0.01;
        let mut rng = RngStream::from_seed(77);
        let mut disagreements = 0;
        for _ in 0..10_000 {
            let a = w.sample_domain(&mut rng);
            let b = w.sample_domain(&mut rng);
            if !w.point_free(&a) || !w.point_free(&b) {
                continue;
            }
            let sampled_free = w.segment_free(&a, &b, spacing);
            let chord = slab_chord(&a, &b, &obstacle);
            let exact_free = chord.is_none();
            if sampled_free != exact_free {
                disagreements += 1;
                let chord = chord.expect("sampled test has no false positives");
                assert!(
                    chord < spacing,
                    "disagreement with chord {chord} at spacing {spacing}"
                );
            }
        }
        assert!(disagreements < 50, "too many near-tangent segments: {disagreements}");
    }

    #[test]
    fn lattice_membership_matches_explicit_boxes() {
        let grid = grid_world(2).unwrap();
        let w = grid.world();
        let mut boxes = Vec::new();
        for i in -10..=10 {
            for j in -10..=10 {
                boxes.push(
                    Aabb::cube(&[0.2 * i as f64, 0.2 * j as f64], 0.1).unwrap(),
                );
            }
        }
        let mut rng = RngStream::from_seed(90);
        for _ in 0..10_000 {
            let x = w.sample_domain(&mut rng);
            let explicit_free = !boxes.iter().any(|b| b.contains_interior(&x));
            assert_eq!(w.point_free(&x), explicit_free, "at {x:?}");
        }
    }

    #[test]
    fn grid_world_shape() {
        let grid = grid_world(4).unwrap();
        let w = grid.world();
        assert!(w.point_free(grid.start()));
        assert!(w.point_free(&grid.goals()[0]));
        assert!(!w.segment_free(grid.start(), &grid.goals()[0], 0.001));
        let columns = (-9..=9)
            .map(|k| 0.2 * k as f64)
            .filter(|c| *c > -0.5 && *c < 0.5)
            .filter(|c| !w.point_free(&state(&[*c, 0.0, 0.0, 0.0])))
            .count();
        assert_eq!(columns, 5);
        assert!(w.point_free(&state(&[-0.3, 0.0, 0.0, 0.0])), "gap between columns");
    }

    #[test]
    fn toy_optimum_matches_visibility_graph() {
        // Independent check: Dijkstra over the visibility graph of the
        // 2-D slice (start, goal, four square corners).
        for w in [0.1, 0.2, 0.4, 0.6, 0.8] {
            let obstacle = Aabb::cube(&[0.0, 0.0], w).unwrap();
            let h = w / 2.0;
            let nodes = vec![
                state(&[-0.5, 0.0]),
                state(&[0.5, 0.0]),
                state(&[-h, -h]),
                state(&[-h, h]),
                state(&[h, -h]),
                state(&[h, h]),
            ];
            let k = nodes.len();
            let mut dist = vec![vec![f64::INFINITY; k]; k];
            for i in 0..k {
                dist[i][i] = 0.0;
                for j in 0..k {
                    if i != j && slab_chord(&nodes[i], &nodes[j], &obstacle).is_none() {
                        dist[i][j] = (&nodes[i] - &nodes[j]).norm();
                    }
                }
            }
            for via in 0..k {
                for i in 0..k {
                    for j in 0..k {
                        let candidate = dist[i][via] + dist[via][j];
                        if candidate < dist[i][j] {
                            dist[i][j] = candidate;
                        }
                    }
                }
            }
            assert_relative_eq!(toy_optimum(2, w), dist[0][1], max_relative = 1e-9);
        }
        assert_relative_eq!(toy_optimum(5, 0.4), 1.1211102550927978, max_relative = 1e-12);
        assert_eq!(toy_optimum(2, 0.0), 1.0);
    }

    #[test]
    fn toy_world_attaches_its_optimum() {
        let toy = toy_world(2, 2.0, 0.4).unwrap();
        assert_relative_eq!(
            toy.c_opt().unwrap(),
            1.1211102550927978,
            max_relative = 1e-12
        );
        assert_relative_eq!(toy.c_min(), 1.0, max_relative = 1e-15);
        assert!(toy_world(1, 2.0, 0.4).is_err());
        assert!(toy_world(2, 1.0, 0.4).is_err());
        assert!(toy_world(2, 2.0, 1.0).is_err());
    }

    #[test]
    fn instance_validation() {
        let world = || World::new(vec![-1.0, -1.0], vec![1.0, 1.0], vec![]).unwrap();
        let start = state(&[-0.5, 0.0]);
        let goal = state(&[0.5, 0.0]);
        assert!(ProblemInstance::new(world(), start.clone(), vec![goal.clone()], None).is_ok());
        assert!(ProblemInstance::new(world(), start.clone(), vec![], None).is_err());
        assert!(ProblemInstance::new(
            world(),
            start.clone(),
            vec![goal.clone(), goal.clone()],
            None
        )
        .is_err());
        assert!(
            ProblemInstance::new(world(), start.clone(), vec![goal.clone()], Some(0.5)).is_err(),
            "optimum below the straight-line bound"
        );
        assert!(
            ProblemInstance::new(world(), state(&[-2.0, 0.0]), vec![goal], None).is_err(),
            "start outside the domain"
        );
    }

    #[test]
    fn json_round_trip() {
        let toy = toy_world(3, 4.0, 0.4).unwrap();
        let parsed = ProblemInstance::from_json(&toy.to_json()).unwrap();
        assert_eq!(toy, parsed);
        let grid = grid_world(8).unwrap();
        let text = grid.to_json();
        assert!(text.contains("\"lattice\""));
        let parsed = ProblemInstance::from_json(&text).unwrap();
        assert_eq!(grid, parsed);
    }

    #[test]
    fn json_schema_is_stable() {
        let text = r#"{
            "dimension": 2,
            "lower": [-1.0, -1.0],
            "upper": [1.0, 1.0],
            "obstacles": {"boxes": [{"lower": [-0.2, -0.2], "upper": [0.2, 0.2]}]},
            "start": [-0.5, 0.0],
            "goals": [[0.5, 0.0]],
            "c_opt": null
        }"#;
        let parsed = ProblemInstance::from_json(text).unwrap();
        assert_eq!(parsed.world().dimension(), 2);
        assert!(!parsed.world().point_free(&state(&[0.0, 0.0])));
    }

    #[test]
    fn domain_samples_cover_quadrants() {
        let w = World::new(vec![-1.0, -1.0], vec![1.0, 1.0], vec![]).unwrap();
        let mut rng = RngStream::from_seed(91);
        let total = 40_000;
        let mut counts = [0u64; 4];
        for _ in 0..total {
            let x = w.sample_domain(&mut rng);
            assert!(w.contains_point(&x));
            let q = (x[0] >= 0.0) as usize + 2 * (x[1] >= 0.0) as usize;
            counts[q] += 1;
        }
        let expected = total as f64 / 4.0;
        let sigma = crate::stats::binomial_sigma(total, 0.25);
        for (q, &c) in counts.iter().enumerate() {
            assert!(
                (c as f64 - expected).abs() <= 3.0 * sigma,
                "quadrant {q}: {c}"
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn degenerate_segments_reduce_to_point_checks(
            seed in 0u64..500,
            n in 2usize..=5,
        ) {
            let toy = toy_world(n, 2.0, 0.4).unwrap();
            let w = toy.world();
            let mut rng = RngStream::from_seed(seed);
            let x = w.sample_domain(&mut rng);
            prop_assert_eq!(w.segment_free(&x, &x, 0.01), w.point_free(&x));
        }

        #[test]
        fn samples_respect_bounds(seed in 0u64..500, n in 2usize..=6) {
            let grid = grid_world(n).unwrap();
            let mut rng = RngStream::from_seed(seed);
            for _ in 0..16 {
                let x = grid.world().sample_domain(&mut rng);
                prop_assert!(grid.world().contains_point(&x));
            }
        }
    }
}
