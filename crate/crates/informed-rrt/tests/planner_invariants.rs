//! Cross-cutting planner invariants on randomized worlds: tree and
//! cost consistency, sample-stream agreement between variants, and
//! heuristic-rejection equivalences.

use informed_rrt::planner::{plan, Budget, Planner, PlannerConfig, RewireMode, Variant};
use informed_rrt::rng::RngStream;
use informed_rrt::sampling::f_hat;
use informed_rrt::state;
use informed_rrt::tree::{Tree, ROOT};
use informed_rrt::world::{toy_world, Aabb, ProblemInstance, World};
use informed_rrt::GOAL_EPSILON;

use rand::Rng;

/// Start-goal diagonal world with up to three random boxes that can
/// never cover the corners.
fn random_world(seed: u64) -> ProblemInstance {
    let mut rng = RngStream::from_seed(seed);
    let boxes = (0..rng.random_range(0..4u32))
        .map(|_| {
            let lx = rng.random_range(-0.6..0.1);
            let ly = rng.random_range(-0.6..0.1);
            let w = rng.random_range(0.1..0.5);
            let h = rng.random_range(0.1..0.5);
            Aabb::new(vec![lx, ly], vec![lx + w, ly + h]).unwrap()
        })
        .collect();
    let world = World::new(vec![-1.0, -1.0], vec![1.0, 1.0], boxes).unwrap();
    ProblemInstance::new(
        world,
        state(&[-0.85, -0.85]),
        vec![state(&[0.85, 0.85])],
        None,
    )
    .unwrap()
}

/// Checks parent/child agreement and that every cost-to-come equals
/// the edge sum along its root path.
fn audit_tree(tree: &Tree) {
    for v in tree.live_vertices() {
        for &child in tree.children(v) {
            assert_eq!(tree.parent(child), Some(v), "child {child} disowns {v}");
        }
        if v == ROOT {
            assert_eq!(tree.cost(v), 0.0);
            continue;
        }
        let parent = tree.parent(v).unwrap();
        assert!(tree.is_live(parent), "live vertex {v} has dead parent");
        let edge = (tree.state(v) - tree.state(parent)).norm();
        assert!(
            (tree.cost(v) - tree.cost(parent) - edge).abs() <= 1e-9,
            "cost of {v} disagrees with its edge"
        );
        let path = tree.path_from_root(v);
        assert_eq!(path[0], ROOT);
        assert_eq!(*path.last().unwrap(), v);
        let sum: f64 = path
            .windows(2)
            .map(|e| (tree.state(e[1]) - tree.state(e[0])).norm())
            .sum();
        assert!(
            (tree.cost(v) - sum).abs() <= 1e-9,
            "path sum of {v} disagrees with its cost"
        );
    }
}

fn assert_monotone(records: &[informed_rrt::planner::IterationRecord]) {
    for pair in records.windows(2) {
        assert!(
            pair[1].best_cost <= pair[0].best_cost,
            "best cost rose at iteration {}",
            pair[1].iteration
        );
    }
}

#[test]
fn random_worlds_keep_tree_and_cost_consistent() {
    for seed in 0..50u64 {
        let instance = random_world(seed);
        for variant in [Variant::Plain, Variant::Combined, Variant::Informed] {
            let config = PlannerConfig::new(0.25, Budget::iterations(400), seed)
                .with_variant(variant);
            let mut planner = Planner::new(&instance, config).unwrap();
            while planner.step() {}
            audit_tree(planner.tree());
            for &v in planner.solution_vertices() {
                assert!(planner.tree().is_live(v), "solution vertex pruned");
            }
            let best = planner.best_cost();
            if let Some(path) = planner.best_path() {
                assert_eq!(path[0], *instance.start());
                let end = path.last().unwrap();
                assert!((end - &instance.goals()[0]).norm() <= GOAL_EPSILON);
                let sum: f64 = path.windows(2).map(|e| (&e[1] - &e[0]).norm()).sum();
                assert!((sum - best).abs() <= 1e-9);
            } else {
                assert!(best.is_infinite());
            }
        }
    }
}

#[test]
fn improving_iterations_insert_states_below_previous_cost() {
    for seed in 0..10u64 {
        let instance = random_world(seed.wrapping_add(100));
        let config = PlannerConfig::new(0.25, Budget::iterations(600), seed)
            .with_variant(Variant::Informed);
        let mut planner = Planner::new(&instance, config).unwrap();
        loop {
            let c_prev = planner.best_cost();
            let len_before = planner.tree().len();
            if !planner.step() {
                break;
            }
            let c_now = planner.best_cost();
            if c_now < c_prev {
                assert_eq!(
                    planner.tree().len(),
                    len_before + 1,
                    "improvement without an insertion"
                );
                let x_new = planner.tree().state(len_before);
                let h = f_hat(x_new, instance.start(), &instance.goals()[0]);
                assert!(
                    h < c_prev + 1e-9,
                    "seed {seed}: improving insert with heuristic {h} >= {c_prev}"
                );
            }
        }
    }
}

#[test]
fn variants_share_the_sample_stream_before_a_solution() {
    // Far goal, short edges, few iterations: no variant can solve, so
    // every variant must draw and insert identically.
    let world = World::new(vec![-1.0, -1.0], vec![1.0, 1.0], vec![]).unwrap();
    let instance = ProblemInstance::new(
        world,
        state(&[-0.9, -0.9]),
        vec![state(&[0.9, 0.9])],
        None,
    )
    .unwrap();
    let runs: Vec<_> = Variant::ALL
        .iter()
        .map(|&variant| {
            let config = PlannerConfig::new(0.05, Budget::iterations(80), 21)
                .with_variant(variant);
            let mut planner = Planner::new(&instance, config).unwrap();
            while planner.step() {}
            assert!(planner.best_cost().is_infinite());
            let states: Vec<Vec<f64>> = planner
                .tree()
                .live_vertices()
                .map(|v| planner.tree().state(v).iter().copied().collect())
                .collect();
            (states, planner.counters().samples_drawn)
        })
        .collect();
    for (states, drawn) in &runs[1..] {
        assert_eq!(*states, runs[0].0, "variant diverged before any solution");
        assert_eq!(*drawn, runs[0].1);
    }
}

#[test]
fn rejection_variants_accept_the_same_draw_ordinals() {
    // With no clamping (eta beyond the domain diameter) the steered
    // state equals the sample, so filtering the sample and filtering
    // the steered state make identical accept decisions draw by draw.
    let world = World::new(vec![-1.0, -1.0], vec![1.0, 1.0], vec![]).unwrap();
    let instance = ProblemInstance::new(
        world,
        state(&[-0.5, 0.0]),
        vec![state(&[0.5, 0.0])],
        Some(1.0),
    )
    .unwrap();
    let run = |variant: Variant| {
        let config = PlannerConfig::new(3.0, Budget::iterations(800), 5).with_variant(variant);
        plan(&instance, config).unwrap()
    };
    let rand_run = run(Variant::RejectRand);
    let new_run = run(Variant::RejectNew);
    assert!(rand_run.best_cost.is_finite());
    assert!(new_run.best_cost.is_finite());

    let prefix = rand_run
        .counters
        .samples_drawn
        .min(new_run.counters.samples_drawn);
    let filter = |draws: &[u64]| -> Vec<u64> {
        draws.iter().copied().filter(|&d| d <= prefix).collect()
    };
    let accepted_rand = filter(&rand_run.accepted_draws);
    let accepted_new = filter(&new_run.accepted_draws);
    assert!(!accepted_rand.is_empty());
    assert_eq!(
        accepted_rand, accepted_new,
        "the two rejection filters accepted different draws"
    );
}

#[test]
fn informed_and_plain_agree_until_first_solution() {
    let instance = toy_world(2, 2.0, 0.4).unwrap();
    let make = |variant: Variant| {
        let config =
            PlannerConfig::new(0.3, Budget::iterations(2000), 33).with_variant(variant);
        Planner::new(&instance, config).unwrap()
    };
    let mut plain = make(Variant::Plain);
    let mut informed = make(Variant::Informed);
    let mut steps = 0;
    while plain.best_cost().is_infinite() && informed.best_cost().is_infinite() {
        assert!(plain.step() && informed.step());
        steps += 1;
        assert!(steps < 2000, "no solution in either planner");
        let a = plain.tree();
        let b = informed.tree();
        assert_eq!(a.len(), b.len(), "tree sizes diverged while unsolved");
        if a.len() > 1 {
            let last = a.len() - 1;
            assert_eq!(
                a.state(last),
                b.state(last),
                "inserted states diverged while unsolved"
            );
        }
    }
    // Both runs share the stream, so the first solution lands on the
    // same iteration.
    assert_eq!(plain.best_cost().is_finite(), informed.best_cost().is_finite());
    assert_eq!(plain.iterations(), informed.iterations());
}

#[test]
fn multi_goal_planning_connects_the_cheaper_goal() {
    let world = World::new(vec![-1.0, -1.0], vec![1.0, 1.0], vec![]).unwrap();
    let near = state(&[0.5, 0.0]);
    let far = state(&[0.9, 0.9]);
    let instance = ProblemInstance::new(
        world,
        state(&[-0.5, 0.0]),
        vec![near.clone(), far],
        Some(1.0),
    )
    .unwrap();
    // Keep goal bias alive after the first solution: if the far goal
    // connects first, only continued goal draws can reach the near
    // one, and the measure-weighted pick then favours it heavily.
    let mut config =
        PlannerConfig::new(0.3, Budget::iterations(4000), 2).with_variant(Variant::Informed);
    config.goal_bias_after_solution = true;
    let result = plan(&instance, config).unwrap();
    assert!(result.best_cost < 1.05, "cost {}", result.best_cost);
    let path = result.path.unwrap();
    assert!(
        (path.last().unwrap() - &near).norm() <= GOAL_EPSILON,
        "best path should end at the closer goal"
    );
}

#[test]
fn k_nearest_mode_plans_to_tolerance() {
    let instance = toy_world(2, 2.0, 0.4).unwrap();
    let c_opt = instance.c_opt().unwrap();
    let mut config =
        PlannerConfig::new(0.3, Budget::iterations(6000), 8).with_variant(Variant::Informed);
    config.rewire_mode = RewireMode::KNearest;
    let mut planner = Planner::new(&instance, config).unwrap();
    while planner.step() {}
    audit_tree(planner.tree());
    assert!(
        planner.best_cost() <= 1.05 * c_opt,
        "cost {} misses tolerance",
        planner.best_cost()
    );
}

#[test]
fn goal_bias_after_solution_keeps_monotone_records() {
    let instance = toy_world(2, 2.0, 0.4).unwrap();
    let mut config =
        PlannerConfig::new(0.3, Budget::iterations(2500), 13).with_variant(Variant::Informed);
    config.goal_bias_after_solution = true;
    let result = plan(&instance, config).unwrap();
    assert!(result.best_cost.is_finite());
    assert_monotone(&result.records);
}

#[test]
fn pruning_never_raises_best_cost_or_kills_solutions() {
    for seed in [1u64, 9, 27] {
        let instance = toy_world(2, 2.0, 0.4).unwrap();
        let config = PlannerConfig::new(0.3, Budget::iterations(3000), seed)
            .with_variant(Variant::Informed);
        let mut planner = Planner::new(&instance, config).unwrap();
        let mut pruned_before = 0;
        loop {
            let best_before = planner.best_cost();
            if !planner.step() {
                break;
            }
            let counters = planner.counters();
            if counters.pruned_vertices > pruned_before {
                pruned_before = counters.pruned_vertices;
                assert!(
                    planner.best_cost() <= best_before,
                    "a prune event raised the best cost"
                );
                for &v in planner.solution_vertices() {
                    assert!(planner.tree().is_live(v));
                }
            }
        }
        assert!(planner.counters().pruned_vertices > 0, "pruning never fired");
    }
}
