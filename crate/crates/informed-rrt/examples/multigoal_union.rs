//! Samples the union of informed sets for a two-goal problem and shows
//! that goals are chosen in proportion to their spheroid measures.
//!
//! Run with: cargo run --release --example multigoal_union

use std::sync::Arc;

use informed_rrt::rng::RngStream;
use informed_rrt::sampling::{f_hat, GoalSet, InformedSampler};
use informed_rrt::state;
use informed_rrt::world::World;

fn main() -> informed_rrt::Result<()> {
    let world = Arc::new(World::new(vec![-2.0, -1.0], vec![2.0, 1.0], vec![])?);
    let start = state(&[0.0, 0.0]);
    let near_goal = state(&[0.5, 0.0]);
    let far_goal = state(&[-1.0, 0.0]);
    let goals = GoalSet::new(vec![near_goal.clone(), far_goal.clone()])?;
    let mut sampler = InformedSampler::new(start.clone(), goals, world)?;

    let cost = 1.3;
    let measures = sampler.goal_measures(cost).to_vec();
    println!("solution cost {cost}");
    println!("near-goal spheroid measure: {:.6}", measures[0]);
    println!("far-goal spheroid measure:  {:.6}", measures[1]);
    println!("union bound (sum):          {:.6}", sampler.union_measure_bound(cost));

    let mut rng = RngStream::from_seed(3);
    let total = 100_000;
    let mut in_near = 0usize;
    let mut in_far = 0usize;
    for _ in 0..total {
        let x = sampler.sample_informed(cost, &mut rng)?;
        // Every sample can improve the current solution through at
        // least one goal.
        let near = f_hat(&x, &start, &near_goal) < cost;
        let far = f_hat(&x, &start, &far_goal) < cost;
        assert!(near || far);
        in_near += near as usize;
        in_far += far as usize;
    }

    println!(
        "fraction improving via near goal: {:.4}",
        in_near as f64 / total as f64
    );
    println!(
        "fraction improving via far goal:  {:.4}",
        in_far as f64 / total as f64
    );
    println!(
        "(per-goal membership rates scale with the measures above; \
         overlap makes them sum past 1)"
    );
    Ok(())
}
