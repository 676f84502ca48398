//! Plans around the single-cube toy obstacle with informed sampling
//! and prints the cost trajectory and final path.
//!
//! Run with: cargo run --release --example plan_toy

use informed_rrt::planner::{plan, Budget, PlannerConfig, Variant};
use informed_rrt::world::toy_world;

fn main() -> informed_rrt::Result<()> {
    let instance = toy_world(2, 2.0, 0.4)?;
    let c_opt = instance.c_opt().expect("toy world knows its optimum");
    println!("known optimum: {c_opt:.9}");

    let config = PlannerConfig::new(0.3, Budget::iterations(20_000), 1)
        .with_variant(Variant::Informed);
    let result = plan(&instance, config)?;

    println!("iterations: {}", result.iterations);
    println!("final vertices: {}", result.live_vertices);
    println!("pruned vertices: {}", result.counters.pruned_vertices);
    println!(
        "best cost: {:.9} ({:.3}% above optimum)",
        result.best_cost,
        100.0 * (result.best_cost / c_opt - 1.0)
    );

    println!("cost improvements:");
    let mut last = f64::INFINITY;
    for record in &result.records {
        if record.best_cost < last {
            last = record.best_cost;
            println!(
                "  iteration {:>6}: cost {:.6}",
                record.iteration, record.best_cost
            );
        }
    }

    let path = result.path.expect("solved within budget");
    println!("path ({} states):", path.len());
    for x in &path {
        println!("  ({:+.4}, {:+.4})", x[0], x[1]);
    }
    Ok(())
}
