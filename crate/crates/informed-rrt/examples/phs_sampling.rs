//! Draws uniform samples from a prolate hyperspheroid and checks them
//! against its closed-form measure.
//!
//! Run with: cargo run --release --example phs_sampling

use informed_rrt::phs::{phs_measure, ProlateHyperspheroid};
use informed_rrt::rng::RngStream;
use informed_rrt::state;

fn main() -> informed_rrt::Result<()> {
    let start = state(&[-0.5, 0.0]);
    let goal = state(&[0.5, 0.0]);
    let cost = 1.4;
    let phs = ProlateHyperspheroid::new(start, goal, cost)?;

    println!(
        "spheroid: c_min = {}, c = {}, measure = {:.6}",
        phs.c_min(),
        phs.transverse_diameter(),
        phs.measure()
    );
    println!(
        "closed form check: {:.6}",
        phs_measure(phs.c_min(), cost, 2)?
    );

    let mut rng = RngStream::from_seed(7);
    let total = 50_000;
    let mut focal_sum = 0.0;
    let mut inside_half_cost = 0usize;
    for _ in 0..total {
        let x = phs.sample(&mut rng);
        assert!(phs.contains(&x), "samples never leave the spheroid");
        focal_sum += phs.focal_sum(&x);
        if phs.focal_sum(&x) < 1.2 {
            inside_half_cost += 1;
        }
    }

    // The mean heuristic value of a uniform spheroid sample has the
    // closed form (n c^2 + c_min^2) / ((n + 1) c); here 1.171429.
    println!("mean focal sum over {total} samples: {:.6}", focal_sum / total as f64);

    // The fraction below a smaller cost matches the measure ratio of
    // the nested spheroids.
    let nested = phs_measure(1.0, 1.2, 2)? / phs_measure(1.0, 1.4, 2)?;
    println!(
        "fraction with focal sum < 1.2: {:.4} (measure ratio {:.4})",
        inside_half_cost as f64 / total as f64,
        nested
    );
    Ok(())
}
