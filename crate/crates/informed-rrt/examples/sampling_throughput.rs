//! Times direct spheroid sampling against tight-rectangle rejection
//! sampling as dimension grows. Direct sampling stays polynomial while
//! rejection sampling collapses factorially.
//!
//! Run with: cargo run --release --example sampling_throughput

use std::time::Duration;

use informed_rrt::analysis::rejection_bound;
use informed_rrt::bench::sample_bench;

fn main() -> informed_rrt::Result<()> {
    let dimensions = [2usize, 4, 6, 8, 10, 12];
    let rows = sample_bench(&dimensions, 20_000, Duration::from_secs(3), 9)?;

    println!(
        "{:>3}  {:>10}  {:>14}  {:>12}  {:>12}",
        "n", "method", "s/sample", "acceptance", "predicted"
    );
    for row in &rows {
        let (acceptance, predicted) = match row.acceptance {
            Some(a) => (
                format!("{a:.4e}"),
                format!("{:.4e}", rejection_bound(row.dimension)),
            ),
            None => ("-".into(), "-".into()),
        };
        println!(
            "{:>3}  {:>10}  {:>14.4e}  {:>12}  {:>12}",
            row.dimension, row.method, row.mean_sample_seconds, acceptance, predicted
        );
    }
    println!("(rejection rows that hit the wall cap report fewer samples)");
    Ok(())
}
