//! Prints the closed-form sampling and convergence bounds across
//! dimensions.
//!
//! Run with: cargo run --release --example bound_tables

use informed_rrt::analysis::{
    expected_next_cost_lower, rate_bounds, rejection_bound, sampling_prob_bound, BoundInputs,
};

fn main() -> informed_rrt::Result<()> {
    println!("rectangle rejection acceptance by dimension:");
    println!("{:>3}  {:>14}  {:>18}", "n", "acceptance", "samples/success");
    for n in [2usize, 4, 6, 8, 10, 12, 14, 16] {
        let bound = rejection_bound(n);
        println!("{n:>3}  {bound:>14.6e}  {:>18.1}", 1.0 / bound);
    }

    println!("\nbest-case linear convergence rates (lower is faster):");
    println!("{:>3}  {:>9}  {:>9}  {:>9}", "n", "uniform", "reject", "informed");
    for n in 2..=10 {
        let rates = rate_bounds(n);
        println!(
            "{n:>3}  {:>9.5}  {:>9.5}  {:>9.5}",
            rates.rrtstar, rates.reject, rates.informed
        );
    }

    println!("\nimprovement probability and expected next cost");
    println!("(n = 2, c_min = 1, domain measure 4):");
    println!("{:>6}  {:>12}  {:>18}", "cost", "P(improve)", "E[next cost] at p=1");
    for c in [1.05, 1.2, 1.5, 2.0, 3.0] {
        let inputs = BoundInputs::new(2, c, 1.0, 4.0, 1.0)?;
        println!(
            "{c:>6.2}  {:>12.6}  {:>18.6}",
            sampling_prob_bound(&inputs),
            expected_next_cost_lower(&inputs)
        );
    }
    Ok(())
}
