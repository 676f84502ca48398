//! Command-line front end: single planning runs, benchmark sweeps,
//! bound tables, convergence experiments and sampler timing.

use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use informed_rrt::analysis::{
    convergence_experiment_from, rate_bounds, rejection_bound, RewireSchedule,
};
use informed_rrt::bench::{
    run_benchmark, sample_bench, write_sample_bench_csv, BenchConfig, ExperimentKind, Timing,
};
use informed_rrt::planner::{plan, Budget, PlannerConfig, Variant};
use informed_rrt::world::{grid_world, toy_world, ProblemInstance};
use informed_rrt::{Error, Result};

#[derive(Parser)]
#[command(
    name = "irrt",
    about = "Anytime sampling-based planning with direct informed-set sampling",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one planner on one problem instance and print the result.
    Plan(PlanArgs),
    /// Run a configured experiment sweep and write CSV outputs.
    Bench(BenchArgs),
    /// Print the closed-form bound tables.
    Rates(RatesArgs),
    /// Run the convergence-rate experiment and write its CSV.
    Converge(ConvergeArgs),
    /// Time direct versus rejection sampling per dimension.
    SampleBench(SampleBenchArgs),
}

#[derive(Args)]
struct PlanArgs {
    /// Problem instance JSON file.
    #[arg(long, conflicts_with_all = ["toy", "grid"])]
    instance: Option<PathBuf>,
    /// Use the single-obstacle world in this dimension.
    #[arg(long, conflicts_with = "grid")]
    toy: Option<usize>,
    /// Use the regular obstacle grid in this dimension.
    #[arg(long)]
    grid: Option<usize>,
    /// Domain width for --toy.
    #[arg(long, default_value_t = 2.0)]
    domain_width: f64,
    /// Obstacle width for --toy.
    #[arg(long, default_value_t = 0.4)]
    obstacle_width: f64,
    /// Planner variant: plain | pruning | reject-new | reject-rand |
    /// combined | informed.
    #[arg(long, default_value = "informed")]
    variant: Variant,
    /// Maximum edge length.
    #[arg(long, default_value_t = 0.3)]
    eta: f64,
    /// Wall-clock budget in seconds.
    #[arg(long, conflicts_with = "iterations")]
    seconds: Option<f64>,
    /// Iteration budget.
    #[arg(long)]
    iterations: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip printing the path states.
    #[arg(long)]
    no_path: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Benchmark config TOML file.
    #[arg(long, conflicts_with = "experiment")]
    config: Option<PathBuf>,
    /// Build a default config for this experiment instead:
    /// toy-tolerance | map-width | grid | converge | sample-bench.
    #[arg(long)]
    experiment: Option<String>,
    /// Output directory (overrides the config file's).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Clock trials by "wall" time or "iteration" count.
    #[arg(long)]
    timing: Option<String>,
}

#[derive(Args)]
struct RatesArgs {
    /// Largest dimension to tabulate.
    #[arg(long, default_value_t = 16)]
    max_dim: usize,
}

#[derive(Args)]
struct ConvergeArgs {
    #[arg(long, default_value_t = 2)]
    dimension: usize,
    /// Rewiring schedule: infinite | constant-eta | shrinking-radius.
    #[arg(long, default_value = "infinite")]
    schedule: String,
    /// Edge length for the constant-eta schedule.
    #[arg(long, default_value_t = 0.4)]
    eta: f64,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, default_value_t = 200)]
    iterations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Initial solution cost as a multiple of the optimum.
    #[arg(long, default_value_t = 1.4)]
    initial_cost_factor: f64,
    /// CSV output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleBenchArgs {
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', default_value = "2,4,6,8,10,12,14,16")]
    dimensions: Vec<usize>,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Wall cap in seconds for each rejection run.
    #[arg(long, default_value_t = 30.0)]
    cap_s: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_instance(args: &PlanArgs) -> Result<ProblemInstance> {
    if let Some(path) = &args.instance {
        return ProblemInstance::load(path);
    }
    if let Some(n) = args.toy {
        return toy_world(n, args.domain_width, args.obstacle_width);
    }
    if let Some(n) = args.grid {
        return grid_world(n);
    }
    Err(Error::InvalidConfig(
        "pass one of --instance, --toy or --grid".into(),
    ))
}

fn run_plan(args: PlanArgs) -> Result<()> {
    let instance = load_instance(&args)?;
    let budget = match (args.seconds, args.iterations) {
        (None, Some(n)) => Budget::iterations(n),
        (Some(s), None) => Budget::duration(Duration::from_secs_f64(s)),
        (None, None) => Budget::duration(Duration::from_secs(3)),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    let config =
        PlannerConfig::new(args.eta, budget, args.seed).with_variant(args.variant);
    let result = plan(&instance, config)?;

    println!("variant: {}", args.variant.name());
    println!("iterations: {}", result.iterations);
    println!("vertices: {}", result.live_vertices);
    println!(
        "samples drawn: {} (rejected {})",
        result.counters.samples_drawn, result.counters.samples_rejected
    );
    println!("rewirings: {}", result.counters.rewirings);
    println!("pruned vertices: {}", result.counters.pruned_vertices);
    if let Some(c_opt) = instance.c_opt() {
        println!("known optimum: {c_opt:.9}");
    }
    match &result.path {
        None => println!("best cost: none (no solution within budget)"),
        Some(path) => {
            println!("best cost: {:.9}", result.best_cost);
            if !args.no_path {
                println!("path ({} states):", path.len());
                for x in path {
                    let coords: Vec<String> =
                        x.iter().map(|v| format!("{v:.6}")).collect();
                    println!("  {}", coords.join(" "));
                }
            }
        }
    }
    Ok(())
}

fn run_bench(args: BenchArgs) -> Result<()> {
    let mut config = match (&args.config, &args.experiment) {
        (Some(path), None) => BenchConfig::from_toml(&std::fs::read_to_string(path)?)?,
        (None, Some(kind)) => {
            let kind = match kind.as_str() {
                "toy-tolerance" => ExperimentKind::ToyTolerance,
                "map-width" => ExperimentKind::MapWidth,
                "grid" => ExperimentKind::Grid,
                "converge" => ExperimentKind::Converge,
                "sample-bench" => ExperimentKind::SampleBench,
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown experiment '{other}'"
                    )))
                }
            };
            BenchConfig::new(kind, args.out.clone().unwrap_or_else(|| "bench-out".into()))
        }
        _ => {
            return Err(Error::InvalidConfig(
                "pass exactly one of --config or --experiment".into(),
            ))
        }
    };
    if let Some(out) = args.out {
        config.out_dir = out;
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(timing) = args.timing {
        config.timing = match timing.as_str() {
            "wall" => Timing::Wall,
            "iteration" => Timing::Iteration,
            other => {
                return Err(Error::InvalidConfig(format!("unknown timing '{other}'")))
            }
        };
    }
    let output = run_benchmark(&config)?;
    for path in output
        .raw_files
        .iter()
        .chain(&output.aggregate_files)
        .chain(&output.trial_files)
    {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run_rates(args: RatesArgs) -> Result<()> {
    if args.max_dim < 2 {
        return Err(Error::InvalidConfig("--max-dim must be at least 2".into()));
    }
    println!("n  rect_acceptance  rate_rrtstar  rate_reject  rate_informed");
    for n in 2..=args.max_dim {
        let rates = rate_bounds(n);
        println!(
            "{n:<3}{:<17.6e}{:<14.6}{:<13.6}{:.6}",
            rejection_bound(n),
            rates.rrtstar,
            rates.reject,
            rates.informed
        );
    }
    Ok(())
}

fn run_converge(args: ConvergeArgs) -> Result<()> {
    let schedule = match args.schedule.as_str() {
        "infinite" => RewireSchedule::Infinite,
        "constant-eta" => RewireSchedule::ConstantEta(args.eta),
        "shrinking-radius" => RewireSchedule::ShrinkingRadius,
        other => {
            return Err(Error::InvalidConfig(format!("unknown schedule '{other}'")))
        }
    };
    let report = convergence_experiment_from(
        args.dimension,
        schedule,
        args.trials,
        args.iterations,
        args.seed,
        args.initial_cost_factor,
    )?;
    eprintln!(
        "fitted rate {:.4} (theoretical lower bound {:.4}), {} improving iterations",
        report.fitted_rate, report.theoretical_rate, report.improving_iterations
    );
    match args.out {
        Some(path) => report.write_csv(std::fs::File::create(path)?)?,
        None => report.write_csv(std::io::stdout().lock())?,
    }
    Ok(())
}

fn run_sample_bench(args: SampleBenchArgs) -> Result<()> {
    let rows = sample_bench(
        &args.dimensions,
        args.samples,
        Duration::from_secs_f64(args.cap_s),
        args.seed,
    )?;
    for row in &rows {
        let acceptance = row
            .acceptance
            .map_or(String::new(), |a| format!("  acceptance {a:.3e}"));
        eprintln!(
            "n={:<3} {:<9} {:>9} samples  {:.3e} s/sample{acceptance}",
            row.dimension, row.method, row.samples, row.mean_sample_seconds
        );
    }
    match args.out {
        Some(path) => write_sample_bench_csv(std::fs::File::create(path)?, &rows)?,
        None => write_sample_bench_csv(std::io::stdout().lock(), &rows)?,
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Plan(args) => run_plan(args),
        Command::Bench(args) => run_bench(args),
        Command::Rates(args) => run_rates(args),
        Command::Converge(args) => run_converge(args),
        Command::SampleBench(args) => run_sample_bench(args),
    };
    if let Err(err) = outcome {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}
