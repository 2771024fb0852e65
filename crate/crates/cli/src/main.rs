//! `shiproute`: solve, compare against baselines, benchmark and validate
//! routing scenarios.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use shiproute_core::archipelago::{run, thread_scaling, ScalingRow};
use shiproute_core::baselines::{
    bypass_solver, enumerate_bypasses, exhaustive_search, shortest_feasible_path, simulated_annealing, PathOutcome,
};
use shiproute_core::io::{emit_result, load_scenario, RouteResult, Scenario, SolverMeta, Summary};
use shiproute_core::{ConvergenceLog, SolverOutcome, Vec2};

const LOG_ENV: &str = "SHIPROUTE_LOG";

#[derive(Parser)]
#[command(
    name = "shiproute",
    version,
    about = "Ship routing with a hybrid GA-EDA island model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the island model on a scenario.
    Solve(RunArgs),
    /// Run a reference solver on a scenario.
    Baseline {
        #[arg(value_enum)]
        solver: Baseline,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Measure wall time of the island model across worker counts.
    Bench {
        #[arg(long)]
        scenario: PathBuf,
        /// Comma-separated worker counts.
        #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
        workers: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check a scenario and every file it references.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Force deterministic (barrier-synchronized) mode.
    #[arg(long)]
    deterministic: bool,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Baseline {
    Sa,
    Shortest,
    Bypass,
    Brute,
}

/// How a command finished when it did not fail outright.
enum Verdict {
    Feasible,
    Infeasible,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(Verdict::Feasible) => ExitCode::SUCCESS,
        Ok(Verdict::Infeasible) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<Verdict> {
    match command {
        Command::Solve(args) => solve(&args),
        Command::Baseline { solver, args } => baseline(solver, &args),
        Command::Bench {
            scenario,
            workers,
            repeats,
            out,
            seed,
        } => bench(&scenario, &workers, repeats, out.as_deref(), seed),
        Command::Validate { scenario } => validate(&scenario),
    }
}

fn load(args: &RunArgs) -> Result<Scenario> {
    let scenario = load_scenario(&args.scenario)?;
    Ok(scenario.with_overrides(args.seed, args.deterministic, args.workers)?)
}

fn finish(scenario: &Scenario, outcome: &SolverOutcome, out: &Path) -> Result<Verdict> {
    let result = RouteResult::from_outcome(scenario, outcome)?;
    let summary = Summary::from_outcome(outcome);
    let written = emit_result(out, scenario, result.as_ref(), &outcome.log, &summary)?;
    report(&summary, &written);
    Ok(if summary.feasible {
        Verdict::Feasible
    } else {
        Verdict::Infeasible
    })
}

fn report(summary: &Summary, written: &[PathBuf]) {
    match summary.best_cost {
        Some(cost) if summary.feasible => println!(
            "{}: feasible, cost {cost:.6}, {} evaluations, {:.1} ms",
            summary.solver, summary.evaluations, summary.wall_ms
        ),
        _ => println!("{}: no feasible route found", summary.solver),
    }
    for path in written {
        println!("  wrote {}", path.display());
    }
}

fn solve(args: &RunArgs) -> Result<Verdict> {
    let scenario = load(args)?;
    let config = scenario.run_config();
    info!(
        "solving {} with {} islands, seed {}, {:?} mode",
        scenario.name(),
        scenario.network.islands().len(),
        config.seed,
        config.mode
    );
    let result = run(&scenario.network, &scenario.problem, &config)?;
    finish(&scenario, &result.outcome, &args.out)
}

fn baseline(solver: Baseline, args: &RunArgs) -> Result<Verdict> {
    let scenario = load(args)?;
    let problem = &scenario.problem;
    let params = &scenario.spec.baselines;
    let seed = scenario.seed().unwrap_or(0);
    let start = Instant::now();
    let outcome = match solver {
        Baseline::Sa => simulated_annealing(problem, &params.sa, seed)?,
        Baseline::Bypass => {
            let classes = enumerate_bypasses(problem, &params.bypass)?;
            info!("{} bypass classes", classes.len());
            bypass_solver(problem, &classes, &params.bypass, seed)?.outcome
        }
        Baseline::Brute => {
            let lambda = params.brute.lambda.unwrap_or(problem.penalty_config().lambda_max);
            let result = exhaustive_search(problem, params.brute.resolution, lambda)?;
            result.into_outcome(start.elapsed().as_secs_f64() * 1e3)
        }
        Baseline::Shortest => return shortest(&scenario, &args.out, start),
    };
    finish(&scenario, &outcome, &args.out)
}

fn shortest(scenario: &Scenario, out: &Path, start: Instant) -> Result<Verdict> {
    let p = &scenario.problem;
    let path = shortest_feasible_path(
        p.obstacles(),
        Vec2::ZERO,
        Vec2::new(p.span(), 0.0),
        scenario.spec.baselines.shortest.clearance,
    )?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let meta = SolverMeta {
        solver: "shortest".into(),
        seed: None,
        generations: 0,
        evaluations: 0,
        lambda_final: 0.0,
        wall_ms,
    };
    let result = match &path {
        PathOutcome::Found { path, .. } => Some(RouteResult::from_polyline(scenario, path, meta)?),
        PathOutcome::NoPath => None,
    };
    let summary = Summary {
        solver: "shortest".into(),
        feasible: result.is_some(),
        best_cost: result.as_ref().map(|r| r.cost.total),
        wall_ms,
        evaluations: 0,
    };
    let written = emit_result(out, scenario, result.as_ref(), &ConvergenceLog::default(), &summary)?;
    report(&summary, &written);
    Ok(if summary.feasible {
        Verdict::Feasible
    } else {
        Verdict::Infeasible
    })
}

fn write_scaling<W: Write>(rows: &[ScalingRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn bench(scenario: &Path, workers: &[usize], repeats: usize, out: Option<&Path>, seed: Option<u64>) -> Result<Verdict> {
    if workers.contains(&0) {
        bail!("worker counts must be at least 1");
    }
    let scenario = load_scenario(scenario)?.with_overrides(seed, false, None)?;
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    if workers.iter().any(|&w| w > available) {
        log::warn!("host reports {available} hardware threads; larger worker counts cannot scale");
    }
    let rows = thread_scaling(
        &scenario.network,
        &scenario.problem,
        &scenario.run_config(),
        workers,
        repeats,
    )?;
    match out {
        Some(path) => {
            let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_scaling(&rows, file)?;
            println!("wrote {}", path.display());
        }
        None => write_scaling(&rows, std::io::stdout().lock())?,
    }
    Ok(Verdict::Feasible)
}

fn validate(path: &Path) -> Result<Verdict> {
    let scenario = load_scenario(path)?;
    let p = &scenario.problem;
    println!(
        "{}: ok ({} obstacles, {} free waypoints, {} islands, span {:.3})",
        scenario.name(),
        p.obstacles().len(),
        p.free_waypoints(),
        scenario.network.islands().len(),
        p.span()
    );
    Ok(Verdict::Feasible)
}
