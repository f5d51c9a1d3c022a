use std::path::PathBuf;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use specrelax::analysis::csv_out::{to_file, write_snapshot};
use specrelax::experiment::recipes::{kernel_dump, profile_kernels, KERNEL_PROFILES};
use specrelax::experiment::{recipe, run_experiment, run_sweep, ExperimentConfig, RunStatus, RECIPES};
use specrelax::kernels::{KernelFamily, KernelSpec};
use specrelax::models::ic::{IcId, IcParams, Problem};
use specrelax::oracles::evaluate_reference;
use specrelax::{Error, Result};

#[derive(Parser)]
#[command(name = "specrelax", version = specrelax::experiment::BUILD_DESCRIBE, about = "Spectral relaxation experiments for 1D conservation laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a config file or a named recipe.
    Run(RunArgs),
    /// Run every member of a config's sweep and write sweep.csv.
    Sweep(RunArgs),
    /// Evaluate a reference solution on a collocation grid and write CSV.
    Oracle(OracleArgs),
    /// Write kernel multipliers and real-space profiles as CSV.
    KernelDump(KernelArgs),
    /// List the shipped recipes.
    ListRecipes,
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment config.
    #[arg(long, conflicts_with = "recipe", required_unless_present = "recipe")]
    config: Option<PathBuf>,
    /// Shipped recipe name (see list-recipes).
    #[arg(long)]
    recipe: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads for sweeps.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Override the config's nx.
    #[arg(long)]
    nx: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    /// Initial condition id, e.g. burgers-ic0, euler-sod, sw-dambreak.
    #[arg(long)]
    ic: IcId,
    /// Evaluation times.
    #[arg(long, num_args = 1.., required = true)]
    t: Vec<f64>,
    /// Collocation grid size.
    #[arg(long, default_value_t = 615)]
    nx: usize,
    /// Use the finite-volume solution on this many cells instead of the exact one.
    #[arg(long)]
    fv_cells: Option<usize>,
    /// Physical parameters are taken from this config's [physics] and [grid] tables.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; one `oracle_t<time>.csv` per time.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct KernelArgs {
    /// Kernel family, or `all` for the preset of every family.
    #[arg(long, default_value = "all")]
    kernel: String,
    /// Spectral bandwidth N.
    #[arg(long, default_value_t = 307)]
    n: usize,
    #[arg(long, default_value_t = 0.7)]
    alpha: f64,
    #[arg(long, default_value_t = 0.99)]
    gamma: f64,
    /// DLVP plateau fraction.
    #[arg(long)]
    plateau: Option<f64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn load(args: &RunArgs) -> Result<Option<ExperimentConfig>> {
    let mut cfg = match (&args.config, &args.recipe) {
        (Some(path), _) => ExperimentConfig::from_file(path)?,
        (None, Some(name)) => match recipe(name)?.config()? {
            Some(c) => c,
            None => return Ok(None),
        },
        (None, None) => unreachable!("clap requires one of --config/--recipe"),
    };
    if let Some(nx) = args.nx {
        cfg.nx = nx;
        cfg.validate()?;
    }
    Ok(Some(cfg))
}

fn run(args: &RunArgs) -> Result<bool> {
    let Some(cfg) = load(args)? else {
        for f in kernel_dump(&profile_kernels(), 307, &args.out)? {
            println!("{}", f.display());
        }
        return Ok(true);
    };
    let (res, manifest) = run_experiment(&cfg, &args.out)?;
    println!(
        "{}: {} at t={:.6e} after {} steps ({:.2} s)",
        manifest.name,
        if res.failed() { "failed" } else { "completed" },
        manifest.t_final,
        manifest.steps,
        manifest.wall_time_s
    );
    if let Some(f) = &manifest.failure {
        eprintln!("{f}");
    }
    for r in &manifest.errors {
        println!(
            "t={:.4e} L1={:.3e} L2={:.3e} Linf={:.3e}",
            r.t, r.norms.l1, r.norms.l2, r.norms.linf
        );
    }
    if let Some(t) = manifest.t_star_estimate {
        println!("t* estimate {t:.6e}");
    }
    Ok(manifest.status == RunStatus::Completed)
}

fn sweep(args: &RunArgs) -> Result<bool> {
    let cfg = load(args)?.ok_or_else(|| {
        Error::Usage(format!("`{KERNEL_PROFILES}` has no sweep; use `run` or `kernel-dump`"))
    })?;
    let report = run_sweep(&cfg, &args.out, args.jobs)?;
    let failed = report
        .members
        .iter()
        .filter(|m| m.status == RunStatus::Failed)
        .count();
    println!(
        "{}: {} members, {failed} failed; table in {}",
        report.name,
        report.members.len(),
        args.out.join("sweep.csv").display()
    );
    Ok(failed == 0)
}

fn oracle(args: &OracleArgs) -> Result<()> {
    let params = match &args.config {
        Some(p) => ExperimentConfig::from_file(p)?.ic_params(),
        None => IcParams::default(),
    };
    let problem = Problem::new(args.ic, args.nx, &params)?;
    let (x, _) = problem.physical_view(&problem.initial);
    let names = problem.model.component_names();
    for &t in &args.t {
        let fields = evaluate_reference(args.ic, &params, &x, t, args.fv_cells)?;
        let path = args.out.join(format!("oracle_t{t:.8e}.csv"));
        to_file(&path, |f| write_snapshot(f, &x, names, &fields))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn dump(args: &KernelArgs) -> Result<()> {
    let specs = if args.kernel == "all" {
        profile_kernels()
    } else {
        let family = match args.kernel.parse::<KernelFamily>()? {
            KernelFamily::DeLaValleePoussin { plateau } => KernelFamily::DeLaValleePoussin {
                plateau: args.plateau.unwrap_or(plateau),
            },
            f => f,
        };
        vec![KernelSpec::new(family, args.alpha, args.gamma)]
    };
    for f in kernel_dump(&specs, args.n, &args.out)? {
        println!("{}", f.display());
    }
    Ok(())
}

fn list() {
    let width = RECIPES.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = std::io::stdout().lock();
    for r in RECIPES {
        // A closed pipe (e.g. `| head`) is not an error.
        if writeln!(out, "{:width$}  {}", r.name, r.summary).is_err() {
            break;
        }
    }
}

fn report(r: Result<bool>) -> ExitCode {
    match r {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    report(match &cli.command {
        Command::Run(a) => run(a),
        Command::Sweep(a) => sweep(a),
        Command::Oracle(a) => oracle(a).map(|_| true),
        Command::KernelDump(a) => dump(a).map(|_| true),
        Command::ListRecipes => {
            list();
            Ok(true)
        }
    })
}
