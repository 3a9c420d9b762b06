//! Command-line front end: experiment subcommands, config loading, seed
//! management, CSV and manifest emission, and distribution utility queries.
//!
//! Exit codes: 0 success, 2 usage/config error, 1 internal error.

mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use chrono::Utc;
use clap::{Args, Parser, Subcommand, ValueEnum};

use siglab_core::dist::{
    chi_squared_cdf, chi_squared_quantile, f_cdf, f_quantile, normal_cdf, normal_quantile,
    student_t_cdf, student_t_quantile, DegreesOfFreedom,
};
use siglab_core::experiments::{run_exp1, run_exp2, run_exp3, Exp1Config, Exp2Config, Exp3Config};
use siglab_core::hyptests::{builtin_battery, parse_event_file};
use siglab_core::Error as CoreError;

use output::{
    config_hash, render_exp2_table, write_exp1_csvs, write_exp2_csv, write_exp3_csvs,
    write_manifest, RunManifest, VERSION,
};

#[derive(Parser)]
#[command(
    name = "siglab",
    version,
    about = "Monte Carlo laboratory for size distortions of significance tests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Event-battery study: many tests on one sample, familywise error rate
    Exp1(Exp1Args),
    /// Max-|t| snooping vs the joint F test in a lag regression
    Exp2(Exp2Args),
    /// Post-model-selection inference: distortion curves over gamma
    Exp3(Exp3Args),
    /// Query a distribution CDF or quantile
    Dist(DistArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Master seed; SIGLAB_SEED overrides the built-in default
    #[arg(long, env = "SIGLAB_SEED", default_value_t = 42)]
    seed: u64,
    /// Output directory (created if missing)
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads; affects runtime only, never results
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct Exp1Args {
    #[command(flatten)]
    common: CommonArgs,
    /// Draws per replication
    #[arg(long, default_value_t = 100_000)]
    n: u64,
    /// Replications
    #[arg(long, default_value_t = 2_000)]
    reps: u64,
    /// Test level
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Event battery file (`name: i1,i2,...` per line); default: the five
    /// built-in sets
    #[arg(long)]
    events: Option<PathBuf>,
}

#[derive(Args)]
struct Exp2Args {
    #[command(flatten)]
    common: CommonArgs,
    /// Sample size
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Replications per k
    #[arg(long, default_value_t = 10_000)]
    reps: u64,
    /// Lag counts
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    k: Vec<usize>,
    /// Test levels
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.10")]
    alpha: Vec<f64>,
}

#[derive(Args)]
struct Exp3Args {
    #[command(flatten)]
    common: CommonArgs,
    /// Sample size
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Replications per grid point
    #[arg(long, default_value_t = 5_000)]
    reps: u64,
    /// Regressor correlations
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.9")]
    rho: Vec<f64>,
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    gamma_min: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    gamma_max: f64,
    #[arg(long, default_value_t = 0.025)]
    gamma_step: f64,
    /// Level of the beta test
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Pretest levels for the model selection step
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.05,0.10")]
    alpha_u: Vec<f64>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum DistKind {
    Normal,
    T,
    F,
    Chisq,
}

#[derive(Args)]
struct DistArgs {
    /// Distribution family
    #[arg(long, value_enum)]
    dist: DistKind,
    /// Evaluate the CDF at --at
    #[arg(long, conflicts_with = "quantile")]
    cdf: bool,
    /// Evaluate the quantile at probability --at
    #[arg(long)]
    quantile: bool,
    /// Evaluation point
    #[arg(long, allow_hyphen_values = true)]
    at: f64,
    /// Degrees of freedom (numerator df for F)
    #[arg(long)]
    df: Option<f64>,
    /// Denominator degrees of freedom (F only)
    #[arg(long)]
    df2: Option<f64>,
}

enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Config(_)
            | CoreError::Domain(_)
            | CoreError::NotPositiveSemidefinite { .. } => CliError::Usage(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(format!("io error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Exp1(args) => cmd_exp1(args),
        Command::Exp2(args) => cmd_exp2(args),
        Command::Exp3(args) => cmd_exp3(args),
        Command::Dist(args) => cmd_dist(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn ensure_out_dir(dir: &PathBuf) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::usage(format!("--out: cannot create {}: {e}", dir.display())))
}

fn cmd_exp1(args: Exp1Args) -> Result<(), CliError> {
    let events = match &args.events {
        None => builtin_battery(),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::usage(format!("--events: cannot read {}: {e}", path.display()))
            })?;
            parse_event_file(&text).map_err(|e| CliError::usage(format!("--events: {e}")))?
        }
    };
    let cfg = Exp1Config {
        n: args.n,
        events,
        alpha: args.alpha,
        reps: args.reps,
        seed: args.common.seed,
    };
    cfg.validate()
        .map_err(|e| CliError::usage(format!("exp1 flags (--n/--reps/--alpha/--events): {e}")))?;
    ensure_out_dir(&args.common.out)?;
    let started_at = Utc::now().to_rfc3339();
    let report = run_exp1(&cfg, args.common.workers)?;
    let hash = config_hash(&cfg);
    let outputs = write_exp1_csvs(&args.common.out, &report, &hash)?;
    let manifest = RunManifest {
        version: VERSION.to_string(),
        subcommand: "exp1".to_string(),
        seed: cfg.seed,
        workers: args.common.workers,
        config: cfg.clone(),
        config_hash: hash,
        started_at,
        finished_at: Utc::now().to_rfc3339(),
        outputs: outputs
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect(),
    };
    write_manifest(&args.common.out, &manifest)?;

    println!(
        "exp1: {} events, {} reps, n={}",
        cfg.events.len(),
        cfg.reps,
        cfg.n
    );
    for (event, cell) in report.config.events.iter().zip(&report.event_cells) {
        println!(
            "  {:<12} prob={:<5} rejected {:>6.2}% (mc se {:.2}pp)",
            event.name(),
            event.prob(),
            100.0 * cell.frequency(),
            100.0 * cell.mc_se()
        );
    }
    println!(
        "  FWER {:.2}%  sidak {:.2}%  bonferroni {:.2}%  chisq-gof {:.2}%",
        100.0 * report.fwer.frequency(),
        100.0 * report.sidak,
        100.0 * report.bonferroni,
        100.0 * report.chisq_gof.frequency()
    );
    for p in &outputs {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_exp2(args: Exp2Args) -> Result<(), CliError> {
    let cfg = Exp2Config {
        n: args.n,
        k_values: args.k,
        alphas: args.alpha,
        reps: args.reps,
        seed: args.common.seed,
    };
    cfg.validate()
        .map_err(|e| CliError::usage(format!("exp2 flags (--n/--k/--alpha/--reps): {e}")))?;
    ensure_out_dir(&args.common.out)?;
    let started_at = Utc::now().to_rfc3339();
    let report = run_exp2(&cfg, args.common.workers)?;
    let hash = config_hash(&cfg);
    let outputs = write_exp2_csv(&args.common.out, &report, &hash)?;
    let manifest = RunManifest {
        version: VERSION.to_string(),
        subcommand: "exp2".to_string(),
        seed: cfg.seed,
        workers: args.common.workers,
        config: cfg.clone(),
        config_hash: hash,
        started_at,
        finished_at: Utc::now().to_rfc3339(),
        outputs: outputs
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect(),
    };
    write_manifest(&args.common.out, &manifest)?;
    print!("{}", render_exp2_table(&report));
    for p in &outputs {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_exp3(args: Exp3Args) -> Result<(), CliError> {
    let cfg = Exp3Config {
        n: args.n,
        rhos: args.rho,
        gamma_min: args.gamma_min,
        gamma_max: args.gamma_max,
        gamma_step: args.gamma_step,
        alpha: args.alpha,
        alpha_u_levels: args.alpha_u,
        reps: args.reps,
        seed: args.common.seed,
        ..Default::default()
    };
    cfg.validate().map_err(|e| {
        CliError::usage(format!(
            "exp3 flags (--n/--rho/--gamma-min/--gamma-max/--gamma-step/--alpha/--alpha-u/--reps): {e}"
        ))
    })?;
    ensure_out_dir(&args.common.out)?;
    let started_at = Utc::now().to_rfc3339();
    let report = run_exp3(&cfg, args.common.workers)?;
    let hash = config_hash(&cfg);
    let outputs = write_exp3_csvs(&args.common.out, &report, &hash)?;
    let manifest = RunManifest {
        version: VERSION.to_string(),
        subcommand: "exp3".to_string(),
        seed: cfg.seed,
        workers: args.common.workers,
        config: cfg.clone(),
        config_hash: hash,
        started_at,
        finished_at: Utc::now().to_rfc3339(),
        outputs: outputs
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect(),
    };
    write_manifest(&args.common.out, &manifest)?;
    for (curve, path) in report.curves.iter().zip(&outputs) {
        let peak = curve
            .rows
            .iter()
            .flat_map(|r| r.pms.iter().map(|c| c.frequency()))
            .fold(0.0f64, f64::max);
        println!(
            "exp3 rho={}: peak PMS rejection {:.2}% -> {}",
            curve.rho,
            100.0 * peak,
            path.display()
        );
    }
    Ok(())
}

fn cmd_dist(args: DistArgs) -> Result<(), CliError> {
    if args.cdf == args.quantile {
        return Err(CliError::usage("pass exactly one of --cdf or --quantile"));
    }
    let need_df = |v: Option<f64>, flag: &str| {
        v.ok_or_else(|| CliError::usage(format!("{flag} is required for this distribution")))
            .and_then(|x| {
                DegreesOfFreedom::new(x).map_err(|e| CliError::usage(format!("{flag}: {e}")))
            })
    };
    let value = match (args.dist, args.cdf) {
        (DistKind::Normal, true) => normal_cdf(args.at),
        (DistKind::Normal, false) => normal_quantile(args.at).map_err(usage)?,
        (DistKind::T, true) => student_t_cdf(args.at, need_df(args.df, "--df")?),
        (DistKind::T, false) => {
            student_t_quantile(args.at, need_df(args.df, "--df")?).map_err(usage)?
        }
        (DistKind::F, true) => f_cdf(
            args.at,
            need_df(args.df, "--df")?,
            need_df(args.df2, "--df2")?,
        )
        .map_err(usage)?,
        (DistKind::F, false) => f_quantile(
            args.at,
            need_df(args.df, "--df")?,
            need_df(args.df2, "--df2")?,
        )
        .map_err(usage)?,
        (DistKind::Chisq, true) => {
            chi_squared_cdf(args.at, need_df(args.df, "--df")?).map_err(usage)?
        }
        (DistKind::Chisq, false) => {
            chi_squared_quantile(args.at, need_df(args.df, "--df")?).map_err(usage)?
        }
    };
    println!("{value}");
    Ok(())
}

fn usage(e: CoreError) -> CliError {
    CliError::usage(e.to_string())
}
