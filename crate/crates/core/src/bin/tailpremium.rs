use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tailpremium::cli::{self, AsymptoticsOptions, CliError, EstimateOptions, KChoice};
use tailpremium::threshold::DEFAULT_BETA;
use tailpremium::Retention;

/// Proportional hazard premium estimation for censored heavy-tailed claims.
///
/// Exit codes: 0 ok, 2 malformed input, 3 estimator domain guard, 4 output error.
#[derive(Parser)]
#[command(version, args_conflicts_with_subcommands = true)]
struct Cli {
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the premium from a `z,delta` claim file.
    Estimate(EstimateArgs),
    /// Run a Monte Carlo study described by a `key = value` config.
    Simulate(SimulateArgs),
    /// Print the asymptotic mean and variance of the estimator.
    #[command(allow_negative_numbers = true)]
    Asymptotics(AsymptoticsArgs),
    /// Write the Kaplan–Meier curve of a claim file as `x,survival` CSV.
    Km(KmArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct EstimateArgs {
    input: PathBuf,
    /// Number of upper order statistics.
    #[arg(long, conflicts_with = "auto_k")]
    k: Option<usize>,
    /// Choose k by the Reiss–Thomas rule (default when --k is absent).
    #[arg(long)]
    auto_k: bool,
    /// Weight exponent of the Reiss–Thomas objective.
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    /// `threshold` or a positive value.
    #[arg(long, default_value = "threshold", value_parser = parse_retention)]
    retention: Retention,
    #[arg(long)]
    tau1: Option<f64>,
    #[arg(long)]
    lambda1: Option<f64>,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Also write the report as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    config: PathBuf,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// Overrides `master_seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct AsymptoticsArgs {
    #[arg(long)]
    gamma1: f64,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[arg(long, default_value_t = 0.0)]
    tau1: f64,
    #[arg(long, default_value_t = 0.0)]
    lambda1: f64,
}

#[derive(Args)]
struct KmArgs {
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_retention(s: &str) -> Result<Retention, String> {
    if s == "threshold" {
        return Ok(Retention::Threshold);
    }
    s.parse().map(Retention::Explicit).map_err(|_| format!("expected `threshold` or a number, got `{s}`"))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (mut out, mut err) = (io::stdout().lock(), io::stderr());
    match cli.command {
        Command::Estimate(a) => {
            let opts = EstimateOptions {
                rho: a.rho,
                k: a.k.map_or(KChoice::Auto { beta: a.beta }, KChoice::Fixed),
                retention: a.retention,
                tau1: a.tau1,
                lambda1: a.lambda1,
                level: a.level,
                out: a.out,
            };
            cli::run_estimate(&a.input, &opts, &mut out, &mut err).map(drop)
        }
        Command::Simulate(a) => {
            let workers = a.workers.unwrap_or_else(cli::default_workers);
            cli::run_simulate(&a.config, a.out.as_deref(), workers, a.seed, &mut out).map(drop)
        }
        Command::Asymptotics(a) => {
            let opts = AsymptoticsOptions { gamma1: a.gamma1, p: a.p, rho: a.rho, tau1: a.tau1, lambda1: a.lambda1 };
            cli::run_asymptotics(&opts, &mut out, &mut err).map(drop)
        }
        Command::Km(a) => cli::run_km(&a.input, a.out.as_deref(), &mut out).map(drop),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
