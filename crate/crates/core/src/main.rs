use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cholcov::experiments::selftest::build_digamma;
use cholcov::experiments::{cmd_selftest, cmd_sweep, csv::format_significant, SweepSettings};

const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cholcov",
    version,
    about = "Cholesky-factor covariance estimators and risk sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte-Carlo risk sweep and write one CSV row per grid point.
    Sweep(SweepArgs),
    /// Run the fast invariant checks.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// Config file of `key = value` lines; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<String>,
    /// Comma-separated sample sizes.
    #[arg(long)]
    n: Option<String>,
    /// Comma-separated target condition numbers.
    #[arg(long)]
    cond: Option<String>,
    /// Comma-separated fractions of large eigenvalues.
    #[arg(long)]
    eta: Option<String>,
    /// Comma-separated subset of fsopt, oracle, rcf, lwls.
    #[arg(long)]
    estimators: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// Omit the timestamp comment so reruns are byte-identical.
    #[arg(long)]
    deterministic: bool,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Sweep(args) => sweep(args),
        Command::Selftest { seed } => {
            let report = cmd_selftest(seed, build_digamma());
            println!("{report}");
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_RUNTIME)
            }
        }
    }
}

fn sweep(args: SweepArgs) -> ExitCode {
    let config = match settings(&args).and_then(SweepSettings::resolve) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let total = config.row_count();
    let mut done = 0;
    let result = cmd_sweep(&config, |r| {
        done += 1;
        eprintln!(
            "[{done}/{total}] {} {:<6} mean {} se {}",
            r.scenario,
            r.estimator,
            format_significant(r.mean_loss),
            format_significant(r.stderr_loss)
        );
    });
    match result {
        Ok(_) => {
            eprintln!("wrote {}", config.out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}

fn settings(args: &SweepArgs) -> Result<SweepSettings, cholcov::experiments::ConfigError> {
    let base = match &args.config {
        Some(path) => SweepSettings::from_file(path)?,
        None => SweepSettings::default(),
    };
    let mut cli = SweepSettings::default();
    let flags = [
        ("p", &args.p),
        ("n", &args.n),
        ("cond", &args.cond),
        ("eta", &args.eta),
        ("estimators", &args.estimators),
        ("trials", &args.trials),
        ("seed", &args.seed),
        ("out", &args.out),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cli.set(key, v)?;
        }
    }
    if args.deterministic {
        cli.deterministic = Some(true);
    }
    Ok(base.overlay(cli))
}
