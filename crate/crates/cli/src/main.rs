use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tfche_cli::check::run_checks;
use tfche_cli::commands::{cmd_bench, cmd_fit, cmd_run, cmd_snapshot, fit_json};
use tfche_cli::{CliError, CliResult, RunConfig};

/// Time-fractional Cahn-Hilliard simulator.
#[derive(Debug, Parser)]
#[command(name = "tfche", version)]
struct Cli {
    /// Worker threads for grid-level parallelism (1 is bit-reproducible).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a simulation described by a JSON config.
    Run { config: PathBuf },
    /// Fit a power law y ~ t^p to a series column on [t_lo, t_hi].
    Fit {
        csv: PathBuf,
        #[arg(long, default_value = "energy")]
        column: String,
        #[arg(long)]
        t_lo: f64,
        #[arg(long)]
        t_hi: f64,
    },
    /// Run the invariant suite.
    Check,
    /// Time direct against sum-of-exponentials history evaluation.
    Bench {
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 100_000)]
        n_steps: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Convert a snapshot file to a binary PGM image.
    Snapshot {
        snapshot: PathBuf,
        #[arg(long)]
        pgm: PathBuf,
    },
}

fn execute(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run { config } => {
            let cfg = RunConfig::load(&config)?;
            let summary = cmd_run(&cfg)?;
            println!(
                "{}",
                serde_json::to_string(&summary).expect("summary serializes")
            );
        }
        Command::Fit {
            csv,
            column,
            t_lo,
            t_hi,
        } => {
            let fit = cmd_fit(&csv, &column, t_lo, t_hi)?;
            println!("{}", fit_json(&column, &fit));
        }
        Command::Check => {
            let outcomes = run_checks();
            let failed = outcomes.iter().filter(|c| !c.passed).count();
            for c in &outcomes {
                let tag = if c.passed { "ok  " } else { "FAIL" };
                println!("{tag} {}: {}", c.name, c.detail);
            }
            if failed > 0 {
                return Err(CliError::CheckFailed {
                    failed,
                    total: outcomes.len(),
                });
            }
        }
        Command::Bench {
            alpha,
            n_steps,
            tol,
            seed,
        } => {
            let report = cmd_bench(alpha, n_steps, tol, seed)?;
            println!(
                "{}",
                serde_json::to_string(&report).expect("report serializes")
            );
        }
        Command::Snapshot { snapshot, pgm } => {
            let snap = cmd_snapshot(&snapshot, &pgm)?;
            log::info!("wrote {}x{} image at t = {}", snap.nx, snap.ny, snap.t);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    if cli.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(1);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
    {
        eprintln!("error: thread pool: {e}");
        return ExitCode::from(1);
    }
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
