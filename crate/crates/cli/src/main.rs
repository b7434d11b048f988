mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CliError, Outcome};
use config::RunArgs;

/// Numerical verification of continuous-spectrum coherent-state families.
#[derive(Parser)]
#[command(name = "contspec", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the axiom suite and report per-check verdicts.
    #[command(allow_negative_numbers = true)]
    Verify(RunArgs),
    /// Sample a coherent-state kernel on an energy grid.
    #[command(allow_negative_numbers = true)]
    Kernel(RunArgs),
    /// Tabulate the commutator multiplier and its limit ratio.
    #[command(allow_negative_numbers = true)]
    Commutator(RunArgs),
    /// Check the moment-problem residuals of the resolution of identity.
    #[command(allow_negative_numbers = true)]
    Moments(RunArgs),
    /// Sweep the action variable and per-point residuals over a grid.
    #[command(allow_negative_numbers = true)]
    Scan(RunArgs),
}

type Handler = fn(&config::Resolved) -> Result<Outcome, CliError>;

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let (args, f): (RunArgs, Handler) = match cli.command {
        Command::Verify(a) => (a, commands::verify),
        Command::Kernel(a) => (a, commands::kernel),
        Command::Commutator(a) => (a, commands::commutator),
        Command::Moments(a) => (a, commands::moments),
        Command::Scan(a) => (a, commands::scan),
    };
    let cfg = args.resolve()?;
    let outcome = f(&cfg)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, &outcome.body)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(outcome.body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Failure(e.to_string()))?;
        }
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CONTSPEC_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(o) if o.passed => ExitCode::SUCCESS,
        Ok(_) => {
            log::error!("verification failed");
            ExitCode::from(1)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
