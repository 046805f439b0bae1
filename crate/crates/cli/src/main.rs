use clap::{Parser, Subcommand};
use std::process::ExitCode;

mod config;
mod error;
mod figure;
mod output;
mod run;

use config::{Command, RunConfig};
use error::CliError;

/// Quantum optical vortex states in coupled waveguides: quadrature fields,
/// Wigner slices and logarithmic-negativity sweeps.
#[derive(Parser)]
#[command(name = "vortexprop", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Intensity and phase of Psi(x, y) at one propagation point.
    State(RunConfig),
    /// Wigner function on a 2D slice of phase space.
    Wigner(RunConfig),
    /// Logarithmic negativity over a range of kappa.
    Negativity(RunConfig),
    /// Reproduce a figure preset (fig1, fig2, fig3, fig4, fig5a, fig5b, fig6).
    Figure {
        id: String,
        #[command(flatten)]
        overrides: RunConfig,
    },
}

const THREADS_VAR: &str = "VORTEXPROP_THREADS";

fn init_threads() -> Result<(), CliError> {
    let Ok(text) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = text.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        CliError::Config(format!(
            "{THREADS_VAR} must be a positive integer, got {text:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let (command, args) = match cli.command {
        Cmd::State(a) => (Command::State, a),
        Cmd::Wigner(a) => (Command::Wigner, a),
        Cmd::Negativity(a) => (Command::Negativity, a),
        Cmd::Figure { id, overrides } => {
            let overrides = overrides.with_file()?;
            figure::run_figure(&id, &overrides)?;
            println!(
                "{}",
                overrides
                    .output
                    .unwrap_or_else(|| "out".into())
                    .join(&id)
                    .display()
            );
            return Ok(());
        }
    };
    let cfg = args.with_file()?.resolve(command)?;
    match command {
        Command::State => run::run_state(&cfg)?,
        Command::Wigner => run::run_wigner(&cfg)?,
        Command::Negativity => run::run_negativity(&cfg)?,
    };
    println!("{}", cfg.output.display());
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
