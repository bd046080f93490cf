use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use frontlab_cli::{execute, execute_sweep, report, Command};
use frontlab_core::pipeline::SweepParameter;
use frontlab_core::Real;

/// Transition fronts of inhomogeneous monostable reaction-diffusion equations.
///
/// Exit status: 0 when every requested gate and certificate passes, 1 when one
/// fails or the pipeline stops with an error, 2 on usage or I/O errors.
#[derive(Parser)]
#[command(name = "frontlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Io {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Run directory; created when missing.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Sub {
    /// Check the reaction hypotheses.
    Validate(Io),
    /// Estimate the top of the spectrum and the admissible lambda range.
    Spectrum(Io),
    /// Build the generalized eigenfunctions and their gradient bound.
    Eigenfunction(Io),
    /// Solve the wave profiles and build the transforms h and h~.
    Profile(Io),
    /// Run the monotone scheme between the envelopes.
    Simulate(Io),
    /// Certify the simulation stored in --out.
    Verify(Io),
    /// All stages, validate through verify.
    Pipeline(Io),
    /// Run the pipeline for several values of one parameter.
    Sweep {
        #[command(flatten)]
        io: Io,
        /// lambda, beta, a-amplitude or mesh.
        #[arg(long)]
        parameter: SweepParameter,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<Real>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, io) = match cli.command {
        Sub::Validate(io) => (Command::Validate, io),
        Sub::Spectrum(io) => (Command::Spectrum, io),
        Sub::Eigenfunction(io) => (Command::Eigenfunction, io),
        Sub::Profile(io) => (Command::Profile, io),
        Sub::Simulate(io) => (Command::Simulate, io),
        Sub::Verify(io) => (Command::Verify, io),
        Sub::Pipeline(io) => (Command::Pipeline, io),
        Sub::Sweep { io, parameter, values } => {
            return match execute_sweep(&io.config, &io.out, parameter, &values) {
                Ok(rows) => {
                    println!("{:>12} {:>12} {:>12} {:>12} {:>12}  result", "value", "lambda", "speed", "max width", "sandwich");
                    for r in &rows {
                        println!(
                            "{:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.3e}  {}",
                            r.value,
                            r.lambda,
                            r.speed,
                            r.max_width,
                            r.worst_sandwich,
                            match (&r.error, r.passed) {
                                (_, true) => "PASS".to_string(),
                                (Some(e), false) => format!("FAIL: {e}"),
                                (None, false) => "FAIL".to_string(),
                            }
                        );
                    }
                    if rows.iter().all(|r| r.passed) {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(2)
                }
            };
        }
    };
    match execute(command, &io.config, &io.out) {
        Ok(st) => {
            print!("{}", report(&st));
            if st.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
