//! `fracchemo`: reproducible experiments for the fractional
//! attraction-repulsion chemotaxis model.
//!
//! Exit codes: 0 pass, 1 configuration error, 2 no boundedness case,
//! 3 blow-up or failed check.

mod experiment;
mod output;
mod tools;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracchemo_core::diagnostics::{DEFAULT_TOL, DEFAULT_WINDOW};
use fracchemo_core::Error;

#[derive(Parser)]
#[command(name = "fracchemo", version, about = "Fractional attraction-repulsion chemotaxis toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the regime constants of a config (or of every point of a sweep).
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// Run the simulator and check the trajectory against the regime bounds.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Override `u0.seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Trailing window fraction for limsup/liminf estimates.
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: f64,
        /// Relative tolerance of the band checks.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Simulate even when no boundedness case applies.
        #[arg(long)]
        force: bool,
    },
    /// Fractional heat kernel tables and self-checks.
    Kernel(tools::KernelArgs),
    /// Variational lower bounds on the principal eigenvalue.
    Eigen(tools::EigenArgs),
}

#[derive(Args)]
struct Common {
    /// Config file (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; created if missing.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

/// Outcome of a command, ordered by severity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass = 0,
    Config = 1,
    NoCase = 2,
    Failed = 3,
}

impl Status {
    pub fn of_error(e: &Error) -> Self {
        match e {
            Error::NoCase | Error::CaseCHypothesisViolated { .. } => Status::NoCase,
            Error::BlowUpSuspected { .. }
            | Error::PositivityBreach { .. }
            | Error::NonFinite(_)
            | Error::NonFiniteTendency(_)
            | Error::ClampMassExceeded { .. }
            | Error::QuadratureUnstable(_) => Status::Failed,
            _ => Status::Config,
        }
    }

    /// Combines sweep members: configuration errors dominate, then the
    /// most severe remaining status.
    pub fn combine(self, other: Status) -> Status {
        if self == Status::Config || other == Status::Config {
            Status::Config
        } else {
            self.max(other)
        }
    }
}

fn run(cli: Cli) -> Result<Status, Error> {
    match cli.command {
        Command::Classify { common } => {
            let pool = experiment::Pool::new(common.jobs)?;
            experiment::classify(&common.config, common.out.as_deref(), &pool)
        }
        Command::Simulate {
            common,
            seed,
            window,
            tol,
            force,
        } => {
            let pool = experiment::Pool::new(common.jobs)?;
            let out = common
                .out
                .ok_or_else(|| Error::Config("simulate needs --out DIR".into()))?;
            let opts = experiment::SimulateOptions {
                seed,
                window,
                tol,
                force,
            };
            experiment::simulate(&common.config, &out, &opts, &pool)
        }
        Command::Kernel(args) => tools::kernel(&args),
        Command::Eigen(args) => tools::eigen(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors are configuration errors; help and version are not errors
            let code = if e.use_stderr() { Status::Config } else { Status::Pass };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Status::of_error(&e) as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_codes_are_stable() {
        assert_eq!(Status::of_error(&Error::AlphaOutOfRange(0.4)) as u8, 1);
        assert_eq!(Status::of_error(&Error::NoCase) as u8, 2);
        let blowup = Error::BlowUpSuspected {
            t: 1.0,
            sup: 1e4,
            threshold: 1e3,
        };
        assert_eq!(Status::of_error(&blowup) as u8, 3);
    }

    #[test]
    fn config_errors_dominate_sweeps() {
        assert_eq!(Status::Failed.combine(Status::Config), Status::Config);
        assert_eq!(Status::NoCase.combine(Status::Failed), Status::Failed);
        assert_eq!(Status::Pass.combine(Status::Pass), Status::Pass);
    }
}
