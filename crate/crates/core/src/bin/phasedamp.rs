use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use phasedamp::cli::{self, Outcome};

#[derive(Parser)]
#[command(
    name = "phasedamp",
    version,
    about = "Two-qubit entanglement and purity under random-unitary phase damping"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a channel family from a TOML config and write the (C, P) trajectory.
    Trajectory {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate boundary curves of the CP diagram.
    Bounds {
        #[arg(long, default_value = "C2,C3,C4,Werner")]
        kinds: String,
        #[arg(long, default_value = "0.25:1:76")]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Robust-entanglement threshold and trajectories under interaction dephasing.
    Robust {
        #[arg(long, allow_hyphen_values = true)]
        theta1: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta2: f64,
        /// Flip-probability grid START:STOP:COUNT.
        #[arg(long, default_value = "0:1:51")]
        grid: String,
        #[arg(long, default_value = "1,0.8,0.6,0.4,0.2")]
        c0: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the analytic damping matrix against Monte Carlo.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        corrupt_entry: Option<String>,
    },
}

fn run(cmd: Command) -> phasedamp::Result<Outcome> {
    match cmd {
        Command::Trajectory { config, out } => cli::cmd_trajectory(&config, out.as_deref()),
        Command::Bounds { kinds, grid, out } => cli::cmd_bounds(&kinds, &grid, out.as_deref()),
        Command::Robust {
            theta1,
            theta2,
            grid,
            c0,
            out,
        } => cli::cmd_robust(
            theta1,
            theta2,
            &grid,
            &cli::parse_c0_list(&c0)?,
            out.as_deref(),
        ),
        Command::Verify {
            config,
            samples,
            seed,
            out,
            corrupt_entry,
        } => {
            let corrupt = corrupt_entry.as_deref().map(cli::parse_entry).transpose()?;
            cli::cmd_verify(&config, samples, seed, corrupt, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                cli::EXIT_INVALID as u8
            } else {
                0
            });
        }
    };
    let result = run(args.command);
    match &result {
        Err(e) => eprintln!("error: {e}"),
        Ok(Outcome::Failed(msgs)) => {
            for m in msgs {
                eprintln!("verification failed: {m}");
            }
        }
        Ok(Outcome::Passed) => {}
    }
    ExitCode::from(cli::exit_code(&result) as u8)
}
