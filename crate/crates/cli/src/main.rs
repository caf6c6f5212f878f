//! `coopnet`: energy-efficiency analysis of cooperative cellular uplink
//! transmission schemes.
//!
//! Exit codes: 0 on success, 1 on usage/config/IO errors, 2 when a
//! verification run found a failing row.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use coopnet_cli::config::{parse_config, ScenarioConfig};
use coopnet_cli::emit::{analyze_csv, sweep_csv, to_json, verify_csv};
use coopnet_cli::run::{run_analyze, run_sweep, run_verify, SweepSpec, SweepVariable};
use coopnet_core::TrialPlan;

#[derive(Parser)]
#[command(
    name = "coopnet",
    version,
    about = "Transmit-power and bits-per-joule analysis of cellular uplink cooperation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario config file (`key = value` lines); defaults apply when absent
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output file; standard output when absent
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Emit JSON instead of CSV
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepVarArg {
    /// Vary d_1b = d_2b jointly
    CellDistance,
    /// Vary d_12 = d_21 jointly
    InterUserDistance,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form powers and energy efficiency of all three schemes
    Analyze {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Energy efficiency across a distance grid
    Sweep {
        #[command(flatten)]
        common: CommonArgs,

        /// Swept variable
        #[arg(long, value_enum)]
        var: SweepVarArg,

        /// Grid start in meters (default: 200 for cell distance, 1 for
        /// inter-user distance)
        #[arg(long)]
        start: Option<f64>,

        /// Grid stop in meters (default: 2000 for cell distance, 100 for
        /// inter-user distance)
        #[arg(long)]
        stop: Option<f64>,

        /// Number of grid points
        #[arg(long, default_value_t = 20)]
        points: usize,

        /// Logarithmic grid spacing
        #[arg(long)]
        log: bool,
    },
    /// Closed forms versus the Monte Carlo protocol simulator
    Verify {
        #[command(flatten)]
        common: CommonArgs,

        /// Monte Carlo trials per scheme
        #[arg(long, default_value_t = 10_000_000)]
        trials: u64,

        /// Random seed
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    match app() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn app() -> anyhow::Result<ExitCode> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            err.print()?;
            return Ok(ExitCode::from(code));
        }
    };

    match cli.command {
        Command::Analyze { common } => {
            let cfg = load_config(common.config.as_deref())?;
            let rows = run_analyze(&cfg);
            let text = if common.json {
                to_json(&rows)
            } else {
                analyze_csv(&rows)
            };
            write_output(common.out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            common,
            var,
            start,
            stop,
            points,
            log,
        } => {
            let cfg = load_config(common.config.as_deref())?;
            let (variable, default_start, default_stop) = match var {
                SweepVarArg::CellDistance => (SweepVariable::CellDistance, 200.0, 2000.0),
                SweepVarArg::InterUserDistance => (SweepVariable::InterUserDistance, 1.0, 100.0),
            };
            let spec = SweepSpec {
                variable,
                start: start.unwrap_or(default_start),
                stop: stop.unwrap_or(default_stop),
                points,
                log_scale: log,
            };
            let rows = run_sweep(&cfg, &spec)?;
            let text = if common.json {
                to_json(&rows)
            } else {
                sweep_csv(&rows)
            };
            write_output(common.out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            common,
            trials,
            seed,
        } => {
            let cfg = load_config(common.config.as_deref())?;
            let plan = TrialPlan::new(trials, seed)?;
            let outcome = run_verify(&cfg, &plan)?;
            let text = if common.json {
                to_json(&outcome.rows)
            } else {
                verify_csv(&outcome.rows)
            };
            write_output(common.out.as_deref(), &text)?;
            Ok(if outcome.all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
    }
}

fn load_config(path: Option<&Path>) -> anyhow::Result<ScenarioConfig> {
    match path {
        None => Ok(ScenarioConfig::default()),
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
            Ok(parse_config(&text)?)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
        Some(path) => fs::write(path, text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display())),
    }
}
