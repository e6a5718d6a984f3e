//! `relbell`: simulate the moving-absorber Bell experiment from the desk.
//!
//! Exit codes: 0 success, 1 consistency-check failure, 2 configuration or
//! input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use relbell_cli::commands::{
    cmd_collapse_check, cmd_scan, cmd_speed_bound, cmd_table1, cmd_visibility, TABLE1_FWHM,
    TABLE1_TWO_LAMBDA_P,
};
use relbell_cli::scenario::load_scenario;
use relbell_core::config::{ExperimentConfig, Model};

#[derive(Parser)]
#[command(
    name = "relbell",
    about = "Numerical model of the 1999 Geneva relativistic Bell experiment",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the pair temporal-spread grid (Δτ per km against pump
    /// detuning and filter bandwidth) and emit CSV.
    Table1 {
        /// Comma-separated degenerate wavelengths 2λ_p in nm; empty for none.
        #[arg(long, default_value = None)]
        two_lambda_p: Option<String>,
        /// Comma-separated filter FWHM values in nm; empty for none.
        #[arg(long, default_value = None)]
        fwhm: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate a phase scan, fit the fringes and look for visibility drops.
    Scan {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Write the per-bin CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Sliding-window width for drop detection, bins.
        #[arg(long, default_value_t = 36)]
        window_bins: usize,
    },
    /// Refit a scan CSV produced by `scan`.
    Visibility {
        /// Path to the scan CSV.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 36)]
        window_bins: usize,
    },
    /// Report the timing-uncertainty budget and the speed-of-quantum-
    /// information lower bound.
    SpeedBound {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Run the collapse test-theory consistency checks on random inputs.
    CollapseCheck {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 1999)]
        seed: u64,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario file; unspecified fields take the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named preset supplying the defaults.
    #[arg(long, value_enum, default_value_t = Preset::Paper1999)]
    preset: Preset,
    /// Override the random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the physical model.
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    #[value(name = "paper-1999")]
    Paper1999,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Qm,
    #[value(name = "test-theory")]
    TestTheory,
}

impl ScenarioArgs {
    fn resolve(&self) -> Result<ExperimentConfig, String> {
        let mut config = match self.config {
            Some(ref path) => load_scenario(path).map_err(|e| e.to_string())?,
            None => match self.preset {
                Preset::Paper1999 => ExperimentConfig::paper_1999(),
            },
        };
        if let Some(seed) = self.seed {
            config.rng_seed = seed;
        }
        if let Some(model) = self.model {
            config.model = match model {
                ModelArg::Qm => Model::Qm,
                ModelArg::TestTheory => Model::TestTheory,
            };
        }
        Ok(config)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Table1 {
            two_lambda_p,
            fwhm,
            out,
        } => {
            let centers = match two_lambda_p {
                Some(ref list) => parse_list(list)?,
                None => TABLE1_TWO_LAMBDA_P.to_vec(),
            };
            let widths = match fwhm {
                Some(ref list) => parse_list(list)?,
                None => TABLE1_FWHM.to_vec(),
            };
            let csv = cmd_table1(&centers, &widths).map_err(|e| e.to_string())?;
            emit(out.as_deref(), &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan {
            scenario,
            out,
            window_bins,
        } => {
            let config = scenario.resolve()?;
            let output = cmd_scan(&config, window_bins).map_err(|e| e.to_string())?;
            emit(out.as_deref(), &output.csv)?;
            print!("{}", output.summary);
            Ok(ExitCode::SUCCESS)
        }
        Command::Visibility { input, window_bins } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| format!("cannot read {}: {e}", input.display()))?;
            let report = cmd_visibility(&text, window_bins).map_err(|e| e.to_string())?;
            print!("{report}");
            Ok(ExitCode::SUCCESS)
        }
        Command::SpeedBound { scenario } => {
            let config = scenario.resolve()?;
            let report = cmd_speed_bound(&config).map_err(|e| e.to_string())?;
            print!("{report}");
            Ok(ExitCode::SUCCESS)
        }
        Command::CollapseCheck { trials, seed } => {
            let check = cmd_collapse_check(trials, seed);
            print!("{}", check.report);
            Ok(if check.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn parse_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|e| format!("bad number `{s}`: {e}")))
        .collect()
}

fn emit(path: Option<&std::path::Path>, content: &str) -> Result<(), String> {
    match path {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
