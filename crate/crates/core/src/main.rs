//! `nclt` — numerical experiments for boolean, free and classical
//! convolution limit theorems on the circle and the line.

use clap::{Parser, Subcommand};
use nclt::experiments::config;
use nclt::experiments::presets::{build, PresetArray, PresetName, PresetParams};
use nclt::experiments::runner::{run_circle, run_line, CircleTarget};
use nclt::experiments::{acceptance, Mode};
use nclt::series::DEFAULT_ORDER;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "nclt", version, about = "Convolution limit-theorem experiments on the circle and the line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named preset experiment family.
    Preset {
        /// One of: cor37, cor38, remark_rho, bern_R, poisson_R.
        name: String,
        /// Intensity parameter t (also the Poisson rate for line presets).
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Direction arg λ for the cor38 family, in radians.
        #[arg(long, default_value_t = std::f64::consts::PI / 3.0)]
        lambda_angle: f64,
        /// Comma-separated strictly increasing n ladder.
        #[arg(long, value_delimiter = ',')]
        n_ladder: Option<Vec<u64>>,
        /// Convolution mode.
        #[arg(long, default_value = "boolean")]
        mode: String,
        /// Truncation order of the series computations.
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        /// Convergence tolerance applied at the largest n.
        #[arg(long, default_value_t = 0.05)]
        final_tol: f64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an experiment described by a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full acceptance suite; exits nonzero on any failure.
    Check,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode, Box<dyn std::error::Error>> {
    match Cli::parse().command {
        Command::Preset {
            name,
            t,
            lambda_angle,
            n_ladder,
            mode,
            order,
            final_tol,
            out,
        } => {
            let preset = PresetName::parse(&name)?;
            let mode = Mode::parse(&mode)?;
            let params = PresetParams { t, lambda_angle };
            let report = match build(preset, params, n_ladder.as_deref())? {
                PresetArray::Circle { array, params, classical_target } => {
                    let target = match (&params, mode, &classical_target) {
                        (_, Mode::Classical, Some(m)) => CircleTarget::Measure(m.clone()),
                        (Some(p), _, _) => CircleTarget::Id(p.clone()),
                        (None, _, _) => CircleTarget::Haar,
                    };
                    run_circle(preset.as_str(), &array, mode, order, &target, final_tol)?
                }
                PresetArray::Line { array, params } => {
                    run_line(preset.as_str(), &array, mode, order, &params, final_tol)?
                }
            };
            std::fs::write(&out, report.to_csv())?;
            println!("wrote {} rows to {}", report.rows.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { config, out } => {
            let text = std::fs::read_to_string(&config)?;
            let cfg = config::parse(&text)?;
            let report = config::execute(&cfg)?;
            std::fs::write(&out, report.to_csv())?;
            println!("wrote {} rows to {}", report.rows.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Check => {
            let results = acceptance::run_all();
            let mut ok = true;
            for c in &results {
                let status = if c.pass { "pass" } else { "FAIL" };
                println!("[{status}] {}: {}", c.name, c.detail);
                ok &= c.pass;
            }
            if ok {
                println!("all {} criteria passed", results.len());
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::FAILURE)
            }
        }
    }
}
