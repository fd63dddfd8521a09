//! Scenario-driven batch runner for central-force entanglement
//! simulations: `run` a scenario file, `sweep` it over a parameter grid,
//! `validate` it, or print `oracle` reference values.

mod oracle;
mod run;
mod sweep;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use centforce::scenario::{parse_scenario, Pipeline, Scenario};

#[derive(Parser)]
#[command(name = "centforce", version, about = "Entanglement dynamics of two quantum masses under central forces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single scenario file.
    Run {
        scenario: PathBuf,
        /// Override the time step (seconds).
        #[arg(long)]
        dt: Option<f64>,
        /// Override the grid spacing (meters).
        #[arg(long)]
        grid_spacing: Option<f64>,
        /// Override the expansion order N.
        #[arg(long)]
        order: Option<u32>,
        /// Override the pipeline: analytic | numeric | both.
        #[arg(long)]
        pipeline: Option<String>,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a gnuplot script next to the CSVs.
        #[arg(long)]
        emit_plot_script: bool,
    },
    /// Run the cartesian product of a scenario and a parameter grid file.
    Sweep {
        scenario: PathBuf,
        grid: PathBuf,
        /// Output directory for the sweep (default: <scenario out_dir>_sweep).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and validate a scenario, printing the resolved parameters.
    Validate { scenario: PathBuf },
    /// Print reference values used by the test suite:
    /// radius | frequencies | headline | epsilon | interactions.
    Oracle { which: String },
}

/// stdout writer that tolerates a closed pipe (`centforce ... | head`).
fn emit(line: String) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{line}");
}

fn apply_overrides(
    mut scenario: Scenario,
    dt: Option<f64>,
    grid_spacing: Option<f64>,
    order: Option<u32>,
    pipeline: Option<String>,
    out: Option<PathBuf>,
) -> Result<Scenario> {
    if let Some(dt) = dt {
        scenario.dt_s = dt;
    }
    if let Some(h) = grid_spacing {
        scenario.grid_spacing_m = h;
    }
    if let Some(n) = order {
        scenario.config = scenario.config.with_order(n)?;
    }
    if let Some(p) = pipeline {
        scenario.pipeline = match p.as_str() {
            "analytic" => Pipeline::Analytic,
            "numeric" => Pipeline::Numeric,
            "both" => Pipeline::Both,
            other => anyhow::bail!("unknown pipeline `{other}`"),
        };
    }
    if let Some(out) = out {
        scenario.out_dir = out.display().to_string();
    }
    scenario.validate()?;
    Ok(scenario)
}

fn main_inner() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { scenario, dt, grid_spacing, order, pipeline, out, emit_plot_script } => {
            let text = fs::read_to_string(&scenario)
                .with_context(|| format!("reading {}", scenario.display()))?;
            let parsed = parse_scenario(&text)?;
            let parsed = apply_overrides(parsed, dt, grid_spacing, order, pipeline, out)?;
            let out_dir = PathBuf::from(&parsed.out_dir);
            let summary = run::execute(&parsed, &out_dir, emit_plot_script)?;
            emit(format!("wrote {}", summary.manifest.display()));
            if let Some(last) = summary.final_row {
                emit(format!(
                    "t = {:.6} s: E = {:.6e}, S = {:.6e}",
                    last.t_s, last.log_negativity, last.entropy
                ));
            }
        }
        Command::Sweep { scenario, grid, out } => {
            let base = fs::read_to_string(&scenario)
                .with_context(|| format!("reading {}", scenario.display()))?;
            // The base must itself be valid before sweeping over it.
            let parsed = parse_scenario(&base)?;
            let grid_text =
                fs::read_to_string(&grid).with_context(|| format!("reading {}", grid.display()))?;
            let out_dir =
                out.unwrap_or_else(|| PathBuf::from(format!("{}_sweep", parsed.out_dir)));
            sweep::execute(&base, &grid_text, &out_dir)?;
            emit(format!("wrote {}", out_dir.join("aggregate.csv").display()));
        }
        Command::Validate { scenario } => {
            let text = fs::read_to_string(&scenario)
                .with_context(|| format!("reading {}", scenario.display()))?;
            let parsed = parse_scenario(&text)?;
            emit("scenario is valid".into());
            for (k, v) in parsed.resolved() {
                emit(format!("{k} = {v}"));
            }
        }
        Command::Oracle { which } => oracle::run(&which)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
