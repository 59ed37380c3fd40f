use std::fs::File;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qudit_zeno_experiments::spectrum::{protocol_config_from_json, spectrum_report};
use qudit_zeno_experiments::{
    classify_regions, oracle_check, read_rows, run_config, run_preset, Artifacts, ExperimentError, Mutation,
    PresetOptions, Result, DEFAULT_THRESHOLD,
};

/// Measurement-based cooling of qudit spin systems.
#[derive(Parser)]
#[command(name = "qzeno", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to the config's `outputs`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; all cores when omitted.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run one of the pinned figure grids.
    Preset {
        /// fig2, fig3, fig4, fig5, fig6, fig7, fig_chain, fig_star or fig8.
        id: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        /// Include d = 5 in fig4.
        #[arg(long)]
        extended: bool,
    },
    /// Compare the engine with the closed-form fidelities.
    OracleCheck {
        /// Flip the field sign of the fidelity reference basis; the check must then fail.
        #[arg(long)]
        mutate: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the spectrum of the one-step Zeno map as JSON.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
    },
    /// Report Jτ values where fidelity never exceeds the threshold.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
    },
}

fn report(artifacts: &Artifacts) {
    println!("wrote {} rows to {}", artifacts.rows, artifacts.csv.display());
    println!("manifest {}", artifacts.manifest.display());
    for p in &artifacts.derived {
        println!("derived {}", p.display());
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))
}

fn execute(command: Command) -> Result<ExitCode> {
    match command {
        Command::Run { config, out, workers } => {
            let (run, artifacts) = run_config(&config, out.as_deref(), workers)?;
            report(&artifacts);
            for e in run.extinctions() {
                eprintln!(
                    "grid point {}: extinct at step {} (p = {:e})",
                    e.grid_index, e.step, e.probability
                );
            }
        }
        Command::Preset {
            id,
            out,
            workers,
            extended,
        } => {
            let (_, artifacts) = run_preset(&id, PresetOptions { extended }, &out, workers)?;
            report(&artifacts);
        }
        Command::OracleCheck { mutate, json } => {
            let mutation = if mutate {
                Mutation::FlipReferenceField
            } else {
                Mutation::None
            };
            let r = oracle_check(mutation)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r)?);
            } else {
                for g in &r.grids {
                    println!(
                        "{:<4} d={} points={:<5} max_dev={:.3e} at ({:.4}, N={}) {}",
                        g.model,
                        g.d,
                        g.points,
                        g.max_deviation,
                        g.worst_parameter,
                        g.worst_step,
                        if g.passed { "PASS" } else { "FAIL" }
                    );
                }
            }
            if !r.passed() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Spectrum { config } => {
            let config = protocol_config_from_json(&read(&config)?)?;
            println!("{}", serde_json::to_string_pretty(&spectrum_report(&config)?)?);
        }
        Command::Classify { input, threshold } => {
            let file = File::open(&input).map_err(|e| ExperimentError::io(&input, e))?;
            let rows = read_rows(file).map_err(|e| ExperimentError::validation("in", e.to_string()))?;
            let panels = classify_regions(&rows, threshold)?;
            println!("{}", serde_json::to_string_pretty(&panels)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
