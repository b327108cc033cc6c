//! `contextlab` — analyze system files and generate scenario files.

use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use contextlab::format::{parse_system, write_system, FileError};
use contextlab::report::{run_checks, CheckOptions};
use contextlab::scenarios::ScenarioSpec;

#[derive(Parser)]
#[command(name = "contextlab", version, about = "Contextuality analysis on systems of context-indexed random variables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run analyses on a system file (default: all of them).
    Check {
        /// Path to a `.system` file.
        path: PathBuf,
        /// Coupling-feasibility contextuality verdict.
        #[arg(long)]
        cbd: bool,
        /// Content-keyed deterministic hidden-variable model.
        #[arg(long)]
        fine: bool,
        /// Variable-keyed deterministic model with maximality constraints.
        #[arg(long)]
        octuple: bool,
        /// Per-value marginal comparisons across contexts.
        #[arg(long)]
        nonsignaling: bool,
        /// Emit the machine-readable JSON report.
        #[arg(long)]
        json: bool,
    },
    /// Write a scenario as a system file.
    Scenario {
        /// One of: specker, bell, leggett-garg, rank2, cyclic.
        kind: String,
        /// Flat list of rational parameters (tables row by row).
        #[arg(long, value_name = "RATIONAL", num_args = 0.., allow_hyphen_values = false)]
        params: Vec<String>,
        /// Named parameter set instead of --params. bell: uniform | pr-box;
        /// leggett-garg: correlated | frustrated.
        #[arg(long, conflicts_with = "params")]
        preset: Option<String>,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit 2: the input was unusable. Exit 1: an internal failure.
enum CliError {
    Input(String),
    Internal(String),
}

fn color_enabled() -> bool {
    match std::env::var("CONTEXTLAB_COLOR") {
        Ok(v) if v == "0" => false,
        Ok(_) => true,
        Err(_) => std::io::stdout().is_terminal(),
    }
}

fn preset_params(kind: &str, preset: &str) -> Result<Vec<contextlab::Rational>, CliError> {
    use contextlab::scenarios::{
        anticorrelated_table, correlated_table, pr_box_params, uniform_bell_params,
    };
    let tables = |ts: Vec<[contextlab::Rational; 4]>| ts.into_iter().flatten().collect();
    match (kind, preset) {
        ("bell", "uniform") => Ok(uniform_bell_params().to_vec()),
        ("bell", "pr-box") => Ok(pr_box_params().to_vec()),
        ("leggett-garg", "correlated") => {
            Ok(tables(vec![correlated_table(), correlated_table(), correlated_table()]))
        }
        ("leggett-garg", "frustrated") => {
            Ok(tables(vec![correlated_table(), correlated_table(), anticorrelated_table()]))
        }
        _ => Err(CliError::Input(format!("no preset `{preset}` for scenario `{kind}`"))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Check { path, cbd, fine, octuple, nonsignaling, json } => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            let system = parse_system(&text).map_err(|e| match e {
                FileError::Parse { .. } => CliError::Input(format!("{}: {e}", path.display())),
                FileError::Validation(_) => CliError::Input(format!("{}: {e}", path.display())),
            })?;
            let any_selected = cbd || fine || octuple || nonsignaling;
            let options = if any_selected {
                CheckOptions { nonsignaling, cbd, fine, octuple }
            } else {
                CheckOptions::default()
            };
            let report = run_checks(&system, &path.display().to_string(), &options);
            if json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.render_text(color_enabled()));
            }
            Ok(())
        }
        Command::Scenario { kind, params, preset, out } => {
            let params: Vec<contextlab::Rational> = match &preset {
                Some(p) => preset_params(&kind, p)?,
                None => params
                    .iter()
                    .map(|s| {
                        contextlab::parse_rational(s)
                            .ok_or_else(|| CliError::Input(format!("`{s}` is not a rational number")))
                    })
                    .collect::<Result<_, _>>()?,
            };
            let spec = ScenarioSpec::parse(&kind, params).map_err(|e| CliError::Input(e.to_string()))?;
            let system = spec.build().map_err(|e| CliError::Input(e.to_string()))?;
            let text = write_system(&system);
            match out {
                Some(path) => std::fs::write(&path, text).map_err(|e| {
                    CliError::Internal(format!("cannot write {}: {e}", path.display()))
                })?,
                None => print!("{text}"),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
