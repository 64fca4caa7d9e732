use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use finality::commands::{self, IdentifyOptions, Outcome};
use finality::{load_dataset, load_model, render, ModelSpec};
use finality_core::{CheckSelection, Level, RankOptions};

/// Causal and final models over small discrete worlds.
#[derive(Parser)]
#[command(name = "tele", version)]
struct Cli {
    /// Print one JSON document instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Reserved: every command is deterministic and ignores it.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every world the causal model allows.
    Worlds { spec: PathBuf },
    /// Worlds after cutting the inbound arrows of one variable.
    Intervene {
        spec: PathBuf,
        /// Variable to intervene on; defaults to the spec's `do`.
        #[arg(long = "do", value_name = "VAR")]
        target: Option<String>,
    },
    /// Worlds compatible with a final model, and what it implies about dependence.
    Finalize {
        spec: PathBuf,
        #[arg(long = "final", value_name = "NAME")]
        name: String,
    },
    /// Whether observational data can tell two final models apart.
    Distinguish {
        spec: PathBuf,
        #[arg(long = "final", value_name = "NAME", num_args = 1, required = true)]
        names: Vec<String>,
    },
    /// Rank goal hypotheses against observed data.
    ///
    /// Exits 0 when one most specific hypothesis fits, 2 when none fits and 3
    /// when several tie.
    Identify {
        spec: PathBuf,
        data: PathBuf,
        /// Generate hypotheses from the intervention instead of using the
        /// spec's final models.
        #[arg(long)]
        enumerate: bool,
        /// Largest set of intended effects to generate.
        #[arg(long, value_name = "N", requires = "enumerate")]
        max_effects: Option<usize>,
        /// Which dependence statements to check besides the support.
        #[arg(long, value_enum, default_value_t = Checks::ActionVsContext)]
        checks: Checks,
        /// Do not prefer hypotheses with fewer compatible worlds.
        #[arg(long)]
        no_specific: bool,
    },
    /// Rewrite a final model as a causal model with an intention node.
    Reduce {
        spec: PathBuf,
        #[arg(long = "final", value_name = "NAME")]
        name: String,
        /// Level of the action before acting; defaults to the spec's `rest`,
        /// then to the least level.
        #[arg(long, allow_negative_numbers = true)]
        rest: Option<Level>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Checks {
    ActionVsContext,
    AllPairs,
    None,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Worlds { .. } => "worlds",
            Command::Intervene { .. } => "intervene",
            Command::Finalize { .. } => "finalize",
            Command::Distinguish { .. } => "distinguish",
            Command::Identify { .. } => "identify",
            Command::Reduce { .. } => "reduce",
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn spec(path: &Path) -> Result<ModelSpec> {
    load_model(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::Worlds { spec: path } => Ok(commands::worlds(&spec(path)?)),
        Command::Intervene { spec: path, target } => commands::intervene(&spec(path)?, target.as_deref()),
        Command::Finalize { spec: path, name } => commands::finalize(&spec(path)?, name),
        Command::Distinguish { spec: path, names } => {
            let [a, b] = names.as_slice() else {
                anyhow::bail!("distinguish takes exactly two --final names, got {}", names.len());
            };
            commands::distinguish(&spec(path)?, a, b)
        }
        Command::Identify {
            spec: path,
            data,
            enumerate,
            max_effects,
            checks,
            no_specific,
        } => {
            let model = spec(path)?;
            let dataset = load_dataset(&read(data)?, model.scm()).with_context(|| format!("in {}", data.display()))?;
            let opts = IdentifyOptions {
                enumerate: *enumerate,
                max_effects: *max_effects,
                rank: RankOptions {
                    checks: match checks {
                        Checks::ActionVsContext => CheckSelection::ActionVsContext,
                        Checks::AllPairs => CheckSelection::AllPairs,
                        Checks::None => CheckSelection::None,
                    },
                    prefer_specific: !no_specific,
                },
            };
            commands::identify(&model, &dataset, opts)
        }
        Command::Reduce { spec: path, name, rest } => commands::reduce(&spec(path)?, name, *rest),
    }
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn json_text(doc: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("JSON values serialize");
    text.push('\n');
    text
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let name = cli.command.name();
    match run(&cli.command) {
        Ok(outcome) => {
            if cli.json {
                emit(&json_text(&commands::document(name, Some(&outcome), &[])));
            } else {
                match render::human(name, &outcome.result) {
                    Ok(text) => emit(&text),
                    Err(e) => {
                        eprintln!("error: {e:#}");
                        return ExitCode::from(1);
                    }
                }
            }
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            let message = format!("{e:#}");
            eprintln!("error: {message}");
            if cli.json {
                emit(&json_text(&commands::document(name, None, &[message])));
            }
            ExitCode::from(1)
        }
    }
}
