use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use doctrina::commands::{self, Output, EXIT_FAIL};
use doctrina::config::TABLE_BITS_VAR;
use doctrina::{Error, RunConfig};
use doctrina_core::logic::SaturationBudget;

#[derive(Parser)]
#[command(
    name = "doctrina",
    version,
    about = "Entailment, witnesses and completions for coherent theories"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Term depth for witnesses and arrows
    #[arg(long, global = true, default_value_t = 4)]
    depth: usize,
    /// Chase rounds per branch
    #[arg(long, global = true)]
    rounds: Option<usize>,
    /// Disjunctive splits per branch
    #[arg(long, global = true)]
    splits: Option<usize>,
    /// Terms per branch
    #[arg(long, global = true)]
    terms: Option<usize>,
    /// Largest carrier for model enumeration
    #[arg(long, global = true, default_value_t = 3)]
    model_size: usize,
    /// Print JSON
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Check every proved sequent in the enumerated models of the theory
    #[arg(long, global = true)]
    validate: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a sequent (or an axiom against the others) by the chase
    Entails { file: PathBuf, target: String },
    /// Search for witnesses of the file's existential goals
    Herbrand {
        file: PathBuf,
        #[arg(long)]
        goal: Option<String>,
    },
    /// Compare two elements of the completion
    Leq {
        file: PathBuf,
        left: String,
        right: String,
        #[arg(long, default_value = "")]
        context: String,
    },
    /// Check a JSON model against the theory
    Model { file: PathBuf, model: PathBuf },
    /// Look for a small model of the theory falsifying a sequent
    Countermodel { file: PathBuf, target: String },
    /// Run the seeded law suites
    Laws {
        /// Cases per suite
        #[arg(long)]
        cases: Option<usize>,
    },
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<Output, (Option<PathBuf>, Error)> {
    let with = |p: &Path| {
        let p = p.to_owned();
        move |e: Error| (Some(p), e)
    };
    match &cli.command {
        Command::Entails { file, target } => {
            let text = read(file).map_err(|e| (None, e))?;
            commands::entails_cmd(&text, target, cfg).map_err(with(file))
        }
        Command::Herbrand { file, goal } => {
            let text = read(file).map_err(|e| (None, e))?;
            commands::herbrand_cmd(&text, goal.as_deref(), cfg).map_err(with(file))
        }
        Command::Leq {
            file,
            left,
            right,
            context,
        } => {
            let text = read(file).map_err(|e| (None, e))?;
            commands::leq_cmd(&text, left, right, context, cfg).map_err(with(file))
        }
        Command::Model { file, model } => {
            let text = read(file).map_err(|e| (None, e))?;
            let json = read(model).map_err(|e| (None, e))?;
            commands::model_cmd(&text, &json, cfg).map_err(with(file))
        }
        Command::Countermodel { file, target } => {
            let text = read(file).map_err(|e| (None, e))?;
            commands::countermodel_cmd(&text, target, cfg).map_err(with(file))
        }
        Command::Laws { cases } => commands::laws_cmd(*cases, cfg).map_err(|e| (None, e)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_FAIL as u8 } else { 0 });
        }
    };
    let defaults = SaturationBudget::default();
    let mut cfg = RunConfig {
        depth: cli.depth,
        budget: SaturationBudget {
            max_rounds: cli.rounds.unwrap_or(defaults.max_rounds),
            max_splits: cli.splits.unwrap_or(defaults.max_splits),
            max_terms: cli.terms.unwrap_or(defaults.max_terms),
        },
        model_size: cli.model_size,
        json: cli.json,
        seed: cli.seed,
        validate: cli.validate,
        ..RunConfig::default()
    };
    if let Some(bits) = std::env::var(TABLE_BITS_VAR).ok().and_then(|v| v.parse().ok()) {
        cfg.max_table_bits = bits;
    }
    match run(&cli, &cfg) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err((path, e)) => {
            match (path, &e) {
                (Some(p), Error::Parse(_)) => eprintln!("error: {}:{e}", p.display()),
                _ => eprintln!("error: {e}"),
            }
            ExitCode::from(EXIT_FAIL as u8)
        }
    }
}
