use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use unaware_core::Game;

mod export;
mod fuzz;
mod solve;

#[derive(Parser)]
#[command(name = "unaware", version, about = "Solver for dynamic games with unawareness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a game file against the structural properties.
    Validate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write each tree's payoff table as CSV plus its normal-form information sets.
    ExportNf {
        file: PathBuf,
        /// Directory for `<tree>.csv` and `<tree>.infosets.json`; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one solution concept and print the surviving sets level by level.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum)]
        concept: solve::ConceptArg,
        /// Removal reasons, with dominating mixtures for the elimination concepts.
        #[arg(long)]
        trace: bool,
        /// Justifying beliefs of the surviving strategies (efr, pr, prr).
        #[arg(long)]
        witness: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Cross-check all engines on generated games; JSON on stdout, summary on stderr.
    Fuzz {
        #[arg(long)]
        games: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generator configuration (JSON); its seed is replaced per game.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

pub enum Failure {
    /// Exit code 2.
    Usage(String),
    /// Exit code 1.
    Domain(String),
}

pub fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Parses and validates, printing diagnostics to stderr.
pub fn load(path: &Path) -> Result<Game, Failure> {
    let game = Game::parse(&read(path)?).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    let report = game.validate();
    if !report.is_valid() {
        for v in &report.violations {
            eprintln!("{}: {}", v.property, v.message);
        }
        return Err(Failure::Domain(format!("{}: invalid game", path.display())));
    }
    Ok(game)
}

pub fn json_line(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

fn validate(file: &Path, format: Format) -> Result<String, Failure> {
    let game = Game::parse(&read(file)?).map_err(|e| Failure::Domain(format!("{}: {e}", file.display())))?;
    let report = game.validate();
    let out = match format {
        Format::Json => json_line(&serde_json::json!({
            "schema": 1,
            "valid": report.is_valid(),
            "violations": report.violations.iter().map(|v| serde_json::json!({
                "property": v.property.name(),
                "message": v.message,
            })).collect::<Vec<_>>(),
            "notes": report.notes,
        })),
        Format::Text => {
            let mut s = String::new();
            if report.is_valid() {
                s.push_str(&format!("valid: {} trees, {} information sets\n", game.trees.len(), game.infosets.len()));
            }
            for n in &report.notes {
                s.push_str(&format!("note: {n}\n"));
            }
            s
        }
    };
    if report.is_valid() {
        return Ok(out);
    }
    if format == Format::Json {
        print!("{out}");
    }
    for v in &report.violations {
        eprintln!("{}: {}", v.property, v.message);
    }
    Err(Failure::Domain(format!("{}: {} violation(s)", file.display(), report.violations.len())))
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Validate { file, format } => validate(&file, format),
        Command::ExportNf { file, out } => export::run(&load(&file)?, out.as_deref()),
        Command::Solve { file, concept, trace, witness, format } => {
            if witness && !concept.is_belief() {
                return Err(Failure::Usage("--witness needs one of efr, pr, prr".into()));
            }
            let game = load(&file)?;
            Ok(solve::run(&game, concept, trace, witness, format))
        }
        Command::Fuzz { games, seed, config } => fuzz::run(games, seed, config.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
