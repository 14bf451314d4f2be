use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use report::Report;

/// Checks ordered groupoids, left-cancellative categories, their
/// topologies, sheaves and site morphisms from JSON files.
#[derive(Parser, Debug)]
#[command(name = "ordsite", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also check flatness over every diagram shape with at most this many
    /// nodes and edges.
    #[arg(long, global = true)]
    oracle_bound: Option<usize>,
    /// Largest value set in the sheaf universe used by `check comparison`.
    #[arg(long, global = true, default_value_t = 3)]
    sheaf_universe: usize,
    /// Where `translate` writes its output; stdout otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load a file and run the validator for its kind.
    Validate { input: PathBuf },
    /// Apply a construction and re-validate the result.
    Translate { kind: TranslateKind, input: PathBuf },
    /// Run one of the checks.
    Check {
        what: CheckKind,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TranslateKind {
    L,
    G,
    Lg,
    Gl,
    Topology,
    Presheaf,
}

impl TranslateKind {
    pub fn name(self) -> &'static str {
        match self {
            TranslateKind::L => "l",
            TranslateKind::G => "g",
            TranslateKind::Lg => "lg",
            TranslateKind::Gl => "gl",
            TranslateKind::Topology => "topology",
            TranslateKind::Presheaf => "presheaf",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CheckKind {
    Eta,
    Kappa,
    Triangles,
    Weq,
    Topology,
    Sheaf,
    Site,
    Comparison,
}

pub struct Options {
    pub oracle_bound: Option<usize>,
    pub sheaf_universe: usize,
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let opts = Options { oracle_bound: cli.oracle_bound, sheaf_universe: cli.sheaf_universe, out: cli.out };
    let start = Instant::now();
    let mut report = Report::new(echo);
    let outcome = match cli.command {
        Command::Validate { input } => commands::validate(&input, &mut report),
        Command::Translate { kind, input } => commands::translate(kind, &input, &opts, &mut report),
        Command::Check { what, inputs } => commands::check(what, &inputs, &opts, &mut report),
    };
    let code = match outcome {
        Ok(()) if report.passed() => 0,
        Ok(()) => 1,
        Err(e) => {
            report.error = Some(e.to_string());
            report.witnesses = Some(e.witnesses());
            2
        }
    };
    let text = match (&report.document, cli.format) {
        (Some(doc), _) if code == 0 => serde_json::to_string_pretty(doc).expect("document serializes") + "\n",
        (_, Format::Json) => report.to_json() + "\n",
        (_, Format::Text) => report.to_text(),
    };
    let _ = std::io::stdout().write_all(text.as_bytes());
    eprintln!("elapsed: {:.3} ms", start.elapsed().as_secs_f64() * 1e3);
    ExitCode::from(code)
}
