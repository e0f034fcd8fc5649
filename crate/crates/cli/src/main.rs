//! `tvar-lnd`: validate polyhedral divisor files, classify homogeneous
//! locally nilpotent derivations, compute ML invariants and trace derivations.

mod report;
mod text;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use tvar_lnd::input::SearchOptions;
use tvar_lnd::{Error, InputSpec};

#[derive(Parser, Debug)]
#[command(name = "tvar-lnd", version, about = "Homogeneous LNDs of complexity-one torus actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Degree bound for truncated section bases and generator searches.
    #[arg(long, global = true)]
    degree_bound: Option<usize>,

    /// Sup-norm bound for the search of admissible degrees.
    #[arg(long, global = true)]
    search_norm: Option<i64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Treat the input as the toric variety of the tail cone, ignoring the divisor.
    #[arg(long, global = true)]
    toric: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the input and the properness of the divisor.
    Validate { file: PathBuf },
    /// List derivation classes with representatives.
    Classify {
        file: PathBuf,
        #[command(flatten)]
        kinds: Kinds,
    },
    /// Homogeneous Makar-Limanov invariant and the triviality criterion.
    Ml { file: PathBuf },
    /// Apply a class representative repeatedly to an element.
    Apply {
        file: PathBuf,
        /// Class id as printed by `classify`, e.g. `F:0` or `H:1:inf`.
        #[arg(long)]
        lnd: String,
        /// Homogeneous element, e.g. `"-t chi^(4,0)"`.
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long, default_value_t = 8)]
        iterate: usize,
    },
}

#[derive(Args, Debug, Clone, Copy)]
#[group(multiple = false)]
struct Kinds {
    #[arg(long)]
    fiber: bool,
    #[arg(long)]
    horizontal: bool,
    #[arg(long)]
    all: bool,
}

impl Kinds {
    fn fiber(&self) -> bool {
        self.all || self.fiber || !self.horizontal
    }

    fn horizontal(&self) -> bool {
        self.all || self.horizontal || !self.fiber
    }
}

/// A failed run, with the report assembled so far.
#[derive(Debug)]
enum Failure {
    Invalid(String),
    Inconclusive(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Inconclusive(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Inconclusive(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotFoundWithinBound(_) | Error::InconclusiveRealization(_) => Failure::Inconclusive(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

struct Run {
    sections: Map<String, Value>,
    warnings: Vec<String>,
}

impl Run {
    fn new() -> Self {
        Self {
            sections: Map::new(),
            warnings: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, v: Value) {
        self.sections.insert(name.to_string(), v);
    }
}

fn read_spec(path: &Path) -> Result<InputSpec, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::Invalid(format!(
            "{}:{}:{}: {}",
            path.display(),
            e.line(),
            e.column(),
            strip_position(&e.to_string())
        ))
    })
}

fn strip_position(msg: &str) -> &str {
    msg.rfind(" at line ").map_or(msg, |i| &msg[..i])
}

fn options(cli: &Cli, spec: &InputSpec) -> SearchOptions {
    SearchOptions {
        degree_bound: cli.degree_bound.unwrap_or(spec.options.degree_bound),
        search_norm: cli.search_norm.unwrap_or(spec.options.search_norm),
    }
}

fn execute(cli: &Cli, run: &mut Run) -> Result<(), Failure> {
    let file = match &cli.command {
        Command::Validate { file } | Command::Classify { file, .. } | Command::Ml { file } | Command::Apply { file, .. } => file,
    };
    let spec = read_spec(file)?;
    let opts = options(cli, &spec);

    if cli.toric {
        let sigma = spec.sigma()?;
        run.push("validation", report::toric_validation(&sigma));
        match &cli.command {
            Command::Validate { .. } => {}
            Command::Classify { .. } => run.push("toric", report::toric(&sigma)?),
            Command::Ml { .. } => run.push("ml", report::ml_toric(&sigma)),
            Command::Apply { lnd, element, iterate, .. } => {
                run.push("apply", report::apply_toric(&sigma, lnd, element, *iterate)?)
            }
        }
        return Ok(());
    }

    let algebra = spec.algebra()?;
    let (section, verdict) = report::validation(&algebra);
    run.push("validation", section);
    match verdict {
        report::Verdict::Proper => {}
        report::Verdict::Assumed(reason) => run.warnings.push(format!("proper assuming principality: {reason}")),
        report::Verdict::NotProper(reason) => return Err(Failure::Invalid(format!("divisor is not proper: {reason}"))),
    }
    match &cli.command {
        Command::Validate { .. } => {}
        Command::Classify { kinds, .. } => {
            if kinds.fiber() {
                run.push("fiber", report::fiber(&algebra, &opts)?);
            }
            if kinds.horizontal() {
                run.push("horizontal", report::horizontal(&algebra, &opts)?);
            }
        }
        Command::Ml { .. } => run.push("ml", report::ml(&algebra)?),
        Command::Apply { lnd, element, iterate, .. } => {
            run.push("apply", report::apply(&algebra, &opts, lnd, element, *iterate)?)
        }
    }
    Ok(())
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("TVAR_LND_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::Invalid(format!("TVAR_LND_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Invalid(e.to_string()))
}

fn emit(format: Format, run: Run, failure: Option<&Failure>) {
    let mut doc = Map::new();
    if let (Some(f), Format::Json) = (failure, format) {
        doc.insert("error".into(), json!(f.message()));
    }
    if !run.warnings.is_empty() {
        doc.insert("warnings".into(), json!(run.warnings));
    }
    doc.extend(run.sections);
    let doc = Value::Object(doc);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes")),
        Format::Text => print!("{}", text::render(&doc)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(f) = configure_threads() {
        eprintln!("error: {}", f.message());
        return ExitCode::from(f.exit_code());
    }
    let mut run = Run::new();
    let outcome = execute(&cli, &mut run);
    for w in &run.warnings {
        eprintln!("warning: {w}");
    }
    match outcome {
        Ok(()) => {
            emit(cli.format, run, None);
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            let code = f.exit_code();
            emit(cli.format, run, Some(&f));
            ExitCode::from(code)
        }
    }
}
