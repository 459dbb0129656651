mod markdown;
mod params;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use protogame::analysis::{analyze, verify, Analysis, AnalysisOptions};
use protogame::catalog::{list_protocols, resolve_name, ProtocolEntry};
use protogame::gamespec;
use protogame::{get_protocol, Error};
use serde::Serialize;

/// Exit codes.
const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNKNOWN_TARGET: u8 = 3;
const EXIT_PARSE: u8 = 4;
const EXIT_PARAMS: u8 = 5;

#[derive(Parser)]
#[command(name = "protogame", version, about = "Game-theoretic analysis of two-party cryptographic protocols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in protocols and their aliases.
    List {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Spectra, classification and equilibria of a protocol.
    Analyze(RunArgs),
    /// Analysis plus an audit of every claim; exits 1 if a verdict differs
    /// from its expectation.
    Verify(RunArgs),
    /// Print the canonical gamespec text of a protocol.
    Export {
        /// Catalog name, alias or path to a .gamespec file.
        target: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Catalog name, alias or path to a .gamespec file.
    target: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// File of `name = p/q` lines fixing the reported instance.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Variant::All)]
    variant: Variant,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Rational,
    Naive,
    WithAbort,
    All,
}

impl Variant {
    fn game_name(self) -> Option<String> {
        match self {
            Variant::Rational => Some("rational".into()),
            Variant::Naive => Some("naive".into()),
            Variant::WithAbort => Some("with_abort".into()),
            Variant::All => None,
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Target {
    Catalog { name: String, requested: String },
    File { name: String, path: String },
}

#[derive(Serialize)]
struct Report<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    target: Target,
    /// Wall-clock time; the only field that varies between identical runs.
    timing_ms: u64,
    report: &'a Analysis,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn code_for(e: &Error) -> u8 {
    match e {
        Error::UnknownProtocol { .. } => EXIT_UNKNOWN_TARGET,
        Error::UnknownGame(_) => EXIT_USAGE,
        Error::UnboundParam(_)
        | Error::ExtraParam(_)
        | Error::ConstraintViolated(_)
        | Error::UnsatisfiedAfterBudget { .. }
        | Error::NonPositiveAmount { .. } => EXIT_PARAMS,
        Error::InvalidModel(_) | Error::InvalidGame(_) | Error::InvalidClaim(_) | Error::InvalidDistribution(_) => {
            EXIT_PARSE
        }
        _ => EXIT_MISMATCH,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(code_for(&e), e.to_string())
    }
}

fn load_target(target: &str) -> Result<(ProtocolEntry, Target), Failure> {
    if let Some(name) = resolve_name(target) {
        return Ok((
            get_protocol(name)?,
            Target::Catalog {
                name: name.to_string(),
                requested: target.to_string(),
            },
        ));
    }
    let path = Path::new(target);
    if !path.is_file() {
        let names: Vec<String> = list_protocols()
            .into_iter()
            .flat_map(|l| std::iter::once(l.name).chain(l.aliases))
            .collect();
        return Err(Failure::new(
            EXIT_UNKNOWN_TARGET,
            format!(
                "unknown target '{target}': not a protocol name and not a readable file (protocols: {})",
                names.join(", ")
            ),
        ));
    }
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_UNKNOWN_TARGET, format!("cannot read {target}: {e}")))?;
    let entry = gamespec::load(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{target}:{e}")))?;
    let name = entry.name.clone();
    Ok((
        entry,
        Target::File {
            name,
            path: target.to_string(),
        },
    ))
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(EXIT_USAGE, format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::new(EXIT_USAGE, format!("cannot write output: {e}")))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn run_list(format: Format, output: &Option<PathBuf>) -> Result<u8, Failure> {
    let entries = list_protocols();
    let text = match format {
        Format::Json => to_json(&entries),
        Format::Md => markdown::listing(&entries),
    };
    emit(output, &text)?;
    Ok(0)
}

fn run_analysis(args: &RunArgs, verify_claims: bool) -> Result<u8, Failure> {
    let started = Instant::now();
    let (entry, target) = load_target(&args.target)?;
    let params = match &args.params {
        Some(path) => Some(params::read(path).map_err(|e| Failure::new(EXIT_PARAMS, e))?),
        None => None,
    };
    let opts = AnalysisOptions {
        seed: args.seed,
        samples: args.samples as usize,
        params,
        variant: args.variant.game_name(),
        ..AnalysisOptions::default()
    };
    let analysis = if verify_claims {
        verify(&entry, &opts)?
    } else {
        analyze(&entry, &opts)?
    };
    let report = Report {
        tool: "protogame",
        version: env!("CARGO_PKG_VERSION"),
        command: if verify_claims { "verify" } else { "analyze" },
        target,
        timing_ms: started.elapsed().as_millis() as u64,
        report: &analysis,
    };
    let text = match args.format {
        Format::Json => to_json(&report),
        Format::Md => markdown::report(&analysis, report.command, report.version, report.timing_ms),
    };
    emit(&args.output, &text)?;
    Ok(match analysis.all_claims_match {
        Some(false) => EXIT_MISMATCH,
        _ => 0,
    })
}

fn run_export(target: &str, output: &Option<PathBuf>) -> Result<u8, Failure> {
    let (entry, _) = load_target(target)?;
    emit(output, &gamespec::export_entry(&entry))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::List { format, output } => run_list(*format, output),
        Command::Analyze(args) => run_analysis(args, false),
        Command::Verify(args) => run_analysis(args, true),
        Command::Export { target, output } => run_export(target, output),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
