//! Command dispatch. Every command returns its exit code; nothing here
//! calls `process::exit`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use kodaira_core::meyer::bundle_signature;
use kodaira_core::monodromy::{restrict_to_cover, BundleContent, BundleSpec, Signature};
use kodaira_core::obstructions::{verdict, CheckConfig, CoverStrategy, Overall};
use kodaira_core::surface::{parse_generator_name, CyclicCoverSpec};
use kodaira_core::Error;
use serde_json::{json, Value};

use crate::document::{flatten, parse_document, to_string, DocumentError};
use crate::report;

pub mod exit {
    pub const OK: i32 = 0;
    pub const EXCLUDED: i32 = 1;
    pub const SCHEMA: i32 = 2;
    pub const INVARIANT: i32 = 3;
    pub const INCONCLUSIVE: i32 = 4;
    pub const UNSUPPORTED: i32 = 5;
}

#[derive(Debug, Parser)]
#[command(name = "kodaira", version, about = "Surface bundles over surfaces and obstructions to Kodaira fibrations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a bundle document and check the representation.
    Validate(ReadArgs),
    /// Coinvariants of the fiber homology.
    Coinv(ReadArgs),
    /// Run every applicable obstruction.
    Verdict(VerdictArgs),
    /// Restrict to a finite cyclic cover of the base.
    Cover(CoverArgs),
    /// Signature from the Meyer cocycle, checked against the tracked value.
    Signature(ReadArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct ReadArgs {
    pub path: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
}

#[derive(Debug, Args)]
pub struct VerdictArgs {
    #[command(flatten)]
    pub read: ReadArgs,
    /// Holomorphic Euler characteristic of the total space.
    #[arg(long, allow_negative_numbers = true)]
    pub chi: Option<i64>,
    #[arg(long)]
    pub modified_xiao: bool,
    /// Comma-separated cover degrees for the sweep.
    #[arg(long, value_delimiter = ',')]
    pub cover_degrees: Option<Vec<usize>>,
    /// Sweep every surjection up to this many covers.
    #[arg(long)]
    pub exhaustive_cap: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    pub path: PathBuf,
    #[arg(long)]
    pub degree: usize,
    /// Generator sent to 1, by name (a1, b1, ...) or zero-based index.
    #[arg(long, default_value = "a1", conflicts_with = "images")]
    pub twist_generator: String,
    /// Full list of generator residues, comma-separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub images: Option<Vec<i64>>,
    /// Write the document here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

fn core_code(e: &Error) -> i32 {
    match e {
        Error::Node { source, .. } => core_code(source),
        Error::DeclaredBlockUnsupported(_) | Error::GeneratingSetUnsupported(_) => exit::UNSUPPORTED,
        Error::SymplecticViolation { .. }
        | Error::RelatorViolation
        | Error::BaseMismatch { .. }
        | Error::MissingSection => exit::INVARIANT,
        _ => exit::SCHEMA,
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        let code = match &e {
            DocumentError::Json(_) | DocumentError::Schema { .. } => exit::SCHEMA,
            DocumentError::Build(e) => core_code(e),
        };
        Failure::new(code, e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(core_code(&e), e.to_string())
    }
}

fn load(path: &Path) -> Result<BundleSpec, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(exit::SCHEMA, format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_document(&text)?)
}

fn emit(out: &mut dyn Write, format: OutputFormat, text: String, value: Value) -> Result<(), Failure> {
    let body = match format {
        OutputFormat::Text => text,
        OutputFormat::Json => serde_json::to_string_pretty(&value).expect("serializable") + "\n",
    };
    out.write_all(body.as_bytes()).map_err(|e| Failure::new(exit::SCHEMA, format!("write failed: {e}")))
}

fn validate(args: &ReadArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let bundle = load(&args.path)?;
    let text = format!(
        "valid: {} content, fiber genus {}, base genus {}\n",
        report::content_kind(&bundle),
        bundle.fiber_genus(),
        bundle.base_genus()
    );
    let value = json!({
        "valid": true,
        "content": report::content_kind(&bundle),
        "fiber_genus": bundle.fiber_genus(),
        "base_genus": bundle.base_genus(),
    });
    emit(out, args.output, text, value)?;
    Ok(exit::OK)
}

fn coinv(args: &ReadArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let bundle = load(&args.path)?;
    emit(out, args.output, report::coinvariants_text(&bundle), report::coinvariants_json(&bundle))?;
    Ok(exit::OK)
}

fn run_verdict(args: &VerdictArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let bundle = load(&args.read.path)?;
    let mut config = CheckConfig { chi: args.chi, enable_modified_xiao: args.modified_xiao, ..CheckConfig::default() };
    if let Some(d) = &args.cover_degrees {
        config.cover_degrees = d.clone();
    }
    if let Some(cap) = args.exhaustive_cap {
        config.cover_strategy = CoverStrategy::ExhaustiveCapped;
        config.exhaustive_cap = cap;
    }
    config.validate()?;
    let v = verdict(&bundle, &config);
    emit(out, args.read.output, report::verdict_text(&bundle, &v), report::verdict_json(&bundle, &v))?;
    Ok(match v.overall {
        Overall::Excluded => exit::EXCLUDED,
        Overall::Unobstructed if v.has_inconclusive() => exit::INCONCLUSIVE,
        Overall::Unobstructed => exit::OK,
    })
}

fn twist_index(name: &str) -> Option<usize> {
    parse_generator_name(name).or_else(|| name.parse().ok())
}

fn cover(args: &CoverArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let bundle = load(&args.path)?;
    let count = 2 * bundle.base_genus();
    if !matches!(bundle.content(), BundleContent::Explicit(_)) {
        let what = report::content_kind(&bundle);
        return Err(Failure::new(exit::UNSUPPORTED, format!("cover needs explicit monodromy; the document is {what}")));
    }
    let spec = match &args.images {
        Some(images) => CyclicCoverSpec::new(args.degree, images.clone())?,
        None => {
            let index = twist_index(&args.twist_generator).ok_or_else(|| {
                Failure::new(exit::SCHEMA, format!("unknown generator \"{}\"", args.twist_generator))
            })?;
            CyclicCoverSpec::single_generator(args.degree, count, index)?
        }
    };
    if spec.images().len() != count {
        return Err(Failure::new(exit::SCHEMA, format!("{} residues given, base has {count} generators", spec.images().len())));
    }
    let restricted = flatten(&restrict_to_cover(&bundle, &spec)?)?;
    let text = to_string(&restricted);
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::new(exit::SCHEMA, format!("cannot write {}: {e}", path.display())))?,
        None => out.write_all(text.as_bytes()).map_err(|e| Failure::new(exit::SCHEMA, e.to_string()))?,
    }
    Ok(exit::OK)
}

fn signature(args: &ReadArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let bundle = load(&args.path)?;
    let rep = match bundle.content() {
        BundleContent::Explicit(r) => r,
        BundleContent::Declared(_) => {
            return Err(Failure::new(exit::UNSUPPORTED, "signature needs explicit monodromy; the document is declared"))
        }
        BundleContent::GeneratingSet(_) => {
            return Err(Failure::new(
                exit::UNSUPPORTED,
                "signature needs the surface relator; a generating-set representation has none",
            ))
        }
    };
    let computed = bundle_signature(rep)?;
    let tracked = bundle.signature();
    let agrees = match tracked {
        Signature::Exact(t) => Some(t == computed),
        Signature::Range { lo, hi } => Some(lo <= computed && computed <= hi),
        Signature::Unknown => None,
    };
    let mut text = format!("computed signature: {computed}\n");
    text.push_str(&match agrees {
        Some(true) => format!("tracked signature: {tracked} (agrees)\n"),
        Some(false) => format!("tracked signature: {tracked} (disagrees)\n"),
        None => "tracked signature: unknown\n".to_string(),
    });
    let tracked_json = match tracked {
        Signature::Exact(t) => json!(t),
        Signature::Range { lo, hi } => json!([lo, hi]),
        Signature::Unknown => Value::Null,
    };
    let value = json!({ "computed": computed, "tracked": tracked_json, "agrees": agrees });
    emit(out, args.output, text, value)?;
    if agrees == Some(false) {
        let _ = writeln!(err, "error: tracked signature {tracked} differs from computed {computed}");
        return Ok(exit::INVARIANT);
    }
    Ok(exit::OK)
}

/// Runs a parsed command line, writing reports to `out` and diagnostics to
/// `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Validate(a) => validate(a, out),
        Command::Coinv(a) => coinv(a, out),
        Command::Verdict(a) => run_verdict(a, out),
        Command::Cover(a) => cover(a, out),
        Command::Signature(a) => signature(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
