use std::path::{Path, PathBuf};
use std::process::ExitCode;

use addact_core::acceptance::run_all;
use addact_core::algebra::local_view;
use addact_core::exactlin::format_vec;
use addact_core::format::{monomial_to_json, parse_document, parse_spair, spair_to_json, FormatError};
use addact_core::geometry::implicitize;
use addact_core::hirzebruch::{normalized_spair, twisted_spair, HDivisor, HirzebruchError};
use addact_core::isomorphy::{decide_monomial_2gen, ideal_display, IsomorphyError, VerdictKind, DEFAULT_BOUND};
use addact_core::presentation::{verify_allrelations, PresentationError};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

const EXIT_CODES: &str = "Exit codes:
  0  success
  1  a verification failed
  2  usage error
  3  file could not be read
  4  input could not be parsed
  5  mathematical precondition violated (not ample, not local, bound exceeded, ...)";

#[derive(Parser)]
#[command(name = "addact", version, about = "Exact computations for additive actions and local algebras", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the monomial sections of the divisor a E∞ + b F0.
    Sections {
        #[command(flatten)]
        divisor: DivisorArgs,
        #[arg(long)]
        json: bool,
    },
    /// Emit the S-pair attached to an ample divisor.
    Spair {
        #[command(flatten)]
        divisor: DivisorArgs,
        #[arg(long, value_enum, default_value_t = Variant::Normalized)]
        variant: Variant,
        #[arg(long)]
        json: bool,
    },
    /// Invariants of a local algebra given as a JSON document.
    Algebra {
        #[arg(value_enum)]
        query: AlgebraQuery,
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check the relation structure of the twisted algebra on the surface of index 1.
    Relations {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        json: bool,
    },
    /// Forms of one degree vanishing on the orbit of an S-pair document.
    Implicitize {
        file: PathBuf,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether a 2-generated local algebra is monomial.
    Monomiality {
        file: PathBuf,
        /// Largest dimension searched.
        #[arg(long, env = "ADDACT_MAX_DIM", default_value_t = DEFAULT_BOUND)]
        max_dim: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run the reproduction suite.
    Verify {
        /// Run only criteria whose key contains this string, or whose id equals it.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(clap::Args)]
struct DivisorArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, allow_negative_numbers = true)]
    a: i64,
    #[arg(long, allow_negative_numbers = true)]
    b: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Normalized,
    Twisted,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraQuery {
    Hs,
    Socle,
    Gorenstein,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Math(String),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Io { .. } => 3,
            CliError::Parse { .. } => 4,
            CliError::Math(_) => 5,
        }
    }

    fn math(e: impl std::fmt::Display) -> Self {
        CliError::Math(e.to_string())
    }
}

fn format_error(path: &Path, e: FormatError) -> CliError {
    let path = path.display().to_string();
    match e {
        FormatError::Algebra(_) | FormatError::Monomial(_) | FormatError::SPair(_) => CliError::Math(format!("{path}: {e}")),
        other => CliError::Parse { path, message: other.to_string() },
    }
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse { path: path.display().to_string(), message: e.to_string() })
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
}

fn sections(d: &DivisorArgs, json: bool) {
    let divisor = HDivisor::new(d.n, d.a, d.b);
    let basis = divisor.sections();
    if json {
        print_json(&json!({
            "n": d.n, "a": d.a, "b": d.b,
            "sections": basis.monomials(),
            "count": basis.len(),
            "formula": divisor.section_count_formula(),
        }));
        return;
    }
    println!("{:>3} {:>3}  section", "k", "m");
    for (i, (k, m)) in basis.monomials().iter().enumerate() {
        println!("{k:>3} {m:>3}  {}", basis.label(i));
    }
    println!("count {} (closed form {})", basis.len(), divisor.section_count_formula());
}

fn spair(d: &DivisorArgs, variant: Variant, json: bool) -> Result<(), CliError> {
    let p = match variant {
        Variant::Normalized => normalized_spair(d.n, d.a, d.b),
        Variant::Twisted => twisted_spair(d.n, d.a, d.b),
    }
    .map_err(|e: HirzebruchError| CliError::math(e))?;
    let doc = match p.origin() {
        Some(q) => monomial_to_json(q),
        None => spair_to_json(&p),
    };
    if json {
        print_json(&doc);
    } else {
        println!("dimension {}", p.dim());
        println!("hilbert-samuel {:?}", p.view().hilbert_samuel());
        println!("basis {}", p.algebra().basis_labels().join(" "));
        if let Some(q) = p.origin() {
            println!("ideal {}", ideal_display(q));
        }
        for u in p.u_basis() {
            println!("U {}", format_vec(u));
        }
    }
    Ok(())
}

fn algebra(query: AlgebraQuery, file: &Path, json: bool) -> Result<(), CliError> {
    let document = parse_document(&read_json(file)?).map_err(|e| format_error(file, e))?;
    let view = local_view(&document.table()).map_err(CliError::math)?;
    match query {
        AlgebraQuery::Hs => {
            let hs = view.hilbert_samuel();
            if json {
                print_json(&json!({ "hilbert_samuel": hs }));
            } else {
                println!("{}", hs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
            }
        }
        AlgebraQuery::Socle => {
            let socle = view.socle();
            if json {
                let basis: Vec<Vec<String>> = socle.basis().iter().map(|v| v.iter().map(ToString::to_string).collect()).collect();
                print_json(&json!({ "dim": socle.dim(), "basis": basis }));
            } else {
                println!("socle dimension {}", socle.dim());
                for v in socle.basis() {
                    println!("{}", format_vec(v));
                }
            }
        }
        AlgebraQuery::Gorenstein => {
            if json {
                print_json(&json!({ "gorenstein": view.is_gorenstein(), "socle_dim": view.socle().dim() }));
            } else {
                println!("{}", view.is_gorenstein());
            }
        }
    }
    Ok(())
}

fn relations(a: u32, b: u32, json: bool) -> Result<(), CliError> {
    let report = verify_allrelations(a, b).map_err(|e: PresentationError| CliError::math(e))?;
    if json {
        print_json(&serde_json::to_value(&report).expect("report serializes"));
    } else {
        println!("generators: {}", report.generators.iter().map(|g| g.poly.as_str()).collect::<Vec<_>>().join(", "));
        for f in &report.families {
            println!("l={} relations {} expected {}", f.l, f.relations, f.expected);
        }
        println!("quotient dimension {} expected {}", report.quotient_dim, report.expected_dim);
        println!("{}", if report.passed() { "pass" } else { "fail" });
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Verification(report.failures.join("; ")))
    }
}

fn implicitize_cmd(file: &Path, degree: u32, json: bool) -> Result<(), CliError> {
    let pair = parse_spair(&read_json(file)?).map_err(|e| format_error(file, e))?;
    let forms = implicitize(&pair.parametrize_orbit(), degree).map_err(CliError::math)?;
    let shown = forms.display_forms();
    if json {
        print_json(&json!({ "degree": degree, "dim": forms.dim(), "forms": shown }));
    } else {
        for f in shown {
            println!("{f}");
        }
    }
    Ok(())
}

fn monomiality(file: &Path, max_dim: usize, json: bool) -> Result<(), CliError> {
    let document = parse_document(&read_json(file)?).map_err(|e| format_error(file, e))?;
    let view = local_view(&document.table()).map_err(CliError::math)?;
    let verdict = decide_monomial_2gen(&view, max_dim).map_err(|e: IsomorphyError| CliError::math(e))?;
    if json {
        print_json(&verdict.to_json());
        return Ok(());
    }
    let kind = match verdict.kind {
        VerdictKind::Monomial => "monomial",
        VerdictKind::NonMonomial => "non_monomial",
        VerdictKind::Undecided => "undecided",
    };
    println!("{kind}");
    if let (Some(q), Some(c)) = (&verdict.candidate, &verdict.certificate) {
        println!("isomorphic to K[z,w]/{}", ideal_display(q));
        for g in &c.generator_images {
            println!("  {} -> {}", g.label, format_vec(&g.image));
        }
    }
    for r in &verdict.refutations {
        println!("refuted {}: {}", r.candidate, r.reason);
    }
    for note in &verdict.notes {
        println!("note: {note}");
    }
    Ok(())
}

fn verify(filter: Option<&str>, json: bool) -> Result<(), CliError> {
    let results = run_all(filter);
    let passed = results.iter().filter(|r| r.passed).count();
    if json {
        print_json(&json!({ "results": results, "passed": passed, "total": results.len() }));
    } else {
        for r in &results {
            println!("{} {:>2} {:<15} {}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.key, r.detail);
        }
        println!("{passed}/{} criteria passed", results.len());
    }
    if passed == results.len() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("{} criteria failed", results.len() - passed)))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sections { divisor, json } => {
            sections(&divisor, json);
            Ok(())
        }
        Command::Spair { divisor, variant, json } => spair(&divisor, variant, json),
        Command::Algebra { query, file, json } => algebra(query, &file, json),
        Command::Relations { a, b, json } => relations(a, b, json),
        Command::Implicitize { file, degree, json } => implicitize_cmd(&file, degree, json),
        Command::Monomiality { file, max_dim, json } => monomiality(&file, max_dim, json),
        Command::Verify { filter, json } => verify(filter.as_deref(), json),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
