//! Batch front end. Every verb prints one JSON document on stdout; messages
//! go to stderr. Exit codes: 0 success, 1 usage, 2 check failure, 3 schema,
//! 4 budget.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::completions::{restrict_series_to_curve, stabilized_point_value, krull_injectivity_check, Point, PointValue};
use crate::error::Error;
use crate::field::{Field, Fp, Rational};
use crate::forge::{certify_not_polynomial, forge_counterexample, verify_certificate, CertificateDocument, CounterexampleCertificate};
use crate::lines::{dichotomy_check, finite_field_evasion_series, restrict_to_line, DichotomyVerdict, LineSample};
use crate::completions::TruncatedPointSeries;
use crate::poly::Poly2;
use crate::primes::{enumerate_primes, EnumerationBudget, PrimeRecord, PrimeShape, PrimeSource};
use crate::projlim::{residues_from_series, series_from_residues, ResidueSystem, SeriesAdele};
use crate::tower::{build_tower, schedule_table, verify_filtration_gap, GapStatus, IdealTower, TowerRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK: i32 = 2;
pub const EXIT_SCHEMA: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

/// Field tags the command line accepts.
pub const FIELD_TAGS: &[&str] = &[
    "f2", "f3", "f5", "f7", "f11", "f13", "f17", "f19", "f23", "f29", "f31", "f101", "f65521", "f2147483647", "q",
];

macro_rules! with_field {
    ($tag:expr, $k:ident => $body:expr) => {
        match $tag {
            "f2" => { type $k = Fp<2>; $body }
            "f3" => { type $k = Fp<3>; $body }
            "f5" => { type $k = Fp<5>; $body }
            "f7" => { type $k = Fp<7>; $body }
            "f11" => { type $k = Fp<11>; $body }
            "f13" => { type $k = Fp<13>; $body }
            "f17" => { type $k = Fp<17>; $body }
            "f19" => { type $k = Fp<19>; $body }
            "f23" => { type $k = Fp<23>; $body }
            "f29" => { type $k = Fp<29>; $body }
            "f31" => { type $k = Fp<31>; $body }
            "f101" => { type $k = Fp<101>; $body }
            "f65521" => { type $k = Fp<65521>; $body }
            "f2147483647" => { type $k = Fp<2147483647>; $body }
            "q" => { type $k = Rational; $body }
            other => Err(CliError::Schema(format!("unknown field tag {other:?}"))),
        }
    };
}

#[derive(Parser, Debug)]
#[command(name = "adelic", version, about = "Certified adelic counterexample on the affine plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate nonzero primes.
    Primes(PrimesArgs),
    /// Build the ideal tower.
    Tower(TowerArgs),
    /// Run the recursive construction and emit a certificate.
    Forge(ForgeArgs),
    /// Re-check a certificate.
    Verify(VerifyArgs),
    /// Residues of a certificate's series modulo the tower.
    Residues(CertArgs),
    /// Telescoping series from a residue system.
    SeriesFromResidues(SeriesFromResiduesArgs),
    /// Series to residues and back.
    Roundtrip(CertArgs),
    /// Restrict a certified series to a tower curve.
    Restrict(RestrictArgs),
    /// Value of a certified series at a closed point.
    Value(ValueArgs),
    /// Line restrictions and the diagonal dichotomy.
    Lines(LinesArgs),
    /// Filtration gap and Krull injectivity checks.
    GapCheck(GapCheckArgs),
}

#[derive(Args, Debug)]
struct SourceArgs {
    #[arg(long)]
    field: String,
    /// JSON array of {index, shape, generators}.
    #[arg(long, value_name = "FILE", conflicts_with = "rational_family")]
    primes: Option<PathBuf>,
    #[arg(long)]
    rational_family: bool,
}

#[derive(Args, Debug)]
struct PrimesArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    count: usize,
    #[arg(long)]
    max_degree: Option<u32>,
}

#[derive(Args, Debug)]
struct TowerArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(short = 'n')]
    n: usize,
}

#[derive(Args, Debug)]
struct ForgeArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(short = 'n')]
    n: usize,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    cert: PathBuf,
    #[arg(long = "not-poly", value_name = "D")]
    not_poly: Option<u32>,
}

#[derive(Args, Debug)]
struct CertArgs {
    #[arg(long)]
    cert: PathBuf,
}

#[derive(Args, Debug)]
struct SeriesFromResiduesArgs {
    #[arg(long)]
    residues: PathBuf,
    /// JSON array of lifts h_1..h_N.
    #[arg(long)]
    lifts: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RestrictArgs {
    #[arg(long)]
    cert: PathBuf,
    #[arg(long)]
    curve: String,
    #[arg(long)]
    precision: u32,
}

#[derive(Args, Debug)]
struct ValueArgs {
    #[arg(long)]
    cert: PathBuf,
    /// Rational point "(a,b)".
    #[arg(long, conflicts_with = "maximal", required_unless_present = "maximal")]
    point: Option<String>,
    /// Generators "f(u), g(u,v)" of a maximal ideal.
    #[arg(long)]
    maximal: Option<String>,
    #[arg(long)]
    precision: u32,
}

#[derive(Args, Debug)]
struct LinesArgs {
    /// JSON {field, precision, terms} of a truncation at the origin.
    #[arg(long, conflicts_with = "evasion", required_unless_present = "evasion")]
    input: Option<PathBuf>,
    /// Use the finite-field evasion series of this precision.
    #[arg(long, value_name = "PRECISION", requires = "field")]
    evasion: Option<u32>,
    #[arg(long)]
    field: Option<String>,
    /// JSON array of {lambda, bound}.
    #[arg(long)]
    lambdas: PathBuf,
}

#[derive(Args, Debug)]
struct GapCheckArgs {
    #[arg(long)]
    field: String,
    #[arg(long, required_unless_present = "krull")]
    level: Option<u32>,
    #[arg(long, value_name = "D")]
    krull: Option<u32>,
}

/// Residue system document.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidueDocument {
    pub field: String,
    pub tower: TowerRecord,
    pub residues: Vec<String>,
}

/// Series document.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDocument {
    pub field: String,
    pub tower: TowerRecord,
    pub terms: Vec<String>,
    pub schedule: Vec<Vec<u32>>,
}

/// Truncation at the origin for `lines`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationDocument {
    pub field: String,
    pub precision: u32,
    pub terms: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSampleRecord {
    pub lambda: String,
    pub bound: u32,
}

enum CliError {
    Usage(String),
    Check(Value, String),
    Schema(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type CmdResult = Result<Value, CliError>;

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Schema(_) | Error::Parse(_) => EXIT_SCHEMA,
        Error::BudgetExceeded(_) => EXIT_BUDGET,
        Error::InvalidSeries(_)
        | Error::BadLift { .. }
        | Error::InsufficientCertificate(_)
        | Error::InsufficientPrecision(_)
        | Error::PrefixTooShort(_) => EXIT_CHECK,
        _ => EXIT_USAGE,
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let emit = |out: &mut dyn Write, v: &Value| {
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json values serialize"));
    };
    match dispatch(cli.command) {
        Ok(v) => {
            emit(out, &v);
            EXIT_OK
        }
        Err(CliError::Check(v, msg)) => {
            emit(out, &v);
            let _ = writeln!(err, "check failed: {msg}");
            EXIT_CHECK
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "usage error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Schema(msg)) => {
            let _ = writeln!(err, "schema error: {msg}");
            EXIT_SCHEMA
        }
        Err(CliError::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main_entry() -> i32 {
    run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn dispatch(command: Command) -> CmdResult {
    match command {
        Command::Primes(a) => with_field!(a.source.field.as_str(), K => cmd_primes::<K>(&a)),
        Command::Tower(a) => with_field!(a.source.field.as_str(), K => cmd_tower::<K>(&a)),
        Command::Forge(a) => with_field!(a.source.field.as_str(), K => cmd_forge::<K>(&a)),
        Command::Verify(a) => {
            let doc = read_certificate(&a.cert)?;
            with_field!(doc.field.as_str(), K => cmd_verify::<K>(&doc, a.not_poly))
        }
        Command::Residues(a) => {
            let doc = read_certificate(&a.cert)?;
            with_field!(doc.field.as_str(), K => cmd_residues::<K>(&doc))
        }
        Command::SeriesFromResidues(a) => {
            let doc: ResidueDocument = read_json(&a.residues)?;
            let lifts: Option<Vec<String>> = a.lifts.as_deref().map(read_json).transpose()?;
            with_field!(doc.field.as_str(), K => cmd_series_from_residues::<K>(&doc, lifts.as_deref()))
        }
        Command::Roundtrip(a) => {
            let doc = read_certificate(&a.cert)?;
            with_field!(doc.field.as_str(), K => cmd_roundtrip::<K>(&doc))
        }
        Command::Restrict(a) => {
            let doc = read_certificate(&a.cert)?;
            with_field!(doc.field.as_str(), K => cmd_restrict::<K>(&doc, &a.curve, a.precision))
        }
        Command::Value(a) => {
            let doc = read_certificate(&a.cert)?;
            with_field!(doc.field.as_str(), K => cmd_value::<K>(&doc, &a))
        }
        Command::Lines(a) => {
            let samples: Vec<LineSampleRecord> = read_json(&a.lambdas)?;
            match (&a.input, a.evasion) {
                (Some(path), _) => {
                    let doc: TruncationDocument = read_json(path)?;
                    if a.field.as_ref().is_some_and(|f| *f != doc.field) {
                        return Err(CliError::Usage("--field disagrees with the input document".into()));
                    }
                    with_field!(doc.field.as_str(), K => {
                        let t = TruncatedPointSeries::new(Point::origin(), doc.precision, parse_poly::<K>(&doc.terms)?);
                        cmd_lines::<K>(&t, &samples)
                    })
                }
                (None, Some(precision)) => {
                    let field = a.field.clone().expect("clap requires --field");
                    with_field!(field.as_str(), K => {
                        let t = finite_field_evasion_series::<K>(precision)?;
                        cmd_lines::<K>(&t, &samples)
                    })
                }
                (None, None) => Err(CliError::Usage("lines needs --input or --evasion".into())),
            }
        }
        Command::GapCheck(a) => with_field!(a.field.as_str(), K => cmd_gap_check::<K>(&a)),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read_text(path)?).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

fn read_certificate(path: &Path) -> Result<CertificateDocument, CliError> {
    read_json(path)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("outputs serialize")
}

fn parse_poly<K: Field>(s: &str) -> Result<Poly2<K>, CliError> {
    Poly2::parse_canonical(s).map_err(|e| CliError::Schema(e.to_string()))
}

/// A field element written as a constant polynomial ("3", "-1/2").
fn parse_scalar<K: Field>(s: &str) -> Result<K, CliError> {
    let p = parse_poly::<K>(s)?;
    if !p.is_constant() {
        return Err(CliError::Schema(format!("{s:?} is not a field element")));
    }
    Ok(p.constant_term())
}

fn prime_source<K: Field>(a: &SourceArgs) -> Result<PrimeSource<K>, CliError> {
    if let Some(path) = &a.primes {
        let records: Vec<PrimeRecord> = read_json(path)?;
        let shapes = records
            .iter()
            .map(|r| PrimeShape::from_texts(&r.shape, &r.generators))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PrimeSource::Supplied(shapes))
    } else if a.rational_family {
        Ok(PrimeSource::RationalFamily)
    } else {
        Ok(PrimeSource::Exhaustive)
    }
}

fn certificate<K: Field>(doc: &CertificateDocument) -> Result<CounterexampleCertificate<K>, CliError> {
    CounterexampleCertificate::from_document(doc).map_err(|e| match e {
        Error::Schema(m) => CliError::Schema(m),
        Error::Parse(p) => CliError::Schema(p.to_string()),
        other => CliError::Lib(other),
    })
}

/// A certificate whose checks all pass; anything else is a check failure.
fn verified<K: Field>(doc: &CertificateDocument) -> Result<CounterexampleCertificate<K>, CliError> {
    let cert = certificate::<K>(doc)?;
    let report = verify_certificate(&cert)?;
    if !report.passed {
        let failures = report.failures();
        return Err(CliError::Check(json!({ "passed": false, "failures": failures }), failures.join(", ")));
    }
    Ok(cert)
}

fn cmd_primes<K: Field>(a: &PrimesArgs) -> CmdResult {
    let source = prime_source::<K>(&a.source)?;
    let budget = EnumerationBudget::new(a.count, a.max_degree.unwrap_or(u32::MAX))?;
    let primes = enumerate_primes(&source, budget)?;
    Ok(to_value(&primes.iter().map(|p| p.record()).collect::<Vec<_>>()))
}

fn cmd_tower<K: Field>(a: &TowerArgs) -> CmdResult {
    let source = prime_source::<K>(&a.source)?;
    let primes = enumerate_primes(&source, EnumerationBudget::new(a.n.max(1), u32::MAX)?)?;
    let tower = build_tower(&primes, a.n)?;
    let r = tower.record();
    Ok(json!({
        "field": K::tag(),
        "ordering": source.ordering_id(),
        "primes": r.primes,
        "ideals": r.ideals,
        "witnesses": r.witnesses,
        "schedule": schedule_table(a.n),
    }))
}

fn cmd_forge<K: Field>(a: &ForgeArgs) -> CmdResult {
    let source = prime_source::<K>(&a.source)?;
    let cert = forge_counterexample(&source, a.n)?;
    let doc = cert.to_document();
    let summary = json!({
        "field": doc.field,
        "n": a.n,
        "terms": doc.terms,
        "l_of_n": doc.l_of_n,
        "passed": doc.checks.passed,
    });
    let value = match &a.output {
        Some(path) => {
            std::fs::write(path, doc.to_json()).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            let mut s = summary;
            s["output"] = json!(path.display().to_string());
            s
        }
        None => to_value(&doc),
    };
    if !doc.checks.passed {
        return Err(CliError::Check(value, "forged certificate fails its own checks".into()));
    }
    Ok(value)
}

fn cmd_verify<K: Field>(doc: &CertificateDocument, not_poly: Option<u32>) -> CmdResult {
    let cert = certificate::<K>(doc)?;
    let report = verify_certificate(&cert)?;
    let failures = report.failures();
    let mut out = json!({
        "field": doc.field,
        "n": cert.len(),
        "passed": report.passed,
        "failures": failures,
        "report": to_value(&report),
    });
    if !report.passed {
        return Err(CliError::Check(out, failures.join(", ")));
    }
    if let Some(d) = not_poly {
        match certify_not_polynomial(&cert, d) {
            Ok(proof) => out["not_polynomial"] = to_value(&proof),
            Err(e) => {
                out["not_polynomial"] = json!({ "degree_bound": d, "error": e.to_string() });
                return Err(CliError::Check(out, e.to_string()));
            }
        }
    }
    Ok(out)
}

fn residue_document<K: Field>(system: &ResidueSystem<K>) -> ResidueDocument {
    ResidueDocument {
        field: K::tag(),
        tower: system.tower().record(),
        residues: system.residues().iter().map(Poly2::to_canonical).collect(),
    }
}

fn series_document<K: Field>(series: &SeriesAdele<K>) -> SeriesDocument {
    SeriesDocument {
        field: K::tag(),
        tower: series.tower().record(),
        terms: series.terms().iter().map(Poly2::to_canonical).collect(),
        schedule: series.schedule().to_vec(),
    }
}

fn cmd_residues<K: Field>(doc: &CertificateDocument) -> CmdResult {
    let cert = verified::<K>(doc)?;
    let system = residues_from_series(&cert.series()?)?;
    Ok(to_value(&residue_document(&system)))
}

fn tower_from_record<K: Field>(r: &TowerRecord) -> Result<IdealTower<K>, CliError> {
    let tower = IdealTower::from_record(r).map_err(|e| CliError::Schema(e.to_string()))?;
    tower
        .check_invariants()
        .map_err(|msg| CliError::Check(json!({ "passed": false, "failures": [msg.clone()] }), msg))?;
    Ok(tower)
}

fn cmd_series_from_residues<K: Field>(doc: &ResidueDocument, lifts: Option<&[String]>) -> CmdResult {
    if doc.field != K::tag() {
        return Err(CliError::Schema("field mismatch".into()));
    }
    let tower = tower_from_record::<K>(&doc.tower)?;
    let residues = doc.residues.iter().map(|s| parse_poly::<K>(s)).collect::<Result<Vec<_>, _>>()?;
    let system = ResidueSystem::new(tower, residues).map_err(|e| CliError::Schema(e.to_string()))?;
    let lifts = lifts
        .map(|l| l.iter().map(|s| parse_poly::<K>(s)).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    let series = series_from_residues(&system, lifts.as_deref())?;
    Ok(to_value(&series_document(&series)))
}

fn cmd_roundtrip<K: Field>(doc: &CertificateDocument) -> CmdResult {
    let cert = verified::<K>(doc)?;
    let series = cert.series()?;
    let system = residues_from_series(&series)?;
    let lifts: Vec<Poly2<K>> = (1..=series.len()).map(|n| series.partial_sum(n)).collect();
    let back = series_from_residues(&system, Some(&lifts))?;
    let again = residues_from_series(&back)?;
    let identical = again.residues() == system.residues() && back.terms() == series.terms();
    let telescoping = (2..=series.len()).all(|n| series.tower().ideal(n - 1).contains(&series.terms()[n - 1]));
    let out = json!({
        "field": K::tag(),
        "n": series.len(),
        "identical": identical,
        "telescoping": telescoping,
        "residues": residue_document(&system).residues,
    });
    if identical && telescoping {
        Ok(out)
    } else {
        Err(CliError::Check(out, "roundtrip identity does not hold".into()))
    }
}

fn cmd_restrict<K: Field>(doc: &CertificateDocument, curve: &str, precision: u32) -> CmdResult {
    let cert = verified::<K>(doc)?;
    let c = Poly2::<K>::parse(curve).map_err(|e| CliError::Schema(e.to_string()))?;
    let r = restrict_series_to_curve(&cert.series()?, &c, precision)?;
    Ok(json!({
        "field": K::tag(),
        "curve": r.residue.curve().to_canonical(),
        "precision": precision,
        "numerator": r.residue.numerator().to_canonical(),
        "denominator": r.residue.denominator().to_canonical(),
        "polynomial": r.residue.is_polynomial(),
        "tower_index": r.tower_index,
        "stabilization_index": r.stabilization_index,
    }))
}

fn cmd_value<K: Field>(doc: &CertificateDocument, a: &ValueArgs) -> CmdResult {
    let cert = verified::<K>(doc)?;
    let maximal = match (&a.point, &a.maximal) {
        (Some(p), _) => Point::<K>::parse(p)?.maximal_ideal(),
        (None, Some(m)) => {
            let gens: Vec<String> = m.split(',').map(|s| s.trim().to_string()).collect();
            PrimeShape::from_texts("maximal", &gens)?
        }
        (None, None) => return Err(CliError::Usage("value needs --point or --maximal".into())),
    };
    let s = stabilized_point_value(&cert.series()?, &maximal, a.precision)?;
    let (kind, center, value) = match &s.value {
        PointValue::Taylor(t) => ("taylor", Some(t.center().to_string()), t.terms().to_canonical()),
        PointValue::Residue { value, .. } => ("residue", None, value.to_canonical()),
    };
    Ok(json!({
        "field": K::tag(),
        "maximal": maximal.generator_texts(),
        "point": center,
        "precision": a.precision,
        "kind": kind,
        "value": value,
        "controlling_prime": s.controlling_prime,
        "stabilization_index": s.stabilization_index,
    }))
}

fn cmd_lines<K: Field>(t: &TruncatedPointSeries<K>, records: &[LineSampleRecord]) -> CmdResult {
    let samples = records
        .iter()
        .map(|r| Ok(LineSample { lambda: parse_scalar::<K>(&r.lambda)?, bound: r.bound }))
        .collect::<Result<Vec<_>, CliError>>()?;
    let report = dichotomy_check(t, &samples)?;
    let restrictions = samples
        .iter()
        .map(|s| {
            let r = restrict_to_line(t, &s.lambda)?;
            Ok(json!({ "lambda": s.lambda.to_string(), "series": r.as_poly().display_in("v") }))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let out = json!({
        "field": K::tag(),
        "precision": t.precision(),
        "terms": t.terms().to_canonical(),
        "verdict": report.verdict,
        "forced_from": report.forced_from,
        "diagonals": report.diagonals,
        "restrictions": restrictions,
    });
    if report.verdict == DichotomyVerdict::Contradiction {
        return Err(CliError::Check(out, "a sampled line violates its degree bound".into()));
    }
    Ok(out)
}

fn cmd_gap_check<K: Field>(a: &GapCheckArgs) -> CmdResult {
    let gap = a.level.map(verify_filtration_gap::<K>).transpose()?;
    let krull = a.krull.map(krull_injectivity_check::<K>).transpose()?;
    let failed = gap.as_ref().is_some_and(|g| g.status == GapStatus::Failed) || krull.as_ref().is_some_and(|k| !k.passed);
    let out = json!({ "field": K::tag(), "gap": gap, "krull": krull, "passed": !failed });
    if failed {
        return Err(CliError::Check(out, "a gap or injectivity check failed".into()));
    }
    Ok(out)
}

fn tower_and_polys<K: Field>(tower: &TowerRecord, polys: &[String]) -> Result<(), CliError> {
    IdealTower::<K>::from_record(tower).map_err(|e| CliError::Schema(e.to_string()))?;
    polys.iter().try_for_each(|s| parse_poly::<K>(s).map(|_| ()))
}

/// Outcome of [`schema_validate`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SchemaVerdict {
    pub valid: bool,
    /// `certificate`, `residues`, `series` or `truncation`.
    pub kind: Option<String>,
    pub error: Option<String>,
}

/// Validates a certificate, residue-system, series or truncation document:
/// field lists must match exactly and every polynomial must be canonical.
pub fn schema_validate(document: &str) -> SchemaVerdict {
    let invalid = |kind: Option<&str>, e: String| SchemaVerdict { valid: false, kind: kind.map(str::to_string), error: Some(e) };
    let value: Value = match serde_json::from_str(document) {
        Ok(v) => v,
        Err(e) => return invalid(None, e.to_string()),
    };
    let has = |k: &str| value.get(k).is_some();
    let kind = if has("checks") || has("l_of_n") {
        "certificate"
    } else if has("residues") {
        "residues"
    } else if has("schedule") {
        "series"
    } else if has("precision") {
        "truncation"
    } else {
        return invalid(None, "unrecognized document".into());
    };
    let result: Result<(), String> = (|| {
        let field = value.get("field").and_then(Value::as_str).ok_or("missing field `field`")?.to_string();
        let check = |r: Result<(), CliError>| {
            r.map_err(|e| match e {
                CliError::Schema(m) | CliError::Usage(m) | CliError::Check(_, m) => m,
                CliError::Lib(e) => e.to_string(),
            })
        };
        match kind {
            "certificate" => {
                let doc: CertificateDocument = serde_json::from_value(value.clone()).map_err(|e| e.to_string())?;
                check(with_field!(field.as_str(), K => certificate::<K>(&doc).map(|_| ())))
            }
            "residues" => {
                let doc: ResidueDocument = serde_json::from_value(value.clone()).map_err(|e| e.to_string())?;
                check(with_field!(field.as_str(), K => tower_and_polys::<K>(&doc.tower, &doc.residues)))
            }
            "series" => {
                let doc: SeriesDocument = serde_json::from_value(value.clone()).map_err(|e| e.to_string())?;
                check(with_field!(field.as_str(), K => tower_and_polys::<K>(&doc.tower, &doc.terms)))
            }
            _ => {
                let doc: TruncationDocument = serde_json::from_value(value.clone()).map_err(|e| e.to_string())?;
                check(with_field!(field.as_str(), K => parse_poly::<K>(&doc.terms).map(|_| ())))
            }
        }
    })();
    match result {
        Ok(()) => SchemaVerdict { valid: true, kind: Some(kind.into()), error: None },
        Err(e) => invalid(Some(kind), e),
    }
}
