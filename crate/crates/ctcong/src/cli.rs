//! Command-line front end: `sum`, `verify`, `discover`, and `selftest`
//! subcommands over the library, with deterministic text/JSON reports and a
//! fixed exit-code contract (0 ok; 1 failed rows; 2 unusable input; 3
//! method not applicable; 4 invalid prime).

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::discover::{classify, CaseValue, DiscoverError, DiscoverOutcome, DEFAULT_CANDIDATE_MODULI};
use crate::engine::{
    self, fast_partial_sum, predicted_residue, ClosedFormFamily, EngineError,
};
use crate::numeric::primes_in;
use crate::oeis::{lookup, OeisMode};
use crate::parser::parse_poly;
use crate::report::{
    render_text, ClaimRecord, CriterionRecord, OeisAnnotation, Report, ResultRecord, VerifyRow,
};
use crate::selftest;
use crate::sequences::{find_spec, registry, SequenceSpec};

const EXIT_OK: i32 = 0;
const EXIT_FAILED_ROWS: i32 = 1;
const EXIT_BAD_INPUT: i32 = 2;
const EXIT_NOT_APPLICABLE: i32 = 3;
const EXIT_BAD_PRIME: i32 = 4;

#[derive(Parser)]
#[command(
    name = "ctcong",
    version,
    about = "Verify and discover congruences for partial sums of constant-term sequences modulo primes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print one boxed partial sum as a symmetric residue
    Sum(SumArgs),
    /// Check engine, oracle, and prediction across a grid of (r, p)
    Verify(VerifyArgs),
    /// Scan primes and report the congruence pattern the data supports
    Discover(DiscoverArgs),
    /// Run the built-in acceptance suite
    Selftest,
}

#[derive(Args)]
struct SumArgs {
    /// Built-in sequence id (see `verify --seq all` for the list)
    #[arg(long, conflicts_with = "poly")]
    seq: Option<String>,
    /// Laurent-polynomial base, e.g. "2+x+1/x"
    #[arg(long)]
    poly: Option<String>,
    /// Multiplier polynomial inside the constant term (requires --poly)
    #[arg(long, requires = "poly")]
    mult: Option<String>,
    /// Comma-separated index multipliers, one per index
    #[arg(long, default_value = "1")]
    r: String,
    /// Prime base of the modulus
    #[arg(long)]
    p: u64,
    /// Modulus exponent K: the sum is reduced mod p^K
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
    power: u8,
}

#[derive(Args)]
struct VerifyArgs {
    /// Built-in sequence id, or "all"
    #[arg(long)]
    seq: String,
    /// Largest prime scanned (default by index count: 100, 50, 30, 20)
    #[arg(long)]
    pmax: Option<u64>,
    /// Largest index multiplier tried in each index position
    #[arg(long, default_value_t = 1)]
    rmax: u64,
    /// Verify congruences up to modulus p^K
    #[arg(long = "super", default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
    super_k: u8,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct DiscoverArgs {
    /// Built-in sequence id
    #[arg(long, conflicts_with = "poly")]
    seq: Option<String>,
    /// Laurent-polynomial base, e.g. "1+x+1/x"
    #[arg(long)]
    poly: Option<String>,
    /// Multiplier polynomial inside the constant term (requires --poly)
    #[arg(long, requires = "poly")]
    mult: Option<String>,
    /// Comma-separated index multipliers (default: all ones)
    #[arg(long)]
    r: Option<String>,
    /// Largest prime scanned (default by index count: 100, 50, 30, 20)
    #[arg(long)]
    pmax: Option<u64>,
    /// Annotate family-valued cases with OEIS lookups
    #[arg(long, value_enum)]
    oeis: Option<OeisArg>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OeisArg {
    Offline,
    Online,
}

/// A handled failure: exit code plus a one-line JSON diagnostic for stderr.
struct CliFailure {
    code: i32,
    kind: &'static str,
    message: String,
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    error: DiagnosticBody<'a>,
}

#[derive(Serialize)]
struct DiagnosticBody<'a> {
    kind: &'a str,
    message: &'a str,
    code: i32,
}

impl CliFailure {
    fn new(code: i32, kind: &'static str, message: impl ToString) -> CliFailure {
        CliFailure {
            code,
            kind,
            message: message.to_string(),
        }
    }

    fn usage(message: impl ToString) -> CliFailure {
        CliFailure::new(EXIT_BAD_INPUT, "invalid_input", message)
    }

    fn report(&self) -> i32 {
        let diag = Diagnostic {
            error: DiagnosticBody {
                kind: self.kind,
                message: &self.message,
                code: self.code,
            },
        };
        eprintln!("{}", serde_json::to_string(&diag).expect("diagnostic"));
        self.code
    }
}

fn engine_failure(e: EngineError) -> CliFailure {
    match &e {
        EngineError::NotPrime { .. } => CliFailure::new(EXIT_BAD_PRIME, "not_prime", e),
        EngineError::PrimeTooSmall { .. } => {
            CliFailure::new(EXIT_BAD_PRIME, "prime_too_small", e)
        }
        EngineError::NonUnitConstantTerm { .. } => {
            CliFailure::new(EXIT_NOT_APPLICABLE, "non_unit_constant_term", e)
        }
        _ => CliFailure::usage(e),
    }
}

fn discover_failure(e: DiscoverError) -> CliFailure {
    match e {
        DiscoverError::Engine(inner) => engine_failure(inner),
        other => CliFailure::usage(other),
    }
}

fn parse_r_list(text: &str) -> Result<Vec<u64>, CliFailure> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| CliFailure::usage(format!("invalid index multiplier {part:?}")))
        })
        .collect()
}

fn resolve_spec(
    seq: &Option<String>,
    poly: &Option<String>,
    mult: &Option<String>,
) -> Result<SequenceSpec, CliFailure> {
    match (seq, poly) {
        (Some(id), None) => find_spec(id).ok_or_else(|| {
            let known: Vec<&str> = registry().iter().map(|s| s.id()).collect();
            CliFailure::usage(format!(
                "unknown sequence id {id:?}; known ids: {}",
                known.join(", ")
            ))
        }),
        (None, Some(expr)) => {
            let base = parse_poly(expr)
                .map_err(|e| CliFailure::new(EXIT_BAD_INPUT, "parse_error", e))?;
            let multiplier = mult
                .as_deref()
                .map(parse_poly)
                .transpose()
                .map_err(|e| CliFailure::new(EXIT_BAD_INPUT, "parse_error", e))?;
            Ok(SequenceSpec::custom(base, multiplier))
        }
        (None, None) => Err(CliFailure::usage("one of --seq or --poly is required")),
        (Some(_), Some(_)) => Err(CliFailure::usage("--seq and --poly are mutually exclusive")),
    }
}

fn default_pmax(arity: usize) -> u64 {
    match arity {
        1 => 100,
        2 => 50,
        3 => 30,
        _ => 20,
    }
}

fn print_report(report: &Report, format: Format) {
    match format {
        Format::Text => print!("{}", render_text(report)),
        Format::Json => println!("{}", report.to_json()),
    }
}

fn cmd_sum(args: &SumArgs) -> Result<i32, CliFailure> {
    let spec = resolve_spec(&args.seq, &args.poly, &args.mult)?;
    let r = parse_r_list(&args.r)?;
    engine::validate(&spec, &r, args.p).map_err(engine_failure)?;
    let value = if args.power == 1 {
        fast_partial_sum(&spec, &r, args.p)
            .map_err(engine_failure)?
            .value()
    } else {
        let bounds: Vec<u64> = r.iter().map(|&ri| ri * args.p).collect();
        spec.partial_sum_exact(&bounds, args.p.pow(u32::from(args.power)))
            .value()
    };
    println!("{value}");
    Ok(EXIT_OK)
}

/// All index-multiplier tuples with entries in 1..=rmax, ascending
/// lexicographically.
fn r_tuples(arity: usize, rmax: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u64>| {
                (1..=rmax).map(move |ri| {
                    let mut next = prefix.clone();
                    next.push(ri);
                    next
                })
            })
            .collect();
    }
    out
}

/// The verification rows for one (spec, r, p) cell: the mod-p three-way
/// comparison, then (when a prediction exists) one oracle-vs-lifted row per
/// extra power.
fn verify_cell(
    spec: &SequenceSpec,
    r: &[u64],
    p: u64,
    super_k: u8,
) -> Result<Vec<VerifyRow>, CliFailure> {
    let bounds: Vec<u64> = r.iter().map(|&ri| ri * p).collect();
    let engine_value = fast_partial_sum(spec, r, p).map_err(engine_failure)?;
    let oracle = spec.partial_sum_exact(&bounds, p);
    let mut rows = Vec::new();
    match predicted_residue(spec, r, p) {
        Ok(predicted) => {
            rows.push(VerifyRow {
                spec: spec.id().to_owned(),
                r: r.to_vec(),
                p,
                k: 1,
                engine: Some(engine_value.value()),
                oracle: oracle.value(),
                predicted: Some(predicted.residue().value()),
                pass: engine_value == oracle && predicted.matches(oracle),
            });
            for k in 2..=super_k {
                let observed = spec.partial_sum_exact(&bounds, p.pow(u32::from(k)));
                rows.push(VerifyRow {
                    spec: spec.id().to_owned(),
                    r: r.to_vec(),
                    p,
                    k,
                    engine: None,
                    oracle: observed.value(),
                    predicted: Some(predicted.lifted(k).value()),
                    pass: predicted.matches(observed),
                });
            }
        }
        Err(EngineError::UnknownPattern { .. }) => {
            // No case table: the engine-vs-oracle agreement is the whole
            // check, and there is nothing to lift to higher powers.
            rows.push(VerifyRow {
                spec: spec.id().to_owned(),
                r: r.to_vec(),
                p,
                k: 1,
                engine: Some(engine_value.value()),
                oracle: oracle.value(),
                predicted: None,
                pass: engine_value == oracle,
            });
        }
        Err(other) => return Err(engine_failure(other)),
    }
    Ok(rows)
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32, CliFailure> {
    if !(1..=8).contains(&args.rmax) {
        return Err(CliFailure::usage("--rmax must be between 1 and 8"));
    }
    let specs: Vec<SequenceSpec> = if args.seq == "all" {
        registry().to_vec()
    } else {
        vec![resolve_spec(&Some(args.seq.clone()), &None, &None)?]
    };

    let mut cells = Vec::new();
    for spec in &specs {
        let pmax = args.pmax.unwrap_or_else(|| default_pmax(spec.arity()));
        for r in r_tuples(spec.arity(), args.rmax) {
            for p in primes_in(spec.min_prime(), pmax) {
                cells.push((spec.clone(), r.clone(), p));
            }
        }
    }
    let row_groups: Result<Vec<Vec<VerifyRow>>, CliFailure> = cells
        .par_iter()
        .map(|(spec, r, p)| verify_cell(spec, r, *p, args.super_k))
        .collect();
    let mut rows: Vec<VerifyRow> = row_groups?.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        (&a.spec, &a.r, a.p, a.k).cmp(&(&b.spec, &b.r, b.p, b.k))
    });

    let command = format!(
        "verify --seq {} --rmax {} --super {}{}",
        args.seq,
        args.rmax,
        args.super_k,
        args.pmax
            .map_or_else(String::new, |pm| format!(" --pmax {pm}"))
    );
    let report = Report::new(command, rows.into_iter().map(ResultRecord::Row).collect());
    print_report(&report, args.format);
    Ok(if report.all_pass() {
        EXIT_OK
    } else {
        EXIT_FAILED_ROWS
    })
}

/// The same family with its leading index replaced, for generating the
/// annotation term list f(1), f(2), ….
fn with_leading_index(family: &ClosedFormFamily, index: u64) -> ClosedFormFamily {
    match family {
        ClosedFormFamily::Alpha { .. } => ClosedFormFamily::Alpha { r: index },
        ClosedFormFamily::Beta { .. } => ClosedFormFamily::Beta { r: index },
        ClosedFormFamily::Gamma { .. } => ClosedFormFamily::Gamma { r: index },
        ClosedFormFamily::Delta { .. } => ClosedFormFamily::Delta { r: index },
        ClosedFormFamily::Epsilon { s, .. } => ClosedFormFamily::Epsilon { r: index, s: *s },
        ClosedFormFamily::Kappa { rs } => {
            let mut rs = rs.clone();
            rs[0] = index;
            ClosedFormFamily::Kappa { rs }
        }
    }
}

/// OEIS annotations for every family-valued case of a claim: the family's
/// values at leading index 1..12 looked up as a sequence.
fn annotate_families(outcome: &DiscoverOutcome, mode: OeisMode) -> Vec<OeisAnnotation> {
    let DiscoverOutcome::Claim(claim) = outcome else {
        return Vec::new();
    };
    claim
        .cases
        .iter()
        .filter_map(|(&class, value)| {
            let CaseValue::Family { family, .. } = value else {
                return None;
            };
            let terms: Vec<BigInt> = (1..=12)
                .map(|i| with_leading_index(family, i).closed_form())
                .collect();
            let matched = lookup(&terms, mode).expect("12 terms is enough");
            Some(OeisAnnotation {
                class,
                family: family.to_string(),
                terms: terms.iter().map(|t| t.to_string()).collect(),
                ids: matched.ids,
                source: matched.source,
            })
        })
        .collect()
}

fn cmd_discover(args: &DiscoverArgs) -> Result<i32, CliFailure> {
    let spec = resolve_spec(&args.seq, &args.poly, &args.mult)?;
    let r = match &args.r {
        Some(text) => parse_r_list(text)?,
        None => vec![1; spec.arity()],
    };
    let pmax = args.pmax.unwrap_or_else(|| default_pmax(spec.arity()));
    let primes = primes_in(spec.min_prime(), pmax);
    let outcome =
        classify(&spec, &r, &primes, &DEFAULT_CANDIDATE_MODULI).map_err(discover_failure)?;

    let oeis = args.oeis.map(|mode| {
        annotate_families(
            &outcome,
            match mode {
                OeisArg::Offline => OeisMode::Offline,
                OeisArg::Online => OeisMode::Online,
            },
        )
    });

    let command = format!(
        "discover --seq {} --r {} --pmax {}{}",
        spec.id(),
        r.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(","),
        pmax,
        match args.oeis {
            Some(OeisArg::Offline) => " --oeis offline",
            Some(OeisArg::Online) => " --oeis online",
            None => "",
        }
    );
    // Absence of a pattern is a valid finding, so discovery always passes.
    let record = ClaimRecord {
        spec: spec.id().to_owned(),
        r,
        claim: outcome,
        oeis,
        pass: true,
    };
    let report = Report::new(command, vec![ResultRecord::Claim(record)]);
    print_report(&report, args.format);
    Ok(EXIT_OK)
}

fn cmd_selftest() -> i32 {
    let outcomes = selftest::run_all();
    let records: Vec<ResultRecord> = outcomes
        .into_iter()
        .map(|c| {
            ResultRecord::Criterion(CriterionRecord {
                index: c.index,
                name: c.name,
                pass: c.pass,
                detail: c.detail,
            })
        })
        .collect();
    let report = Report::new("selftest", records);
    print_report(&report, Format::Text);
    if report.all_pass() {
        EXIT_OK
    } else {
        EXIT_FAILED_ROWS
    }
}

fn init_thread_pool() {
    if let Ok(text) = std::env::var("CTCONG_THREADS") {
        if let Ok(n) = text.parse::<usize>() {
            if n >= 1 {
                // Ignore failure: the global pool can only be set once.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

/// Parse the process arguments, run the selected command, and return the
/// process exit code.
pub fn run() -> i32 {
    init_thread_pool();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sum(args) => cmd_sum(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Discover(args) => cmd_discover(args),
        Command::Selftest => Ok(cmd_selftest()),
    };
    match result {
        Ok(code) => code,
        Err(failure) => failure.report(),
    }
}
