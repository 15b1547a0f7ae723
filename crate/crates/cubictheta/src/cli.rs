//! Command-line front end: enumeration, theta expansion, class groups, and
//! range verification, with json / csv / text output.
//!
//! Data goes to standard output only; diagnostics and the line-per-d
//! progress log go to standard error. Exit codes: 0 all-pass or successful
//! computation, 1 verification failure, 2 usage error.

use crate::pipeline::{Cache, RangeOutcome, VerificationReport};
use crate::{arith, cubic, pipeline, qform, theta};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "cubictheta",
    version,
    about = "Theta series of trace forms of totally real cubic fields: enumerate, expand, verify"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the cubic fields of a discriminant and their trace forms
    Enumerate {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        common: Common,
    },
    /// Theta q-expansions of the trace forms of the fields of a discriminant
    Theta {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        common: Common,
    },
    /// Reduced forms, class number, and 3-rank of a negative discriminant
    Classgroup {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        common: Common,
    },
    /// Run the full verification over a discriminant or range
    Verify {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Target {
    /// Single fundamental discriminant
    #[arg(long, allow_hyphen_values = true, conflicts_with = "range")]
    disc: Option<i64>,
    /// Inclusive discriminant range
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], allow_hyphen_values = true)]
    range: Option<Vec<i64>>,
}

#[derive(Args, Debug)]
struct Common {
    /// Theta precision N (coefficients a(0..N))
    #[arg(long, default_value_t = 1000)]
    precision: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Directory for the on-disk memo cache
    #[arg(long, env = "CUBICTHETA_CACHE_DIR", default_value = "./cache")]
    cache_dir: PathBuf,
    /// Worker threads for range verification
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

struct UsageError(String);

impl Target {
    /// The inclusive range to iterate, or a usage error.
    fn bounds(&self) -> Result<(i64, i64), UsageError> {
        match (self.disc, &self.range) {
            (Some(d), None) => Ok((d, d)),
            (None, Some(r)) => Ok((r[0], r[1])),
            (None, None) => Err(UsageError(
                "exactly one of --disc or --range is required".into(),
            )),
            (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
        }
    }
}

/// Parse argv and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version display exit 0; parse failures exit 2
            let code = if e.exit_code() == 0 { 0 } else { 2 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("{msg}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, UsageError> {
    match cli.command {
        Command::Enumerate { target, common } => enumerate_cmd(&target, &common),
        Command::Theta { target, common } => theta_cmd(&target, &common),
        Command::Classgroup { target, common } => classgroup_cmd(&target, &common),
        Command::Verify { target, common } => verify_cmd(&target, &common),
    }
}

fn check_precision(common: &Common) -> Result<(), UsageError> {
    if common.precision < 1 {
        return Err(UsageError("--precision must be at least 1".into()));
    }
    if common.jobs < 1 {
        return Err(UsageError("--jobs must be at least 1".into()));
    }
    Ok(())
}

fn positive_fundamental_range(target: &Target) -> Result<Vec<i64>, UsageError> {
    let (lo, hi) = target.bounds()?;
    if lo > hi {
        return Err(UsageError(format!("empty range [{lo}, {hi}]")));
    }
    if target.disc.is_some() {
        let d = lo;
        if d <= 0 {
            return Err(UsageError(format!("discriminant {d} is not positive")));
        }
        if !arith::is_fundamental(d) {
            return Err(UsageError(format!("{d} is not a fundamental discriminant")));
        }
        return Ok(vec![d]);
    }
    if lo <= 0 {
        return Err(UsageError(format!(
            "range [{lo}, {hi}] must contain only positive discriminants"
        )));
    }
    Ok((lo..=hi).filter(|&d| arith::is_fundamental(d)).collect())
}

#[derive(Serialize)]
struct EnumerateRow {
    d: i64,
    d3: i64,
    fields: Vec<cubic::CubicForm>,
    trace_forms: Vec<qform::QuadForm>,
}

fn enumerate_row(d: i64) -> EnumerateRow {
    let fields = cubic::enumerate_cubic_fields(d).expect("d validated fundamental positive");
    let trace_forms = fields
        .iter()
        .map(|f| {
            let ring = cubic::ring_of(f).expect("enumerated form");
            qform::reduce_gl2(&cubic::trace_form(&ring).expect("fundamental d"))
                .expect("positive definite")
        })
        .collect();
    EnumerateRow {
        d,
        d3: arith::three_reflection(d).expect("fundamental"),
        fields,
        trace_forms,
    }
}

fn enumerate_cmd(target: &Target, common: &Common) -> Result<i32, UsageError> {
    check_precision(common)?;
    let rows: Vec<EnumerateRow> = positive_fundamental_range(target)?
        .into_iter()
        .map(enumerate_row)
        .collect();
    match common.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows).unwrap()),
        Format::Csv => {
            println!("d,d3,count,fields,trace_forms");
            for r in rows {
                println!(
                    "{},{},{},{},{}",
                    r.d,
                    r.d3,
                    r.fields.len(),
                    join(r.fields.iter().map(|f| compact4(f))),
                    join(r.trace_forms.iter().map(|t| compact3(t))),
                );
            }
        }
        Format::Text => {
            for r in rows {
                println!("d={} d3={} fields={}", r.d, r.d3, r.fields.len());
                for (f, t) in r.fields.iter().zip(&r.trace_forms) {
                    println!("  {f}  trace form {t}");
                }
            }
        }
    }
    Ok(0)
}

fn theta_cmd(target: &Target, common: &Common) -> Result<i32, UsageError> {
    check_precision(common)?;
    let mut all: Vec<theta::ThetaSeries> = Vec::new();
    for d in positive_fundamental_range(target)? {
        let row = enumerate_row(d);
        for t in &row.trace_forms {
            all.push(theta::f_k(t, common.precision).expect("trace form discriminant is fundamental"));
        }
    }
    match common.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&all).unwrap()),
        Format::Csv => {
            println!("form,disc,level,precision,coeffs");
            for s in &all {
                println!(
                    "{},{},{},{},{}",
                    compact3(&s.form),
                    s.disc,
                    s.level,
                    s.precision,
                    s.coeffs
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(";")
                );
            }
        }
        Format::Text => {
            for s in &all {
                let fp = theta::first_two_nonzero(s)
                    .map(|((n1, a1), (n2, a2))| format!("({n1}, {a1}), ({n2}, {a2})"))
                    .unwrap_or_else(|_| "unavailable".into());
                println!(
                    "form {} disc {} level {}: first terms {}",
                    s.form, s.disc, s.level, fp
                );
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct ClassGroupRow {
    disc: i64,
    h: usize,
    r3: u32,
    elements: Vec<qform::QuadForm>,
}

fn classgroup_cmd(target: &Target, common: &Common) -> Result<i32, UsageError> {
    check_precision(common)?;
    let (lo, hi) = target.bounds()?;
    if lo > hi {
        return Err(UsageError(format!("empty range [{lo}, {hi}]")));
    }
    if hi >= 0 {
        return Err(UsageError(
            "classgroup expects negative discriminants".into(),
        ));
    }
    let mut rows = Vec::new();
    for disc in lo..=hi {
        if !arith::is_fundamental(disc) {
            if target.disc.is_some() {
                return Err(UsageError(format!(
                    "{disc} is not a fundamental discriminant"
                )));
            }
            continue;
        }
        let g = qform::class_group(disc).expect("negative fundamental");
        rows.push(ClassGroupRow {
            disc,
            h: g.order(),
            r3: g.three_rank(),
            elements: g.elements().to_vec(),
        });
    }
    match common.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows).unwrap()),
        Format::Csv => {
            println!("disc,h,r3,elements");
            for r in rows {
                println!(
                    "{},{},{},{}",
                    r.disc,
                    r.h,
                    r.r3,
                    join(r.elements.iter().map(|q| compact3(q)))
                );
            }
        }
        Format::Text => {
            for r in rows {
                println!("disc {}: h = {}, 3-rank = {}", r.disc, r.h, r.r3);
                for q in &r.elements {
                    println!("  {q}");
                }
            }
        }
    }
    Ok(0)
}

fn verify_cmd(target: &Target, common: &Common) -> Result<i32, UsageError> {
    check_precision(common)?;
    let (lo, hi) = target.bounds()?;
    if target.disc.is_some() {
        let d = lo;
        if d <= 0 {
            return Err(UsageError(format!("discriminant {d} is not positive")));
        }
        if !arith::is_fundamental(d) {
            return Err(UsageError(format!("{d} is not a fundamental discriminant")));
        }
    } else if lo <= 0 || lo > hi {
        return Err(UsageError(format!("invalid range [{lo}, {hi}]")));
    }
    let cache = Cache::on_disk(&common.cache_dir);
    let outcome = pipeline::verify_range(lo, hi, common.precision, common.jobs, &cache)
        .map_err(|e| UsageError(e.to_string()))?;
    if let Err(e) = cache.flush() {
        eprintln!("cache flush failed: {e}");
    }
    print_verify(&outcome, common.format);
    Ok(if outcome.summary.all_pass { 0 } else { 1 })
}

fn print_verify(outcome: &RangeOutcome, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(outcome).unwrap()),
        Format::Csv => {
            println!("d,d3,count,h,r3,injective,independent,witness_primes,millis");
            for r in &outcome.reports {
                println!(
                    "{},{},{},{},{},{},{},{},{}",
                    r.d,
                    r.d3,
                    r.fields.len(),
                    r.h_d3,
                    r.r3_real,
                    r.injective,
                    r.independent,
                    r.witness_primes
                        .iter()
                        .map(|p| p.to_string())
                        .collect::<Vec<_>>()
                        .join(";"),
                    r.millis
                );
            }
        }
        Format::Text => {
            for r in &outcome.reports {
                print_report_text(r);
            }
            let s = &outcome.summary;
            println!(
                "summary: [{}, {}] {} discriminants, {} fields, {}",
                s.d_min,
                s.d_max,
                s.discriminants,
                s.total_fields,
                if s.all_pass { "all PASS" } else { "FAILURES" }
            );
            for (count, n) in &s.histogram {
                println!("  {count} field(s): {n} discriminants");
            }
            if !s.failed.is_empty() {
                println!("  failed: {:?}", s.failed);
            }
        }
    }
}

fn print_report_text(r: &VerificationReport) {
    println!(
        "d={} d3={} fields={} expected={} h(d3)={} r3(d3)={} r3(d)={} {}",
        r.d,
        r.d3,
        r.fields.len(),
        r.expected_count,
        r.h_d3,
        r.r3_d3,
        r.r3_real,
        if r.pass { "PASS" } else { "FAIL" }
    );
    for (i, f) in r.fields.iter().enumerate() {
        let fp = r
            .fingerprints
            .get(i)
            .map(|((n1, a1), (n2, a2))| format!("({n1}, {a1}), ({n2}, {a2})"))
            .unwrap_or_default();
        let witness = r
            .witness_primes
            .get(i)
            .map(|p| format!(", witness p={p}"))
            .unwrap_or_default();
        println!(
            "  field {f}: trace form {}, first terms {fp}{witness}",
            r.trace_forms[i]
        );
    }
    for f in &r.failures {
        println!("  FAIL {f:?}");
    }
}

fn compact3(q: &qform::QuadForm) -> String {
    format!("({} {} {})", q.a, q.b, q.c)
}

fn compact4(f: &cubic::CubicForm) -> String {
    format!("({} {} {} {})", f.a, f.b, f.c, f.d)
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(";")
}
