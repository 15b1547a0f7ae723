//! Full verification for a discriminant or a range of discriminants:
//! enumerate the cubic fields, build their theta series, and check the
//! injectivity, linear-independence, and class-number statements, emitting
//! one structured report per discriminant.
//!
//! The class-number identity is the load-bearing cross-check: the number of
//! fields found by the cubic-form scan must equal (3^r - 1)/2 with r the
//! 3-rank of the narrow class group of Q(sqrt(d)), computed from forms with
//! no code shared with the enumeration. The 3-rank of the reflected
//! imaginary field Cl(d3) is computed and reported as well, tied to the
//! real side by the reflection inequality r <= r3(d3) <= r + 1.

mod cache;

pub use cache::Cache;

use crate::arith;
use crate::cubic::{self, CubicForm};
use crate::qform::{self, QuadForm};
use crate::theta::{self, Fingerprint, Independence, ThetaSeries};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;
use thiserror::Error;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("discriminant {0} is not positive")]
    NotPositive(i64),
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: i64, hi: i64 },
    #[error("corrupt cache entry for kind {kind}, key {key}")]
    CorruptCacheEntry { kind: String, key: i64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A sub-check that did not hold, with the objects that broke it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckFailure {
    CountMismatch { found: usize, expected: usize },
    ScholzViolation { r3_real: u32, r3_imag: u32 },
    TraceFormDefect { index: usize, reason: String },
    TraceFormsEquivalent { i: usize, j: usize },
    FingerprintCollision { i: usize, j: usize },
    RouteDisagreement { i: usize, j: usize },
    FingerprintUnavailable { index: usize },
    RankDeficient { rank: usize },
    WitnessMissing { indices: Vec<usize> },
    NebentypusViolation { index: usize, prime: i64 },
}

/// Everything verified for one positive fundamental discriminant. `pass` is
/// true only when every sub-check holds; failures list the offenders.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub d: i64,
    pub d3: i64,
    pub precision: usize,
    /// One cubic form per isomorphism class of field with discriminant d.
    pub fields: Vec<CubicForm>,
    /// GL2-reduced rescaled trace forms, aligned with `fields`.
    pub trace_forms: Vec<QuadForm>,
    /// First two nonzero theta terms per trace form.
    pub fingerprints: Vec<Fingerprint>,
    /// Class number of the reflected imaginary field Cl(d3).
    pub h_d3: usize,
    /// 3-rank of Cl(d3).
    pub r3_d3: u32,
    /// 3-rank of the narrow class group of Q(sqrt(d)); drives the count.
    pub r3_real: u32,
    pub expected_count: usize,
    pub count_ok: bool,
    pub scholz_ok: bool,
    pub injective: bool,
    pub independent: bool,
    pub witness_primes: Vec<i64>,
    pub nebentypus_ok: bool,
    /// dim of the span of the theta series is at least this (= field count).
    pub dim_lower_bound: usize,
    pub pass: bool,
    pub failures: Vec<CheckFailure>,
    #[serde(skip)]
    pub millis: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CachedClassGroup {
    elements: Vec<QuadForm>,
    r3: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CachedRealGroup {
    h_plus: usize,
    r3: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CachedFields {
    forms: Vec<CubicForm>,
}

/// Verify one discriminant at the given theta precision.
pub fn verify_discriminant(
    d: i64,
    precision: usize,
    cache: &Cache,
) -> Result<VerificationReport, PipelineError> {
    if d <= 0 {
        return Err(PipelineError::NotPositive(d));
    }
    if !arith::is_fundamental(d) {
        return Err(PipelineError::NotFundamental(d));
    }
    let start = Instant::now();
    let d3 = arith::three_reflection(d).expect("d is fundamental");

    let imag = cache.get_or_compute("classgroup", d3, || {
        let g = qform::class_group(d3).expect("d3 is negative fundamental");
        CachedClassGroup {
            elements: g.elements().to_vec(),
            r3: g.three_rank(),
        }
    });
    let real = if d == 1 {
        // Q itself: no class group, no cubic fields
        CachedRealGroup { h_plus: 1, r3: 0 }
    } else {
        cache.get_or_compute("realclassgroup", d, || {
            let g = qform::real_class_group(d).expect("d is positive fundamental");
            CachedRealGroup {
                h_plus: g.narrow_class_number(),
                r3: g.three_rank(),
            }
        })
    };
    let fields = cache
        .get_or_compute("cubicfields", d, || CachedFields {
            forms: cubic::enumerate_cubic_fields(d).expect("d is positive fundamental"),
        })
        .forms;

    let mut failures = Vec::new();

    let expected_count = (3usize.pow(real.r3) - 1) / 2;
    let count_ok = fields.len() == expected_count;
    if !count_ok {
        failures.push(CheckFailure::CountMismatch {
            found: fields.len(),
            expected: expected_count,
        });
    }
    let scholz_ok = real.r3 <= imag.r3 && imag.r3 <= real.r3 + 1;
    if !scholz_ok {
        failures.push(CheckFailure::ScholzViolation {
            r3_real: real.r3,
            r3_imag: imag.r3,
        });
    }

    // trace forms: integral, primitive, positive definite, disc d3, and the
    // unscaled trace-zero form has discriminant -12d
    let mut trace_forms = Vec::with_capacity(fields.len());
    let mut series: Vec<ThetaSeries> = Vec::with_capacity(fields.len());
    let mut fingerprints: Vec<Fingerprint> = Vec::with_capacity(fields.len());
    for (index, form) in fields.iter().enumerate() {
        let ring = cubic::ring_of(form).expect("enumerated forms build rings");
        let lattice = cubic::trace_zero(&ring);
        let t0_disc = (2 * lattice.gram[0][1]).pow(2) - 4 * lattice.gram[0][0] * lattice.gram[1][1];
        if i128::from(t0_disc) != -12 * i128::from(d) {
            failures.push(CheckFailure::TraceFormDefect {
                index,
                reason: format!("trace-zero form has discriminant {t0_disc}, want {}", -12 * d),
            });
        }
        match cubic::trace_form(&ring) {
            Ok(t) => {
                let reduced = qform::reduce_gl2(&t).expect("trace form is positive definite");
                match theta::f_k(&reduced, precision) {
                    Ok(s) => {
                        match theta::first_two_nonzero(&s) {
                            Ok(fp) => fingerprints.push(fp),
                            Err(_) => {
                                failures.push(CheckFailure::FingerprintUnavailable { index });
                                fingerprints.push(((0, 0), (0, 0)));
                            }
                        }
                        series.push(s);
                    }
                    Err(e) => failures.push(CheckFailure::TraceFormDefect {
                        index,
                        reason: format!("theta expansion failed: {e}"),
                    }),
                }
                trace_forms.push(reduced);
            }
            Err(e) => failures.push(CheckFailure::TraceFormDefect {
                index,
                reason: e.to_string(),
            }),
        }
    }

    // injectivity, two routes: reduced-form inequality and fingerprint
    // inequality, which must agree pairwise
    let mut injective = true;
    for i in 0..trace_forms.len() {
        for j in i + 1..trace_forms.len() {
            let same_form = trace_forms[i] == trace_forms[j];
            let same_fp = fingerprints.get(i) == fingerprints.get(j);
            if same_form {
                injective = false;
                failures.push(CheckFailure::TraceFormsEquivalent { i, j });
            }
            if same_fp {
                injective = false;
                failures.push(CheckFailure::FingerprintCollision { i, j });
            }
            if same_form != same_fp {
                failures.push(CheckFailure::RouteDisagreement { i, j });
            }
        }
    }

    // exact rank and the per-series witness primes
    let mut independent = true;
    let mut witness_primes = Vec::new();
    if !series.is_empty() && series.len() == fields.len() {
        match theta::linearly_independent(&series).expect("series share precision and level") {
            Independence::IndependentWithWitnesses { witness_primes: w } => {
                witness_primes = w;
            }
            Independence::IndependentWitnessMissing { missing } => {
                failures.push(CheckFailure::WitnessMissing { indices: missing });
            }
            Independence::Dependent { rank } => {
                independent = false;
                failures.push(CheckFailure::RankDeficient { rank });
            }
        }
    }

    // nebentypus shadow: represented primes away from d3 have (d3/p) = 1
    let mut nebentypus_ok = true;
    let primes = arith::primes_up_to(precision as u64);
    for (index, s) in series.iter().enumerate() {
        for &p in &primes {
            if s.coeffs[p as usize] > 0 && d3 % (p as i64) != 0 && arith::kronecker(d3, p as i64) != 1
            {
                nebentypus_ok = false;
                failures.push(CheckFailure::NebentypusViolation {
                    index,
                    prime: p as i64,
                });
            }
        }
    }

    let pass = failures.is_empty();
    Ok(VerificationReport {
        schema: REPORT_SCHEMA_VERSION,
        d,
        d3,
        precision,
        dim_lower_bound: fields.len(),
        fields,
        trace_forms,
        fingerprints,
        h_d3: imag.elements.len(),
        r3_d3: imag.r3,
        r3_real: real.r3,
        expected_count,
        count_ok,
        scholz_ok,
        injective,
        independent,
        witness_primes,
        nebentypus_ok,
        pass,
        failures,
        millis: start.elapsed().as_millis(),
    })
}

/// Totals for a range run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeSummary {
    pub d_min: i64,
    pub d_max: i64,
    pub discriminants: usize,
    pub total_fields: usize,
    pub all_pass: bool,
    /// field count -> number of discriminants with that count
    pub histogram: BTreeMap<usize, usize>,
    pub failed: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeOutcome {
    pub reports: Vec<VerificationReport>,
    pub summary: RangeSummary,
}

/// Verify every fundamental discriminant in [d_min, d_max], in order.
/// `jobs > 1` fans the per-discriminant work over a thread pool; reports are
/// merged back in discriminant order, so the output does not depend on the
/// parallelism level.
pub fn verify_range(
    d_min: i64,
    d_max: i64,
    precision: usize,
    jobs: usize,
    cache: &Cache,
) -> Result<RangeOutcome, PipelineError> {
    if d_min <= 0 || d_min > d_max {
        return Err(PipelineError::InvalidRange {
            lo: d_min,
            hi: d_max,
        });
    }
    let ds: Vec<i64> = (d_min..=d_max).filter(|&d| arith::is_fundamental(d)).collect();
    let run = |d: &i64| -> Result<VerificationReport, PipelineError> {
        let r = verify_discriminant(*d, precision, cache)?;
        eprintln!(
            "d={} d3={} fields={} {}",
            r.d,
            r.d3,
            r.fields.len(),
            if r.pass { "PASS" } else { "FAIL" }
        );
        Ok(r)
    };
    let reports: Vec<VerificationReport> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool construction");
        pool.install(|| {
            use rayon::prelude::*;
            ds.par_iter().map(run).collect::<Result<Vec<_>, _>>()
        })?
    } else {
        ds.iter().map(run).collect::<Result<Vec<_>, _>>()?
    };
    let mut histogram = BTreeMap::new();
    let mut total_fields = 0;
    let mut failed = Vec::new();
    for r in &reports {
        *histogram.entry(r.fields.len()).or_insert(0) += 1;
        total_fields += r.fields.len();
        if !r.pass {
            failed.push(r.d);
        }
    }
    let summary = RangeSummary {
        d_min,
        d_max,
        discriminants: reports.len(),
        total_fields,
        all_pass: failed.is_empty(),
        histogram,
        failed,
    };
    Ok(RangeOutcome { reports, summary })
}
