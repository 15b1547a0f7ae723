//! Exact theta q-expansions of positive definite binary forms, the
//! two-term fingerprint behind the first-terms lemma, and exact linear
//! independence of families of series.
//!
//! The n-th coefficient of theta(Q) counts representations of n by Q, so a
//! single lattice sweep over the ellipse Q <= N produces the whole
//! expansion. Level and nebentypus are carried as metadata: for a binary
//! form of discriminant D the series lives in weight one, level |D|, with
//! the Kronecker character (D/.). The transformation law itself is not
//! re-verified here; its executable shadow is the character-support
//! property (represented primes p with p not dividing D satisfy (D/p) = 1),
//! checked by the pipeline.

use crate::arith;
use crate::qform::{self, QuadForm};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThetaError {
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("discriminant {0} is not fundamental")]
    NotFundamentalDiscriminant(i64),
    #[error("fewer than two nonzero terms within precision {0}")]
    InsufficientPrecision(usize),
    #[error("series have mismatched precision or level")]
    PrecisionMismatch,
}

/// Exact q-expansion of a theta series: a(n) counts representations of n by
/// the source form. `disc` doubles as the nebentypus tag (the Kronecker
/// character is (disc/.)) and `level` = |disc|.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaSeries {
    pub form: QuadForm,
    pub disc: i64,
    pub level: i64,
    pub precision: usize,
    pub coeffs: Vec<u64>,
}

impl ThetaSeries {
    pub fn coeff(&self, n: usize) -> u64 {
        self.coeffs[n]
    }
}

/// The positions and values of the first two nonzero positive-index terms.
pub type Fingerprint = ((usize, u64), (usize, u64));

/// Expand theta(Q) to precision N by one sweep over the lattice points with
/// Q(x, y) <= N.
pub fn theta_expand(q: &QuadForm, precision: usize) -> Result<ThetaSeries, ThetaError> {
    assert!(precision >= 1, "theta precision must be at least 1");
    let coeffs = qform::representation_counts(q, precision as u64)
        .map_err(|_| ThetaError::NotPositiveDefinite)?;
    let disc = q.discriminant();
    Ok(ThetaSeries {
        form: *q,
        disc,
        level: disc.abs(),
        precision,
        coeffs,
    })
}

/// The series f attached to a rescaled trace form of a totally real cubic
/// field: the theta expansion of the form, which lies in weight one, level
/// |d3|, nebentypus (d3/.) with d3 the form discriminant.
pub fn f_k(trace_form: &QuadForm, precision: usize) -> Result<ThetaSeries, ThetaError> {
    let disc = trace_form.discriminant();
    if !arith::is_fundamental(disc) {
        return Err(ThetaError::NotFundamentalDiscriminant(disc));
    }
    theta_expand(trace_form, precision)
}

/// First two nonzero terms of a series, the fingerprint that determines the
/// GL2-class of the source form among forms of one discriminant.
pub fn first_two_nonzero(series: &ThetaSeries) -> Result<Fingerprint, ThetaError> {
    let mut found = Vec::with_capacity(2);
    for n in 1..=series.precision {
        if series.coeffs[n] != 0 {
            found.push((n, series.coeffs[n]));
            if found.len() == 2 {
                return Ok((found[0], found[1]));
            }
        }
    }
    Err(ThetaError::InsufficientPrecision(series.precision))
}

/// Precision that guarantees a fingerprint for every listed form, with room
/// for the independence witness search: max(1000, 3 * the largest sum of the
/// two largest successive minima).
pub fn recommended_precision(forms: &[QuadForm]) -> usize {
    let mut needed = 0i64;
    for q in forms {
        if let Ok((_, m2, m3)) = qform::successive_minima(q) {
            needed = needed.max(m2 + m3);
        }
    }
    1000usize.max(3 * needed as usize)
}

/// Outcome of the exact independence test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Independence {
    /// Full rank, with one prime per series represented by it alone.
    IndependentWithWitnesses { witness_primes: Vec<i64> },
    /// Full rank, but some series have no exclusive witness prime within
    /// the precision.
    IndependentWitnessMissing { missing: Vec<usize> },
    /// The coefficient matrix is rank-deficient.
    Dependent { rank: usize },
}

impl Independence {
    pub fn is_independent(&self) -> bool {
        !matches!(self, Independence::Dependent { .. })
    }
}

/// Exact rational rank of the coefficient matrix, by fraction-free Bareiss
/// elimination over arbitrary-precision integers. On full rank, also search
/// for the proof witnesses: for each series a prime index where it alone is
/// nonzero.
pub fn linearly_independent(series: &[ThetaSeries]) -> Result<Independence, ThetaError> {
    assert!(!series.is_empty(), "independence of an empty family is vacuous");
    let precision = series[0].precision;
    let level = series[0].level;
    if series
        .iter()
        .any(|s| s.precision != precision || s.level != level)
    {
        return Err(ThetaError::PrecisionMismatch);
    }
    let rank = bareiss_rank(series);
    if rank < series.len() {
        return Ok(Independence::Dependent { rank });
    }
    let witnesses = witness_primes(series);
    let missing: Vec<usize> = witnesses
        .iter()
        .enumerate()
        .filter_map(|(i, w)| w.is_none().then_some(i))
        .collect();
    if missing.is_empty() {
        Ok(Independence::IndependentWithWitnesses {
            witness_primes: witnesses.into_iter().map(|w| w.unwrap()).collect(),
        })
    } else {
        Ok(Independence::IndependentWitnessMissing { missing })
    }
}

/// For each series, the least prime p within precision with a_i(p) != 0 and
/// a_j(p) = 0 for every other series j.
pub fn witness_primes(series: &[ThetaSeries]) -> Vec<Option<i64>> {
    let precision = series.iter().map(|s| s.precision).min().unwrap_or(0);
    let primes = arith::primes_up_to(precision as u64);
    series
        .iter()
        .enumerate()
        .map(|(i, s)| {
            primes
                .iter()
                .find(|&&p| {
                    s.coeffs[p as usize] != 0
                        && series
                            .iter()
                            .enumerate()
                            .all(|(j, t)| j == i || t.coeffs[p as usize] == 0)
                })
                .map(|&p| p as i64)
        })
        .collect()
}

fn bareiss_rank(series: &[ThetaSeries]) -> usize {
    let rows = series.len();
    let cols = series[0].coeffs.len();
    let mut m: Vec<Vec<BigInt>> = series
        .iter()
        .map(|s| s.coeffs.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let num = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                debug_assert!((&num % &prev).is_zero());
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}
