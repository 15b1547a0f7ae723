//! Totally real cubic fields of a given positive fundamental discriminant,
//! enumerated through integral binary cubic forms.
//!
//! A cubic form F = (a, b, c, d) whose discriminant is fundamental
//! corresponds to the maximal order of a cubic field, realized as the ring
//! Z<1, w, t> with
//!
//! ```text
//!     w^2 = -ac - b w + a t,   w t = -ad,   t^2 = -bd - d w + c t
//! ```
//!
//! The trace pairing restricted to the trace-zero sublattice gives, after
//! dividing by 2 gcd(3, disc), a primitive integral binary quadratic form of
//! discriminant -3 disc / gcd(3, disc)^2.
//!
//! Enumeration scans every form whose Hessian is SL2-reduced. For such a
//! form of discriminant D in (0, X], the syzygy 4 H^3 = G^2 + 27 D F^2 pins
//!
//! ```text
//!     0 < P <= sqrt(X),   27 D a^2 <= 4 P^3,   |b| <= 3a/2 + sqrt(P),
//! ```
//!
//! so scanning (a, b, c) inside those bounds and solving the remaining
//! quadratic for the last coefficient visits a representative of every
//! class. Over-scanning is harmless: duplicates collapse in the dedup step,
//! and the class-number identity from the reflected class group cross-checks
//! completeness downstream.

use crate::arith;
use crate::qform::{self, QuadForm};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubicError {
    #[error("cubic form is reducible")]
    Reducible,
    #[error("discriminant {0} of the cubic form is not fundamental")]
    NonFundamentalDiscriminant(i64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("discriminant {0} is not positive")]
    NotPositive(i64),
    #[error("trace form is not integral; expected only for non-fundamental input")]
    IntegralityViolation,
}

/// The binary cubic form a*x^3 + b*x^2 y + c*x y^2 + d*y^3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 4]", into = "[i64; 4]")]
pub struct CubicForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl From<[i64; 4]> for CubicForm {
    fn from(v: [i64; 4]) -> Self {
        CubicForm::new(v[0], v[1], v[2], v[3])
    }
}

impl From<CubicForm> for [i64; 4] {
    fn from(f: CubicForm) -> Self {
        [f.a, f.b, f.c, f.d]
    }
}

impl std::fmt::Display for CubicForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}

impl CubicForm {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        CubicForm { a, b, c, d }
    }

    /// 18abcd + b^2 c^2 - 4ac^3 - 4b^3 d - 27 a^2 d^2.
    pub fn discriminant(&self) -> i64 {
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        let disc = 18 * a * b * c * d + b * b * c * c
            - 4 * a * c * c * c
            - 4 * b * b * b * d
            - 27 * a * a * d * d;
        i64::try_from(disc).expect("cubic discriminant overflows i64")
    }

    /// Hessian covariant (P, Q, R) = (b^2 - 3ac, bc - 9ad, c^2 - 3bd), a
    /// quadratic form of discriminant -3 disc(F).
    pub fn hessian(&self) -> (i64, i64, i64) {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)
    }

    /// True iff a != 0 and the dehomogenized cubic has no rational root.
    pub fn is_irreducible(&self) -> bool {
        if self.a == 0 || self.d == 0 {
            // a = 0: divisible by y; d = 0: root t = 0
            return false;
        }
        // rational root p/q needs p | d and q | a
        let eval = |p: i64, q: i64| {
            self.a as i128 * (p as i128).pow(3)
                + self.b as i128 * (p as i128).pow(2) * q as i128
                + self.c as i128 * p as i128 * (q as i128).pow(2)
                + self.d as i128 * (q as i128).pow(3)
        };
        for p in divisors(self.d.unsigned_abs()) {
            for q in divisors(self.a.unsigned_abs()) {
                let (p, q) = (p as i64, q as i64);
                if arith::gcd(p, q) != 1 {
                    continue;
                }
                if eval(p, q) == 0 || eval(-p, q) == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Substitute by a unimodular matrix and divide by its determinant (the
    /// twisted GL2(Z) action on cubic forms).
    pub fn transform_twisted(&self, m: &qform::Mat2) -> CubicForm {
        let det = m.det();
        assert!(det.abs() == 1, "twisted action needs a unimodular matrix");
        let [[p, q], [r, s]] = m.m.map(|row| row.map(|v| v as i128));
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        let a2 = a * p * p * p + b * p * p * r + c * p * r * r + d * r * r * r;
        let b2 = 3 * a * p * p * q
            + b * (p * p * s + 2 * p * q * r)
            + c * (2 * p * r * s + q * r * r)
            + 3 * d * r * r * s;
        let c2 = 3 * a * p * q * q
            + b * (2 * p * q * s + q * q * r)
            + c * (p * s * s + 2 * q * r * s)
            + 3 * d * r * s * s;
        let d2 = a * q * q * q + b * q * q * s + c * q * s * s + d * s * s * s;
        let det = det as i128;
        let back = |v: i128| i64::try_from(v * det).expect("cubic transform overflows i64");
        CubicForm::new(back(a2), back(b2), back(c2), back(d2))
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 1;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            if k * k != n {
                out.push(n / k);
            }
        }
        k += 1;
    }
    out.sort_unstable();
    out
}

/// Search for a unimodular matrix with entries bounded by `entry_bound`
/// carrying one cubic form to the other under the twisted action. Misses are
/// inconclusive; hits are proofs of equivalence.
pub fn gl2_equivalent_cubic(
    f: &CubicForm,
    g: &CubicForm,
    entry_bound: i64,
) -> Option<qform::Mat2> {
    let range = -entry_bound..=entry_bound;
    for p in range.clone() {
        for q in range.clone() {
            for r in range.clone() {
                for s in range.clone() {
                    if (p * s - q * r).abs() != 1 {
                        continue;
                    }
                    let m = qform::Mat2 { m: [[p, q], [r, s]] };
                    if f.transform_twisted(&m) == *g {
                        return Some(m);
                    }
                }
            }
        }
    }
    None
}

/// A rank-3 ring Z<1, w, t> attached to a cubic form, with its explicit
/// multiplication table. Elements are coordinate triples (m, n, k) meaning
/// m + n*w + k*t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicRing {
    form: CubicForm,
}

impl CubicRing {
    pub fn form(&self) -> &CubicForm {
        &self.form
    }

    pub fn discriminant(&self) -> i64 {
        self.form.discriminant()
    }

    pub fn mul(&self, x: [i64; 3], y: [i64; 3]) -> [i64; 3] {
        let CubicForm { a, b, c, d } = self.form;
        let [m1, n1, k1] = x;
        let [m2, n2, k2] = y;
        let ww = n1 * n2;
        let wt = n1 * k2 + k1 * n2;
        let tt = k1 * k2;
        [
            m1 * m2 + ww * (-a * c) + wt * (-a * d) + tt * (-b * d),
            m1 * n2 + n1 * m2 + ww * (-b) + tt * (-d),
            m1 * k2 + k1 * m2 + ww * a + tt * c,
        ]
    }

    /// tr(m + n w + k t) = 3m - n b + k c.
    pub fn trace(&self, x: [i64; 3]) -> i64 {
        3 * x[0] - x[1] * self.form.b + x[2] * self.form.c
    }

    /// Gram matrix of the trace pairing on the basis (1, w, t).
    pub fn trace_gram(&self) -> [[i64; 3]; 3] {
        let CubicForm { a, b, c, d } = self.form;
        [
            [3, -b, c],
            [-b, b * b - 2 * a * c, -3 * a * d],
            [c, -3 * a * d, c * c - 2 * b * d],
        ]
    }

    fn associative_on_basis(&self) -> bool {
        let basis = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        for x in basis {
            for y in basis {
                for z in basis {
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn det3(m: [[i64; 3]; 3]) -> i128 {
    let m = m.map(|row| row.map(|v| v as i128));
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Build the ring of integers attached to an irreducible cubic form of
/// fundamental discriminant. Associativity on all basis triples and the
/// trace-pairing discriminant are verified at construction.
pub fn ring_of(form: &CubicForm) -> Result<CubicRing, CubicError> {
    if !form.is_irreducible() {
        return Err(CubicError::Reducible);
    }
    let disc = form.discriminant();
    if !arith::is_fundamental(disc) {
        return Err(CubicError::NonFundamentalDiscriminant(disc));
    }
    let ring = CubicRing { form: *form };
    assert!(
        ring.associative_on_basis(),
        "multiplication table of {form} is not associative"
    );
    assert_eq!(
        det3(ring.trace_gram()),
        disc as i128,
        "trace pairing discriminant of {form} does not match the form discriminant"
    );
    Ok(ring)
}

/// The trace-zero sublattice of a cubic ring: a basis of the rank-2 kernel
/// of the trace functional, with the Gram matrix of the trace pairing on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceZeroLattice {
    pub basis: [[i64; 3]; 2],
    pub gram: [[i64; 2]; 2],
}

/// Kernel of the trace functional (m, n, k) -> 3m - bn + ck, via the
/// extended-gcd column reduction that puts the functional in Hermite form.
/// The kernel of a map to Z is saturated, so this is the full trace-zero
/// lattice, not a finite-index sublattice.
pub fn trace_zero(ring: &CubicRing) -> TraceZeroLattice {
    let v = [3i64, -ring.form.b, ring.form.c];
    let (g1, u1, u2) = arith::ext_gcd(v[0], v[1]);
    let g2 = arith::gcd(g1, v[2]);
    // ker1 kills (v0, v1); ker2 combines the Bezout column (u1, u2, 0),
    // which v sends to g1, with e3 to kill (g1, v2)
    let ker1 = [-(v[1] / g1), v[0] / g1, 0];
    let ker2 = [-(v[2] / g2) * u1, -(v[2] / g2) * u2, g1 / g2];
    let basis = [ker1, ker2];
    debug_assert_eq!(ring.trace(basis[0]), 0);
    debug_assert_eq!(ring.trace(basis[1]), 0);
    let pair = |x: [i64; 3], y: [i64; 3]| ring.trace(ring.mul(x, y));
    let gram = [
        [pair(basis[0], basis[0]), pair(basis[0], basis[1])],
        [pair(basis[1], basis[0]), pair(basis[1], basis[1])],
    ];
    TraceZeroLattice { basis, gram }
}

/// The rescaled trace form t = (trace-zero quadratic form) / (2 gcd(3, d)),
/// integral and primitive of discriminant -3d/gcd(3,d)^2 for fundamental d.
pub fn trace_form(ring: &CubicRing) -> Result<QuadForm, CubicError> {
    let d = ring.discriminant();
    let lattice = trace_zero(ring);
    let g = if d % 3 == 0 { 3 } else { 1 };
    let [[g11, g12], [_, g22]] = lattice.gram;
    let two_g = 2 * g;
    if g11 % two_g != 0 || g12 % g != 0 || g22 % two_g != 0 {
        return Err(CubicError::IntegralityViolation);
    }
    let t = QuadForm::new(g11 / two_g, g12 / g, g22 / two_g);
    let expected_disc =
        arith::three_reflection(d).map_err(|_| CubicError::IntegralityViolation)?;
    if t.discriminant() != expected_disc || !t.is_primitive() {
        return Err(CubicError::IntegralityViolation);
    }
    Ok(t)
}

/// One representative integral binary cubic form per isomorphism class of
/// totally real cubic field with discriminant exactly d.
///
/// Candidates from the reduced-Hessian scan are deduplicated by their
/// GL2-reduced trace forms: equal fundamental discriminant plus equivalent
/// trace forms forces isomorphic fields, and the class-number identity
/// checked downstream fails loudly if distinct fields were ever to merge.
pub fn enumerate_cubic_fields(d: i64) -> Result<Vec<CubicForm>, CubicError> {
    if d <= 0 {
        return Err(CubicError::NotPositive(d));
    }
    if !arith::is_fundamental(d) {
        return Err(CubicError::NotFundamental(d));
    }
    let mut classes: std::collections::BTreeMap<QuadForm, CubicForm> =
        std::collections::BTreeMap::new();
    for cand in scan_forms(d) {
        let ring = ring_of(&cand)?;
        let t = trace_form(&ring)?;
        let key = qform::reduce_gl2(&t)
            .expect("trace form of a totally real field is positive definite");
        classes
            .entry(key)
            .and_modify(|rep| {
                if cand < *rep {
                    *rep = cand;
                }
            })
            .or_insert(cand);
    }
    let mut reps: Vec<CubicForm> = classes.into_values().collect();
    reps.sort();
    Ok(reps)
}

/// All irreducible forms of discriminant exactly d inside the reduced-Hessian
/// box, in deterministic scan order.
fn scan_forms(d: i64) -> Vec<CubicForm> {
    let sq_x = arith::isqrt(d as u64) as i64;
    let x4 = arith::isqrt(sq_x as u64) as i64;
    let a_max = x4 + 1;
    let ceil_div = |x: i64, y: i64| x.div_euclid(y) + (x.rem_euclid(y) != 0) as i64;
    let mut out = Vec::new();
    for a in 1..=a_max {
        let b_max = (3 * a) / 2 + x4 + 1;
        for b in -b_max..=b_max {
            let bb = b * b;
            let c_lo = ceil_div(bb - sq_x, 3 * a);
            let c_hi = (bb - 1).div_euclid(3 * a);
            for c in c_lo..=c_hi {
                let p = bb - 3 * a * c;
                debug_assert!(p >= 1 && p <= sq_x);
                // last coefficient t solves disc(a, b, c, t) = d:
                // -27 a^2 t^2 + (18abc - 4b^3) t + (b^2 c^2 - 4 a c^3 - d) = 0
                let qa = -27 * (a as i128) * (a as i128);
                let qb = 18 * (a as i128) * (b as i128) * (c as i128) - 4 * (b as i128).pow(3);
                let qc = (b as i128).pow(2) * (c as i128).pow(2)
                    - 4 * (a as i128) * (c as i128).pow(3)
                    - d as i128;
                let delta = qb * qb - 4 * qa * qc;
                if delta < 0 {
                    continue;
                }
                let Some(s) = arith::square_root_exact(delta) else {
                    continue;
                };
                let mut roots = [(-qb + s) / (2 * qa), (-qb - s) / (2 * qa)];
                roots.sort_unstable();
                for (i, &t) in roots.iter().enumerate() {
                    if i > 0 && roots[0] == roots[1] {
                        continue;
                    }
                    // the divisions above truncate; accept only exact roots
                    if qa * t * t + qb * t + qc != 0 {
                        continue;
                    }
                    let Ok(t) = i64::try_from(t) else { continue };
                    let form = CubicForm::new(a, b, c, t);
                    if form.discriminant() == d && form.is_irreducible() {
                        out.push(form);
                    }
                }
            }
        }
    }
    out
}
