//! Integral binary quadratic forms with exact arithmetic: reduction under
//! SL2(Z) and GL2(Z), representation counts by lattice enumeration, Gauss
//! composition, class groups of negative fundamental discriminant, and the
//! 3-rank of the class group.
//!
//! Two reduction conventions coexist on purpose. Class groups use the SL2
//! convention (opposite classes stay distinct, composition is a group law);
//! the first-terms / represented-prime lemmas use the GL2 convention
//! (0 <= b <= a <= c). Every equivalence-taking operation asks the caller to
//! name the convention.

use crate::arith::{self, Discriminant};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QformError {
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("form is not primitive")]
    NotPrimitive,
    #[error("forms have different discriminants")]
    DiscriminantMismatch,
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("discriminant {0} is not negative")]
    NotNegative(i64),
    #[error("{prime} is not represented by the form")]
    NotRepresented { prime: i64 },
    #[error("no represented prime up to bound {bound}")]
    NoPrimeFound { bound: i64 },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
}

/// Equivalence convention: SL2 for class groups, GL2 for the reduced-triple
/// lemmas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    Sl2,
    Gl2,
}

/// The form a*x^2 + b*xy + c*y^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 3]", into = "[i64; 3]")]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl From<[i64; 3]> for QuadForm {
    fn from(v: [i64; 3]) -> Self {
        QuadForm::new(v[0], v[1], v[2])
    }
}

impl From<QuadForm> for [i64; 3] {
    fn from(q: QuadForm) -> Self {
        [q.a, q.b, q.c]
    }
}

impl std::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// A 2x2 integer matrix acting on forms by substitution:
/// (Q . M)(x, y) = Q(p x + q y, r x + s y) for M = [[p, q], [r, s]].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mat2 {
    pub m: [[i64; 2]; 2],
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        m: [[1, 0], [0, 1]],
    };

    pub fn det(&self) -> i64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let a = &self.m;
        let b = &other.m;
        Mat2 {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    /// b^2 - 4ac.
    pub fn discriminant(&self) -> i64 {
        let d = self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128;
        i64::try_from(d).expect("discriminant overflows i64")
    }

    pub fn is_positive_definite(&self) -> bool {
        self.discriminant() < 0 && self.a > 0
    }

    pub fn is_primitive(&self) -> bool {
        arith::gcd3(self.a, self.b, self.c) == 1
    }

    /// Evaluate the form at an integer point.
    pub fn eval(&self, x: i64, y: i64) -> i64 {
        let v = self.a as i128 * x as i128 * x as i128
            + self.b as i128 * x as i128 * y as i128
            + self.c as i128 * y as i128 * y as i128;
        i64::try_from(v).expect("form value overflows i64")
    }

    /// The opposite (inverse) class representative (a, -b, c).
    pub fn opposite(&self) -> QuadForm {
        QuadForm::new(self.a, -self.b, self.c)
    }

    /// Substitute by a 2x2 integer matrix.
    pub fn transform(&self, m: &Mat2) -> QuadForm {
        let [[p, q], [r, s]] = m.m.map(|row| row.map(|v| v as i128));
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let a2 = a * p * p + b * p * r + c * r * r;
        let b2 = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s;
        let c2 = a * q * q + b * q * s + c * s * s;
        QuadForm::new(
            i64::try_from(a2).expect("transform overflows i64"),
            i64::try_from(b2).expect("transform overflows i64"),
            i64::try_from(c2).expect("transform overflows i64"),
        )
    }

    pub fn is_sl2_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() < a && a < c))
    }

    pub fn is_gl2_reduced(&self) -> bool {
        0 <= self.b && self.b <= self.a && self.a <= self.c
    }
}

// Reduction in i128 so intermediates from composition cannot overflow.
fn reduce_sl2_wide(a0: i128, b0: i128, c0: i128) -> (i128, i128, i128, [[i128; 2]; 2]) {
    let (mut a, mut b, mut c) = (a0, b0, c0);
    let mut u = [[1i128, 0], [0, 1]];
    let mul = |u: [[i128; 2]; 2], m: [[i128; 2]; 2]| {
        [
            [
                u[0][0] * m[0][0] + u[0][1] * m[1][0],
                u[0][0] * m[0][1] + u[0][1] * m[1][1],
            ],
            [
                u[1][0] * m[0][0] + u[1][1] * m[1][0],
                u[1][0] * m[0][1] + u[1][1] * m[1][1],
            ],
        ]
    };
    loop {
        if b <= -a || b > a {
            // translation x -> x + k y brings b into (-a, a]
            let k = (a - b).div_euclid(2 * a);
            c += a * k * k + b * k;
            b += 2 * a * k;
            u = mul(u, [[1, k], [0, 1]]);
        } else if a > c {
            // swap (x, y) -> (-y, x)
            (a, b, c) = (c, -b, a);
            u = mul(u, [[0, -1], [1, 0]]);
        } else if a == c && b < 0 {
            (b, c) = (-b, a);
            u = mul(u, [[0, -1], [1, 0]]);
        } else {
            break;
        }
    }
    (a, b, c, u)
}

/// SL2(Z) reduction of a positive definite form. Returns the unique reduced
/// representative together with the determinant-one matrix U such that
/// transforming the input by U gives the output.
pub fn reduce_sl2(q: &QuadForm) -> Result<(QuadForm, Mat2), QformError> {
    if !q.is_positive_definite() {
        return Err(QformError::NotPositiveDefinite);
    }
    let (a, b, c, u) = reduce_sl2_wide(q.a as i128, q.b as i128, q.c as i128);
    let narrow = |v: i128| i64::try_from(v).map_err(|_| QformError::Overflow);
    let m = Mat2 {
        m: [
            [narrow(u[0][0])?, narrow(u[0][1])?],
            [narrow(u[1][0])?, narrow(u[1][1])?],
        ],
    };
    Ok((QuadForm::new(narrow(a)?, narrow(b)?, narrow(c)?), m))
}

/// GL2(Z) reduction: the unique form with 0 <= b <= a <= c in the class pair.
pub fn reduce_gl2(q: &QuadForm) -> Result<QuadForm, QformError> {
    let (r, _) = reduce_sl2(q)?;
    Ok(QuadForm::new(r.a, r.b.abs(), r.c))
}

/// Equivalence under the chosen convention. A discriminant mismatch just
/// returns false.
pub fn equivalent(q1: &QuadForm, q2: &QuadForm, conv: Convention) -> Result<bool, QformError> {
    if q1.discriminant() != q2.discriminant() {
        // still insist both are positive definite, as the callers expect
        if !q1.is_positive_definite() || !q2.is_positive_definite() {
            return Err(QformError::NotPositiveDefinite);
        }
        return Ok(false);
    }
    Ok(match conv {
        Convention::Sl2 => reduce_sl2(q1)?.0 == reduce_sl2(q2)?.0,
        Convention::Gl2 => reduce_gl2(q1)? == reduce_gl2(q2)?,
    })
}

/// The successive minima (a, c, a - b + c) of the GL2-reduced form.
pub fn successive_minima(q: &QuadForm) -> Result<(i64, i64, i64), QformError> {
    let r = reduce_gl2(q)?;
    Ok((r.a, r.c, r.a - r.b + r.c))
}

/// Representation counts a(0..=n_max) of the form, by one sweep over the
/// lattice points inside the ellipse Q <= n_max. Counts are invariant under
/// unimodular substitution, so the sweep runs on the reduced form.
pub fn representation_counts(q: &QuadForm, n_max: u64) -> Result<Vec<u64>, QformError> {
    let (r, _) = reduce_sl2(q)?;
    let (a, b, c) = (r.a as i128, r.b as i128, r.c as i128);
    let disc = b * b - 4 * a * c; // negative
    let n = n_max as i128;
    let mut counts = vec![0u64; n_max as usize + 1];
    // 4a*Q(x,y) = (2ax + by)^2 + |D| y^2, so y^2 <= 4aN/|D|
    let y_bound = arith::isqrt_i128(4 * a * n / -disc);
    for y in -y_bound..=y_bound {
        // x runs over the roots interval of a x^2 + (by) x + (c y^2 - n) <= 0,
        // widened by one to absorb the integer square root; each candidate is
        // value-checked, and the interval may hold no lattice point at all
        let dx = 4 * a * n + disc * y * y;
        if dx < 0 {
            continue;
        }
        let s = arith::isqrt_i128(dx);
        let lo = (-b * y - s).div_euclid(2 * a) - 1;
        let hi = (-b * y + s).div_euclid(2 * a) + 1;
        for x in lo..=hi {
            let v = a * x * x + b * x * y + c * y * y;
            if (0..=n).contains(&v) {
                counts[v as usize] += 1;
            }
        }
    }
    Ok(counts)
}

/// Number of integer pairs (x, y) with Q(x, y) = n.
pub fn represents(q: &QuadForm, n: u64) -> Result<u64, QformError> {
    let (r, _) = reduce_sl2(q)?;
    let (a, b, c) = (r.a as i128, r.b as i128, r.c as i128);
    let disc = b * b - 4 * a * c;
    let n = n as i128;
    let mut count = 0u64;
    let y_bound = arith::isqrt_i128(4 * a * n / -disc);
    for y in -y_bound..=y_bound {
        // a x^2 + (by) x + (c y^2 - n) = 0
        let dx = 4 * a * n + disc * y * y;
        if dx < 0 {
            continue;
        }
        if let Some(s) = arith::square_root_exact(dx) {
            if s == 0 {
                if (-b * y).rem_euclid(2 * a) == 0 {
                    count += 1;
                }
            } else {
                for root in [-b * y + s, -b * y - s] {
                    if root.rem_euclid(2 * a) == 0 {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

/// Least prime p <= bound represented by the form, by staged sweeps of the
/// representation table. A miss at the bound is reported, never retried.
pub fn smallest_represented_prime(q: &QuadForm, bound: i64) -> Result<i64, QformError> {
    if !q.is_positive_definite() {
        return Err(QformError::NotPositiveDefinite);
    }
    if !q.is_primitive() {
        return Err(QformError::NotPrimitive);
    }
    assert!(bound >= 2, "prime search bound must be at least 2");
    let mut stage = 64u64.min(bound as u64);
    let mut scanned_from = 2u64;
    loop {
        let counts = representation_counts(q, stage)?;
        for n in scanned_from..=stage {
            if counts[n as usize] > 0 && arith::is_prime(n) {
                return Ok(n as i64);
            }
        }
        if stage == bound as u64 {
            return Err(QformError::NoPrimeFound { bound });
        }
        scanned_from = stage + 1;
        stage = (stage * 8).min(bound as u64);
    }
}

/// Find some representation Q(x0, y0) = n, scanning deterministically.
fn find_representation(q: &QuadForm, n: i64) -> Option<(i64, i64)> {
    let (a, b, c) = (q.a as i128, q.b as i128, q.c as i128);
    let disc = b * b - 4 * a * c;
    let n = n as i128;
    let y_bound = arith::isqrt_i128(4 * a * n / -disc);
    for y in 0..=y_bound {
        for y in if y == 0 { vec![0] } else { vec![y, -y] } {
            let dx = 4 * a * n + disc * y * y;
            if dx < 0 {
                continue;
            }
            if let Some(s) = arith::square_root_exact(dx) {
                for root in [-b * y + s, -b * y - s] {
                    if root.rem_euclid(2 * a) == 0 {
                        return Some(((root / (2 * a)) as i64, y as i64));
                    }
                }
            }
        }
    }
    None
}

/// Carry a form representing the prime p to an equivalent form
/// (p, b, c) with 0 <= b <= p, by the explicit matrix construction: complete
/// (x0, y0) to a unimodular matrix, shear b into [-p, p), then flip its sign.
pub fn prime_form(q: &QuadForm, p: i64) -> Result<QuadForm, QformError> {
    if !q.is_positive_definite() {
        return Err(QformError::NotPositiveDefinite);
    }
    let (x0, y0) = find_representation(q, p).ok_or(QformError::NotRepresented { prime: p })?;
    // gcd(x0, y0) = 1: any common factor would be a square factor of p
    let (g, u, v) = arith::ext_gcd(x0, y0);
    debug_assert_eq!(g, 1);
    // columns (x0, y0) and (-v, u): determinant x0*u + y0*v = 1
    let s = Mat2 {
        m: [[x0, -v], [y0, u]],
    };
    debug_assert_eq!(s.det(), 1);
    let with_p = q.transform(&s);
    debug_assert_eq!(with_p.a, p);
    // shear: b -> b + 2pk lands in [-p, p)
    let k = (p - 1 - with_p.b).div_euclid(2 * p);
    let sheared = with_p.transform(&Mat2 { m: [[1, k], [0, 1]] });
    debug_assert!(-p <= sheared.b && sheared.b < p);
    let fixed = if sheared.b < 0 {
        sheared.transform(&Mat2 {
            m: [[1, 0], [0, -1]],
        })
    } else {
        sheared
    };
    debug_assert!(0 <= fixed.b && fixed.b <= p);
    Ok(fixed)
}

// Dirichlet composition on united forms, valid for any discriminant. The
// result is unreduced; callers reduce by the convention fitting the sign of
// the discriminant.
fn compose_raw(q1: &QuadForm, q2: &QuadForm) -> (i128, i128, i128) {
    let disc = q1.discriminant() as i128;
    let (a1, b1) = (q1.a as i128, q1.b as i128);
    let (a2, b2, c2) = (q2.a as i128, q2.b as i128, q2.c as i128);
    let s = (b1 + b2) / 2;
    let n = (b1 - b2) / 2;
    // g = U a1 + V a2 + W s via two extended gcds
    let ext = |a: i128, b: i128| {
        let (mut old_r, mut r) = (a, b);
        let (mut old_s, mut s_) = (1i128, 0i128);
        let (mut old_t, mut t) = (0i128, 1i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s_) = (s_, old_s - q * s_);
            (old_t, t) = (t, old_t - q * t);
        }
        if old_r < 0 {
            (-old_r, -old_s, -old_t)
        } else {
            (old_r, old_s, old_t)
        }
    };
    let (g1, u, v) = ext(a1, a2);
    let (g, t, w) = ext(g1, s);
    let (u_total, v_total, w_total) = (t * u, t * v, w);
    debug_assert_eq!(u_total * a1 + v_total * a2 + w_total * s, g);
    let a = (a1 / g) * (a2 / g);
    let b_raw = b2 + 2 * (a2 / g) * (v_total * n - w_total * c2);
    // normalize b modulo 2|a| into (-|a|, |a|]
    let two_a = 2 * a.abs();
    let mut b = b_raw.rem_euclid(two_a);
    if b > a.abs() {
        b -= two_a;
    }
    let num = b * b - disc;
    debug_assert_eq!(num.rem_euclid(4 * a), 0, "composition left a non-integral c");
    let c = num / (4 * a);
    (a, b, c)
}

/// Gauss composition of primitive positive definite forms of equal
/// discriminant, returned SL2-reduced.
pub fn compose(q1: &QuadForm, q2: &QuadForm) -> Result<QuadForm, QformError> {
    if q1.discriminant() != q2.discriminant() {
        return Err(QformError::DiscriminantMismatch);
    }
    if !q1.is_primitive() || !q2.is_primitive() {
        return Err(QformError::NotPrimitive);
    }
    if !q1.is_positive_definite() || !q2.is_positive_definite() {
        return Err(QformError::NotPositiveDefinite);
    }
    let (a, b, c) = compose_raw(q1, q2);
    let (ra, rb, rc, _) = reduce_sl2_wide(a, b, c);
    let narrow = |v: i128| i64::try_from(v).map_err(|_| QformError::Overflow);
    Ok(QuadForm::new(narrow(ra)?, narrow(rb)?, narrow(rc)?))
}

/// The principal (identity) form of a discriminant.
pub fn principal_form(disc: i64) -> QuadForm {
    let b = disc.rem_euclid(2);
    QuadForm::new(1, b, (b * b - disc) / 4)
}

/// The full set of SL2-reduced primitive forms of a negative fundamental
/// discriminant, with the composition group law.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroup {
    discriminant: Discriminant,
    elements: Vec<QuadForm>,
    identity: usize,
}

/// Enumerate Cl(disc) by the standard scan |b| <= a <= sqrt(|disc|/3).
pub fn class_group(disc: i64) -> Result<ClassGroup, QformError> {
    if disc >= 0 {
        return Err(QformError::NotNegative(disc));
    }
    let d = Discriminant::fundamental(disc).map_err(|_| QformError::NotFundamental(disc))?;
    let mut elements = Vec::new();
    let b_max = arith::isqrt((-disc / 3) as u64) as i64;
    let mut b = disc.rem_euclid(2);
    while b <= b_max {
        let m = (b * b - disc) / 4;
        let mut a = b.max(1);
        while a * a <= m {
            if m % a == 0 {
                let c = m / a;
                if arith::gcd3(a, b, c) == 1 {
                    elements.push(QuadForm::new(a, b, c));
                    if 0 < b && b < a && a < c {
                        elements.push(QuadForm::new(a, -b, c));
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    elements.sort();
    let principal = principal_form(disc);
    let identity = elements
        .iter()
        .position(|q| *q == principal)
        .expect("principal form missing from the reduced-forms scan");
    Ok(ClassGroup {
        discriminant: d,
        elements,
        identity,
    })
}

impl ClassGroup {
    pub fn discriminant(&self) -> i64 {
        self.discriminant.value()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[QuadForm] {
        &self.elements
    }

    pub fn identity(&self) -> &QuadForm {
        &self.elements[self.identity]
    }

    pub fn compose(&self, q1: &QuadForm, q2: &QuadForm) -> QuadForm {
        compose(q1, q2).expect("composition inside a class group cannot fail")
    }

    /// dim over F_3 of the 3-torsion: log3 of #{g : g^3 = identity}.
    pub fn three_rank(&self) -> u32 {
        let id = self.identity();
        let mut torsion = 0u64;
        for g in &self.elements {
            let g2 = self.compose(g, g);
            let g3 = self.compose(&g2, g);
            if g3 == *id {
                torsion += 1;
            }
        }
        let mut r = 0u32;
        let mut v = torsion;
        while v % 3 == 0 {
            v /= 3;
            r += 1;
        }
        assert_eq!(v, 1, "3-torsion count {torsion} is not a power of 3");
        r
    }
}

// ---------------------------------------------------------------------------
// Indefinite forms of positive fundamental discriminant.
//
// The class-number identity for cubic fields needs the 3-rank of the class
// group of the real quadratic field Q(sqrt(d)) with d the cubic-field
// discriminant itself (the reflected imaginary rank can exceed it by one).
// Classes of the narrow group are rho-cycles of reduced indefinite forms;
// the narrow and wide class groups differ by a 2-group, so their 3-ranks
// agree and either serves the count.
// ---------------------------------------------------------------------------

fn is_reduced_indefinite(q: &QuadForm, disc: i64) -> bool {
    // |sqrt(D) - 2|a|| < b < sqrt(D), exactly in integers (D is non-square)
    let (a, b) = (q.a as i128, q.b as i128);
    let d = disc as i128;
    if b <= 0 || b * b >= d {
        return false;
    }
    let t = 2 * a.abs();
    d < (t + b) * (t + b) && (t <= b || (t - b) * (t - b) < d)
}

// One rho step. For reduced input the output is again reduced and the orbit
// is the class cycle; for unreduced input repeated application reduces.
fn rho_indefinite(q: &QuadForm, disc: i64, sqrt_disc: i64) -> QuadForm {
    let (b, c) = (q.b as i128, q.c as i128);
    let d = disc as i128;
    let s = sqrt_disc as i128;
    let two_c = 2 * c.abs();
    let b_next = if c.abs() > s {
        // land in (-|c|, |c|]
        let r = (-b).rem_euclid(two_c);
        if r > c.abs() {
            r - two_c
        } else {
            r
        }
    } else {
        // largest value congruent to -b below sqrt(D)
        s - (s + b).rem_euclid(two_c)
    };
    let c_next = (b_next * b_next - d) / (4 * c);
    QuadForm::new(
        q.c,
        i64::try_from(b_next).expect("rho overflows i64"),
        i64::try_from(c_next).expect("rho overflows i64"),
    )
}

fn reduce_indefinite(mut q: QuadForm, disc: i64, sqrt_disc: i64) -> QuadForm {
    for _ in 0..10_000 {
        if is_reduced_indefinite(&q, disc) {
            return q;
        }
        q = rho_indefinite(&q, disc, sqrt_disc);
    }
    panic!("indefinite reduction of discriminant {disc} did not terminate");
}

/// The narrow (form) class group of a real quadratic field: the rho-cycles
/// of reduced indefinite forms of a positive non-square fundamental
/// discriminant.
#[derive(Debug, Clone)]
pub struct RealClassGroup {
    discriminant: i64,
    sqrt_disc: i64,
    cycles: Vec<Vec<QuadForm>>,
    cycle_of: std::collections::HashMap<QuadForm, usize>,
    identity: usize,
}

/// Enumerate every reduced indefinite form of discriminant d and partition
/// them into rho-cycles.
pub fn real_class_group(d: i64) -> Result<RealClassGroup, QformError> {
    if d <= 1 || !arith::is_fundamental(d) {
        return Err(QformError::NotFundamental(d));
    }
    let s = arith::isqrt(d as u64) as i64;
    let mut forms = Vec::new();
    let mut b = 2 - d.rem_euclid(2);
    while b <= s {
        let m = (d - b * b) / 4;
        let mut u = 1;
        while u * u <= m {
            if m % u == 0 {
                for abs_a in [u, m / u] {
                    let candidates = [
                        QuadForm::new(abs_a, b, -(m / abs_a)),
                        QuadForm::new(-abs_a, b, m / abs_a),
                    ];
                    for q in candidates {
                        if is_reduced_indefinite(&q, d) && q.is_primitive() {
                            forms.push(q);
                        }
                    }
                    if u * u == m {
                        break;
                    }
                }
            }
            u += 1;
        }
        b += 2;
    }
    forms.sort();
    forms.dedup();
    let mut cycle_of = std::collections::HashMap::new();
    let mut cycles: Vec<Vec<QuadForm>> = Vec::new();
    for &start in &forms {
        if cycle_of.contains_key(&start) {
            continue;
        }
        let id = cycles.len();
        let mut cycle = Vec::new();
        let mut g = start;
        loop {
            cycle_of.insert(g, id);
            cycle.push(g);
            g = rho_indefinite(&g, d, s);
            assert!(
                cycle.len() <= forms.len(),
                "rho orbit escaped the reduced forms of discriminant {d}"
            );
            if g == start {
                break;
            }
        }
        cycles.push(cycle);
    }
    let principal = reduce_indefinite(principal_form(d), d, s);
    let identity = *cycle_of
        .get(&principal)
        .expect("reduced principal form missing from the cycle partition");
    Ok(RealClassGroup {
        discriminant: d,
        sqrt_disc: s,
        cycles,
        cycle_of,
        identity,
    })
}

impl RealClassGroup {
    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    /// The narrow class number h+ (number of cycles).
    pub fn narrow_class_number(&self) -> usize {
        self.cycles.len()
    }

    fn class_of(&self, q: &QuadForm) -> usize {
        let r = reduce_indefinite(*q, self.discriminant, self.sqrt_disc);
        *self
            .cycle_of
            .get(&r)
            .expect("reduced form missing from the cycle partition")
    }

    /// dim over F_3 of the 3-torsion of the narrow class group, which equals
    /// the 3-rank of the ordinary class group.
    pub fn three_rank(&self) -> u32 {
        let mut torsion = 0u64;
        for cycle in &self.cycles {
            let g = &cycle[0];
            let (a, b, c) = compose_raw(g, g);
            let g2 = reduce_indefinite(
                QuadForm::new(
                    i64::try_from(a).expect("composition overflows i64"),
                    i64::try_from(b).expect("composition overflows i64"),
                    i64::try_from(c).expect("composition overflows i64"),
                ),
                self.discriminant,
                self.sqrt_disc,
            );
            let (a, b, c) = compose_raw(&g2, g);
            let g3 = QuadForm::new(
                i64::try_from(a).expect("composition overflows i64"),
                i64::try_from(b).expect("composition overflows i64"),
                i64::try_from(c).expect("composition overflows i64"),
            );
            if self.class_of(&g3) == self.identity {
                torsion += 1;
            }
        }
        let mut r = 0u32;
        let mut v = torsion;
        while v % 3 == 0 {
            v /= 3;
            r += 1;
        }
        assert_eq!(v, 1, "3-torsion count {torsion} is not a power of 3");
        r
    }
}
