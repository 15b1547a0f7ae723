//! Acceptance suite: one test per verification criterion, each printing a
//! PASS line with the scale it ran at. The heavy shared computations (the
//! full sweep to 20,000 and the imaginary class groups to |disc| 10,000)
//! are built once and shared.

use cubictheta::pipeline::{self, Cache, CheckFailure, RangeOutcome};
use cubictheta::qform::{self, Convention, Mat2, QuadForm};
use cubictheta::{arith, cubic, theta};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::sync::LazyLock;

const SWEEP_MAX: i64 = 20_000;
const PRECISION: usize = 1000;
const DESK_DISC_BOUND: i64 = 10_000;

fn jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Full verification of every fundamental 0 < d <= 20,000 at N = 1000.
static SWEEP: LazyLock<RangeOutcome> = LazyLock::new(|| {
    let cache = Cache::in_memory();
    pipeline::verify_range(2, SWEEP_MAX, PRECISION, jobs(), &cache).expect("sweep runs")
});

/// All imaginary class groups with |disc| <= 10,000.
static IMAG_GROUPS: LazyLock<Vec<qform::ClassGroup>> = LazyLock::new(|| {
    (-DESK_DISC_BOUND..=-3)
        .filter(|&d| arith::is_fundamental(d))
        .map(|d| qform::class_group(d).expect("negative fundamental"))
        .collect()
});

#[test]
fn criterion_01_count_identity() {
    let out = &*SWEEP;
    let mut bad = Vec::new();
    for r in &out.reports {
        if !r.count_ok || !r.scholz_ok {
            bad.push((r.d, r.fields.len(), r.expected_count, r.r3_real, r.r3_d3));
        }
    }
    assert!(bad.is_empty(), "count identity exceptions: {bad:?}");
    println!(
        "criterion 1 PASS: |C_d| = (3^r3 - 1)/2 against the real class group, plus the \
         reflection inequality toward Cl(d3), for all {} fundamental d <= {SWEEP_MAX} \
         ({} fields found)",
        out.summary.discriminants, out.summary.total_fields
    );
}

#[test]
fn criterion_02_trace_form_properties() {
    let out = &*SWEEP;
    let mut fields = 0usize;
    for r in &out.reports {
        for f in &r.failures {
            assert!(
                !matches!(f, CheckFailure::TraceFormDefect { .. }),
                "d={}: {f:?}",
                r.d
            );
        }
        assert_eq!(r.trace_forms.len(), r.fields.len(), "d={}", r.d);
        for t in &r.trace_forms {
            assert!(t.is_primitive(), "d={}: {t} imprimitive", r.d);
            assert!(t.is_positive_definite(), "d={}: {t} not definite", r.d);
            assert_eq!(t.discriminant(), r.d3, "d={}: wrong discriminant", r.d);
            fields += 1;
        }
    }
    println!(
        "criterion 2 PASS: every trace form integral, primitive, positive definite of \
         discriminant d3, with disc(unscaled) = -12d, over {fields} fields"
    );
}

#[test]
fn criterion_03_injectivity() {
    let out = &*SWEEP;
    let mut multi = 0usize;
    for r in &out.reports {
        assert!(r.injective, "d={}: injectivity failed: {:?}", r.d, r.failures);
        for f in &r.failures {
            assert!(
                !matches!(
                    f,
                    CheckFailure::TraceFormsEquivalent { .. }
                        | CheckFailure::FingerprintCollision { .. }
                        | CheckFailure::RouteDisagreement { .. }
                ),
                "d={}: {f:?}",
                r.d
            );
        }
        if r.fields.len() >= 2 {
            multi += 1;
        }
    }
    // the first multi-class discriminant sits just beyond the sweep; check
    // the statement there too so the pairwise branch genuinely runs
    let cache = Cache::in_memory();
    let r = pipeline::verify_discriminant(32009, PRECISION, &cache).unwrap();
    assert_eq!(r.fields.len(), 4, "32009 carries the classical quartet");
    assert!(r.count_ok && r.injective, "{:?}", r.failures);
    let distinct_forms: BTreeSet<_> = r.trace_forms.iter().collect();
    assert_eq!(distinct_forms.len(), 4);
    let distinct_fps: BTreeSet<_> = r.fingerprints.iter().collect();
    assert_eq!(distinct_fps.len(), 4);
    println!(
        "criterion 3 PASS: trace forms pairwise GL2-inequivalent and fingerprints pairwise \
         distinct; {multi} multi-class d in range, plus the quartet at d = 32009"
    );
}

#[test]
fn criterion_04_linear_independence_with_witnesses() {
    let out = &*SWEEP;
    let mut witnessed = 0usize;
    let mut retried = Vec::new();
    let cache = Cache::in_memory();
    for r in &out.reports {
        assert!(r.independent, "d={}: rank deficient: {:?}", r.d, r.failures);
        let missing = r
            .failures
            .iter()
            .any(|f| matches!(f, CheckFailure::WitnessMissing { .. }));
        if missing {
            // permitted fallback: the rerun at tenfold precision must succeed
            let retry = pipeline::verify_discriminant(r.d, 10 * PRECISION, &cache).unwrap();
            assert!(
                retry.independent && retry.witness_primes.len() == retry.fields.len(),
                "d={}: witness search failed even at N = {}",
                r.d,
                10 * PRECISION
            );
            retried.push(r.d);
        } else if !r.fields.is_empty() {
            assert_eq!(r.witness_primes.len(), r.fields.len(), "d={}", r.d);
            witnessed += 1;
        }
        // outside witness retries, everything must have passed outright
        if !missing {
            assert!(r.pass, "d={}: {:?}", r.d, r.failures);
        }
    }
    // witness soundness, re-checked against freshly expanded series
    for r in out.reports.iter().filter(|r| !r.fields.is_empty()).step_by(37) {
        let series: Vec<_> = r
            .trace_forms
            .iter()
            .map(|t| theta::f_k(t, PRECISION).unwrap())
            .collect();
        for (i, &p) in r.witness_primes.iter().enumerate() {
            for (j, s) in series.iter().enumerate() {
                if i == j {
                    assert!(s.coeffs[p as usize] > 0, "d={} witness {p} dead", r.d);
                } else {
                    assert_eq!(s.coeffs[p as usize], 0, "d={} witness {p} shared", r.d);
                }
            }
        }
    }
    println!(
        "criterion 4 PASS: exact rank = |C_d| everywhere; witnesses at N = {PRECISION} for \
         {witnessed} discriminants{}",
        if retried.is_empty() {
            String::new()
        } else {
            format!(", retried at N = {} for {retried:?}", 10 * PRECISION)
        }
    );
}

#[test]
fn criterion_05_first_terms_exhaustive() {
    let mut forms_checked = 0usize;
    for g in IMAG_GROUPS.iter() {
        // the GL2-reduced forms of this discriminant
        let reduced: Vec<&QuadForm> = g.elements().iter().filter(|q| q.b >= 0).collect();
        let mut seen: Vec<(theta::Fingerprint, &QuadForm)> = Vec::new();
        for q in reduced {
            let (_, m2, m3) = qform::successive_minima(q).unwrap();
            let n = (m2 + m3) as usize;
            let s = theta::theta_expand(q, n).unwrap();
            let fp = theta::first_two_nonzero(&s).unwrap_or_else(|_| {
                panic!("no fingerprint for {q} at N = {n}")
            });
            for (other_fp, other) in &seen {
                assert_ne!(
                    fp, *other_fp,
                    "disc {}: {q} and {other} share a fingerprint",
                    g.discriminant()
                );
            }
            seen.push((fp, q));
            forms_checked += 1;
        }
    }
    println!(
        "criterion 5 PASS: fingerprint equality iff reduced-form equality across \
         {forms_checked} GL2-reduced forms of all fundamental |disc| <= {DESK_DISC_BOUND}"
    );
}

#[test]
fn criterion_06_shared_prime_forces_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57ab1e);
    let discs: Vec<i64> = (-2000..=-3)
        .filter(|&d| arith::is_fundamental(d))
        .collect();
    let mut transformed = |rng: &mut ChaCha8Rng, q: &QuadForm| {
        let t = |k: i64| Mat2 { m: [[1, k], [0, 1]] };
        let s = Mat2 { m: [[0, -1], [1, 0]] };
        let mut m = t(rng.gen_range(-3..=3));
        for _ in 0..rng.gen_range(1..=2) {
            m = m.mul(&s).mul(&t(rng.gen_range(-3..=3)));
        }
        q.transform(&m)
    };
    let mut shared = 0usize;
    let mut disjoint = 0usize;
    while shared < 1000 {
        let disc = discs[rng.gen_range(0..discs.len())];
        let g = qform::class_group(disc).unwrap();
        let x = g.elements()[rng.gen_range(0..g.order())];
        let same_pair = rng.gen_bool(0.7);
        let y = if same_pair {
            if rng.gen_bool(0.5) {
                x
            } else {
                x.opposite()
            }
        } else {
            g.elements()[rng.gen_range(0..g.order())]
        };
        let q1 = transformed(&mut rng, &x);
        let q2 = transformed(&mut rng, &y);
        // search a common represented prime by enumeration
        let bound = 4 * disc.unsigned_abs();
        let c1 = qform::representation_counts(&q1, bound).unwrap();
        let c2 = qform::representation_counts(&q2, bound).unwrap();
        let common = (2..=bound)
            .find(|&n| c1[n as usize] > 0 && c2[n as usize] > 0 && arith::is_prime(n));
        match common {
            Some(p) => {
                shared += 1;
                assert!(
                    qform::equivalent(&q1, &q2, Convention::Gl2).unwrap(),
                    "disc {disc}: forms share prime {p} but are inequivalent"
                );
                for q in [&q1, &q2] {
                    let pf = qform::prime_form(q, p as i64).unwrap();
                    assert_eq!(pf.a, p as i64);
                    assert!(0 <= pf.b && pf.b <= p as i64);
                    assert_eq!(pf.discriminant(), q.discriminant());
                }
            }
            None => {
                // no shared prime: the classes must differ as GL2 classes
                assert!(
                    !qform::equivalent(&q1, &q2, Convention::Gl2).unwrap(),
                    "disc {disc}: equivalent forms found no common prime below {bound}"
                );
                disjoint += 1;
            }
        }
    }
    println!(
        "criterion 6 PASS: 1000 same-discriminant pairs sharing a prime were all \
         GL2-equivalent with valid prime forms ({disjoint} inequivalent pairs shared none)"
    );
}

#[test]
fn criterion_07_bounded_prime_search_never_fails() {
    let mut forms = 0usize;
    let mut worst = (0i64, 0i64);
    for g in IMAG_GROUPS.iter() {
        let bound = 4 * g.discriminant().abs();
        for q in g.elements() {
            let p = qform::smallest_represented_prime(q, bound).unwrap_or_else(|e| {
                panic!("disc {}: {q}: {e}", g.discriminant())
            });
            if p > worst.0 {
                worst = (p, g.discriminant());
            }
            forms += 1;
        }
    }
    println!(
        "criterion 7 PASS: least represented prime found within 4|disc| for all {forms} \
         reduced forms, |disc| <= {DESK_DISC_BOUND} (worst p = {} at disc {})",
        worst.0, worst.1
    );
}

#[test]
fn criterion_08_class_group_consistency() {
    // group axioms on every class group with |disc| <= 2000
    let mut groups = 0usize;
    for g in IMAG_GROUPS.iter().filter(|g| g.discriminant() >= -2000) {
        let id = g.identity();
        let elems = g.elements();
        for x in elems {
            assert_eq!(&g.compose(x, id), x);
            assert_eq!(&g.compose(x, &x.opposite()), id);
        }
        for x in elems {
            for y in elems {
                let xy = g.compose(x, y);
                assert!(elems.contains(&xy));
                for z in elems {
                    assert_eq!(
                        g.compose(&xy, z),
                        g.compose(x, &g.compose(y, z)),
                        "associativity fails in disc {}",
                        g.discriminant()
                    );
                }
            }
        }
        let _ = g.three_rank(); // panics internally unless a power of 3
        groups += 1;
    }

    // composition against the representation-set oracle on |disc| <= 300
    let mut oracle_pairs = 0usize;
    for g in IMAG_GROUPS.iter().filter(|g| g.discriminant() >= -300) {
        let disc = g.discriminant();
        let b1 = 2 * arith::isqrt(disc.unsigned_abs()) + 10;
        let b2 = b1 * b1;
        let proper_reps: Vec<BTreeSet<u64>> = g
            .elements()
            .iter()
            .map(|q| proper_representation_set(q, b2))
            .collect();
        for (i, x) in g.elements().iter().enumerate() {
            for (j, y) in g.elements().iter().enumerate() {
                let composed = g.compose(x, y);
                let products: BTreeSet<u64> = proper_reps[i]
                    .iter()
                    .flat_map(|&m1| {
                        proper_reps[j]
                            .iter()
                            .filter(move |&&m2| {
                                m1 <= b1 && m2 <= b1 && arith::gcd(m1 as i64, m2 as i64) == 1
                            })
                            .map(move |&m2| m1 * m2)
                    })
                    .collect();
                assert!(!products.is_empty(), "disc {disc}: no coprime products");
                let candidates: Vec<&QuadForm> = g
                    .elements()
                    .iter()
                    .zip(&proper_reps)
                    .filter(|(_, reps)| products.is_subset(reps))
                    .map(|(q, _)| q)
                    .collect();
                assert!(
                    candidates.contains(&&composed),
                    "disc {disc}: {x} * {y} = {composed} rejected by the oracle"
                );
                let mirror = qform::reduce_sl2(&composed.opposite()).unwrap().0;
                for c in candidates {
                    assert!(
                        *c == composed || *c == mirror,
                        "disc {disc}: oracle admits unrelated class {c}"
                    );
                }
                oracle_pairs += 1;
            }
        }
    }
    println!(
        "criterion 8 PASS: group axioms and 3-torsion counts over {groups} class groups \
         (|disc| <= 2000); composition matched the representation oracle on {oracle_pairs} \
         pairs (|disc| <= 300)"
    );
}

#[test]
fn criterion_09_nebentypus_shadow() {
    let out = &*SWEEP;
    let mut series = 0usize;
    for r in &out.reports {
        assert!(r.nebentypus_ok, "d={}: {:?}", r.d, r.failures);
        series += r.fields.len();
    }
    println!(
        "criterion 9 PASS: every represented prime p <= {PRECISION} coprime to d3 has \
         (d3/p) = 1, over {series} series"
    );
}

#[test]
fn criterion_10_determinism() {
    let run = |jobs: usize| {
        let cache = Cache::in_memory();
        let out = pipeline::verify_range(2, 5000, PRECISION, jobs, &cache).unwrap();
        serde_json::to_string(&out).unwrap()
    };
    let first = run(1);
    let second = run(1);
    let parallel = run(8);
    assert_eq!(first, second, "two sequential runs differ");
    assert_eq!(first, parallel, "--jobs 8 differs from --jobs 1");
    println!(
        "criterion 10 PASS: verify_range [2, 5000] byte-identical across repeated runs and \
         across --jobs 1 vs --jobs 8 ({} bytes)",
        first.len()
    );
}

/// Values properly represented by the form (gcd of the representing pair is
/// one), by direct box scan, independent of the library sweep.
fn proper_representation_set(q: &QuadForm, bound: u64) -> BTreeSet<u64> {
    let disc = q.discriminant();
    let (a, c) = (q.a as i128, q.c as i128);
    let n = bound as i128;
    let x_max = arith::isqrt_i128(4 * c * n / i128::from(-disc)) + 2;
    let y_max = arith::isqrt_i128(4 * a * n / i128::from(-disc)) + 2;
    let mut out = BTreeSet::new();
    for x in -x_max..=x_max {
        for y in -y_max..=y_max {
            if arith::gcd(x as i64, y as i64) != 1 {
                continue;
            }
            let v = q.a as i128 * x * x + q.b as i128 * x * y + q.c as i128 * y * y;
            if v >= 1 && v <= n {
                out.insert(v as u64);
            }
        }
    }
    out
}
