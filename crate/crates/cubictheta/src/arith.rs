//! Exact elementary number theory shared by the other modules: deterministic
//! primality, Kronecker symbol, fundamental-discriminant predicates, and the
//! 3-reflection d -> -3d/gcd(3,d)^2.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
}

/// A quadratic discriminant: an integer congruent to 0 or 1 mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Discriminant(i64);

impl Discriminant {
    /// Accepts any integer ≡ 0 or 1 (mod 4).
    pub fn new(value: i64) -> Option<Self> {
        if value.rem_euclid(4) <= 1 {
            Some(Discriminant(value))
        } else {
            None
        }
    }

    /// Requires the stronger fundamental-discriminant condition.
    pub fn fundamental(value: i64) -> Result<Self, ArithError> {
        if is_fundamental(value) {
            Ok(Discriminant(value))
        } else {
            Err(ArithError::NotFundamental(value))
        }
    }

    pub fn value(self) -> i64 {
        self.0
    }

    pub fn is_fundamental(self) -> bool {
        is_fundamental(self.0)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    gcd(gcd(a, b), c)
}

/// Extended gcd: returns (g, u, v) with g = u*a + v*b and g = gcd(a, b) >= 0.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Floor of the square root, exact for all u64.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).map_or(true, |s| s > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |s| s <= n) {
        x += 1;
    }
    x
}

/// Floor of the square root, exact for all nonnegative i128.
pub fn isqrt_i128(n: i128) -> i128 {
    assert!(n >= 0, "isqrt of negative number");
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as i128;
    if x < 1 {
        x = 1;
    }
    // Newton correction: the f64 seed is close but not exact for wide values.
    loop {
        let next = (x + n / x) / 2;
        if next >= x {
            break;
        }
        x = next;
    }
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Exact perfect-square test; returns the root when n is a square.
pub fn square_root_exact(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt_i128(n);
    (r * r == n).then_some(r)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin witness set, valid for every n < 2^64.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality test for all n up to 2^64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let trailing = (n - 1).trailing_zeros();
    let odd = (n - 1) >> trailing;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, odd, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..trailing {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Sieve of Eratosthenes; primes p <= limit in increasing order.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
}

pub fn is_squarefree(n: i64) -> bool {
    let mut m = n.unsigned_abs();
    if m == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

/// Kronecker symbol (a/b) with the standard conventions, following the
/// classical iterative algorithm (Cohen, Algorithm 1.4.10).
pub fn kronecker(a: i64, b: i64) -> i32 {
    // (2/a) indexed by a mod 8, for odd a
    const TAB2: [i32; 8] = [0, 1, 0, -1, 0, -1, 0, 1];
    let (mut a, mut b) = (a, b);
    if b == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let mut v = 0;
    while b % 2 == 0 {
        b /= 2;
        v += 1;
    }
    let mut k = if v % 2 == 0 {
        1
    } else {
        TAB2[(a & 7) as usize]
    };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    loop {
        if a == 0 {
            return if b > 1 { 0 } else { k };
        }
        v = 0;
        while a % 2 == 0 {
            a /= 2;
            v += 1;
        }
        if v % 2 == 1 {
            k *= TAB2[(b & 7) as usize];
        }
        // quadratic reciprocity; both a and b are odd here
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

/// True iff d is the discriminant of a quadratic field. d = 1 (the
/// discriminant of the rationals) is accepted so that the 3-reflection is an
/// involution without exceptions.
pub fn is_fundamental(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if d == 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            let r = m.rem_euclid(4);
            (r == 2 || r == 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// The 3-reflection d3 = -3d / gcd(3, d)^2. Maps fundamental discriminants to
/// fundamental discriminants of the opposite sign and is an involution.
pub fn three_reflection(d: i64) -> Result<i64, ArithError> {
    if !is_fundamental(d) {
        return Err(ArithError::NotFundamental(d));
    }
    let g: i128 = if d % 3 == 0 { 3 } else { 1 };
    let r = -3 * d as i128 / (g * g);
    i64::try_from(r).map_err(|_| ArithError::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_basics() {
        assert!(!is_prime(1));
        assert!(is_prime(2));
        // 687 = 3 * 229
        assert!(!is_prime(687));
        assert!(is_prime(229));
        assert!(is_prime(2_147_483_647)); // 2^31 - 1
    }

    #[test]
    fn primality_agrees_with_trial_division() {
        let trial = |n: u64| {
            if n < 2 {
                return false;
            }
            let mut p = 2;
            while p * p <= n {
                if n % p == 0 {
                    return false;
                }
                p += 1;
            }
            true
        };
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
    }

    #[test]
    fn sieve_matches_is_prime() {
        let primes = primes_up_to(10_000);
        assert_eq!(primes.len(), 1229);
        for &p in &primes {
            assert!(is_prime(p));
        }
    }

    #[test]
    fn kronecker_examples() {
        for n in [-7i64, -2, 1, 2, 3, 10, 97] {
            assert_eq!(kronecker(1, n), 1);
        }
        assert_eq!(kronecker(-3, 7), 1);
        assert_eq!(kronecker(-687, 3), 0);
        assert_eq!(kronecker(1, 0), 1);
        assert_eq!(kronecker(-1, 0), 1);
        assert_eq!(kronecker(5, 0), 0);
        // (d/2) table: 0, 1, -1 for d = 0, +-1, +-3 mod 8
        assert_eq!(kronecker(8, 2), 0);
        assert_eq!(kronecker(17, 2), 1);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-3, 2), -1);
    }

    #[test]
    fn kronecker_matches_legendre_on_odd_primes() {
        // Legendre via Euler's criterion
        for &p in &[3u64, 5, 7, 11, 13, 101, 229] {
            for d in -30i64..30 {
                let e = pow_mod(d.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
                let legendre = if e == 0 {
                    0
                } else if e == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(d, p as i64), legendre, "({d}/{p})");
            }
        }
    }

    #[test]
    fn kronecker_completely_multiplicative() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..10_000 {
            let d = (next() % 2001) as i64 - 1000;
            let m = (next() % 401) as i64 - 200;
            let n = (next() % 401) as i64 - 200;
            if let Some(mn) = m.checked_mul(n) {
                assert_eq!(
                    kronecker(d, mn),
                    kronecker(d, m) * kronecker(d, n),
                    "d={d} m={m} n={n}"
                );
            }
        }
    }

    #[test]
    fn fundamental_examples() {
        assert!(is_fundamental(5));
        assert!(is_fundamental(12)); // 4 * 3, 3 squarefree, 3 mod 4 = 3
        assert!(!is_fundamental(9));
        assert!(is_fundamental(1));
        assert!(!is_fundamental(0));
        assert!(is_fundamental(-3));
        assert!(is_fundamental(-4));
        assert!(is_fundamental(-8));
        assert!(!is_fundamental(-12));
        assert!(is_fundamental(229));
        assert!(is_fundamental(-687));
    }

    #[test]
    fn three_reflection_examples() {
        assert_eq!(three_reflection(5).unwrap(), -15);
        assert_eq!(three_reflection(24).unwrap(), -8);
        assert_eq!(three_reflection(229).unwrap(), -687);
        assert_eq!(three_reflection(-3).unwrap(), 1);
        assert_eq!(three_reflection(1).unwrap(), -3);
        assert!(matches!(
            three_reflection(9),
            Err(ArithError::NotFundamental(9))
        ));
    }

    #[test]
    fn three_reflection_is_an_involution() {
        for d in -10_000..=10_000i64 {
            if !is_fundamental(d) {
                continue;
            }
            let d3 = three_reflection(d).unwrap();
            assert!(is_fundamental(d3), "d3 = {d3} of d = {d} not fundamental");
            assert!(d3.signum() != d.signum());
            assert_eq!(three_reflection(d3).unwrap(), d, "involution fails at {d}");
        }
    }

    #[test]
    fn isqrt_exact() {
        for n in 0..50_000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        assert_eq!(isqrt(u64::MAX), 4_294_967_295);
        for n in [0i128, 1, 2, 3, 4, 228, 229, 230, 1 << 80] {
            let r = isqrt_i128(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        assert_eq!(square_root_exact(27), None);
        assert_eq!(square_root_exact(1 << 80), Some(1 << 40));
    }

    #[test]
    fn ext_gcd_bezout() {
        for a in -50..50i64 {
            for b in -50..50i64 {
                let (g, u, v) = ext_gcd(a, b);
                assert_eq!(g, gcd(a, b));
                assert_eq!(u * a + v * b, g);
            }
        }
    }
}
