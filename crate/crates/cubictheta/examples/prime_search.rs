//! Represented primes: the bounded search behind the independence witness,
//! and the explicit reduction of a form to (p, b, c) with 0 <= b <= p once
//! it represents p.
//!
//! Run with: cargo run --example prime_search

use cubictheta::qform::{self, QuadForm};

fn main() {
    let g = qform::class_group(-687).unwrap();
    println!("least represented prime per class of discriminant -687:");
    for q in g.elements() {
        let p = qform::smallest_represented_prime(q, 4 * 687).unwrap();
        let pf = qform::prime_form(q, p).unwrap();
        println!("  {q}: p = {p}, equivalent prime form {pf}");
        assert_eq!(pf.a, p);
        assert!(0 <= pf.b && pf.b <= p);
        assert_eq!(pf.discriminant(), q.discriminant());
    }

    // two forms of one discriminant sharing a represented prime are
    // GL2-equivalent, so distinct classes hit disjoint primes
    let a = QuadForm::new(1, 1, 172); // principal, disc -687
    let b = QuadForm::new(2, 1, 86);
    let pa = qform::smallest_represented_prime(&a, 2748).unwrap();
    let pb = qform::smallest_represented_prime(&b, 2748).unwrap();
    println!("\nprincipal class least prime: {pa}; class (2, 1, 86) least prime: {pb}");
    assert!(!qform::equivalent(&a, &b, qform::Convention::Gl2).unwrap());
}
