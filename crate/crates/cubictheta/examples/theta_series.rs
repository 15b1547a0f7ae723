//! Theta q-expansions, the two-term fingerprint, and exact linear
//! independence with the witness primes from the independence proof.
//!
//! Run with: cargo run --example theta_series

use cubictheta::{cubic, qform, theta};

fn main() {
    // the theta series of the 229 trace form
    let ring = cubic::ring_of(&cubic::CubicForm::new(1, 0, -4, -1)).unwrap();
    let t = qform::reduce_gl2(&cubic::trace_form(&ring).unwrap()).unwrap();
    let series = theta::f_k(&t, 100).unwrap();
    println!(
        "f for the field of discriminant 229: level {}, nebentypus ({}/.)",
        series.level, series.disc
    );
    println!("a(0..30) = {:?}", &series.coeffs[..=30]);
    let ((n1, a1), (n2, a2)) = theta::first_two_nonzero(&series).unwrap();
    println!("fingerprint: a({n1}) = {a1}, a({n2}) = {a2}");

    // the three classes of discriminant -23 give only two distinct series:
    // mirror classes represent the same integers
    let g = qform::class_group(-23).unwrap();
    let all: Vec<_> = g
        .elements()
        .iter()
        .map(|q| theta::theta_expand(q, 200).unwrap())
        .collect();
    println!("\ndisc -23 classes: {:?}", g.elements());
    match theta::linearly_independent(&all).unwrap() {
        theta::Independence::Dependent { rank } => {
            println!("all three series together: rank {rank} (mirrors coincide)")
        }
        other => println!("{other:?}"),
    }

    // one per GL2 class is independent, with witness primes
    let distinct = [all[0].clone(), all[2].clone()];
    match theta::linearly_independent(&distinct).unwrap() {
        theta::Independence::IndependentWithWitnesses { witness_primes } => {
            println!(
                "principal + one mirror class: independent, witness primes {witness_primes:?}"
            );
        }
        other => println!("{other:?}"),
    }

    println!("\nserialized: {}", serde_json::to_string(&series).unwrap());
}
