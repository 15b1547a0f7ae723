//! From a cubic form to its ring of integers, the trace-zero lattice, and
//! the rescaled trace form of reflected discriminant.
//!
//! Run with: cargo run --example trace_form

use cubictheta::{cubic, qform};

fn main() {
    // x^3 - 4x - 1, the field of discriminant 229
    let form = cubic::CubicForm::new(1, 0, -4, -1);
    println!("cubic form {form}, discriminant {}", form.discriminant());

    let ring = cubic::ring_of(&form).unwrap();
    let w = [0, 1, 0];
    let t = [0, 0, 1];
    println!("multiplication table on the basis (1, w, t):");
    println!("  w^2 = {:?}", ring.mul(w, w));
    println!("  w t = {:?}", ring.mul(w, t));
    println!("  t^2 = {:?}", ring.mul(t, t));
    println!("traces: tr(1) = {}, tr(w) = {}, tr(t) = {}",
        ring.trace([1, 0, 0]), ring.trace(w), ring.trace(t));

    let lattice = cubic::trace_zero(&ring);
    println!("\ntrace-zero basis: {:?}, {:?}", lattice.basis[0], lattice.basis[1]);
    println!("Gram matrix of the trace pairing: {:?}", lattice.gram);
    let t0_disc = (2 * lattice.gram[0][1]).pow(2) - 4 * lattice.gram[0][0] * lattice.gram[1][1];
    println!("trace-zero form discriminant: {t0_disc} = -12 * {}", form.discriminant());

    let trace_form = cubic::trace_form(&ring).unwrap();
    let reduced = qform::reduce_gl2(&trace_form).unwrap();
    println!(
        "\nrescaled trace form {trace_form}, reduced {reduced}, discriminant {}",
        trace_form.discriminant()
    );
    println!("primitive: {}", trace_form.is_primitive());
}
