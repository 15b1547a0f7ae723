//! Class groups on both sides of the reflection: the imaginary quadratic
//! form class group Cl(d3) with its composition law, and the narrow class
//! group of the real field Q(sqrt(d)) whose 3-rank counts the cubic fields.
//!
//! Run with: cargo run --example class_group

use cubictheta::qform;

fn main() {
    // imaginary side: reduced forms of discriminant -687 = reflection of 229
    let g = qform::class_group(-687).unwrap();
    println!("Cl(-687): h = {}, 3-rank = {}", g.order(), g.three_rank());
    for q in g.elements() {
        println!("  {q}");
    }

    // composition: the class group is an actual group
    let x = &g.elements()[1];
    let inv = x.opposite();
    println!("\n{x} composed with {inv} = {}", g.compose(x, &inv));
    let mut power = *g.identity();
    for k in 1..=g.order() {
        power = g.compose(&power, x);
        if &power == g.identity() {
            println!("{x} has order {k}");
            break;
        }
    }

    // real side: rho-cycles of indefinite forms of discriminant 229
    let real = qform::real_class_group(229).unwrap();
    println!(
        "\nnarrow class group of Q(sqrt(229)): h+ = {}, 3-rank = {}",
        real.narrow_class_number(),
        real.three_rank()
    );
    println!(
        "cubic fields of discriminant 229 expected: (3^{} - 1)/2 = {}",
        real.three_rank(),
        (3usize.pow(real.three_rank()) - 1) / 2
    );
}
