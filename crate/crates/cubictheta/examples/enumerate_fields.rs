//! Enumerate totally real cubic fields of fundamental discriminant up to a
//! bound, via the reduced-Hessian scan over integral binary cubic forms.
//!
//! Run with: cargo run --release --example enumerate_fields

use cubictheta::{arith, cubic};

fn main() {
    let bound = 2000;
    println!("totally real cubic fields with fundamental discriminant <= {bound}:");
    let mut total = 0;
    for d in 2..=bound {
        if !arith::is_fundamental(d) {
            continue;
        }
        let fields = cubic::enumerate_cubic_fields(d).unwrap();
        if fields.is_empty() {
            continue;
        }
        total += fields.len();
        for f in &fields {
            let (p, q, r) = f.hessian();
            println!("  d = {d}: form {f}, Hessian ({p}, {q}, {r})");
        }
    }
    println!("{total} fields in total");
}
