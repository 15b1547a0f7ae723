//! The 3-reflection d -> -3d/gcd(3,d)^2 on fundamental discriminants.
//!
//! Run with: cargo run --example three_reflection

use cubictheta::arith;

fn main() {
    println!("d     fundamental   d3 = reflection   (d3)3 = d?");
    for d in [-8, -4, -3, 1, 5, 8, 12, 24, 69, 229, 32009] {
        if !arith::is_fundamental(d) {
            println!("{d:<8} no");
            continue;
        }
        let d3 = arith::three_reflection(d).unwrap();
        let back = arith::three_reflection(d3).unwrap();
        println!(
            "{d:<8} yes           {d3:<12} {}",
            if back == d { "yes" } else { "NO" }
        );
    }

    // the reflection swaps signs and is an involution on the whole range
    let mut count = 0;
    for d in -5000..=5000i64 {
        if d != 0 && arith::is_fundamental(d) {
            let d3 = arith::three_reflection(d).unwrap();
            assert!(arith::is_fundamental(d3));
            assert_eq!(arith::three_reflection(d3).unwrap(), d);
            count += 1;
        }
    }
    println!("\ninvolution checked on {count} fundamental discriminants in [-5000, 5000]");
}
