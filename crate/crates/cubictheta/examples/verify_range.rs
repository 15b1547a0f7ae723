//! End-to-end verification of a discriminant range: enumeration counts
//! against the class-group 3-ranks, trace-form properties, injectivity
//! fingerprints, and exact linear independence with witnesses.
//!
//! Run with: cargo run --release --example verify_range

use cubictheta::pipeline::{self, Cache};

fn main() {
    let cache = Cache::in_memory();
    let outcome = pipeline::verify_range(2, 1000, 1000, 1, &cache).unwrap();

    for r in outcome.reports.iter().filter(|r| !r.fields.is_empty()) {
        println!(
            "d={} d3={} fields={} trace_forms={:?} witnesses={:?} {}",
            r.d,
            r.d3,
            r.fields.len(),
            r.trace_forms,
            r.witness_primes,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    let s = &outcome.summary;
    println!(
        "\n[{}, {}]: {} fundamental discriminants, {} fields, all pass: {}",
        s.d_min, s.d_max, s.discriminants, s.total_fields, s.all_pass
    );
    println!("histogram (fields per discriminant): {:?}", s.histogram);
}
