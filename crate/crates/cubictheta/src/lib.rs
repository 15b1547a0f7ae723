//! Weight-one theta series attached to totally real cubic fields.
//!
//! For a totally real cubic field K of positive fundamental discriminant d,
//! the trace form on the trace-zero part of the ring of integers, rescaled by
//! 2 gcd(3, d), is a primitive integral positive definite binary quadratic
//! form of discriminant d3 = -3d/gcd(3,d)^2. Its theta series determines K up
//! to isomorphism, and over all fields of discriminant d these series are
//! linearly independent. This crate builds the objects with exact integer
//! arithmetic and machine-checks those statements over ranges of
//! discriminants:
//!
//! - [`arith`]: primality, Kronecker symbol, fundamental discriminants, the
//!   3-reflection d -> -3d/gcd(3,d)^2.
//! - [`qform`]: binary quadratic forms, SL2/GL2 reduction, representation
//!   counts, Gauss composition, class groups and their 3-rank.
//! - [`cubic`]: enumeration of totally real cubic fields by integral binary
//!   cubic forms, cubic rings with explicit multiplication tables, and the
//!   rescaled trace form.
//! - [`theta`]: exact q-expansions, the two-term fingerprint, and exact
//!   linear-independence testing with witness primes.
//! - [`pipeline`]: per-discriminant and range verification with structured
//!   reports and an on-disk cache.
//! - [`cli`]: the command-line front end (`enumerate`, `theta`, `classgroup`,
//!   `verify`).
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod arith;
pub mod cli;
pub mod cubic;
pub mod pipeline;
pub mod qform;
pub mod theta;
