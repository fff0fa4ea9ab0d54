//! Exact orbits of the quadratic Collatz-type maps: the divide-or-choose-2
//! rule `Q(n) = n(n−1)/2` and the symmetric rule `S(n) = (n²−1)/4` on odd
//! inputs (both halve even inputs), with the linear maps `T`, `F` and the
//! `(n+1)n/2` variant for comparison.
//!
//! - [`arith`]: 2-adic decompositions and `n choose 2`.
//! - [`maps`]: the step functions.
//! - [`orbit`]: budgeted runs, cycle detection, k-sequences.
//! - [`theorems`]: instance checks of the cycle, stopping-time and chain
//!   results, and budgeted probes.
//! - [`scan`]: parallel range classification with ordered output.
//! - [`pitfall`]: the same map in `f64`, for contrast.
//! - [`cli`]: the `quadcollatz` command line.

pub mod arith;
pub mod cli;
pub mod maps;
pub mod orbit;
pub mod pitfall;
pub mod scan;
pub mod theorems;

pub use arith::Nat;
pub use maps::MapKind;
pub use orbit::{run, Budget, OrbitOutcome};
