//! A computational number theory workbench around Romanoff-type density
//! questions: how often is n <= x a sum a_i + b_j for two integer sequences
//! A and B?
//!
//! The crate measures everything such a question rests on:
//!
//! - representation counts r(n) and their second-moment decomposition
//!   S1 + S2 + S3, with threshold/density reports ([`engine`]);
//! - the nine sequence families (primes, sums of two squares, polynomial
//!   images, power towers a^{f(·)}, curve orders) with exact counting,
//!   multiplicity, and congruence profiles ([`sequences`]);
//! - elliptic-curve group orders over F_p with Hasse validation, order
//!   multiplicities, and congruence statistics ([`elliptic`]);
//! - totient moment sums, multiplicative-order sums, progression counts in
//!   S′, and the two elementary analytic inequalities backing them
//!   ([`moments`]);
//! - exact integer primitives underneath it all ([`arith`]).
//!
//! Every runnable capability has a matching file under `examples/`; the
//! `romanoff` binary drives the same experiments from flags or a config file
//! and writes CSV/JSON reports ([`experiment`]).
//!
//! All computations are deterministic: integer results are exact, and every
//! floating-point report accumulates in a fixed order, so a repeated run
//! (at any worker count) reproduces reports byte for byte.

pub mod arith;
pub mod elliptic;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod moments;
pub mod report;
pub mod sequences;
pub mod util;

pub use error::{Error, Result};
