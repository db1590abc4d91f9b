//! Exact integer arithmetic primitives: sieve, factorization, totient,
//! Legendre symbol, multiplicative order, polynomial congruence roots, and
//! prime counting in progressions.

pub mod factor;
pub mod modular;
pub mod poly;
pub mod sieve;

pub use factor::{euler_phi, euler_phi_spf, euler_phi_u64, gcd, isqrt, Factorization};
pub use modular::{is_prime_u64, legendre_symbol, mod_pow, multiplicative_order};
pub use poly::{konyagin_report, poly_congruence_roots, KonyaginReport, Polynomial};
pub use sieve::{prime_count_progression, PrimeSieve, ProgressionCount, SpfTable};
