//! Reed-Solomon coded proof polynomials for exact counting problems.
//!
//! A problem instance is turned into a univariate polynomial `P` over a prime
//! field whose evaluations at `0, 1, ..., e-1` are computed by simulated nodes.
//! The evaluations form a Reed-Solomon codeword, so `P` can be recovered even
//! when some nodes misbehave, and anyone holding the input can spot-check the
//! recovered coefficients at a random point. The integer answer is read off
//! the coefficients or from sums of evaluations, over several primes
//! combined by the Chinese Remainder Theorem.

pub mod bipoly;
pub mod engine;
pub mod error;
pub mod exact;
pub mod field;
pub mod form62;
pub mod graph;
pub mod oracle;
pub mod poly;
pub mod rs;
pub mod task;
pub mod tasks;
pub mod tensor;
pub mod yates;

pub use error::{DecodeFailure, Error, Result};
pub use field::{find_prime, FieldElement, Modulus};
pub use poly::{lagrange_basis_at, poly_eval, poly_interpolate, Poly};
