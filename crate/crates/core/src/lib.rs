//! Verification toolkit for Grosswald's conjecture, `g(p) < sqrt(p) - 2`.
//!
//! The library has two halves. The computational half scans prime ranges for
//! record values of the least primitive root `g(p)`, the least prime
//! primitive root, and the least negative primitive root, checking the
//! conjectured inequality exactly along the way ([`records`], built on
//! [`sieve`], [`proots`] and [`modmath`]). The analytic half evaluates the
//! explicit Burgess-type character-sum criteria that settle the conjecture
//! for all sufficiently large primes ([`analytic`]).
//!
//! A discrete-logarithm [`oracle`] provides independent ground truth for
//! everything the fast path computes.

// Divisibility reads as `n % d == 0` throughout.
#![allow(clippy::manual_is_multiple_of)]

pub mod analytic;
pub mod error;
pub mod modmath;
pub mod oracle;
pub mod proots;
pub mod records;
pub mod sieve;

pub use error::{Error, Result};
