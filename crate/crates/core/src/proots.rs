//! Least primitive-root searches.
//!
//! A candidate `c` is a primitive root mod an odd prime `p` exactly when it
//! is a quadratic non-residue (Euler's criterion via the Jacobi symbol, the
//! cheap first gate) and `c^((p-1)/q) != 1` for every odd prime `q`
//! dividing `(p-1)/2`. The factor lists come from [`crate::sieve`].
//!
//! Candidate streams skip values that can never be a least primitive root:
//! perfect powers `a^b` with `b >= 2` for the positive search (if `a^b`
//! generates, the smaller `a` does too), and `b >= 3` for the negative
//! search, where squares must be kept (`-4` can be a least negative
//! primitive root but `-8` cannot).

use std::sync::OnceLock;

use crate::modmath::{is_perfect_power, jacobi, MontgomeryContext};
use crate::sieve::FactoredPrime;

/// Which candidate stream a search walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateKind {
    /// 2, 3, 5, 6, 7, 10, ... (perfect powers removed).
    AllNonpowers,
    /// 2, 3, 5, 7, 11, ... (primes).
    PrimesOnly,
    /// Magnitudes 1, 2, 3, 4, 5, 6, 7, 9, 10, ... (cubes and higher
    /// powers removed, squares retained).
    NegativeNonpowers,
}

/// Ascending candidate stream for `kind`; never yields values the
/// corresponding least-root search may skip.
pub fn candidates(kind: CandidateKind) -> Candidates {
    Candidates {
        kind,
        cursor: match kind {
            CandidateKind::NegativeNonpowers => 0,
            _ => 1,
        },
        primes: Vec::new(),
    }
}

pub struct Candidates {
    kind: CandidateKind,
    cursor: u64,
    primes: Vec<u64>,
}

const SKIP_CACHE_LIMIT: u64 = 4096;

fn skip_cache(min_exponent: u32) -> &'static [bool] {
    static SQUARES_UP: OnceLock<Vec<bool>> = OnceLock::new();
    static CUBES_UP: OnceLock<Vec<bool>> = OnceLock::new();
    let cell = if min_exponent == 2 { &SQUARES_UP } else { &CUBES_UP };
    cell.get_or_init(|| {
        (0..SKIP_CACHE_LIMIT)
            .map(|n| is_perfect_power(n, min_exponent))
            .collect()
    })
}

fn is_skipped_power(n: u64, min_exponent: u32) -> bool {
    if n < SKIP_CACHE_LIMIT {
        skip_cache(min_exponent)[n as usize]
    } else {
        is_perfect_power(n, min_exponent)
    }
}

impl Iterator for Candidates {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        match self.kind {
            CandidateKind::AllNonpowers => loop {
                self.cursor += 1;
                if !is_skipped_power(self.cursor, 2) {
                    return Some(self.cursor);
                }
            },
            CandidateKind::NegativeNonpowers => loop {
                self.cursor += 1;
                if !is_skipped_power(self.cursor, 3) {
                    return Some(self.cursor);
                }
            },
            CandidateKind::PrimesOnly => loop {
                self.cursor += 1;
                let n = self.cursor;
                let is_prime = n >= 2
                    && self
                        .primes
                        .iter()
                        .take_while(|&&q| q * q <= n)
                        .all(|&q| n % q != 0);
                if is_prime {
                    self.primes.push(n);
                    return Some(n);
                }
            },
        }
    }
}

/// True when `c` generates the multiplicative group mod `fp.p`.
///
/// `ctx` must be a context for `fp.p`; `c` must lie in `[1, p)`.
pub fn is_primitive_root(c: u64, fp: &FactoredPrime, ctx: &MontgomeryContext) -> bool {
    let p = fp.p;
    debug_assert_eq!(ctx.modulus(), p);
    debug_assert!(c >= 1 && c < p);
    // Euler's criterion: a generator is a non-residue, and for prime p the
    // Jacobi symbol is the Legendre symbol. This also settles the prime 2
    // of p-1, so only odd factors need a power test.
    if !matches!(jacobi(c as i64, p), Ok(-1)) {
        return false;
    }
    fp.odd_factors
        .iter()
        .all(|&q| ctx.pow_mod(c, (p - 1) / q) != 1)
}

fn context_for(fp: &FactoredPrime) -> MontgomeryContext {
    MontgomeryContext::new(fp.p).expect("factored primes are odd and below 2^63")
}

fn search(fp: &FactoredPrime, kind: CandidateKind, map: impl Fn(u64, u64) -> u64) -> u64 {
    let ctx = context_for(fp);
    for m in candidates(kind) {
        if m >= fp.p {
            break;
        }
        if is_primitive_root(map(m, fp.p), fp, &ctx) {
            return m;
        }
    }
    unreachable!("every odd prime has a primitive root below p")
}

/// `g(p)`: the least primitive root mod `fp.p`.
pub fn least_primitive_root(fp: &FactoredPrime) -> u64 {
    search(fp, CandidateKind::AllNonpowers, |c, _| c)
}

/// The least prime primitive root mod `fp.p`.
pub fn least_prime_primitive_root(fp: &FactoredPrime) -> u64 {
    search(fp, CandidateKind::PrimesOnly, |c, _| c)
}

/// `|h(p)|`: the least magnitude `m` such that `-m` is a primitive root
/// mod `fp.p`.
///
/// When `p = 1 (mod 4)`, negation preserves primitive roots, so `|h(p)| =
/// g(p)`; passing `g_already_known` short-circuits the search in that case.
pub fn least_negative_primitive_root(fp: &FactoredPrime, g_already_known: Option<u64>) -> u64 {
    if fp.p % 4 == 1 {
        if let Some(g) = g_already_known {
            return g;
        }
    }
    search(fp, CandidateKind::NegativeNonpowers, |m, p| p - m)
}
