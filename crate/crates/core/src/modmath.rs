//! Modular arithmetic on 64-bit odd moduli.
//!
//! Multiplication and exponentiation run in Montgomery form with `R = 2^64`
//! and 128-bit intermediates; the public contract is stated on plain
//! residues, conversion happens internally. Moduli up to `2^63` are
//! supported so that `t + m*modulus` in the reduction never overflows
//! 128 bits.

use crate::error::{Error, Result};

/// Precomputed constants for Montgomery reduction modulo an odd `modulus`.
///
/// Invariants: `modulus * negated_inverse == -1 (mod 2^64)` and
/// `r_squared == 2^128 mod modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MontgomeryContext {
    modulus: u64,
    negated_inverse: u64,
    r_squared: u64,
}

impl MontgomeryContext {
    /// Builds a context for an odd modulus in `[3, 2^63)`.
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus < 3 || modulus % 2 == 0 || modulus >= (1 << 63) {
            return Err(Error::InvalidModulus(modulus));
        }
        // Newton iteration doubles the number of correct low bits per step;
        // the seed is exact to 3 bits for odd inputs.
        let mut inv: u64 = modulus;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(modulus.wrapping_mul(inv)));
        }
        debug_assert_eq!(modulus.wrapping_mul(inv), 1);
        let r_squared = (u128::MAX % modulus as u128 + 1) as u64 % modulus;
        Ok(MontgomeryContext {
            modulus,
            negated_inverse: inv.wrapping_neg(),
            r_squared,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// REDC: maps `t < modulus * 2^64` to `t * 2^-64 mod modulus`.
    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.negated_inverse);
        let reduced = ((t + m as u128 * self.modulus as u128) >> 64) as u64;
        if reduced >= self.modulus {
            reduced - self.modulus
        } else {
            reduced
        }
    }

    #[inline]
    pub fn to_montgomery(&self, x: u64) -> u64 {
        debug_assert!(x < self.modulus);
        self.redc(x as u128 * self.r_squared as u128)
    }

    #[inline]
    pub fn from_montgomery(&self, x: u64) -> u64 {
        self.redc(x as u128)
    }

    /// Product of two Montgomery-form residues, still in Montgomery form.
    #[inline]
    pub fn montgomery_mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    /// `a * b mod modulus` on plain residues.
    #[inline]
    pub fn mul_mod(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.modulus && b < self.modulus);
        self.redc(self.to_montgomery(a) as u128 * b as u128)
    }

    /// `base^exponent mod modulus` on plain residues; `exponent = 0` gives 1.
    pub fn pow_mod(&self, base: u64, exponent: u64) -> u64 {
        debug_assert!(base < self.modulus);
        let mut acc = self.redc(self.r_squared as u128); // 1 in Montgomery form
        let mut square = self.to_montgomery(base);
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.montgomery_mul(acc, square);
            }
            e >>= 1;
            if e > 0 {
                square = self.montgomery_mul(square, square);
            }
        }
        self.from_montgomery(acc)
    }
}

/// Jacobi symbol `(a/n)` for odd positive `n`; `a` may be any integer.
///
/// Returns -1, 0 or +1. For an odd prime `p` and `a` coprime to `p` this is
/// the Legendre symbol, so `-1` certifies that `a` is a quadratic
/// non-residue (Euler's criterion).
pub fn jacobi(a: i64, n: u64) -> Result<i32> {
    if n % 2 == 0 {
        return Err(Error::EvenJacobiModulus(n));
    }
    let mut num = (a.rem_euclid(n as i64)) as u64;
    let mut den = n;
    let mut sign = 1i32;
    while num != 0 {
        while num % 2 == 0 {
            num /= 2;
            if matches!(den % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut num, &mut den);
        if num % 4 == 3 && den % 4 == 3 {
            sign = -sign;
        }
        num %= den;
    }
    Ok(if den == 1 { sign } else { 0 })
}

/// Floor of the square root, exact for all `u64`.
pub fn integer_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r > 0 && (r as u128) * (r as u128) > n as u128 {
        r -= 1;
    }
    while ((r + 1) as u128) * ((r + 1) as u128) <= n as u128 {
        r += 1;
    }
    r
}

/// Floor of the `b`-th root of `n` for `b >= 1`, exact for all `u64`.
pub fn integer_nth_root(n: u64, b: u32) -> u64 {
    debug_assert!(b >= 1);
    if b == 1 || n <= 1 {
        return n;
    }
    if b == 2 {
        return integer_sqrt(n);
    }
    if b >= 64 {
        return 1;
    }
    let seed = (n as f64).powf(1.0 / b as f64) as u64;
    let mut root = seed.saturating_sub(4).max(1);
    while pow_fits(root + 1, b, n) {
        root += 1;
    }
    root
}

/// True when `base^exp <= limit`, computed without overflow.
fn pow_fits(base: u64, exp: u32, limit: u64) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc *= base as u128;
        if acc > limit as u128 {
            return false;
        }
    }
    true
}

/// True when `n = a^b` for some `a > 1` and `b >= min_exponent`.
///
/// `min_exponent = 2` detects all perfect powers; `min_exponent = 3` keeps
/// plain squares (e.g. 9) but rejects cubes and higher (8, 16, 27, ...).
pub fn is_perfect_power(n: u64, min_exponent: u32) -> bool {
    assert!(min_exponent >= 2);
    if n < 4 {
        return false;
    }
    let mut b = min_exponent;
    while (1u128 << b) <= n as u128 {
        let root = integer_nth_root(n, b);
        if root > 1 && pow_exact(root, b) == Some(n) {
            return true;
        }
        b += 1;
    }
    false
}

fn pow_exact(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc *= base as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}
