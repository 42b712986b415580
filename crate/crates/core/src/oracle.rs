//! Brute-force ground truth for small primes.
//!
//! Everything here is deliberately naive: multiplicative orders by direct
//! iteration, least roots by definition with no skip rules, e-free counting
//! through a discrete-log table. The fast paths in [`crate::proots`] and
//! [`crate::records`] are tested against these.

use crate::error::{Error, Result};

/// Tables and naive sweeps are restricted to primes below this.
pub const ORACLE_LIMIT: u64 = 1_000_000;

/// Trial-division primality, independent of the sieve machinery.
pub fn is_small_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Product of the distinct primes of `n`.
fn radical(mut n: u64) -> u64 {
    let mut rad = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            rad *= d;
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        rad *= n;
    }
    rad
}

/// Least k >= 1 with `c^k = 1 (mod p)`, by direct iteration.
///
/// Requires `1 <= c < p` and `p` an odd prime below [`ORACLE_LIMIT`].
pub fn multiplicative_order(c: u64, p: u64) -> u64 {
    assert!(p < ORACLE_LIMIT && is_small_prime(p), "p={p} must be a prime below 10^6");
    assert!(c >= 1 && c < p, "c={c} out of range for p={p}");
    let mut acc = c;
    let mut k = 1;
    while acc != 1 {
        acc = acc * c % p;
        k += 1;
    }
    k
}

fn naive_search(p: u64, candidates: impl Iterator<Item = u64>) -> u64 {
    assert!((3..ORACLE_LIMIT).contains(&p) && is_small_prime(p), "p={p} must be an odd prime below 10^6");
    for c in candidates {
        if c >= p {
            break;
        }
        if multiplicative_order(c, p) == p - 1 {
            return c;
        }
    }
    unreachable!("every odd prime has a primitive root below p")
}

/// Least primitive root mod p over all integers 2, 3, 4, ...
pub fn naive_g(p: u64) -> u64 {
    naive_search(p, 2..)
}

/// Least prime primitive root mod p.
pub fn naive_ghat(p: u64) -> u64 {
    naive_search(p, (2..).filter(|&c| is_small_prime(c)))
}

/// Least magnitude m such that -m is a primitive root mod p.
pub fn naive_h(p: u64) -> u64 {
    assert!((3..ORACLE_LIMIT).contains(&p) && is_small_prime(p), "p={p} must be an odd prime below 10^6");
    (1..p)
        .find(|&m| multiplicative_order(p - m, p) == p - 1)
        .expect("every odd prime has a negative primitive root")
}

fn powmod(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u64 = 1;
    let mut sq = base % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (u128::from(acc) * u128::from(sq) % u128::from(p)) as u64;
        }
        sq = (u128::from(sq) * u128::from(sq) % u128::from(p)) as u64;
        exp >>= 1;
    }
    acc
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut factors = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            factors.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    factors
}

/// Whether p fails the Grosswald inequality g(p) < sqrt(p) - 2, decided by
/// scanning every candidate below the threshold.
///
/// A candidate passes only if it generates the full group, checked through
/// the prime factors of p-1 with schoolbook exponentiation. No skip rules,
/// no quadratic-residue prefilter, no Montgomery arithmetic, so a record
/// scan's violation list can be diffed against an independent source.
pub fn grosswald_violation(p: u64) -> bool {
    assert!((3..ORACLE_LIMIT).contains(&p) && is_small_prime(p), "p={p} must be an odd prime below 10^6");
    let factors = distinct_prime_factors(p - 1);
    let is_generator = |c: u64| factors.iter().all(|&q| powmod(c, (p - 1) / q, p) != 1);
    // g(p) >= sqrt(p) - 2 exactly when no c with (c+2)^2 < p generates.
    !(1..).take_while(|&c| (c + 2) * (c + 2) < p).any(is_generator)
}

/// Discrete-log table for one small prime.
///
/// `index_of(x)` is the exponent k with `generator^k = x (mod p)`; the map
/// is a bijection from `[1, p-1]` onto `[0, p-2]`.
pub struct OracleTable {
    pub p: u64,
    pub generator: u64,
    index_of: Vec<u32>,
}

impl OracleTable {
    pub fn build(p: u64) -> Result<OracleTable> {
        if p >= ORACLE_LIMIT {
            return Err(Error::OutOfDomain {
                name: "p",
                value: p.to_string(),
                domain: "odd primes below 10^6",
            });
        }
        if p < 3 || !is_small_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let generator = naive_g(p);
        let mut index_of = vec![0u32; p as usize];
        let mut acc = 1u64;
        for k in 0..p - 1 {
            index_of[acc as usize] = k as u32;
            acc = acc * generator % p;
        }
        Ok(OracleTable { p, generator, index_of })
    }

    pub fn index_of(&self, x: u64) -> u64 {
        assert!(x >= 1 && x < self.p, "x={x} out of range for p={}", self.p);
        u64::from(self.index_of[x as usize])
    }

    fn check_even_divisor(&self, e: u64) -> Result<()> {
        if e == 0 || e % 2 != 0 || (self.p - 1) % e != 0 {
            return Err(Error::OutOfDomain {
                name: "e",
                value: e.to_string(),
                domain: "even divisors of p-1",
            });
        }
        Ok(())
    }

    /// Number of x in `[n+1, n+h]`, reduced mod p with multiples of p
    /// excluded, that are e-free: x is not a q-th power residue for any
    /// prime q dividing e. In discrete-log form that is
    /// `gcd(index_of(x), Rad(e)) = 1`.
    pub fn count_e_free(&self, e: u64, n: u64, h: u64) -> Result<u64> {
        self.check_even_divisor(e)?;
        if h == 0 || h > self.p {
            return Err(Error::OutOfDomain {
                name: "h",
                value: h.to_string(),
                domain: "1 <= h <= p",
            });
        }
        let rad_e = radical(e);
        let mut count = 0;
        for x in n + 1..=n + h {
            let r = x % self.p;
            if r != 0 && gcd(u64::from(self.index_of[r as usize]), rad_e) == 1 {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Checks the sieve inequality on this table: with p_1..p_s the primes
    /// of p-1 missing from e,
    ///
    ///   N_{p-1}(h) >= sum_i N_{p_i e}(h) - (s-1) N_e(h)
    ///
    /// and its density form with theta(p_i) = 1 - 1/p_i and
    /// delta = 1 - sum_i 1/p_i,
    ///
    ///   N_{p-1}(h) >= delta N_e(h) + sum_i (N_{p_i e}(h) - theta(p_i) N_e(h)),
    ///
    /// the second evaluated exactly after scaling by the product of the p_i.
    /// Returns true iff both hold.
    pub fn verify_sieve_lemma(&self, e: u64, n: u64, h: u64) -> Result<bool> {
        self.check_even_divisor(e)?;
        let missing: Vec<u64> = {
            let rad_p1 = radical(self.p - 1);
            let mut qs = Vec::new();
            let mut rem = rad_p1;
            let mut d = 2;
            while d * d <= rem {
                if rem % d == 0 {
                    qs.push(d);
                    rem /= d;
                }
                d += 1;
            }
            if rem > 1 {
                qs.push(rem);
            }
            qs.into_iter().filter(|&q| e % q != 0).collect()
        };
        let s = missing.len() as i128;
        if s == 0 {
            return Err(Error::OutOfDomain {
                name: "e",
                value: e.to_string(),
                domain: "even divisors of p-1 with Rad(e) < Rad(p-1)",
            });
        }

        let n_full = self.count_e_free(self.p - 1, n, h)? as i128;
        let n_e = self.count_e_free(e, n, h)? as i128;
        let mut sum_terms = 0i128;
        for &q in &missing {
            sum_terms += self.count_e_free(q * e, n, h)? as i128;
        }
        let eq1 = n_full >= sum_terms - (s - 1) * n_e;

        // Scale the density form by P = prod p_i so every term is integral.
        let scale: i128 = missing.iter().map(|&q| q as i128).product();
        let mut rhs = 0i128;
        let mut delta_scaled = scale;
        for &q in &missing {
            let q = q as i128;
            let n_qe = self.count_e_free(q as u64 * e, n, h)? as i128;
            rhs += scale * n_qe - (scale - scale / q) * n_e;
            delta_scaled -= scale / q;
        }
        rhs += delta_scaled * n_e;
        let eq2 = scale * n_full >= rhs;

        Ok(eq1 && eq2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn euler_phi(mut n: u64) -> u64 {
        let mut phi = n;
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                phi -= phi / d;
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            phi -= phi / n;
        }
        phi
    }

    #[test]
    fn order_examples() {
        assert_eq!(multiplicative_order(2, 13), 12);
        assert_eq!(multiplicative_order(3, 13), 3);
        for p in [3u64, 5, 7, 409, 2791] {
            assert_eq!(multiplicative_order(1, p), 1, "order of 1 mod {p}");
            assert_eq!(multiplicative_order(p - 1, p), 2, "order of -1 mod {p}");
        }
    }

    #[test]
    fn order_divides_group_order() {
        for p in [13u64, 31, 97, 409] {
            for c in 1..p {
                assert_eq!((p - 1) % multiplicative_order(c, p), 0, "c={c} p={p}");
            }
        }
    }

    #[test]
    fn naive_roots_known_values() {
        assert_eq!(naive_g(3), 2);
        assert_eq!(naive_g(7), 3);
        assert_eq!(naive_g(409), 21);
        assert_eq!(naive_g(71761), 44);
        assert_eq!(naive_ghat(3), 2);
        assert_eq!(naive_ghat(41), 7, "g(41)=6 is composite, first prime root is 7");
        assert_eq!(naive_h(7), 2, "meaning -2");
        assert_eq!(naive_h(3), 1);
        assert_eq!(naive_h(409), 21, "409 = 1 mod 4, so |h| = g");
    }

    #[test]
    fn table_index_is_a_bijection() {
        for p in [3u64, 13, 31, 409, 997] {
            let table = OracleTable::build(p).unwrap();
            assert_eq!(table.index_of(1), 0, "p={p}");
            assert_eq!(table.index_of(table.generator), 1, "p={p}");
            let mut seen: Vec<u64> = (1..p).map(|x| table.index_of(x)).collect();
            seen.sort_unstable();
            let expected: Vec<u64> = (0..p - 1).collect();
            assert_eq!(seen, expected, "indices of p={p} must cover 0..p-2 once each");
        }
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(matches!(OracleTable::build(12), Err(Error::NotPrime(12))));
        assert!(matches!(OracleTable::build(0), Err(Error::NotPrime(0))));
        assert!(OracleTable::build(ORACLE_LIMIT + 3).is_err());
    }

    #[test]
    fn count_e_free_examples() {
        let table = OracleTable::build(13).unwrap();
        assert_eq!(table.count_e_free(4, 0, 12).unwrap(), 6, "odd indices mod 13");
        assert_eq!(table.count_e_free(12, 0, 12).unwrap(), euler_phi(12));
        assert_eq!(table.count_e_free(2, 0, 12).unwrap(), 6, "non-residues are half the group");

        for p in [31u64, 409, 997] {
            let table = OracleTable::build(p).unwrap();
            assert_eq!(
                table.count_e_free(p - 1, 0, p - 1).unwrap(),
                euler_phi(p - 1),
                "e = p-1 counts primitive roots of {p}"
            );
            assert_eq!(table.count_e_free(2, 0, p - 1).unwrap(), (p - 1) / 2);
        }
    }

    #[test]
    fn count_e_free_rejects_bad_arguments() {
        let table = OracleTable::build(13).unwrap();
        assert!(table.count_e_free(3, 0, 12).is_err(), "odd e");
        assert!(table.count_e_free(8, 0, 12).is_err(), "8 does not divide 12");
        assert!(table.count_e_free(4, 0, 0).is_err(), "empty window");
        assert!(table.count_e_free(4, 0, 14).is_err(), "window longer than p");
    }

    #[test]
    fn count_window_reduction_wraps_and_skips_zero() {
        let table = OracleTable::build(13).unwrap();
        // [10, 22] covers all residues once, 13 itself excluded.
        assert_eq!(
            table.count_e_free(4, 9, 13).unwrap(),
            table.count_e_free(4, 0, 12).unwrap()
        );
    }

    #[test]
    fn density_identity_below_2000() {
        // count_e_free(e, 0, p-1) = (p-1) prod_{q | e} (1 - 1/q), checked
        // exactly after clearing denominators.
        for p in (3u64..2000).filter(|&p| is_small_prime(p)) {
            let table = OracleTable::build(p).unwrap();
            for e in (2..=p - 1).step_by(2).filter(|e| (p - 1) % e == 0) {
                let rad = radical(e);
                let count = table.count_e_free(e, 0, p - 1).unwrap();
                assert_eq!(
                    count * rad,
                    (p - 1) * euler_phi(rad),
                    "density of {e}-free residues mod {p}"
                );
            }
        }
    }

    #[test]
    fn violation_test_agrees_with_naive_g() {
        for p in (3u64..2000).filter(|&p| is_small_prime(p)) {
            let g = naive_g(p);
            assert_eq!(
                grosswald_violation(p),
                (g + 2) * (g + 2) >= p,
                "violation flag at p={p} where g={g}"
            );
        }
    }

    #[test]
    fn last_violation_below_10000_is_409() {
        let last = (3u64..10_000)
            .filter(|&p| is_small_prime(p) && grosswald_violation(p))
            .max();
        assert_eq!(last, Some(409));
    }

    #[test]
    fn sieve_lemma_examples() {
        let t13 = OracleTable::build(13).unwrap();
        for n in 0..=12 {
            for h in 1..=13 {
                assert!(t13.verify_sieve_lemma(4, n, h).unwrap(), "p=13 e=4 n={n} h={h}");
            }
        }

        let t31 = OracleTable::build(31).unwrap();
        assert_eq!(t31.count_e_free(30, 0, 30).unwrap(), euler_phi(30));
        assert!(t31.verify_sieve_lemma(2, 0, 30).unwrap(), "p=31 e=2 misses 3 and 5");

        assert!(t13.verify_sieve_lemma(12, 0, 12).is_err(), "Rad(e)=Rad(p-1) rejected");
        assert!(t13.verify_sieve_lemma(6, 0, 12).is_err(), "Rad(6)=Rad(12) rejected");
    }

    #[test]
    fn sieve_lemma_holds_on_random_admissible_tuples() {
        let primes: Vec<u64> = (3u64..2000).filter(|&p| is_small_prime(p)).collect();
        let mut rng = StdRng::seed_from_u64(42);
        let mut checked = 0;
        while checked < 200 {
            let p = primes[rng.gen_range(0..primes.len())];
            let admissible: Vec<u64> = (2..=p - 1)
                .step_by(2)
                .filter(|&e| (p - 1) % e == 0 && radical(e) < radical(p - 1))
                .collect();
            if admissible.is_empty() {
                continue;
            }
            let table = OracleTable::build(p).unwrap();
            let e = admissible[rng.gen_range(0..admissible.len())];
            let n = rng.gen_range(0..2 * p);
            let h = rng.gen_range(1..=p);
            assert!(
                table.verify_sieve_lemma(e, n, h).unwrap(),
                "sieve inequality failed at p={p} e={e} n={n} h={h}"
            );
            checked += 1;
        }
    }
}
