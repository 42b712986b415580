//! Segmented sieve of Eratosthenes plus a companion factorization sieve.
//!
//! The factorization sieve is the workhorse of the record scans: for every
//! prime `p` in a range it produces the distinct odd primes dividing
//! `(p-1)/2`, which is exactly the data a primitive-root test needs. Both
//! sieves work on fixed-width segments aligned to absolute multiples of the
//! segment width, so a range split at any segment boundary yields identical
//! results to an unsplit run.
//!
//! Memory stays proportional to the segment width plus the base primes up
//! to `sqrt(high)`; nothing is ever materialized for the whole range.

use crate::error::{Error, Result};
use crate::modmath::integer_sqrt;

/// Default segment width, `2^20`.
pub const DEFAULT_SEGMENT_WIDTH: u64 = 1 << 20;

/// Smallest accepted segment width, `2^10`.
pub const MIN_SEGMENT_WIDTH: u64 = 1 << 10;

/// Largest supported scan endpoint, `2^63`.
pub const MAX_BOUND: u64 = 1 << 63;

/// A prime `p` together with the distinct odd primes dividing `(p-1)/2`,
/// in ascending order. These are also the odd primes dividing `p-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredPrime {
    pub p: u64,
    pub odd_factors: Vec<u64>,
}

/// All primes `<= limit`, ascending. Empty when `limit < 2`.
pub fn base_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return vec![];
    }
    // Odd-only sieve: slot i represents 2i + 3.
    let slots = ((limit.saturating_sub(1)) / 2) as usize;
    let mut composite = vec![false; slots];
    let mut i = 0usize;
    while {
        let q = 2 * i as u64 + 3;
        q * q <= limit
    } {
        if !composite[i] {
            let q = 2 * i as u64 + 3;
            let mut multiple = q * q;
            while multiple <= limit {
                composite[((multiple - 3) / 2) as usize] = true;
                multiple += 2 * q;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(slots / 2 + 1);
    primes.push(2);
    for (i, &c) in composite.iter().enumerate() {
        if !c {
            primes.push(2 * i as u64 + 3);
        }
    }
    primes
}

/// Primality flags for one segment `[low, high)`.
#[derive(Debug, Clone)]
pub struct Segment {
    low: u64,
    high: u64,
    composite: Vec<bool>,
}

impl Segment {
    pub fn low(&self) -> u64 {
        self.low
    }

    pub fn high(&self) -> u64 {
        self.high
    }

    pub fn is_prime(&self, n: u64) -> bool {
        debug_assert!(n >= self.low && n < self.high);
        !self.composite[(n - self.low) as usize]
    }

    /// Primes of the segment, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(move |(i, _)| self.low + i as u64)
    }
}

/// Sieves `[low, high)` using `base`, which must contain every prime up to
/// `integer_sqrt(high - 1)`.
pub fn sieve_segment(low: u64, high: u64, base: &[u64]) -> Segment {
    assert!(low < high);
    // A complete base has its largest prime >= root/2 (Bertrand); this
    // cannot prove completeness but catches grossly insufficient bases.
    let root = integer_sqrt(high - 1);
    assert!(
        root < 2 || base.last().is_some_and(|&b| b * 2 >= root),
        "base primes must cover sqrt(high)"
    );
    let mut composite = vec![false; (high - low) as usize];
    for n in low..high.min(2) {
        composite[(n - low) as usize] = true; // 0 and 1 are not prime
    }
    for &q in base {
        if q > root {
            break;
        }
        let start = (q * q).max(low.div_ceil(q) * q);
        let mut multiple = start;
        while multiple < high {
            composite[(multiple - low) as usize] = true;
            multiple += q;
        }
    }
    Segment {
        low,
        high,
        composite,
    }
}

/// Factors `(p-1)/2` for every prime `p` in the segment, which must start
/// at 3 or above. `base` must contain every prime up to
/// `integer_sqrt(seg.high() - 1)`.
pub(crate) fn factor_segment(seg: &Segment, base: &[u64]) -> Vec<FactoredPrime> {
    assert!(seg.low >= 3);
    let (low, high) = (seg.low, seg.high);

    // Positions of primes in the segment; only odd p occur since low >= 3.
    let mut out: Vec<FactoredPrime> = Vec::new();
    // Maps a shifted value m = (p-1)/2 to the index of p in `out`;
    // u32::MAX marks slots whose n is composite or even.
    let m_low = low / 2;
    let m_high = high / 2;
    let mut slot_of: Vec<u32> = vec![u32::MAX; (m_high - m_low) as usize];
    let mut remaining: Vec<u64> = Vec::new();
    for p in seg.primes() {
        debug_assert!(p % 2 == 1);
        let m = (p - 1) / 2;
        let odd = if m == 0 { 1 } else { m >> m.trailing_zeros() };
        slot_of[(m - m_low) as usize] = out.len() as u32;
        remaining.push(odd);
        out.push(FactoredPrime {
            p,
            odd_factors: Vec::new(),
        });
    }

    for &q in base {
        if q == 2 {
            continue;
        }
        if q >= m_high {
            break;
        }
        let mut m = m_low.div_ceil(q).max(1) * q;
        while m < m_high {
            let idx = slot_of[(m - m_low) as usize];
            if idx != u32::MAX {
                let r = &mut remaining[idx as usize];
                if *r % q == 0 {
                    while *r % q == 0 {
                        *r /= q;
                    }
                    out[idx as usize].odd_factors.push(q);
                }
            }
            m += q;
        }
    }

    for (idx, fp) in out.iter_mut().enumerate() {
        let r = remaining[idx];
        if r > 1 {
            fp.odd_factors.push(r);
        }
    }
    out
}

/// Aligned segment grid over `[low, high)`: every boundary except the first
/// and last is a multiple of `width`.
#[derive(Debug, Clone)]
pub(crate) struct SegmentGrid {
    cursor: u64,
    high: u64,
    width: u64,
}

pub(crate) fn segment_grid(low: u64, high: u64, width: u64) -> SegmentGrid {
    SegmentGrid {
        cursor: low,
        high,
        width,
    }
}

impl Iterator for SegmentGrid {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<(u64, u64)> {
        if self.cursor >= self.high {
            return None;
        }
        let lo = self.cursor;
        let hi = ((lo / self.width + 1) * self.width).min(self.high);
        self.cursor = hi;
        Some((lo, hi))
    }
}

fn check_bounds(high: u64, segment_width: u64) -> Result<()> {
    if segment_width < MIN_SEGMENT_WIDTH {
        return Err(Error::SegmentWidthTooSmall(segment_width));
    }
    if high > MAX_BOUND {
        return Err(Error::InvalidRange { low: 0, high });
    }
    Ok(())
}

/// Streaming iterator over the primes in `[low, high)`.
pub fn enumerate_primes(low: u64, high: u64, segment_width: u64) -> Result<Primes> {
    check_bounds(high, segment_width)?;
    let base = if low < high {
        base_primes(integer_sqrt(high - 1))
    } else {
        vec![]
    };
    Ok(Primes {
        grid: segment_grid(low, high, segment_width),
        base,
        buf: Vec::new(),
        idx: 0,
    })
}

pub struct Primes {
    grid: SegmentGrid,
    base: Vec<u64>,
    buf: Vec<u64>,
    idx: usize,
}

impl Iterator for Primes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.idx < self.buf.len() {
                let p = self.buf[self.idx];
                self.idx += 1;
                return Some(p);
            }
            let (lo, hi) = self.grid.next()?;
            self.buf = sieve_segment(lo, hi, &self.base).primes().collect();
            self.idx = 0;
        }
    }
}

/// Streaming iterator over [`FactoredPrime`]s for primes in `[low, high)`.
/// The scan starts at 3; the degenerate prime 2 is never produced.
pub fn factor_range(low: u64, high: u64, segment_width: u64) -> Result<FactorRange> {
    check_bounds(high, segment_width)?;
    let low = low.max(3);
    let base = if low < high {
        base_primes(integer_sqrt(high - 1))
    } else {
        vec![]
    };
    Ok(FactorRange {
        grid: segment_grid(low, high, segment_width),
        base,
        buf: Vec::new(),
        idx: 0,
    })
}

pub struct FactorRange {
    grid: SegmentGrid,
    base: Vec<u64>,
    buf: Vec<FactoredPrime>,
    idx: usize,
}

impl Iterator for FactorRange {
    type Item = FactoredPrime;

    fn next(&mut self) -> Option<FactoredPrime> {
        loop {
            if self.idx < self.buf.len() {
                let fp = std::mem::replace(
                    &mut self.buf[self.idx],
                    FactoredPrime {
                        p: 0,
                        odd_factors: Vec::new(),
                    },
                );
                self.idx += 1;
                return Some(fp);
            }
            let (lo, hi) = self.grid.next()?;
            let seg = sieve_segment(lo, hi, &self.base);
            self.buf = factor_segment(&seg, &self.base);
            self.idx = 0;
        }
    }
}

/// The [`FactoredPrime`] for a single prime `p >= 3`; errors when `p` is
/// not an odd prime.
pub fn factored_prime(p: u64) -> Result<FactoredPrime> {
    if !(3..MAX_BOUND).contains(&p) {
        return Err(Error::NotPrime(p));
    }
    factor_range(p, p + 1, MIN_SEGMENT_WIDTH)?
        .next()
        .ok_or(Error::NotPrime(p))
}
