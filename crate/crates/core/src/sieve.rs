//! Exact prime counting.
//!
//! The workhorse is a segmented sieve of Eratosthenes that can record the
//! running prime count at arbitrary checkpoints.  Segments are independent, so
//! they are sieved in parallel; the merge is an ordered prefix sum over exact
//! integers, which makes the result identical for any worker count.
//!
//! [`bitset_sieve_pi`] is a deliberately separate implementation (monolithic,
//! odd-only, bit packed) kept around as a cross-check, and
//! [`trial_division_pi`] is the slow oracle for exhaustive verification at
//! small limits.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest supported sieve limit.
pub const MAX_LIMIT: u64 = 1_000_000_000;

const SEGMENT_SIZE: u64 = 1 << 20;

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes `<= limit` via a plain in-memory sieve.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2usize;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&k| !composite[k]).map(|k| k as u64).collect()
}

/// Exact prime counts at a limit and at requested checkpoints.
#[derive(Debug, Clone)]
pub struct PiTable {
    limit: u64,
    checkpoints: Vec<(u64, u64)>,
}

impl PiTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// The count at the table limit.
    pub fn pi_limit(&self) -> u64 {
        self.checkpoints.last().map(|&(_, c)| c).unwrap_or(0)
    }

    /// Exact count at a recorded checkpoint.
    pub fn pi(&self, x: u64) -> Option<u64> {
        self.checkpoints
            .binary_search_by_key(&x, |&(cx, _)| cx)
            .ok()
            .map(|i| self.checkpoints[i].1)
    }

    pub fn checkpoints(&self) -> &[(u64, u64)] {
        &self.checkpoints
    }
}

/// Count primes up to `limit` with the segmented sieve.
pub fn sieve_pi(limit: u64) -> Result<PiTable> {
    sieve_pi_with_checkpoints(limit, &[])
}

/// Segmented sieve that also records the running count at each checkpoint.
///
/// Checkpoints may repeat and need not be sorted; they must lie in
/// `[2, limit]`.  The returned table always contains `limit` itself.
pub fn sieve_pi_with_checkpoints(limit: u64, checkpoints: &[u64]) -> Result<PiTable> {
    if !(2..=MAX_LIMIT).contains(&limit) {
        return Err(Error::LimitOutOfRange(limit));
    }
    let mut cps: Vec<u64> = checkpoints.to_vec();
    for &cp in &cps {
        if cp < 2 || cp > limit {
            return Err(Error::BeyondTable(cp, limit));
        }
    }
    cps.push(limit);
    cps.sort_unstable();
    cps.dedup();

    let sqrt = (limit as f64).sqrt() as u64 + 1;
    let base_primes = primes_up_to(sqrt);

    let n_segments = ((limit - 1) / SEGMENT_SIZE + 1) as usize;
    let per_segment: Vec<(u64, Vec<(usize, u64)>)> = (0..n_segments)
        .into_par_iter()
        .map(|seg| {
            let lo = 2.max(seg as u64 * SEGMENT_SIZE);
            let hi = ((seg as u64 + 1) * SEGMENT_SIZE).min(limit + 1);
            sieve_segment(lo, hi, &base_primes, &cps)
        })
        .collect();

    // Ordered merge: prefix-sum segment totals, then shift the per-segment
    // checkpoint counts by the count accumulated before the segment.
    let mut running = 0u64;
    let mut out: Vec<(u64, u64)> = Vec::with_capacity(cps.len());
    for (total, at_cp) in per_segment {
        for (cp_idx, count_le) in at_cp {
            out.push((cps[cp_idx], running + count_le));
        }
        running += total;
    }
    debug_assert_eq!(out.len(), cps.len());
    out.sort_unstable_by_key(|&(x, _)| x);
    Ok(PiTable {
        limit,
        checkpoints: out,
    })
}

/// Sieve `[lo, hi)`; returns the prime count in the range and, for each
/// checkpoint inside it, the count of primes `<=` that checkpoint.
fn sieve_segment(lo: u64, hi: u64, base_primes: &[u64], cps: &[u64]) -> (u64, Vec<(usize, u64)>) {
    if lo >= hi {
        return (0, Vec::new());
    }
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in base_primes {
        if p * p >= hi {
            break;
        }
        let start = p * p.max(lo.div_ceil(p));
        let mut m = start;
        while m < hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }

    let mut in_range: Vec<usize> = cps
        .iter()
        .enumerate()
        .filter(|&(_, &cp)| lo <= cp && cp < hi)
        .map(|(i, _)| i)
        .collect();
    in_range.sort_unstable_by_key(|&i| cps[i]);

    let mut total = 0u64;
    let mut at_cp = Vec::with_capacity(in_range.len());
    let mut next = in_range.iter().peekable();
    for (off, &c) in composite.iter().enumerate() {
        let value = lo + off as u64;
        while let Some(&&i) = next.peek() {
            if cps[i] < value {
                at_cp.push((i, total));
                next.next();
            } else {
                break;
            }
        }
        if !c {
            total += 1;
        }
    }
    for &i in next {
        at_cp.push((i, total));
    }
    (total, at_cp)
}

/// Independent cross-check: monolithic odd-only bit-packed sieve.
pub fn bitset_sieve_pi(limit: u64) -> Result<u64> {
    if !(2..=MAX_LIMIT).contains(&limit) {
        return Err(Error::LimitOutOfRange(limit));
    }
    if limit == 2 {
        return Ok(1);
    }
    // Bit i represents the odd number 2i + 3.
    let n_odds = ((limit - 3) / 2 + 1) as usize;
    let words = n_odds.div_ceil(64);
    let mut bits = vec![0u64; words];
    let mark = |bits: &mut [u64], i: usize| bits[i / 64] |= 1 << (i % 64);
    let is_marked = |bits: &[u64], i: usize| bits[i / 64] >> (i % 64) & 1 == 1;

    let mut p = 3u64;
    while p * p <= limit {
        if !is_marked(&bits, ((p - 3) / 2) as usize) {
            let mut m = p * p;
            while m <= limit {
                mark(&mut bits, ((m - 3) / 2) as usize);
                m += 2 * p;
            }
        }
        p += 2;
    }

    let mut count = 1u64; // the prime 2
    for i in 0..n_odds {
        if !is_marked(&bits, i) {
            count += 1;
        }
    }
    Ok(count)
}

/// Trial-division prime count, the exhaustive-verification oracle.
pub fn trial_division_pi(limit: u64) -> u64 {
    (2..=limit).filter(|&n| is_prime(n)).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(sieve_pi(10).unwrap().pi_limit(), 4);
        assert_eq!(sieve_pi(100).unwrap().pi_limit(), 25);
        assert_eq!(sieve_pi(2).unwrap().pi_limit(), 1);
    }

    #[test]
    fn limit_range_checked() {
        assert!(matches!(sieve_pi(1), Err(Error::LimitOutOfRange(1))));
        assert!(matches!(
            sieve_pi(MAX_LIMIT + 1),
            Err(Error::LimitOutOfRange(_))
        ));
    }

    #[test]
    fn checkpoint_counts_match_direct_sieves() {
        let table = sieve_pi_with_checkpoints(10_000, &[10, 100, 1000, 9999]).unwrap();
        assert_eq!(table.pi(10), Some(4));
        assert_eq!(table.pi(100), Some(25));
        assert_eq!(table.pi(1000), Some(168));
        assert_eq!(table.pi(9999), Some(1229));
        assert_eq!(table.pi_limit(), 1229);
    }

    #[test]
    fn checkpoint_beyond_limit_rejected() {
        assert!(matches!(
            sieve_pi_with_checkpoints(100, &[101]),
            Err(Error::BeyondTable(101, 100))
        ));
    }

    #[test]
    fn million_cross_checked() {
        let segmented = sieve_pi(1_000_000).unwrap().pi_limit();
        let bitset = bitset_sieve_pi(1_000_000).unwrap();
        assert_eq!(segmented, 78_498);
        assert_eq!(bitset, 78_498);
    }

    #[test]
    fn agrees_with_trial_division_exhaustively() {
        let xs: Vec<u64> = (2..=20_000).collect();
        let table = sieve_pi_with_checkpoints(20_000, &xs).unwrap();
        let mut count = 0;
        for x in 2..=20_000u64 {
            if is_prime(x) {
                count += 1;
            }
            assert_eq!(table.pi(x), Some(count), "mismatch at {x}");
        }
    }

    #[test]
    fn segment_boundaries_are_invisible() {
        // Straddles the first segment boundary.
        let around = SEGMENT_SIZE;
        let xs = [around - 1, around, around + 1];
        let table = sieve_pi_with_checkpoints(around + 10, &xs).unwrap();
        let primes = primes_up_to(around + 10);
        for &x in &xs {
            let expect = primes.iter().filter(|&&p| p <= x).count() as u64;
            assert_eq!(table.pi(x), Some(expect));
        }
    }
}
