//! Segmented sieve of Eratosthenes with ordered, optionally parallel delivery.
//!
//! Segments are odd-only bitmaps; 2 is handled separately. Segment
//! boundaries sit at multiples of `2 * segment_size`, so the tiling of
//! `[2, limit]` depends only on the configuration and never on the thread
//! count. Parallel runs sieve a batch of segments concurrently and hand them
//! to the consumer in ascending order on the calling thread.

use std::sync::mpsc::sync_channel;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, isqrt};
use crate::error::{Error, Result};

/// Largest supported sieve limit.
pub const LIMIT_CAP: u64 = 1 << 40;
pub const DEFAULT_SEGMENT_SIZE: usize = 1 << 22;
pub const MIN_SEGMENT_SIZE: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveConfig {
    /// Inclusive upper bound on delivered primes.
    pub limit: u64,
    /// Number of odd integers per segment bitmap.
    pub segment_size: usize,
    pub thread_count: usize,
}

impl SieveConfig {
    pub fn new(limit: u64) -> Result<Self> {
        let cfg = SieveConfig {
            limit,
            segment_size: DEFAULT_SEGMENT_SIZE,
            thread_count: 1,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_segment_size(mut self, segment_size: usize) -> Result<Self> {
        self.segment_size = segment_size;
        self.validate()?;
        Ok(self)
    }

    pub fn with_threads(mut self, thread_count: usize) -> Result<Self> {
        self.thread_count = thread_count;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.limit > LIMIT_CAP {
            return Err(Error::InvalidArgument(format!(
                "sieve limit {} exceeds cap 2^40",
                self.limit
            )));
        }
        if self.segment_size < MIN_SEGMENT_SIZE {
            return Err(Error::InvalidArgument(format!(
                "segment size {} below minimum {MIN_SEGMENT_SIZE}",
                self.segment_size
            )));
        }
        if self.thread_count == 0 {
            return Err(Error::InvalidArgument("thread count must be at least 1".into()));
        }
        Ok(())
    }

    /// Width in integers of one segment.
    pub fn span(&self) -> u64 {
        2 * self.segment_size as u64
    }

    /// Half-open segments `[lo, hi)` tiling `[start.max(2), limit]`.
    pub fn segments_from(&self, start: u64) -> Vec<(u64, u64)> {
        let end = self.limit.saturating_add(1);
        let span = self.span();
        let mut lo = start.max(2);
        let mut out = Vec::new();
        while lo < end {
            let hi = ((lo / span + 1) * span).min(end);
            out.push((lo, hi));
            lo = hi;
        }
        out
    }
}

/// Primes in `[lo, hi)` as an odd-only bitmap (bit set = prime).
#[derive(Debug, Clone)]
pub struct SegmentBitmap {
    lo: u64,
    hi: u64,
    first_odd: u64,
    nbits: usize,
    words: Vec<u64>,
}

impl SegmentBitmap {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    /// Number of odd candidates covered by the bitmap.
    pub fn odd_candidates(&self) -> usize {
        self.nbits
    }

    fn has_two(&self) -> bool {
        self.lo <= 2 && 2 < self.hi
    }

    pub fn count(&self) -> u64 {
        self.has_two() as u64 + self.words.iter().map(|w| w.count_ones() as u64).sum::<u64>()
    }

    pub fn contains(&self, n: u64) -> bool {
        if n < self.lo || n >= self.hi {
            return false;
        }
        if n == 2 {
            return true;
        }
        if n.is_multiple_of(2) {
            return false;
        }
        let i = ((n - self.first_odd) / 2) as usize;
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    /// Calls `f` on every prime of the segment in ascending order.
    #[inline]
    pub fn for_each(&self, mut f: impl FnMut(u64)) {
        if self.has_two() {
            f(2);
        }
        for (w, &word) in self.words.iter().enumerate() {
            let mut bits = word;
            let base = self.first_odd + 128 * w as u64;
            while bits != 0 {
                let tz = bits.trailing_zeros() as u64;
                f(base + 2 * tz);
                bits &= bits - 1;
            }
        }
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.count() as usize);
        self.for_each(|p| v.push(p));
        v
    }
}

/// Simple unsegmented sieve, used for base primes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Sieves `[lo, hi)` with `base_primes`, which must contain every prime up to
/// `sqrt(hi - 1)` in ascending order.
pub fn sieve_segment(lo: u64, hi: u64, base_primes: &[u64]) -> Result<SegmentBitmap> {
    if lo < 2 {
        return Err(Error::Precondition(format!("segment start {lo} below 2")));
    }
    if hi < lo {
        return Err(Error::Precondition(format!("empty segment [{lo}, {hi})")));
    }
    if hi > lo {
        let root = isqrt(hi - 1);
        let largest = base_primes.last().copied().unwrap_or(1);
        if largest < root {
            if let Some(missing) = (largest + 1..=root).find(|&n| is_prime(n)) {
                return Err(Error::Precondition(format!(
                    "base primes stop at {largest}; prime {missing} <= sqrt({}) is missing",
                    hi - 1
                )));
            }
        }
    }
    Ok(sieve_unchecked(lo, hi, base_primes))
}

fn sieve_unchecked(lo: u64, hi: u64, base_primes: &[u64]) -> SegmentBitmap {
    let first_odd = lo | 1;
    let nbits = if hi > first_odd {
        (hi - first_odd).div_ceil(2) as usize
    } else {
        0
    };
    let mut words = vec![0u64; nbits.div_ceil(64)];
    for &p in base_primes {
        if p == 2 {
            continue;
        }
        let sq = p * p;
        if sq >= hi {
            break;
        }
        let mut start = first_odd.div_ceil(p) * p;
        if start < sq {
            start = sq;
        }
        if start % 2 == 0 {
            start += p;
        }
        let mut i = ((start - first_odd) / 2) as usize;
        let step = p as usize;
        while i < nbits {
            words[i >> 6] |= 1u64 << (i & 63);
            i += step;
        }
    }
    for w in words.iter_mut() {
        *w = !*w;
    }
    if nbits % 64 != 0 {
        let last = words.len() - 1;
        words[last] &= (1u64 << (nbits % 64)) - 1;
    }
    SegmentBitmap {
        lo,
        hi,
        first_odd,
        nbits,
        words,
    }
}

/// Receives primes in ascending order from [`drive`].
pub trait PrimeConsumer {
    fn prime(&mut self, p: u64);

    /// Every prime below `hi` has been delivered.
    fn segment_done(&mut self, _hi: u64) {}
}

impl<C: PrimeConsumer + ?Sized> PrimeConsumer for &mut C {
    fn prime(&mut self, p: u64) {
        (**self).prime(p)
    }

    fn segment_done(&mut self, hi: u64) {
        (**self).segment_done(hi)
    }
}

impl<C: PrimeConsumer + ?Sized> PrimeConsumer for Box<C> {
    fn prime(&mut self, p: u64) {
        (**self).prime(p)
    }

    fn segment_done(&mut self, hi: u64) {
        (**self).segment_done(hi)
    }
}

impl<A: PrimeConsumer, B: PrimeConsumer> PrimeConsumer for (A, B) {
    fn prime(&mut self, p: u64) {
        self.0.prime(p);
        self.1.prime(p);
    }

    fn segment_done(&mut self, hi: u64) {
        self.0.segment_done(hi);
        self.1.segment_done(hi);
    }
}

impl<C: PrimeConsumer> PrimeConsumer for Vec<C> {
    fn prime(&mut self, p: u64) {
        for c in self.iter_mut() {
            c.prime(p);
        }
    }

    fn segment_done(&mut self, hi: u64) {
        for c in self.iter_mut() {
            c.segment_done(hi);
        }
    }
}

/// Delivers every prime in `[start.max(2), config.limit]` to `consumer`, in
/// ascending order, calling `segment_done` after each segment.
pub fn drive<C: PrimeConsumer + ?Sized>(config: &SieveConfig, start: u64, consumer: &mut C) {
    let segments = config.segments_from(start);
    if segments.is_empty() {
        return;
    }
    let base = primes_up_to(isqrt(config.limit));

    if config.thread_count == 1 {
        for &(lo, hi) in &segments {
            let bitmap = sieve_unchecked(lo, hi, &base);
            bitmap.for_each(|p| consumer.prime(p));
            consumer.segment_done(hi);
        }
        return;
    }

    let threads = config.thread_count;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool construction");
    let (tx, rx) = sync_channel::<SegmentBitmap>(2 * threads);
    std::thread::scope(|scope| {
        let base = &base;
        let pool = &pool;
        let segments = &segments;
        scope.spawn(move || {
            for batch in segments.chunks(threads) {
                let maps: Vec<SegmentBitmap> = pool.install(|| {
                    batch
                        .par_iter()
                        .map(|&(lo, hi)| sieve_unchecked(lo, hi, base))
                        .collect()
                });
                for m in maps {
                    if tx.send(m).is_err() {
                        return;
                    }
                }
            }
        });
        for bitmap in rx {
            bitmap.for_each(|p| consumer.prime(p));
            consumer.segment_done(bitmap.hi());
        }
    });
}

struct Fold<S, F> {
    state: S,
    f: F,
}

impl<S, F: FnMut(&mut S, u64)> PrimeConsumer for Fold<S, F> {
    #[inline]
    fn prime(&mut self, p: u64) {
        (self.f)(&mut self.state, p)
    }
}

/// Folds every prime up to `config.limit` into `init`, in ascending order.
pub fn stream_primes<S>(config: &SieveConfig, init: S, fold: impl FnMut(&mut S, u64)) -> S {
    let mut consumer = Fold { state: init, f: fold };
    drive(config, 2, &mut consumer);
    consumer.state
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_primes(n: u64) -> Vec<u64> {
        (2..=n)
            .filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0))
            .collect()
    }

    #[test]
    fn first_segment_exhaustive() {
        let base = primes_up_to(6);
        let seg = sieve_segment(2, 30, &base).unwrap();
        assert_eq!(seg.primes(), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(seg.count(), 10);
        assert!(seg.contains(29) && !seg.contains(27) && !seg.contains(30));
    }

    #[test]
    fn count_below_100() {
        let seg = sieve_segment(2, 100, &primes_up_to(10)).unwrap();
        assert_eq!(seg.count(), trial_division_primes(99).len() as u64);
        assert_eq!(seg.count(), 25);
    }

    #[test]
    fn insufficient_base_primes_rejected() {
        let err = sieve_segment(2, 200, &[2, 3, 5, 7, 11]).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        // 7 covers everything below 121 even though sqrt(110) > 7.
        assert!(sieve_segment(100, 111, &[2, 3, 5, 7]).is_ok());
        assert!(sieve_segment(1, 10, &[2, 3]).is_err());
    }

    #[test]
    fn small_limits() {
        let cfg = SieveConfig::new(10).unwrap();
        assert_eq!(stream_primes(&cfg, 0u64, |c, _| *c += 1), 4);
        let cfg = SieveConfig::new(1).unwrap();
        assert_eq!(stream_primes(&cfg, 0u64, |c, _| *c += 1), 0);
        let cfg = SieveConfig::new(30).unwrap();
        let all = stream_primes(&cfg, Vec::new(), |v, p| v.push(p));
        assert_eq!(all.last(), Some(&29));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn config_validation() {
        assert!(SieveConfig::new(LIMIT_CAP + 1).is_err());
        assert!(SieveConfig::new(100).unwrap().with_segment_size(63).is_err());
        assert!(SieveConfig::new(100).unwrap().with_threads(0).is_err());
    }

    #[test]
    fn tiling_has_no_gaps() {
        let cfg = SieveConfig::new(1000).unwrap().with_segment_size(64).unwrap();
        let segs = cfg.segments_from(2);
        assert_eq!(segs[0].0, 2);
        assert_eq!(segs.last().unwrap().1, 1001);
        assert!(segs.windows(2).all(|w| w[0].1 == w[1].0));
        let resumed = cfg.segments_from(segs[3].0);
        assert_eq!(resumed, segs[3..].to_vec());
    }
}
