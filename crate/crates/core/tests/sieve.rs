mod common;

use chebias_core::{primes_up_to, sieve_segment, stream_primes, SieveConfig};
use common::{is_prime_trial, simple_sieve};
use proptest::prelude::*;

#[test]
fn prime_count_to_a_million() {
    assert_eq!(primes_up_to(1_000_000).len(), 78_498);
    assert_eq!(primes_up_to(1_000_000), simple_sieve(1_000_000));
}

#[test]
fn small_range_against_trial_division() {
    let want: Vec<u64> = (0..20_000).filter(|&n| is_prime_trial(n)).collect();
    assert_eq!(primes_up_to(19_999), want);
}

#[test]
fn streaming_matches_for_any_segmentation() {
    let want = simple_sieve(300_000);
    for (segment, threads) in [(64, 1), (1000, 1), (4096, 3), (1 << 16, 2), (1 << 22, 1)] {
        let config = SieveConfig::new(300_000)
            .unwrap()
            .with_segment_size(segment)
            .unwrap()
            .with_threads(threads)
            .unwrap();
        let got = stream_primes(&config, Vec::new(), |v, p| v.push(p));
        assert_eq!(got, want, "segment {segment}, threads {threads}");
    }
}

proptest! {
    #[test]
    fn segments_match_trial_division(lo in 2u64..2_000_000, width in 1u64..3000) {
        let hi = lo + width;
        let base = primes_up_to((hi as f64).sqrt() as u64 + 1);
        let got = sieve_segment(lo, hi, &base).unwrap().primes();
        let want: Vec<u64> = (lo..hi).filter(|&n| is_prime_trial(n)).collect();
        prop_assert_eq!(got, want);
    }
}
