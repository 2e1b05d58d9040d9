use chebias_bench::grid_to;
use chebias_core::summation::ResidueClassifier;
use chebias_core::{accumulate_series, primes_up_to, stream_primes, SieveConfig};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

fn sieve(c: &mut Criterion) {
    let mut g = c.benchmark_group("sieve");
    g.sample_size(10);
    for limit in [1_000_000u64, 10_000_000] {
        g.throughput(Throughput::Elements(limit));
        for threads in [1usize, 4] {
            let mut config = SieveConfig::new(limit).unwrap();
            config.thread_count = threads;
            g.bench_with_input(
                BenchmarkId::new(format!("threads{threads}"), limit),
                &config,
                |b, cfg| b.iter(|| stream_primes(cfg, 0u64, |n, _| *n += 1)),
            );
        }
    }
    g.finish();
}

fn accumulate(c: &mut Criterion) {
    let limit = 10_000_000u64;
    let primes = primes_up_to(limit);
    let grid = grid_to(limit);
    let mut g = c.benchmark_group("accumulate");
    g.sample_size(10);
    g.throughput(Throughput::Elements(primes.len() as u64));
    for q in [4u64, 60] {
        g.bench_with_input(BenchmarkId::new("units", q), &q, |b, &q| {
            b.iter(|| {
                accumulate_series(ResidueClassifier::units(q).unwrap(), 0.5, &grid, primes.iter().copied()).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, sieve, accumulate);
criterion_main!(benches);
