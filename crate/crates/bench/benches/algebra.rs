use chebias_core::dirichlet::{characters, l_half};
use chebias_core::function_field::enumerate_irreducibles;
use chebias_core::quadratic::class_group;
use chebias_core::DeltaExpansion;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn l_values(c: &mut Criterion) {
    let mut g = c.benchmark_group("l_half");
    for q in [4u64, 60, 997] {
        let chars: Vec<_> = characters(q).unwrap().into_iter().filter(|c| !c.is_principal).collect();
        g.bench_with_input(BenchmarkId::new("all_characters", q), &chars, |b, chars| {
            b.iter(|| chars.iter().map(|c| l_half(c).unwrap().re).sum::<f64>())
        });
    }
    g.finish();
}

fn tau(c: &mut Criterion) {
    let mut g = c.benchmark_group("tau");
    g.sample_size(10);
    for order in [5_000usize, 100_000] {
        g.bench_with_input(BenchmarkId::new("eta_cubed", order), &order, |b, &n| {
            b.iter(|| DeltaExpansion::new(n).unwrap())
        });
    }
    g.bench_function("pentagonal/5000", |b| {
        b.iter(|| DeltaExpansion::by_pentagonal(5000).unwrap())
    });
    g.finish();
}

fn irreducibles(c: &mut Criterion) {
    let mut g = c.benchmark_group("irreducibles");
    g.sample_size(10);
    for (q, deg) in [(2u64, 20usize), (3, 13)] {
        g.bench_with_input(BenchmarkId::new(format!("q{q}"), deg), &(q, deg), |b, &(q, deg)| {
            b.iter(|| enumerate_irreducibles(q, deg).unwrap().count())
        });
    }
    g.finish();
}

fn class_groups(c: &mut Criterion) {
    c.bench_function("class_group/-99995", |b| {
        b.iter(|| class_group(-99_995).unwrap().forms.len())
    });
}

criterion_group!(benches, l_values, tau, irreducibles, class_groups);
criterion_main!(benches);
