use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use orbiseif::batch::{atlas, enumerate_all, flat_bases, spherical_bases, verify_psi_all, Execution};
use orbiseif::SeifertSymbol;

fn modes() -> [(&'static str, Execution); 2] {
    [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)]
}

fn bench_atlas(c: &mut Criterion) {
    let mut group = c.benchmark_group("atlas");
    let mut bases = flat_bases();
    bases.extend(spherical_bases(24));
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::new(name, bases.len()), &bases, |b, bases| {
            b.iter(|| atlas(bases, exec).unwrap())
        });
    }
    group.finish();
}

fn bench_psi(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_psi");
    let symbols: Vec<SeifertSymbol> = enumerate_all(&spherical_bases(24), Execution::Sequential)
        .unwrap()
        .into_iter()
        .flat_map(|b| b.fibrations)
        .collect();
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::new(name, symbols.len()), &symbols, |b, symbols| {
            b.iter(|| verify_psi_all(symbols, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_atlas, bench_psi);
criterion_main!(benches);
