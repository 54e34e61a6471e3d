use criterion::{criterion_group, criterion_main, Criterion};
use ellgood_core::design::fixtures;
use ellgood_core::search::{search_sequencing, SearchConfig};

fn search(c: &mut Criterion) {
    let config = SearchConfig::default();
    let fano = fixtures::fano();
    let ag = fixtures::ag23();
    let cyclic = fixtures::cyclic13();

    c.bench_function("sts7 ell4 none", |b| b.iter(|| search_sequencing(&fano, 4, &config).unwrap()));
    c.bench_function("sts9 ell4 none", |b| b.iter(|| search_sequencing(&ag, 4, &config).unwrap()));
    c.bench_function("sts13 ell4 found", |b| b.iter(|| search_sequencing(&cyclic, 4, &config).unwrap()));

    let mut slow = c.benchmark_group("sts13 ell5");
    slow.sample_size(10);
    slow.bench_function("fixed", |b| b.iter(|| search_sequencing(&cyclic, 5, &config).unwrap()));
    let unfixed = SearchConfig { symmetry_fixing: false, ..config };
    slow.bench_function("unfixed", |b| b.iter(|| search_sequencing(&cyclic, 5, &unfixed).unwrap()));
    let parallel = SearchConfig { symmetry_fixing: false, jobs: 4, ..config };
    slow.bench_function("unfixed 4 jobs", |b| b.iter(|| search_sequencing(&cyclic, 5, &parallel).unwrap()));
    slow.finish();
}

criterion_group!(benches, search);
criterion_main!(benches);
