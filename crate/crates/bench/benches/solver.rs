//! Benchmarks for the degree-bounded linear solver behind the one-form
//! checks: closedness witnesses, exactness searches, and the bounded
//! cohomology dimension count.

use criterion::{criterion_group, criterion_main, Criterion};
use rinehart_core::{exactness_witness, h_bounded, is_closed, omega_n, preset_sphere};

fn bench_closedness(c: &mut Criterion) {
    let p = preset_sphere().unwrap();
    let mut group = c.benchmark_group("oneform_closedness");
    for n in [0u32, 1, 2] {
        let w = omega_n(&p.ring, n).unwrap();
        let bound = 2 * n + 2;
        group.bench_function(format!("omega_{n}_bound_{bound}"), |b| {
            b.iter(|| is_closed(&w, bound))
        });
    }
    group.finish();
}

fn bench_exactness(c: &mut Criterion) {
    let p = preset_sphere().unwrap();
    let mut group = c.benchmark_group("oneform_exactness");
    group.sample_size(20);
    for (n, bound) in [(0u32, 4u32), (1, 5)] {
        let w = omega_n(&p.ring, n).unwrap();
        group.bench_function(format!("omega_{n}_bound_{bound}"), |b| {
            b.iter(|| exactness_witness(&w, bound))
        });
    }
    group.finish();
}

fn bench_bounded_cohomology(c: &mut Criterion) {
    let p = preset_sphere().unwrap();
    let mut group = c.benchmark_group("bounded_cohomology");
    group.sample_size(10);
    group.bench_function("h1_bound_2", |b| b.iter(|| h_bounded(&p.ring, 1, 2)));
    group.bench_function("h2_bound_2", |b| b.iter(|| h_bounded(&p.ring, 2, 2)));
    group.finish();
}

criterion_group!(benches, bench_closedness, bench_exactness, bench_bounded_cohomology);
criterion_main!(benches);
