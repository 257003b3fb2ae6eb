//! Benchmarks for curvature evaluation: the matrix formula, the operator
//! oracle, and curvature-type detection on the bundled presets.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rinehart_core::{
    combination, curvature_matrix, curvature_oracle, detect_curvature_type, preset_russell,
    preset_sphere, Sampler,
};

fn bench_generator_pairs(c: &mut Criterion) {
    let sphere = preset_sphere().unwrap();
    let russell = preset_russell().unwrap();
    let mut group = c.benchmark_group("curvature_generator_pairs");
    group.bench_function("sphere_formula", |b| {
        b.iter(|| curvature_matrix(&sphere.idempotent, &sphere.generators[0], &sphere.generators[1]))
    });
    group.bench_function("sphere_oracle", |b| {
        b.iter(|| curvature_oracle(&sphere.idempotent, &sphere.generators[0], &sphere.generators[1]))
    });
    group.bench_function("russell_formula", |b| {
        b.iter(|| {
            curvature_matrix(&russell.idempotent, &russell.generators[0], &russell.generators[5])
        })
    });
    group.bench_function("russell_oracle", |b| {
        b.iter(|| {
            curvature_oracle(&russell.idempotent, &russell.generators[0], &russell.generators[5])
        })
    });
    group.finish();
}

fn bench_random_combinations(c: &mut Criterion) {
    let p = preset_sphere().unwrap();
    let mut group = c.benchmark_group("curvature_random_combinations");
    group.bench_function("sphere_formula_degree_2", |b| {
        let mut s = Sampler::new(17);
        b.iter_batched(
            || {
                let x = combination(&p.generators, &s.combo_coeffs(&p.ring, 3, 2));
                let y = combination(&p.generators, &s.combo_coeffs(&p.ring, 3, 2));
                (x, y)
            },
            |(x, y)| curvature_matrix(&p.idempotent, &x, &y),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

fn bench_type_detection(c: &mut Criterion) {
    let p = preset_sphere().unwrap();
    let rho = p.rho.clone().unwrap();
    let rvals: Vec<_> = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| curvature_matrix(&p.idempotent, &p.generators[i], &p.generators[j]))
        .collect();
    c.bench_function("curvature_type_detection_sphere", |b| {
        b.iter(|| detect_curvature_type(&rvals, &rho, 8))
    });
}

criterion_group!(
    benches,
    bench_generator_pairs,
    bench_random_combinations,
    bench_type_detection
);
criterion_main!(benches);
