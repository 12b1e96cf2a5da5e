//! Compares the verification suite on the rayon pool against the
//! sequential fallback. The suite is deterministic, so both paths
//! produce identical reports; only the wall time differs.

use criterion::{criterion_group, criterion_main, Criterion};
use gl2geo::verify::{checks, run_all, Mode};

fn bench_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify-suite");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| std::hint::black_box(run_all(Mode::Sequential)))
    });
    group.bench_function("parallel", |b| {
        b.iter(|| std::hint::black_box(run_all(Mode::Parallel)))
    });
    group.finish();
}

fn bench_heavy_sweeps(c: &mut Criterion) {
    // The dominant integrator sweeps isolated from the table checks:
    // run the registry's heavy entries one at a time, sequential inner
    // sweeps vs parallel inner sweeps.
    let registry = checks();
    let heavy: Vec<usize> = {
        // Identify by name on a sequential dry run.
        registry
            .iter()
            .enumerate()
            .filter(|(_, f)| {
                matches!(
                    f(Mode::Sequential).name,
                    "jacobi-closed-vs-rk4" | "transport-conservation"
                )
            })
            .map(|(i, _)| i)
            .collect()
    };
    let mut group = c.benchmark_group("heavy-sweeps");
    group.sample_size(10);
    for &idx in &heavy {
        let name = registry[idx](Mode::Sequential).name;
        group.bench_function(format!("{name}-sequential"), |b| {
            b.iter(|| std::hint::black_box(registry[idx](Mode::Sequential)))
        });
        group.bench_function(format!("{name}-parallel"), |b| {
            b.iter(|| std::hint::black_box(registry[idx](Mode::Parallel)))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_suite, bench_heavy_sweeps);
criterion_main!(benches);
