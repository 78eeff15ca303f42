use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use wgspec_core::{eigen, membership_by_deficiency, Complex64};

fn eigenvalues(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigenvalues");
    for n in [16, 64, 128] {
        let m = wgspec_bench::matrix(n, 1);
        group.bench_with_input(BenchmarkId::new("general", n), &m, |b, m| {
            b.iter(|| eigen::general_eigenvalues(black_box(m)).unwrap())
        });
        let h = m.add(&m.adjoint());
        group.bench_with_input(BenchmarkId::new("hermitian", n), &h, |b, h| {
            b.iter(|| eigen::hermitian_eigenvalues(black_box(h)).unwrap())
        });
    }
    group.finish();
}

fn membership(c: &mut Criterion) {
    let m = wgspec_bench::matrix(30, 2);
    let r = 2.0 * m.norm_bound();
    c.bench_function("membership_30", |b| {
        b.iter(|| membership_by_deficiency(black_box(&m), Complex64::new(0.3, -0.2), r, 1e-9).unwrap())
    });
}

criterion_group!(benches, eigenvalues, membership);
criterion_main!(benches);
