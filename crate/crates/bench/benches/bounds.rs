use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qcrb_bench::{examples, random_cases, Case};
use qcrb_core::bounds::{max_beta_closed_form, max_beta_scan, suzuki_bound};
use qcrb_core::holevo::{build_extension, holevo_min_f, holevo_sdp};
use qcrb_core::logderiv::{fisher_rld, fisher_sld};

fn cases() -> Vec<Case> {
    let mut all = examples();
    all.extend(random_cases(&[2, 3, 4]));
    all
}

fn fisher(c: &mut Criterion) {
    let mut group = c.benchmark_group("fisher");
    for case in cases() {
        group.bench_with_input(BenchmarkId::new("sld", &case.name), &case, |b, case| {
            b.iter(|| fisher_sld(black_box(&case.model)))
        });
        group.bench_with_input(BenchmarkId::new("rld", &case.name), &case, |b, case| {
            b.iter(|| fisher_rld(black_box(&case.model)))
        });
    }
    group.finish();
}

fn max_beta(c: &mut Criterion) {
    let mut group = c.benchmark_group("max_beta");
    for case in examples() {
        let ext = build_extension(&case.model).unwrap();
        let ro = ext.rank_one().unwrap();
        group.bench_with_input(BenchmarkId::new("scan", &case.name), &case, |b, case| {
            b.iter(|| max_beta_scan(&case.weight, black_box(&case.model)).unwrap())
        });
        group.bench_function(BenchmarkId::new("closed_form", &case.name), |b| {
            b.iter(|| {
                max_beta_closed_form(&case.weight, black_box(&ro.a), black_box(&ro.b)).unwrap()
            })
        });
    }
    let case = &examples()[0];
    group.bench_function("suzuki", |b| {
        b.iter(|| suzuki_bound(&case.weight, black_box(&case.model)).unwrap())
    });
    group.finish();
}

fn holevo(c: &mut Criterion) {
    let mut group = c.benchmark_group("holevo");
    group.sample_size(20);
    for case in cases() {
        let ext = build_extension(&case.model).unwrap();
        group.bench_function(BenchmarkId::new("extension", &case.name), |b| {
            b.iter(|| build_extension(black_box(&case.model)).unwrap())
        });
        group.bench_function(BenchmarkId::new("min_f", &case.name), |b| {
            b.iter(|| holevo_min_f(&case.weight, black_box(&ext)).unwrap())
        });
        group.bench_function(BenchmarkId::new("sdp", &case.name), |b| {
            b.iter(|| holevo_sdp(&case.weight, black_box(&ext)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, fisher, max_beta, holevo);
criterion_main!(benches);
