//! Throughput benchmarks for the estimation hot paths.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use noisevar_core::*;
use std::hint::black_box;

fn section5_measurements() -> Vec<f64> {
    generate(&default_section5_spec()).unwrap().y
}

fn mad_config() -> EstimatorConfig {
    EstimatorConfig::new(0.9902, 100, MAD_SCALE_GAUSSIAN, Variability::MadVariance).unwrap()
}

fn bench_filter_step(c: &mut Criterion) {
    let config = mad_config();
    let ys = section5_measurements();
    c.bench_function("filter_step_2500", |b| {
        b.iter_batched(
            || EstimatorState::new(&config),
            |mut state| {
                for &y in &ys {
                    black_box(state.step(&config, y).unwrap());
                }
                state
            },
            BatchSize::SmallInput,
        )
    });
}

fn bench_window_estimators(c: &mut Criterion) {
    let ys = section5_measurements();
    let window = &ys[..101];
    c.bench_function("windowed_variance_mean_101", |b| {
        b.iter(|| windowed_variance_mean(black_box(window), 200, 100).unwrap())
    });
    c.bench_function("windowed_variance_mad_101", |b| {
        b.iter(|| windowed_variance_mad(black_box(window), 200, 100, 1.4826).unwrap())
    });
    c.bench_function("innovation_autocovariance_101_lag4", |b| {
        b.iter(|| innovation_autocovariance(black_box(window), 4).unwrap())
    });
}

fn bench_full_runs(c: &mut Criterion) {
    let config = mad_config();
    let ys = section5_measurements();
    c.bench_function("run_algorithm1_mad_section5", |b| {
        b.iter(|| run_algorithm1(black_box(&ys), &config).unwrap())
    });
    c.bench_function("run_baseline_mehra_section5", |b| {
        b.iter(|| run_baseline(black_box(&ys), &config, BaselineMethod::Mehra, 4).unwrap())
    });
    c.bench_function("generate_section5", |b| {
        let spec = default_section5_spec();
        b.iter(|| generate(black_box(&spec)).unwrap())
    });
}

criterion_group!(benches, bench_filter_step, bench_window_estimators, bench_full_runs);
criterion_main!(benches);
