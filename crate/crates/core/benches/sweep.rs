//! Sequential against data-parallel evaluation of the same workloads.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use psqkd::channel::{average_key_rates, FadingModel, QuadratureSpec};
use psqkd::sweep::{run_experiment_with, ExperimentConfig, ExperimentKind};
use psqkd::{Executor, Scheme, SchemeConfig};

fn executors() -> Vec<(&'static str, Executor)> {
    let seq = ("sequential", Executor::Sequential);
    #[cfg(feature = "parallel")]
    return vec![seq, ("parallel", Executor::with_threads(None))];
    #[cfg(not(feature = "parallel"))]
    vec![seq]
}

fn fading_average(c: &mut Criterion) {
    let cfg = SchemeConfig::default().with_scheme(Scheme::Tps);
    let model = FadingModel::new(1.0, 1.0, 1.0).unwrap();
    let quad = QuadratureSpec {
        node_count: 32,
        ..QuadratureSpec::default()
    };
    let mut group = c.benchmark_group("fading_average");
    group.sample_size(10);
    for (name, exec) in executors() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| average_key_rates(&cfg, &model, &quad, exec).unwrap())
        });
    }
    group.finish();
}

fn transmissivity_sweep(c: &mut Criterion) {
    let mut cfg = ExperimentConfig::new(ExperimentKind::TransmissivitySweep);
    cfg.axis.points = 16;
    let mut group = c.benchmark_group("transmissivity_sweep");
    group.sample_size(10);
    for (name, exec) in executors() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_experiment_with(&cfg, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, fading_average, transmissivity_sweep);
criterion_main!(benches);
