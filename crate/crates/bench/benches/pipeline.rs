use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use gnfi_bench::bench_config;
use gnfi_core::forward::{synthesize_data, FirstOrderSolution, SynthesisSpec};
use gnfi_core::inverse::{reconstruct, MeasurementSide, ReconParams};
use gnfi_core::physics::{Component, Side};
use gnfi_core::spectral::{analysis, profile_example2, synthesis};

fn bench_transforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("transforms");
    for n in [64usize, 128, 256] {
        let cfg = bench_config(n, 0.1);
        let psi = profile_example2(cfg.grid.clone());
        let spec = analysis(psi.values()).unwrap();
        group.throughput(Throughput::Elements((n * n) as u64));
        group.bench_with_input(BenchmarkId::new("analysis", n), &psi, |b, p| {
            b.iter(|| analysis(black_box(p.values())).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("synthesis", n), &spec, |b, s| {
            b.iter(|| synthesis(black_box(s)));
        });
    }
    group.finish();
}

fn bench_forward(c: &mut Criterion) {
    let mut group = c.benchmark_group("forward");
    for n in [64usize, 256] {
        let cfg = bench_config(n, 0.1);
        let psi = profile_example2(cfg.grid.clone());
        let spec = SynthesisSpec {
            order: 1,
            noise_level: 0.01,
            seed: 1,
            side: Side::Above,
        };
        group.throughput(Throughput::Elements((n * n) as u64));
        group.bench_with_input(BenchmarkId::new("assemble", n), &cfg, |b, cfg| {
            b.iter(|| FirstOrderSolution::assemble(black_box(cfg)).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("synthesize_data", n), &cfg, |b, cfg| {
            b.iter(|| synthesize_data(black_box(cfg), &psi, &spec, Component::E1).unwrap());
        });
    }
    group.finish();
}

fn bench_reconstruct(c: &mut Criterion) {
    let mut group = c.benchmark_group("inverse");
    for n in [64usize, 256] {
        let cfg = bench_config(n, 0.1);
        let psi = profile_example2(cfg.grid.clone());
        let data = synthesize_data(
            &cfg,
            &psi,
            &SynthesisSpec {
                order: 1,
                noise_level: 0.01,
                seed: 1,
                side: Side::Above,
            },
            Component::E1,
        )
        .unwrap();
        let mut params = ReconParams::new(MeasurementSide::Reflection, Component::E1).unwrap();
        params.noise_level = 0.01;
        group.throughput(Throughput::Elements((n * n) as u64));
        group.bench_with_input(BenchmarkId::new("reconstruct", n), &data, |b, d| {
            b.iter(|| reconstruct(black_box(d), &cfg, &params).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, bench_transforms, bench_forward, bench_reconstruct);
criterion_main!(benches);
