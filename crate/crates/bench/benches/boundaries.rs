use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use miso_pareto::boundary_dd::boundary_dd;
use miso_pareto::boundary_dn::{boundary_dn, boundary_nd};
use miso_pareto::boundary_nn::{boundary_nn_closed_form, boundary_nn_numerical};
use miso_pareto::oracle::brute_force_boundary;
use miso_pareto::{DecodingScenario, OracleConfig, Preset, SweepMode, DEFAULT_EPSILON};

fn fast_methods(c: &mut Criterion) {
    let mut g = c.benchmark_group("fast");
    for p in Preset::ALL {
        let k = p.constants();
        for m in [125, 500] {
            let id = |name: &str| BenchmarkId::new(format!("{name}/{}", p.name()), m);
            g.bench_function(id("nn-num"), |b| {
                b.iter(|| boundary_nn_numerical(black_box(&k), m, DEFAULT_EPSILON, SweepMode::Sequential).unwrap())
            });
            g.bench_function(id("nn-closed"), |b| b.iter(|| boundary_nn_closed_form(black_box(&k), m).unwrap()));
            g.bench_function(id("dn"), |b| b.iter(|| boundary_dn(black_box(&k), m).unwrap()));
            g.bench_function(id("nd"), |b| b.iter(|| boundary_nd(black_box(&k), m).unwrap()));
            g.bench_function(id("dd"), |b| {
                b.iter(|| boundary_dd(black_box(&k), m, DEFAULT_EPSILON, SweepMode::Sequential).unwrap())
            });
        }
    }
    g.finish();
}

fn oracles(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    let k = Preset::Fig2.constants();
    for (s, m) in [(DecodingScenario::NN, 250), (DecodingScenario::DD, 250), (DecodingScenario::DN, 125)] {
        let cfg = OracleConfig::new(s, m, k).unwrap();
        g.bench_function(BenchmarkId::new(s.as_str(), m), |b| b.iter(|| brute_force_boundary(black_box(cfg)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, fast_methods, oracles);
criterion_main!(benches);
