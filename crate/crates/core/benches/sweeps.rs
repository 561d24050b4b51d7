//! Policy sweeps, epsilon scans and seed batches. Run once with the default
//! features and once with `--no-default-features` to compare backends:
//!
//! ```text
//! cargo bench -p pbe-core --bench sweeps -- --save-baseline parallel
//! cargo bench -p pbe-core --bench sweeps --no-default-features -- --baseline parallel
//! ```

#[path = "../tests/common/mod.rs"]
mod common;

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pbe_core::catalog;
use pbe_core::dynamics::{run_q_learning_seeds, RunConfig, SamplerConfig, StepSchedule};
use pbe_core::epsilon_lab::{default_grid, scan_epsilon, TargetMode};
use pbe_core::mdp::{Distribution, Policy};
use pbe_core::numerics::DenseMatrix;
use pbe_core::pbe::{certificate_report, enumerate_pbe_solutions, NuMode, PolicySet};
use pbe_core::parallel;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn backend() -> &'static str {
    if parallel::ENABLED {
        "parallel"
    } else {
        "sequential"
    }
}

fn uniform_behavior(ns: usize, na: usize) -> Policy {
    let rows = vec![vec![1.0 / na as f64; na]; ns];
    Policy::from_table(DenseMatrix::from_rows(&rows).unwrap()).unwrap()
}

fn policy_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group(format!("enumerate/{}", backend()));
    group.sample_size(10);
    for (ns, na) in [(6, 2), (8, 2), (5, 3), (6, 3)] {
        let mut rng = ChaCha8Rng::seed_from_u64(ns as u64 * 31 + na as u64);
        let mdp = common::random_mdp(&mut rng, ns, na, 0.95);
        let phi = common::random_features(&mut rng, ns, na, 4, 1.0);
        let mode = NuMode::Stationary(uniform_behavior(ns, na));
        let label = format!("{ns}x{na}");
        group.bench_with_input(BenchmarkId::new("solutions", &label), &(), |b, _| {
            b.iter(|| enumerate_pbe_solutions(black_box(&mdp), &phi, &mode, 0.0).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("certificates", &label), &(), |b, _| {
            b.iter(|| certificate_report(black_box(&mdp), &phi, &mode, &PolicySet::AllDeterministic, 0.01).unwrap())
        });
    }
    group.finish();
}

fn epsilon_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group(format!("scan/{}", backend()));
    let inst = catalog::epsilon_f2();
    let (mdp, phi) = (inst.mdp().unwrap(), inst.features().unwrap());
    let grid = default_grid();
    group.bench_function("two_arm_200", |b| {
        b.iter(|| scan_epsilon(black_box(&mdp), &phi, &grid, 0.0, TargetMode::Greedy).unwrap())
    });
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mdp = common::random_mdp(&mut rng, 5, 2, 0.9);
    let phi = common::random_features(&mut rng, 5, 2, 3, 1.0);
    group.sample_size(10);
    group.bench_function("random_5x2_200", |b| {
        b.iter(|| scan_epsilon(black_box(&mdp), &phi, &grid, 0.0, TargetMode::Greedy).unwrap())
    });
    group.finish();
}

fn seed_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group(format!("qlearning/{}", backend()));
    group.sample_size(10);
    let ex = catalog::example3();
    let sampler = SamplerConfig { d: Distribution::uniform(4), reward_noise_halfwidth: 0.1, seed: 0 };
    let cfg = RunConfig { max_iter: 20_000, stride: 1_000, ..RunConfig::default() };
    for n in [4u64, 16] {
        let seeds: Vec<u64> = (0..n).collect();
        group.bench_with_input(BenchmarkId::new("seeds", n), &seeds, |b, seeds| {
            b.iter(|| {
                run_q_learning_seeds(&ex.mdp, &ex.phi, &sampler, black_box(seeds), StepSchedule::default(), &[0.0, 0.0], cfg)
            })
        });
    }
    group.finish();
}

criterion_group!(benches, policy_sweep, epsilon_scan, seed_batch);
criterion_main!(benches);
