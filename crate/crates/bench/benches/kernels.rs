use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use entropic_core::boltzmann::{bz_initial, BoltzConfig, SpectralOperator};
use entropic_core::fix::{entropic_step, solve_beta};
use entropic_core::fokker_planck::{fp_build, fp_initial, FpConfig};
use entropic_core::integrators::MidpointStepper;
use entropic_core::{entropy, Distribution, Equilibrium, FixMode};

fn collision(c: &mut Criterion) {
    for m in [5, 9] {
        let cfg = BoltzConfig::new(m).unwrap();
        let op = SpectralOperator::new(cfg);
        let f = bz_initial(&cfg).unwrap();
        c.bench_function(&format!("collision_rhs M={m}"), |b| {
            b.iter(|| op.collision_rhs(black_box(f.values())).unwrap())
        });
    }
}

fn fokker_planck(c: &mut Criterion) {
    let sys = fp_build(&FpConfig::new(64)).unwrap();
    let g0 = fp_initial(&sys).unwrap();
    let stepper = MidpointStepper::new(&sys.system, 1.0 / 512.0).unwrap();
    c.bench_function("midpoint step N=64", |b| {
        b.iter(|| stepper.step(black_box(g0.values())).unwrap())
    });
    c.bench_function("fp exact N=64", |b| {
        b.iter(|| sys.exact(black_box(g0.values()), 0.1))
    });
    let e = Equilibrium::constant(sys.n);
    c.bench_function("entropic midpoint step N=64", |b| {
        b.iter_batched(
            || g0.clone(),
            |g| entropic_step(&g, |d| stepper.step(d.values()), &e, FixMode::RootSolve).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn beta(c: &mut Criterion) {
    let sys = fp_build(&FpConfig::new(64)).unwrap();
    let g0 = fp_initial(&sys).unwrap();
    let f = Distribution::new(g0.values().to_vec(), sys.weights.clone()).unwrap();
    let target = 0.5 * entropy::gibbs_entropy(&f.normalized().unwrap());
    c.bench_function("solve_beta N=64", |b| {
        b.iter(|| solve_beta(black_box(&f), black_box(target)).unwrap())
    });
}

criterion_group!(benches, collision, fokker_planck, beta);
criterion_main!(benches);
