use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use secrecy_core::bcregion::{dpc_region, region_total_power, zf_region};
use secrecy_core::matcore::{gen_eig_pencil, sym_eig};
use secrecy_core::random::{gaussian_matrix, positive_definite};
use secrecy_core::wiretap::{brute_force_capacity, secrecy_capacity};
use secrecy_core::{BroadcastScenario, GeneralMatrix, PowerConstraint, Sampling, SymMatrix, WiretapScenario};

fn kernels(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = positive_definite(&mut rng, 6, 0.1);
    let b = positive_definite(&mut rng, 6, 0.1);
    c.bench_function("sym_eig 6x6", |bench| bench.iter(|| sym_eig(black_box(&a)).unwrap()));
    c.bench_function("gen_eig_pencil 6x6", |bench| {
        bench.iter(|| gen_eig_pencil(black_box(&a), black_box(&b)).unwrap())
    });

    let sc = WiretapScenario::new(
        gaussian_matrix(&mut rng, 3, 4),
        gaussian_matrix(&mut rng, 2, 4),
        positive_definite(&mut rng, 4, 0.2),
    )
    .unwrap();
    c.bench_function("secrecy_capacity t=4", |bench| {
        bench.iter(|| secrecy_capacity(black_box(&sc)).unwrap())
    });

    let small = WiretapScenario::new(
        gaussian_matrix(&mut rng, 2, 2),
        gaussian_matrix(&mut rng, 1, 2),
        positive_definite(&mut rng, 2, 0.2),
    )
    .unwrap();
    c.bench_function("brute_force_capacity t=2 res=32", |bench| {
        bench.iter(|| brute_force_capacity(black_box(&small), 32).unwrap())
    });
}

fn regions(c: &mut Criterion) {
    let h1 = GeneralMatrix::from_rows(&[[0.3, 2.5], [2.2, 1.8]]).unwrap();
    let h2 = GeneralMatrix::from_rows(&[[1.5, 3.9]]).unwrap();
    let tp = BroadcastScenario::new(h1, h2, PowerConstraint::TotalPower(12.0)).unwrap();
    let sampling = Sampling { samples: 64, splits: 17, seed: 0 };
    let mut group = c.benchmark_group("regions");
    group.sample_size(10);
    group.bench_function("total power t=2", |bench| {
        bench.iter(|| region_total_power(black_box(&tp), &sampling).unwrap())
    });
    group.bench_function("zf t=2", |bench| bench.iter(|| zf_region(black_box(&tp), &sampling).unwrap()));

    let mx = BroadcastScenario::new(
        GeneralMatrix::from_rows(&[[1.8, -2.0, 2.0], [1.0, -6.0, 3.0]]).unwrap(),
        GeneralMatrix::from_rows(&[[2.3, 2.0, -3.0], [2.0, 1.2, -1.5]]).unwrap(),
        PowerConstraint::Matrix(
            SymMatrix::from_rows(&[[5.0, -0.7, -2.0], [-0.7, 3.8, -2.5], [-2.0, -2.5, 5.0]])
                .unwrap(),
        ),
    )
    .unwrap();
    group.bench_function("dpc t=3", |bench| bench.iter(|| dpc_region(black_box(&mx), &sampling).unwrap()));
    group.finish();
}

criterion_group!(benches, kernels, regions);
criterion_main!(benches);
