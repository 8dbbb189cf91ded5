use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use lrtrap::dynamics::{mean_survival_classical, mean_survival_quantum, propagate_oracle};
use lrtrap::model::{build_classical_transfer, build_quantum_hamiltonian};
use lrtrap::spectral::{decompose_classical, decompose_quantum};
use lrtrap::{ChainConfig, Exponent, TimeGrid};

fn decompose(c: &mut Criterion) {
    let mut g = c.benchmark_group("decompose");
    g.sample_size(20);
    for (name, nu, gamma) in [
        ("quantum_n100_nni", Exponent::Infinite, 1.0),
        ("quantum_n100_nu3", Exponent::Finite(3.0), 0.001),
    ] {
        let h = build_quantum_hamiltonian(&ChainConfig::end_traps(100, nu, gamma).unwrap());
        g.bench_function(name, |b| b.iter(|| decompose_quantum(black_box(&h)).unwrap()));
    }
    let t = build_classical_transfer(&ChainConfig::end_traps(100, Exponent::Finite(3.0), 1.0).unwrap());
    g.bench_function("classical_n100_nu3", |b| b.iter(|| decompose_classical(black_box(&t)).unwrap()));
    g.finish();
}

fn survival(c: &mut Criterion) {
    let cfg = ChainConfig::end_traps(100, Exponent::Finite(3.0), 1.0).unwrap();
    let qs = decompose_quantum(&build_quantum_hamiltonian(&cfg)).unwrap();
    let cs = decompose_classical(&build_classical_transfer(&cfg)).unwrap();
    let grid = TimeGrid::log(0.1, 1e5, 40).unwrap();
    let mut g = c.benchmark_group("survival");
    g.sample_size(20);
    g.bench_function("quantum_n100_241pts", |b| {
        b.iter(|| mean_survival_quantum(&qs, &cfg, black_box(&grid)).unwrap())
    });
    g.bench_function("classical_n100_241pts", |b| {
        b.iter(|| mean_survival_classical(&cs, &cfg, black_box(&grid)).unwrap())
    });
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let h = build_quantum_hamiltonian(&ChainConfig::end_traps(32, Exponent::Finite(3.0), 1.0).unwrap());
    c.bench_function("expm_column_n32_t100", |b| {
        b.iter(|| propagate_oracle(black_box(&h), 1, 100.0).unwrap())
    });
}

criterion_group!(benches, decompose, survival, oracle);
criterion_main!(benches);
