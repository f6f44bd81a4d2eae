use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dlab_core::inverse::{self, InverseCheck};
use dlab_core::oracle;
use dlab_core::product::{self, PairState, SolverConfig};
use dlab_core::recurrence::{self, EscapeSide};

fn inverse_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("inverse_build");
    g.sample_size(10);
    for m in [5, 6, 7] {
        g.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| inverse::build(black_box(m)).unwrap())
        });
    }
    g.finish();
}

fn inverse_verify(c: &mut Criterion) {
    let st = inverse::build(7).unwrap();
    let mut g = c.benchmark_group("inverse_verify_stage7");
    g.sample_size(10);
    let checks = [
        ("zero_runs", InverseCheck::ZeroRunThenOne { kmax: 20 }),
        ("shift", InverseCheck::ShiftRigidity { kmax: 6 }),
        ("smallness", InverseCheck::SmallnessPropagation { jmax: 4 }),
    ];
    for (name, check) in checks {
        g.bench_function(name, |b| b.iter(|| inverse::verify(&st, black_box(check)).unwrap()));
    }
    g.finish();
}

fn pair_solver(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let st2 = product::build(2, false, &cfg).unwrap();
    let st3 = product::build(3, false, &cfg).unwrap();
    let mut g = c.benchmark_group("pair_solve");
    g.sample_size(10);
    g.bench_function("stage3", |b| b.iter(|| product::solve_spacers(black_box(&st2), &cfg).unwrap()));
    g.bench_function("stage4", |b| b.iter(|| product::solve_spacers(black_box(&st3), &cfg).unwrap()));
    g.finish();
}

fn recurrence_witnesses(c: &mut Criterion) {
    let st: PairState = product::build(4, false, &SolverConfig::default()).unwrap();
    let mut g = c.benchmark_group("recurrence_stage4");
    g.sample_size(10);
    g.bench_function("escape_k3_w3", |b| {
        b.iter(|| recurrence::escape_witness(&st, 3, 3, EscapeSide::XatN).unwrap())
    });
    g.bench_function("omega_k3_w3", |b| b.iter(|| recurrence::cross_omega_witness(&st, 3, 3).unwrap()));
    g.finish();
}

fn oracle_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle_sweep");
    g.sample_size(10);
    g.bench_function("maps_n5", |b| b.iter(|| oracle::sweep(black_box(5), false, 4).unwrap()));
    g.bench_function("permutations_n6", |b| b.iter(|| oracle::sweep(black_box(6), true, 4).unwrap()));
    g.finish();
}

criterion_group!(benches, inverse_build, inverse_verify, pair_solver, recurrence_witnesses, oracle_sweep);
criterion_main!(benches);
