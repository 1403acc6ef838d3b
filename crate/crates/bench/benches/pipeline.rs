use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use monodromy_lab::critical::NewtonOptions;
use monodromy_lab::cycles::{build_intersection_matrix, rank_of_block, Block};
use monodromy_lab::integrals::{check_center_vanishing, IntegralTolerances, TraceOptions};
use monodromy_lab::monodromy::verify_orbit_generation;
use monodromy_lab::{Arrangement, CriticalCatalog};
use monodromy_lab_bench::{epsilon, pipeline, DEGREES};

fn arrangement(c: &mut Criterion) {
    let mut g = c.benchmark_group("arrangement");
    for d in DEGREES {
        g.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| {
            b.iter(|| Arrangement::family(black_box(d), &epsilon()).unwrap())
        });
    }
    g.finish();
}

fn critical(c: &mut Criterion) {
    let mut g = c.benchmark_group("critical_points");
    g.sample_size(10);
    for d in DEGREES {
        let arr = Arrangement::family(d, &epsilon()).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(d), &arr, |b, arr| {
            b.iter(|| CriticalCatalog::compute(black_box(arr), &NewtonOptions::default()).unwrap())
        });
    }
    g.finish();
}

fn intersection(c: &mut Criterion) {
    let mut g = c.benchmark_group("intersection_matrix");
    for d in DEGREES {
        let p = pipeline(d);
        g.bench_with_input(BenchmarkId::new("build", d), &p, |b, p| {
            b.iter(|| build_intersection_matrix(black_box(&p.arrangement), &p.cycles))
        });
        g.bench_with_input(BenchmarkId::new("rank", d), &p, |b, p| b.iter(|| rank_of_block(black_box(&p.psi), Block::Full)));
    }
    g.finish();
}

fn orbit(c: &mut Criterion) {
    let mut g = c.benchmark_group("orbit");
    g.sample_size(10);
    for d in DEGREES {
        let p = pipeline(d);
        g.bench_with_input(BenchmarkId::from_parameter(d), &p, |b, p| b.iter(|| verify_orbit_generation(black_box(p)).unwrap()));
    }
    g.finish();
}

fn integrals(c: &mut Criterion) {
    let mut g = c.benchmark_group("integrals");
    g.sample_size(10);
    for d in [2, 3] {
        let p = pipeline(d);
        g.bench_with_input(BenchmarkId::from_parameter(d), &p, |b, p| {
            b.iter(|| {
                check_center_vanishing(
                    &p.arrangement,
                    &p.catalog,
                    5,
                    2024,
                    0.1,
                    &TraceOptions::default(),
                    &IntegralTolerances::default(),
                )
                .unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, arrangement, critical, intersection, orbit, integrals);
criterion_main!(benches);
