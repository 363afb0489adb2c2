use std::hint::black_box;

use circle_breaks::exact::exact_reduce_case1;
use circle_breaks::jumps::{orbit_connections, DEFAULT_N_MAX};
use circle_breaks::reduction::{conjugate_to_diffeo, reduce_to_prescribed};
use circle_breaks::rotnum::rotation_number;
use circle_breaks::{ReductionConfig, Tolerances};
use circle_breaks_bench::{
    grid, one_orbit_map, rational_maps, rational_two_break, two_break_map, two_connection_map,
};
use criterion::{criterion_group, criterion_main, Criterion};

fn evaluation(c: &mut Criterion) {
    let f = two_connection_map();
    let xs = grid(1000);
    c.bench_function("eval_word_1000_points", |b| {
        b.iter(|| xs.iter().map(|&x| f.eval_f64(black_box(x))).sum::<f64>())
    });
    let g = two_break_map();
    c.bench_function("rotation_number_1e5", |b| {
        b.iter(|| rotation_number(black_box(&g), 100_000))
    });
}

fn analysis(c: &mut Criterion) {
    let tol = Tolerances::default();
    let f = two_connection_map();
    c.bench_function("orbit_connections", |b| {
        b.iter(|| orbit_connections(black_box(&f), DEFAULT_N_MAX, &tol).unwrap())
    });
}

fn reduction(c: &mut Criterion) {
    let cfg = ReductionConfig::default();
    let f = one_orbit_map();
    c.bench_function("reduce_pl_one_orbit", |b| {
        b.iter(|| reduce_to_prescribed(black_box(&f), &[0], &cfg).unwrap())
    });
    let g = two_break_map();
    c.bench_function("conjugate_to_diffeo_two_break", |b| {
        b.iter(|| conjugate_to_diffeo(black_box(&g), &cfg).unwrap())
    });
}

fn exact(c: &mut Criterion) {
    let p = rational_two_break();
    c.bench_function("exact_compose_and_invert", |b| {
        b.iter(|| black_box(&p).compose(&p.invert()).compose(&p))
    });
    let (_, f, k) = rational_maps().swap_remove(1);
    c.bench_function("exact_reduce_two_connections", |b| {
        b.iter(|| exact_reduce_case1(black_box(&f), &k, DEFAULT_N_MAX).unwrap())
    });
}

criterion_group!(benches, evaluation, analysis, reduction, exact);
criterion_main!(benches);
