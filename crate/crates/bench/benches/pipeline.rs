use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use stabreduce::cones::Cone;
use stabreduce::{gm_poly, gms, reduce, reichstein_fan, saturation, verify_trace};
use stabreduce_bench as fixtures;

fn transforms(c: &mut Criterion) {
    let a3 = fixtures::affine(&[1, 1, -1]);
    let origin = Cone::orthant(3);
    c.bench_function("saturation A3 (1,1,-1)", |b| b.iter(|| saturation(black_box(&a3), std::slice::from_ref(&origin)).unwrap()));
    c.bench_function("reichstein A3 (1,1,-1)", |b| b.iter(|| reichstein_fan(black_box(&a3), std::slice::from_ref(&origin)).unwrap()));
}

fn reduction(c: &mut Criterion) {
    let mut g = c.benchmark_group("reduce");
    for (name, x) in [
        ("A2 (1,-1)", fixtures::affine(&[1, -1]).as_union()),
        ("A4 rank 2", fixtures::rank_two()),
        ("A4 rank 2, one step in", fixtures::half_reduced()),
    ] {
        g.bench_function(name, |b| b.iter(|| reduce(black_box(&x), &[]).unwrap()));
        let trace = reduce(&x, &[]).unwrap();
        g.bench_function(format!("{name} verify"), |b| b.iter(|| verify_trace(black_box(&trace))));
    }
    g.finish();
}

fn invariants(c: &mut Criterion) {
    let x = fixtures::affine(&[2, 3, -5]);
    let top = Cone::orthant(3);
    c.bench_function("invariant chart A3 (2,3,-5)", |b| b.iter(|| gms::invariant_chart(black_box(&x), &top).unwrap()));
}

fn polynomial(c: &mut Criterion) {
    let x = fixtures::false_example();
    c.bench_function("saturated blowup exceptional", |b| {
        b.iter(|| gm_poly::saturated_blowup_exceptional(black_box(&x), gm_poly::DEFAULT_DEGREE_BOUND).unwrap())
    });
    let w = fixtures::representation();
    c.bench_function("torus reichstein fixed points", |b| b.iter(|| gm_poly::torus_reichstein_fixed_points(black_box(&w))));
}

criterion_group!(benches, transforms, reduction, invariants, polynomial);
criterion_main!(benches);
