use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cuspres_core::divisor::build_graph;
use cuspres_core::foliation::build_omega;
use cuspres_core::forms::is_integrable;
use cuspres_core::io::{replay, to_json, trace_document};
use cuspres_core::numeric::cf_expand;
use cuspres_core::pi1::{abelianization, simplified_presentation};
use cuspres_core::{resolve, CuspidalInput, ResolveOptions};

fn input(p: u32, q: u32, ds: &[u32]) -> CuspidalInput {
    let branches: Vec<(i64, u32)> = ds.iter().enumerate().map(|(i, &d)| (i as i64 + 1, d)).collect();
    CuspidalInput::from_integers(p, q, &branches, &[])
}

fn bench_cf(c: &mut Criterion) {
    c.bench_function("cf_expand_89_144", |b| b.iter(|| cf_expand(black_box(89), black_box(144))));
}

fn bench_integrability(c: &mut Criterion) {
    let inp = CuspidalInput::from_integers(3, 4, &[(1, 2), (2, 1)], &[(1, 0, 2), (0, 1, -1)]);
    let omega = build_omega(&inp).omega;
    c.bench_function("integrability_3_4", |b| b.iter(|| is_integrable(black_box(&omega))));
}

fn bench_resolve(c: &mut Criterion) {
    let mut group = c.benchmark_group("resolve");
    group.sample_size(10).measurement_time(Duration::from_secs(10));
    for (p, q, ds) in [(2, 3, vec![2]), (2, 5, vec![2]), (2, 3, vec![2, 4])] {
        let inp = input(p, q, &ds);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{p}_{q}_{ds:?}")), &inp, |b, inp| {
            b.iter(|| resolve(inp, &ResolveOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn bench_outputs(c: &mut Criterion) {
    let trace = resolve(&input(2, 3, &[2]), &ResolveOptions::default()).unwrap();
    c.bench_function("graph_2_3_2", |b| b.iter(|| build_graph(black_box(&trace)).unwrap()));
    let doc = trace_document(&trace);
    c.bench_function("json_2_3_2", |b| b.iter(|| to_json(black_box(&doc))));
    c.bench_function("replay_2_3_2", |b| b.iter(|| replay(black_box(&doc)).unwrap()));
    c.bench_function("abelianization_r8", |b| {
        let p = simplified_presentation(8);
        b.iter(|| abelianization(black_box(&p)))
    });
}

criterion_group!(benches, bench_cf, bench_integrability, bench_resolve, bench_outputs);
criterion_main!(benches);
