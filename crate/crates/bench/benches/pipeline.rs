use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use qgrass::colouring::{self, ColourOptions};
use qgrass::johnson::{self, JohnsonMethod};
use qgrass::oracle;
use qgrass::{FieldSpec, GabidulinCode, GrassmannParams, Grassmannian, MatrixFq};

fn field(c: &mut Criterion) {
    let f = FieldSpec::with_order(1 << 20).unwrap();
    c.bench_function("ff/mul GF(2^20)", |b| {
        b.iter(|| (1..1000u32).fold(1u32, |acc, x| f.mul(acc, black_box(x * 977))))
    });
    c.bench_function("ff/discrete_log GF(11^6)", |b| {
        let g = FieldSpec::new(11, 6).unwrap();
        let theta = g.primitive_element().code();
        b.iter(|| g.discrete_log(theta, black_box(12345)).unwrap())
    });
}

fn linear_algebra(c: &mut Criterion) {
    let f = FieldSpec::with_order(4).unwrap();
    let data: Vec<u32> = (0..24 * 24).map(|i| (i * 7 + i / 5) as u32 % 4).collect();
    let m = MatrixFq::from_vec(&f, 24, 24, data).unwrap();
    c.bench_function("matq/rref 24x24 GF(4)", |b| b.iter(|| black_box(&m).rref()));
}

fn construction(c: &mut Criterion) {
    c.bench_function("rankmetric/build (2,3,3,2)", |b| {
        b.iter(|| GabidulinCode::build(2, 3, 3, black_box(2)).unwrap())
    });
    c.bench_function("grassmann/enumerate [6,3]_2", |b| {
        let f = FieldSpec::with_order(2).unwrap();
        let g = Grassmannian::new(&f, 6, 3).unwrap();
        b.iter(|| g.iter().count())
    });
    c.bench_function("johnson/gs J(8,4,2)", |b| {
        b.iter(|| johnson::gs_colouring(8, 4, black_box(2)).unwrap())
    });
}

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("colouring");
    group.sample_size(10);
    for (q, n, m, t) in [(2u64, 4usize, 2usize, 1usize), (2, 6, 3, 1), (5, 4, 2, 1)] {
        let params = GrassmannParams::new(q, n, m, t).unwrap();
        let ctx = colouring::make_context(&params, JohnsonMethod::Greedy).unwrap();
        let options = ColourOptions {
            verify: Some(true),
            ..Default::default()
        };
        group.bench_function(format!("full+verify {params}"), |b| {
            b.iter(|| colouring::full_colouring(&ctx, options).unwrap())
        });
    }
    group.finish();
}

fn solvers(c: &mut Criterion) {
    let g = oracle::build_graph(
        &GrassmannParams::new(2, 4, 2, 1).unwrap(),
        oracle::DEFAULT_GRAPH_CAP,
    )
    .unwrap();
    c.bench_function("oracle/exact_chromatic J_2(4,2,1)", |b| {
        b.iter(|| oracle::exact_chromatic(black_box(&g), oracle::DEFAULT_BUDGET))
    });
}

criterion_group!(
    benches,
    field,
    linear_algebra,
    construction,
    pipeline,
    solvers
);
criterion_main!(benches);
