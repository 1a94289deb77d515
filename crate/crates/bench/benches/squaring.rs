use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use zsp_core::factor::cyclic_attack;
use zsp_core::graph::{build_graph, tree_of};
use zsp_core::oracle::BruteClassifier;
use zsp_core::{classify, RingContext};

const PAIRS: [(u64, u64); 3] = [(11, 23), (29, 41), (97, 101)];

fn classify_all(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify_all");
    for (s, p) in PAIRS {
        let ctx = RingContext::new(s, p).unwrap();
        group.bench_with_input(
            BenchmarkId::new("closed_form", ctx.modulus()),
            &ctx,
            |b, ctx| {
                b.iter(|| {
                    (0..ctx.modulus())
                        .map(|w| classify(w, ctx) as u8 as u64)
                        .sum::<u64>()
                })
            },
        );
        let brute = BruteClassifier::new(s, p);
        group.bench_with_input(
            BenchmarkId::new("oracle_tables", ctx.modulus()),
            &brute,
            |b, o| b.iter(|| (0..s * p).map(|w| o.classify(w) as u8 as u64).sum::<u64>()),
        );
    }
    group.finish();
}

fn full_graph(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_graph");
    for (s, p) in PAIRS {
        let ctx = RingContext::new(s, p).unwrap();
        let domain: Vec<u64> = (0..ctx.modulus()).collect();
        group.bench_with_input(
            BenchmarkId::from_parameter(ctx.modulus()),
            &domain,
            |b, d| b.iter(|| build_graph(black_box(d), &ctx).unwrap().cycles().len()),
        );
    }
    group.finish();
}

fn kernel_tree(c: &mut Criterion) {
    // 257 * 641 has k = 8 and l = 7, so the tree is eight levels deep
    let ctx = RingContext::new(257, 641).unwrap();
    c.bench_function("tree_of/257*641", |b| {
        b.iter(|| {
            tree_of(black_box(1), ctx.height() as usize, &ctx)
                .unwrap()
                .node_count()
        })
    });
    c.bench_function("sqrt_mod_n/257*641", |b| {
        b.iter(|| ctx.sqrt_mod_n(black_box(4)).len())
    });
}

fn attack(c: &mut Criterion) {
    c.bench_function("cyclic_attack/253", |b| {
        b.iter(|| cyclic_attack(253, black_box(25), 64).unwrap())
    });
    let n = 1_000_003 * 999_983;
    c.bench_function("cyclic_attack/1e12", |b| {
        b.iter(|| cyclic_attack(n, black_box(3), 4096).unwrap())
    });
}

criterion_group!(benches, classify_all, full_graph, kernel_tree, attack);
criterion_main!(benches);
