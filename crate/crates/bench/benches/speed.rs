//! Hot-path benchmarks: codec, bundle, hierarchy fetch, locator queries.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;

use geopack_core::hierarchy::{fetch, pack_all, DegeneratePolicy};
use geopack_core::pack::{pack18, unpack18, PackMode};
use geopack_core::pencil::{decode6_strict, encode6, SlopeSix};
use geopack_core::pointloc::{
    bound_and_triangulate, build_dag, pack_dag, random_delaunay, PackBackend,
};
use geopack_core::scalar::{ExactScalar, PrecisionContext, Rat, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn rat(n: i64, d: i64) -> ExactScalar {
    ExactScalar::from_rat_ctx(
        &Rat::new(BigInt::from(n), BigInt::from(d)),
        &PrecisionContext::new_exact(),
    )
}

fn sample_values(n: usize, seed: u64) -> Vec<ExactScalar> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let ctx = PrecisionContext::new_exact();
    (0..n)
        .map(|_| {
            let num: i64 = rng.random_range(-999..=999);
            let den: i64 = rng.random_range(1..=999);
            ExactScalar::from_rat_ctx(&Rat::new(num.into(), den.into()), &ctx)
        })
        .collect()
}

fn codec(c: &mut Criterion) {
    let ctx = PrecisionContext::new_exact();
    let max_den = BigInt::from(1u64) << 32;
    let six = SlopeSix::new([rat(1, 1), rat(2, 1), rat(3, 1), rat(-1, 1), rat(-2, 1), rat(-3, 1)]);
    c.bench_function("encode6 exact", |b| {
        b.iter(|| encode6(black_box(&six), &max_den, &ctx).unwrap())
    });
    let enc = encode6(&six, &max_den, &ctx).unwrap();
    c.bench_function("decode6 strict exact", |b| {
        b.iter(|| decode6_strict(black_box(&enc), &ctx).unwrap())
    });
}

fn bundle(c: &mut Criterion) {
    let ctx = PrecisionContext::new_exact();
    let max_den = BigInt::from(1u64) << 32;
    let xs = sample_values(18, 40);
    let packed = pack18(&xs, PackMode::Strict, &max_den, &ctx).unwrap();
    c.bench_function("pack18 strict", |b| {
        b.iter(|| pack18(black_box(&xs), PackMode::Strict, &max_den, &ctx).unwrap())
    });
    c.bench_function("unpack18 strict", |b| {
        b.iter(|| unpack18(black_box(&packed), None, &ctx).unwrap())
    });
}

fn hierarchy(c: &mut Criterion) {
    let ctx = PrecisionContext::new_exact();
    let max_den = BigInt::from(1u64) << 32;
    let xs = sample_values(360, 41);
    let pa = pack_all(&xs, PackMode::Strict, &max_den, &ctx, DegeneratePolicy::RawCarry).unwrap();
    c.bench_function("hier fetch n=360", |b| {
        let mut i = 0usize;
        b.iter(|| {
            i = (i + 97) % 360;
            fetch(black_box(&pa), i).unwrap()
        })
    });
}

fn locator(c: &mut Criterion) {
    let sub = random_delaunay(200, 17);
    let tm = bound_and_triangulate(&sub).unwrap();
    let dag = build_dag(&tm);
    let ctx = PrecisionContext::new_exact();
    let packed = pack_dag::<ExactScalar>(&dag, PackBackend::Strict, &(BigInt::from(1u64) << 32), &ctx);
    let mut rng = ChaCha20Rng::seed_from_u64(99);
    let span = 1_000_000i64;
    let queries: Vec<_> = (0..64)
        .map(|_| {
            (
                Rat::from_integer(BigInt::from(rng.random_range(0..span))),
                Rat::from_integer(BigInt::from(rng.random_range(0..span))),
            )
        })
        .collect();
    c.bench_function("locate flat n=200", |b| {
        let mut i = 0usize;
        b.iter(|| {
            i = (i + 1) % queries.len();
            dag.locate(black_box(&queries[i]))
        })
    });
    c.bench_function("locate packed-strict n=200", |b| {
        let mut i = 0usize;
        b.iter(|| {
            i = (i + 1) % queries.len();
            packed.locate(black_box(&queries[i]), &ctx).unwrap()
        })
    });
}

criterion_group!(benches, codec, bundle, hierarchy, locator);
criterion_main!(benches);
