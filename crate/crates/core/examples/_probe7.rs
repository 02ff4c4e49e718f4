// probe: pack_all n=10^4 strict timing + fetch costs
use geopack_core::hierarchy::*;
use geopack_core::pack::PackMode;
use geopack_core::scalar::*;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn main() {
    let ctx = PrecisionContext::new_exact();
    let mut rng = ChaCha20Rng::seed_from_u64(1007);
    let xs: Vec<ExactScalar> = (0..10_000)
        .map(|_| {
            let num: i64 = rng.random_range(-999..=999);
            let den: i64 = rng.random_range(1..=999);
            ExactScalar::from_rat_ctx(&Rat::new(num.into(), den.into()), &ctx)
        })
        .collect();
    for (name, max_den) in [("2^20", BigInt::from(1u64 << 20)), ("2^32", BigInt::from(1u64) << 32)] {
        let t0 = std::time::Instant::now();
        let pa = pack_all(&xs, PackMode::Strict, &max_den, &ctx, DegeneratePolicy::RawCarry).unwrap();
        let t1 = std::time::Instant::now();
        let mut maxdec = 0usize;
        for i in (0..10_000).step_by(10) {
            let r = fetch(&pa, i).unwrap();
            assert_eq!(r.value, xs[i], "mismatch at {i}");
            maxdec = maxdec.max(r.decompositions);
        }
        let t2 = std::time::Instant::now();
        println!(
            "max_den {name}: pack {:?}  levels {}  root {} vals  fetch x1000 {:?}  maxdec {}  oracle-levels {}",
            t1 - t0, pa.levels.len(), pa.stats.root_values, t2 - t1, maxdec,
            ceil_log_18_17(10_000) + 1
        );
    }
}
