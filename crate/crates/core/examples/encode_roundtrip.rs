//! Encode six slopes, print the stored record, decode it back, and decode the
//! literal (slope-free) record under a perturbed hypothesis to show the
//! one-parameter ambiguity the strict record resolves.
//!
//! Run with: `cargo run -p geopack-core --example encode_roundtrip`

use num_bigint::BigInt;
use geopack_core::pencil::{decode6_literal, decode6_strict, encode6};
use geopack_core::scalar::parse_rat;
use geopack_core::{ExactScalar, PrecisionContext, SlopeSix};

fn main() {
    let ctx = PrecisionContext::new_exact();
    let six = SlopeSix::new(
        ["1", "2", "3", "-1", "-2", "-3"]
            .map(|t| ExactScalar::from_rat(parse_rat(t).unwrap())),
    );
    println!("input slopes: {}", six.render());

    let max_den = BigInt::from(1u64 << 32);
    let enc = encode6(&six, &max_den, &ctx).expect("encodable");
    println!("common transversal slope s* = {}", enc.s.render());
    println!(
        "stored record: b1={} b2={} r={} B[{:?}]={} (rat {}) P0[{:?}]={} (rat {})",
        enc.literal.b1.render(),
        enc.literal.b2.render(),
        enc.literal.r.render(),
        enc.literal.b_rat_axis,
        enc.literal.b_real.render(),
        enc.literal.b_rat,
        enc.literal.p0_rat_axis,
        enc.literal.p0_real.render(),
        enc.literal.p0_rat,
    );

    let back = decode6_strict(&enc, &ctx).expect("strict decode");
    println!("strict decode:  {}", back.render());
    assert_eq!(back.m.to_vec(), six.m.to_vec(), "strict roundtrip is exact");

    let s_hyp = ExactScalar::from_rat(parse_rat("1/10").unwrap());
    let other = decode6_literal(&enc.literal, &s_hyp, &ctx).expect("literal decode");
    println!("literal decode at s=1/10: {}", other.render());
    let re = encode6(&other, &max_den, &ctx).expect("re-encode");
    println!(
        "re-encoded transversal slope: {} (same literal record: {})",
        re.s.render(),
        geopack_core::pencil::literal_eq(&re.literal, &enc.literal, &ctx),
    );
}
