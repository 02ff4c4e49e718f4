//! `experiment collision|precision-growth|depth` — deterministic reports.
//!
//! Every report embeds its configuration and derives all randomness from the
//! explicit seed, so a rerun with the same flags is byte-identical.

use serde_json::{json, Value};

use geopack_core::hierarchy::{pack_all, DegeneratePolicy};
use geopack_core::pack::PackMode;
use geopack_core::pointloc::{bound_and_triangulate, build_dag, random_delaunay};
use geopack_core::scalar::{AReal, ExactScalar, Mode, Scalar};
use geopack_core::wire;

use crate::common::{self, Arith};
use crate::errors::CliError;
use crate::{CollideArgs, DepthArgs, PrecisionGrowthArgs};

/// The collision experiment is the codec's collision search verbatim.
pub fn collision(a: CollideArgs) -> Result<(), CliError> {
    crate::codec_cmd::collide(a)
}

// ------------------------------------------------------- precision growth

const GROWTH_SIZES: [usize; 4] = [18, 324, 1000, 10_000];

pub fn precision_growth(a: PrecisionGrowthArgs) -> Result<(), CliError> {
    let ar = common::arith(&a.arith)?;
    match ar.mode {
        Mode::Exact => growth_impl::<ExactScalar>(&a, &ar),
        Mode::Precision { .. } => growth_impl::<AReal>(&a, &ar),
    }
}

fn growth_impl<S: Scalar>(a: &PrecisionGrowthArgs, ar: &Arith) -> Result<(), CliError> {
    let mut rows: Vec<Value> = Vec::new();
    common::human("n      levels  input-bits  root-values  root-bits  bits/input");
    for &n in &GROWTH_SIZES {
        let seed = a.seed.wrapping_add(n as u64);
        let xs: Vec<S> = common::random_scalars(n, seed, &ar.ctx);
        let pa = pack_all(&xs, PackMode::Strict, &ar.max_den, &ar.ctx, DegeneratePolicy::RawCarry)?;
        let bpi = pa.stats.bits_per_input(n);
        common::human(&format!(
            "{n:<6} {:<7} {:<11} {:<12} {:<10} {bpi:.2}",
            pa.levels.len(),
            pa.stats.input_bits,
            pa.stats.root_values,
            pa.stats.root_bits,
        ));
        rows.push(json!({
            "n": n,
            "seed": seed,
            "levels": pa.levels.len(),
            "input_bits": pa.stats.input_bits,
            "root_values": pa.stats.root_values,
            "root_bits": pa.stats.root_bits,
            "bits_per_input": format!("{bpi:.2}"),
            "grows": pa.stats.root_bits >= pa.stats.input_bits,
        }));
    }
    let doc = json!({
        "kind": "precision-growth",
        "config": {
            "seed": a.seed,
            "scalar": wire::mode_name(&ar.mode),
            "max_den": ar.max_den.to_string(),
            "mode": "strict",
            "policy": "raw-carry",
            "sizes": GROWTH_SIZES,
        },
        "rows": rows,
    });
    common::emit(&doc, &a.out.output, &[])?;
    common::human(
        "strict packing trades count for width: the root stores fewer values in at least as many total bits",
    );
    Ok(())
}

// ------------------------------------------------------------------ depth

pub fn depth(a: DepthArgs) -> Result<(), CliError> {
    let sizes = parse_sizes(&a.sizes)?;
    let mut rows: Vec<Value> = Vec::new();
    common::human("n      leaves  nodes   depth  bound  rounds  decay-ok");
    for &n in &sizes {
        let seed = a.seed.wrapping_add(n as u64);
        let sub = random_delaunay(n, seed);
        let tm = bound_and_triangulate(&sub)?;
        let dag = build_dag(&tm);
        let log2n = (usize::BITS - n.leading_zeros()) as usize;
        let bound = 6 * log2n;
        let decay_ok = dag
            .rounds
            .iter()
            .all(|w| w.triangles_after * 23 <= w.triangles_before * 22);
        common::human(&format!(
            "{n:<6} {:<7} {:<7} {:<6} {bound:<6} {:<7} {decay_ok}",
            tm.triangles.len(),
            dag.nodes.len(),
            dag.depth,
            dag.rounds.len(),
        ));
        rows.push(json!({
            "n": n,
            "seed": seed,
            "leaves": tm.triangles.len(),
            "nodes": dag.nodes.len(),
            "depth": dag.depth,
            "depth_bound": bound,
            "within_bound": dag.depth <= bound,
            "rounds": dag.rounds.len(),
            "decay_ok": decay_ok,
        }));
    }
    let doc = json!({
        "kind": "depth",
        "config": { "seed": a.seed, "sizes": sizes },
        "rows": rows,
    });
    common::emit(&doc, &a.out.output, &[])?;
    common::human("depth stays within 6·log2(n) and every round removes at least 1/23 of the triangles");
    Ok(())
}

fn parse_sizes(text: &str) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for tok in text.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let n: usize = tok
            .parse()
            .map_err(|_| CliError::validation(format!("bad size {tok:?} in --sizes")))?;
        if n < 3 {
            return Err(CliError::validation("--sizes entries must be at least 3"));
        }
        out.push(n);
    }
    if out.is_empty() {
        return Err(CliError::validation("--sizes must list at least one size"));
    }
    Ok(out)
}
