//! `hier pack|fetch|stats` — the recursive bundle tower over an array.

use serde_json::{json, Value};

use geopack_core::hierarchy::{fetch, pack_all, HierarchyStats, PackedArray};
use geopack_core::scalar::{AReal, ExactScalar, Mode, Scalar};
use geopack_core::wire;

use crate::common::{self, Arith};
use crate::errors::CliError;
use crate::{HierFetchArgs, HierPackArgs, HierStatsArgs};

/// Resolve the array source: inline values, a file, or seeded generation.
enum Source {
    Text(String),
    Generated { n: usize, seed: u64 },
}

fn source(
    values: &Option<String>,
    input: &Option<std::path::PathBuf>,
    n: &Option<usize>,
    seed: &Option<u64>,
) -> Result<Source, CliError> {
    match (values, input, n) {
        (Some(t), None, None) => Ok(Source::Text(t.clone())),
        (None, Some(p), None) => Ok(Source::Text(common::read_text(p)?)),
        (None, None, Some(n)) => {
            let seed = seed.ok_or_else(|| {
                CliError::validation("--n generates random values and requires an explicit --seed")
            })?;
            if *n == 0 {
                return Err(CliError::validation("--n must be at least 1"));
            }
            Ok(Source::Generated { n: *n, seed })
        }
        (None, None, None) => Err(CliError::validation(
            "no values: pass them inline, via --input FILE, or generate with --n N --seed S",
        )),
        _ => Err(CliError::validation(
            "pass exactly one of: inline values, --input, or --n",
        )),
    }
}

fn load_values<S: Scalar>(src: &Source, ar: &Arith) -> Result<Vec<S>, CliError> {
    match src {
        Source::Text(t) => common::parse_scalars(t, &ar.ctx),
        Source::Generated { n, seed } => Ok(common::random_scalars(*n, *seed, &ar.ctx)),
    }
}

fn stats_json(stats: &HierarchyStats, n: usize) -> Value {
    let levels: Vec<Value> = stats
        .levels
        .iter()
        .map(|l| {
            json!({
                "input_len": l.input_len,
                "stored_values": l.stored_values,
                "bundle_count": l.bundle_count,
                "raw_count": l.raw_count,
                "total_bits": l.total_bits,
                "max_pair_bits": l.max_pair_bits,
                "overflow_pairs": l.overflow_pairs,
                "working_bits": l.working_bits,
            })
        })
        .collect();
    json!({
        "levels": levels,
        "input_bits": stats.input_bits,
        "root_values": stats.root_values,
        "root_bits": stats.root_bits,
        "bits_per_input": format!("{:.2}", stats.bits_per_input(n)),
    })
}

// -------------------------------------------------------------------- pack

pub fn pack(a: HierPackArgs) -> Result<(), CliError> {
    let ar = common::arith(&a.arith)?;
    match ar.mode {
        Mode::Exact => pack_impl::<ExactScalar>(&a, &ar),
        Mode::Precision { .. } => pack_impl::<AReal>(&a, &ar),
    }
}

fn pack_impl<S: Scalar>(a: &HierPackArgs, ar: &Arith) -> Result<(), CliError> {
    let mode = wire::packmode_parse(&a.pack_mode)?;
    let policy = wire::policy_parse(&a.policy)?;
    let src = source(&a.values, &a.input, &a.n, &a.seed)?;
    let xs: Vec<S> = load_values(&src, ar)?;
    let pa = pack_all(&xs, mode, &ar.max_den, &ar.ctx, policy)?;
    let mut doc = wire::hier_to_json(&pa);
    if let Source::Generated { n, seed } = src {
        doc.as_object_mut()
            .expect("hierarchy documents are objects")
            .insert("generator".into(), json!({ "n": n, "seed": seed }));
    }
    let inputs: Vec<&std::path::Path> = a.input.iter().map(|p| p.as_path()).collect();
    common::emit(&doc, &a.out.output, &inputs)?;
    common::human(&format!(
        "packed {} values into {} levels; root holds {} stored values ({:.2} bits each per input)",
        pa.n,
        pa.levels.len(),
        pa.stats.root_values,
        pa.stats.bits_per_input(pa.n),
    ));
    Ok(())
}

// ------------------------------------------------------------------- fetch

pub fn fetch_cmd(a: HierFetchArgs) -> Result<(), CliError> {
    let doc = common::read_document(&a.input)?;
    match wire::hier_from_json_any(&doc)? {
        wire::AnyHier::Exact(pa) => fetch_impl(&a, &pa),
        wire::AnyHier::Real(pa) => fetch_impl(&a, &pa),
    }
}

fn fetch_impl<S: Scalar>(a: &HierFetchArgs, pa: &PackedArray<S>) -> Result<(), CliError> {
    let res = fetch(pa, a.index)?;
    let out = json!({
        "kind": "fetch",
        "index": a.index,
        "n": pa.n,
        "value": res.value.wire_render(),
        "verified": res.verified,
        "decompositions": res.decompositions,
        "levels_touched": res.levels_touched,
    });
    common::emit(&out, &a.out.output, &[&a.input])?;
    common::human(&format!(
        "element {} of {} = {} ({}; {} decompositions across {} levels)",
        a.index,
        pa.n,
        res.value.render(),
        if res.verified { "verified" } else { "unverified" },
        res.decompositions,
        res.levels_touched,
    ));
    Ok(())
}

// ------------------------------------------------------------------- stats

pub fn stats(a: HierStatsArgs) -> Result<(), CliError> {
    if let Some(path) = &a.input {
        if a.n.is_some() {
            return Err(CliError::validation("pass --input or --n, not both"));
        }
        let doc = common::read_document(path)?;
        return match wire::hier_from_json_any(&doc)? {
            wire::AnyHier::Exact(pa) => stats_report(&a, &pa),
            wire::AnyHier::Real(pa) => stats_report(&a, &pa),
        };
    }
    let ar = common::arith(&a.arith)?;
    match ar.mode {
        Mode::Exact => stats_generate::<ExactScalar>(&a, &ar),
        Mode::Precision { .. } => stats_generate::<AReal>(&a, &ar),
    }
}

fn stats_generate<S: Scalar>(a: &HierStatsArgs, ar: &Arith) -> Result<(), CliError> {
    let mode = wire::packmode_parse(&a.pack_mode)?;
    let policy = wire::policy_parse(&a.policy)?;
    let src = source(&None, &None, &a.n, &a.seed)?;
    let xs: Vec<S> = load_values(&src, ar)?;
    let pa = pack_all(&xs, mode, &ar.max_den, &ar.ctx, policy)?;
    stats_report(a, &pa)
}

fn stats_report<S: Scalar>(a: &HierStatsArgs, pa: &PackedArray<S>) -> Result<(), CliError> {
    let out = json!({
        "kind": "hier-stats",
        "config": {
            "n": pa.n,
            "mode": pa.mode.name(),
            "scalar": wire::mode_name(&pa.header.scalar_mode),
            "max_den": pa.header.max_den.to_string(),
            "policy": wire::policy_name(pa.header.degenerate_policy),
        },
        "stats": stats_json(&pa.stats, pa.n),
    });
    let inputs: Vec<&std::path::Path> = a.input.iter().map(|p| p.as_path()).collect();
    common::emit(&out, &a.out.output, &inputs)?;
    let table = pa.stats.render(pa.n);
    for line in table.lines() {
        common::human(line);
    }
    common::human(&format!(
        "root holds {} stored values",
        pa.stats.root_values
    ));
    Ok(())
}
