//! `pointloc build|query|verify` — planar point location.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde_json::{json, Value};

use geopack_core::pointloc::{
    bound_and_triangulate, build_dag, on_segment, pack_dag, parse_document, LocatorDag,
    PackBackend, PackedLocator, Pt, Subdivision, TriMap,
};
use geopack_core::scalar::{AReal, ExactScalar, Mode, PrecisionContext, Rat, Scalar};
use geopack_core::wire;

use crate::common;
use crate::errors::CliError;
use crate::{PointlocBuildArgs, PointlocQueryArgs, PointlocVerifyArgs};

/// Backend selector: the flat walk, or a packed walk under either scalar.
enum Backend {
    Flat,
    Packed(PackBackend),
}

fn backend_of(name: &str) -> Result<Backend, CliError> {
    if name == "flat" {
        return Ok(Backend::Flat);
    }
    Ok(Backend::Packed(wire::backend_parse(name)?))
}

fn build_locator(sub: &Subdivision) -> Result<(TriMap, LocatorDag), CliError> {
    let tm = bound_and_triangulate(sub)?;
    let dag = build_dag(&tm);
    Ok((tm, dag))
}

// ------------------------------------------------------------------- build

pub fn build(a: PointlocBuildArgs) -> Result<(), CliError> {
    let ar = common::arith(&a.arith)?;
    let text = common::read_text(&a.input)?;
    let sub = parse_document(&text)?;
    let (tm, dag) = build_locator(&sub)?;
    let leaves = tm.triangles.len();
    let backend = backend_of(&a.backend)?;
    let doc = match &backend {
        Backend::Flat => wire::locator_flat_to_json(&dag),
        Backend::Packed(pb) => match ar.mode {
            Mode::Exact => {
                let pl: PackedLocator<ExactScalar> = pack_dag(&dag, *pb, &ar.max_den, &ar.ctx);
                packed_summary(&pl);
                wire::locator_packed_to_json(&pl, &ar.mode)
            }
            Mode::Precision { .. } => {
                let pl: PackedLocator<AReal> = pack_dag(&dag, *pb, &ar.max_den, &ar.ctx);
                packed_summary(&pl);
                wire::locator_packed_to_json(&pl, &ar.mode)
            }
        },
    };
    common::emit(&doc, &a.out.output, &[&a.input])?;
    common::human(&format!(
        "built {} locator: {} nodes over {} leaf triangles, depth {}, {} coarsening rounds",
        backend_name(&backend),
        dag.nodes.len(),
        leaves,
        dag.depth,
        dag.rounds.len(),
    ));
    Ok(())
}

fn backend_name(b: &Backend) -> &'static str {
    match b {
        Backend::Flat => "flat",
        Backend::Packed(pb) => pb.name(),
    }
}

fn packed_summary<S: Scalar>(pl: &PackedLocator<S>) {
    let (mut to_strict, mut to_plain, mut groups) = (0usize, 0usize, 0usize);
    for n in &pl.nodes {
        to_strict += n.fallbacks.to_strict;
        to_plain += n.fallbacks.to_plain;
        groups += n.groups.len();
    }
    common::human(&format!(
        "packed child streams: {groups} groups, {to_strict} fell back to strict, {to_plain} stored plain"
    ));
}

// ------------------------------------------------------------------- query

pub fn query(a: PointlocQueryArgs) -> Result<(), CliError> {
    let doc = common::read_document(&a.input)?;
    let q: Pt = (parse_flag_rat("--x", &a.x)?, parse_flag_rat("--y", &a.y)?);
    let (label_idx, visits, unpacks, labels) = match wire::locator_from_json(&doc)? {
        wire::AnyLocator::Flat(dag) => {
            let out = dag.locate(&q);
            (out.label, out.node_visits, 0usize, dag.labels)
        }
        wire::AnyLocator::PackedExact(pl) => run_packed(&pl, &doc, &q)?,
        wire::AnyLocator::PackedReal(pl) => run_packed(&pl, &doc, &q)?,
    };
    let label = labels
        .get(label_idx)
        .cloned()
        .unwrap_or_else(|| format!("face-{label_idx}"));
    let out = json!({
        "kind": "locate",
        "x": a.x,
        "y": a.y,
        "label": label,
        "label_index": label_idx,
        "node_visits": visits,
        "unpacks": unpacks,
    });
    common::emit(&out, &a.out.output, &[&a.input])?;
    common::human(&format!(
        "({}, {}) lies in {label} ({visits} node visits, {unpacks} bundle decodes)",
        a.x, a.y
    ));
    Ok(())
}

fn parse_flag_rat(flag: &str, text: &str) -> Result<Rat, CliError> {
    geopack_core::scalar::parse_rat(text)
        .map_err(|e| CliError::validation(format!("bad {flag} value {text:?}: {e}")))
}

fn run_packed<S: Scalar>(
    pl: &PackedLocator<S>,
    doc: &Value,
    q: &Pt,
) -> Result<(usize, usize, usize, Vec<String>), CliError> {
    let ctx = packed_ctx(doc)?;
    let out = pl
        .locate(q, &ctx)
        .map_err(|e| CliError::validation(format!("locator walk failed: {e}")))?;
    Ok((out.label, out.node_visits, out.unpacks, pl.labels.clone()))
}

fn packed_ctx(doc: &Value) -> Result<PrecisionContext, CliError> {
    let name = doc
        .get("scalar")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::validation("locator document is missing its scalar mode"))?;
    Ok(wire::ctx_for(&wire::mode_parse(name)?))
}

// ------------------------------------------------------------------ verify

pub fn verify(a: PointlocVerifyArgs) -> Result<(), CliError> {
    let ar = common::arith(&a.arith)?;
    let text = common::read_text(&a.input)?;
    let sub = parse_document(&text)?;
    let (tm, dag) = build_locator(&sub)?;
    let grid = tm.build_grid();
    let backend = backend_of(&a.backend)?;

    // packed walkers are built once up front
    let packed_exact: Option<PackedLocator<ExactScalar>>;
    let packed_real: Option<PackedLocator<AReal>>;
    match (&backend, &ar.mode) {
        (Backend::Packed(pb), Mode::Exact) => {
            packed_exact = Some(pack_dag(&dag, *pb, &ar.max_den, &ar.ctx));
            packed_real = None;
        }
        (Backend::Packed(pb), Mode::Precision { .. }) => {
            packed_exact = None;
            packed_real = Some(pack_dag(&dag, *pb, &ar.max_den, &ar.ctx));
        }
        (Backend::Flat, _) => {
            packed_exact = None;
            packed_real = None;
        }
    }

    let mut rng = ChaCha20Rng::seed_from_u64(a.seed);
    let mut agreements = 0usize;
    let mut boundary_redraws = 0usize;
    let mut exemplars: Vec<Value> = Vec::new();
    for _ in 0..a.queries {
        // redraw queries that land exactly on an input edge of the oracle's
        // leaf: there the face is genuinely ambiguous and any tie-break is
        // defensible, so agreement is not well-defined
        let (q, oracle_label) = loop {
            let q = sample_query(&sub, &mut rng);
            let (label, tri) = tm.locate_bruteforce_grid(&grid, &q);
            match tri {
                Some(ti) if on_input_edge(&tm, ti, &q) => boundary_redraws += 1,
                _ => break (q, label),
            }
        };
        let got = match &backend {
            Backend::Flat => dag.locate(&q).label,
            Backend::Packed(_) => {
                let res = match (&packed_exact, &packed_real) {
                    (Some(pl), _) => pl.locate(&q, &ar.ctx).map(|o| o.label),
                    (_, Some(pl)) => pl.locate(&q, &ar.ctx).map(|o| o.label),
                    _ => unreachable!("packed backend without a packed walker"),
                };
                match res {
                    Ok(label) => label,
                    Err(e) => {
                        exemplars.push(json!({
                            "x": q.0.to_string(),
                            "y": q.1.to_string(),
                            "error": e.to_string(),
                        }));
                        continue;
                    }
                }
            }
        };
        if got == oracle_label {
            agreements += 1;
        } else if exemplars.len() < 5 {
            exemplars.push(json!({
                "x": q.0.to_string(),
                "y": q.1.to_string(),
                "oracle": dag.labels.get(oracle_label).cloned().unwrap_or_default(),
                "walker": dag.labels.get(got).cloned().unwrap_or_default(),
            }));
        }
    }
    let disagreements = a.queries - agreements;
    let pct = percent(agreements, a.queries);
    let doc = json!({
        "kind": "verify-report",
        "config": {
            "input": a.input.display().to_string(),
            "backend": a.backend,
            "queries": a.queries,
            "seed": a.seed,
            "scalar": wire::mode_name(&ar.mode),
            "max_den": ar.max_den.to_string(),
        },
        "agreements": agreements,
        "disagreements": disagreements,
        "boundary_redraws": boundary_redraws,
        "agreement_percent": pct,
        "exemplars": exemplars,
    });
    common::emit(&doc, &a.out.output, &[&a.input])?;
    common::human(&format!(
        "{agreements}/{} queries agree with the brute-force oracle ({pct}% agreement, {boundary_redraws} boundary redraws)",
        a.queries
    ));
    if disagreements > 0 {
        return Err(CliError::validation(format!(
            "{disagreements} queries disagreed with the oracle"
        )));
    }
    Ok(())
}

fn percent(hits: usize, total: usize) -> String {
    if total == 0 {
        return "100".into();
    }
    let pct = 100.0 * hits as f64 / total as f64;
    let s = format!("{pct:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// True when `q` lies on an input edge bounding the oracle triangle.
fn on_input_edge(tm: &TriMap, ti: usize, q: &Pt) -> bool {
    let t = &tm.triangles[ti];
    let [i, j, k] = t.v;
    for (u, v) in [(i, j), (j, k), (k, i)] {
        let key = (u.min(v), u.max(v));
        if tm.input_edges.contains(&key) && on_segment(&tm.points[u], &tm.points[v], q) {
            return true;
        }
    }
    false
}

/// One random rational query in the subdivision's bounding box, extended by
/// ten percent on every side. Coordinates are dyadic offsets, so repeated
/// draws are cheap and exactly reproducible.
fn sample_query(sub: &Subdivision, rng: &mut ChaCha20Rng) -> Pt {
    let (x0, y0, x1, y1) = &sub.bbox;
    let den = BigInt::from(1u64 << 20);
    let t = |rng: &mut ChaCha20Rng| {
        // t in [-1/10, 11/10] with granularity 2^-20
        let k: i64 = rng.random_range(-104_858..=1_153_434);
        Rat::new(BigInt::from(k), den.clone())
    };
    let span_x = x1 - x0;
    let span_y = y1 - y0;
    let x = x0 + t(rng) * span_x;
    let y = y0 + t(rng) * span_y;
    (x, y)
}
