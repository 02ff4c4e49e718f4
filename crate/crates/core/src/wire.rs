//! Serialized artifact formats.
//!
//! Two versioned structured-text (JSON) documents:
//!
//! * `GPAK1` — a packed hierarchy: header (n, mode, scalar mode, max_den,
//!   policy, perturbation record), then levels, root values, and stats.
//! * `GLOC1` — a point-location structure: header (backend, labels, depth,
//!   fanout), then nodes — plain for the flat backend, codec-packed for the
//!   packed backends.
//!
//! All numbers serialize as decimal strings (rationals as `num/den`); every
//! header records the arithmetic configuration. Scalars use their
//! self-describing wire form so mixed-precision collections roundtrip
//! exactly. Key order in emitted documents is alphabetical (the serializer's
//! canonical map order), making every emission byte-deterministic.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::hierarchy::{
    DegeneratePolicy, GroupSlot, HierarchyHeader, HierarchyStats, HypothesisPolicy, LevelRecord,
    LevelStats, PackedArray,
};
use crate::pack::{Bundle, BundleHeader, PackMode, PackedPair, TupleRecord};
use crate::pencil::Axis;
use crate::pointloc::dag::{DagNode, LocatorDag, RoundStats};
use crate::pointloc::packed::{FallbackCounts, NodeGroup, PackBackend, PackedLocator, PackedNode};
use crate::scalar::{format_rat, parse_rat, AReal, ExactScalar, Mode, PrecisionContext, Scalar};

pub const HIER_MAGIC: &str = "GPAK1";
pub const LOCATOR_MAGIC: &str = "GLOC1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WireError {
    #[error("bad document: {detail}")]
    BadDocument { detail: String },
}

fn bad(detail: impl Into<String>) -> WireError {
    WireError::BadDocument {
        detail: detail.into(),
    }
}

// ---------------------------------------------------------------- accessors

fn get<'v>(v: &'v Value, key: &str) -> Result<&'v Value, WireError> {
    v.get(key).ok_or_else(|| bad(format!("missing field {key}")))
}

fn str_of<'v>(v: &'v Value, key: &str) -> Result<&'v str, WireError> {
    get(v, key)?
        .as_str()
        .ok_or_else(|| bad(format!("field {key} must be a string")))
}

fn u64_of(v: &Value, key: &str) -> Result<u64, WireError> {
    get(v, key)?
        .as_u64()
        .ok_or_else(|| bad(format!("field {key} must be a nonnegative integer")))
}

fn usize_of(v: &Value, key: &str) -> Result<usize, WireError> {
    usize::try_from(u64_of(v, key)?).map_err(|_| bad(format!("field {key} out of range")))
}

fn u32_of(v: &Value, key: &str) -> Result<u32, WireError> {
    u32::try_from(u64_of(v, key)?).map_err(|_| bad(format!("field {key} out of range")))
}

fn arr_of<'v>(v: &'v Value, key: &str) -> Result<&'v Vec<Value>, WireError> {
    get(v, key)?
        .as_array()
        .ok_or_else(|| bad(format!("field {key} must be an array")))
}

fn bigint_of(v: &Value, key: &str) -> Result<BigInt, WireError> {
    str_of(v, key)?
        .parse()
        .map_err(|_| bad(format!("field {key} must be a decimal integer")))
}

// ------------------------------------------------------------- enum names

pub fn mode_name(m: &Mode) -> String {
    match m {
        Mode::Exact => "exact".to_string(),
        Mode::Precision { bits } => format!("p={bits}"),
    }
}

pub fn mode_parse(s: &str) -> Result<Mode, WireError> {
    if s == "exact" {
        return Ok(Mode::Exact);
    }
    if let Some(b) = s.strip_prefix("p=") {
        let bits: u32 = b
            .parse()
            .map_err(|_| bad(format!("bad precision in mode {s}")))?;
        if bits == 0 {
            return Err(bad("precision must be positive"));
        }
        return Ok(Mode::Precision { bits });
    }
    Err(bad(format!("unknown arithmetic mode {s}")))
}

pub fn packmode_parse(s: &str) -> Result<PackMode, WireError> {
    match s {
        "literal" => Ok(PackMode::Literal),
        "strict" => Ok(PackMode::Strict),
        other => Err(bad(format!("unknown pack mode {other}"))),
    }
}

pub fn policy_name(p: DegeneratePolicy) -> &'static str {
    match p {
        DegeneratePolicy::Fail => "fail",
        DegeneratePolicy::Perturb => "perturb",
        DegeneratePolicy::RawCarry => "raw-carry",
    }
}

pub fn policy_parse(s: &str) -> Result<DegeneratePolicy, WireError> {
    match s {
        "fail" => Ok(DegeneratePolicy::Fail),
        "perturb" => Ok(DegeneratePolicy::Perturb),
        "raw-carry" => Ok(DegeneratePolicy::RawCarry),
        other => Err(bad(format!("unknown degenerate policy {other}"))),
    }
}

pub fn hypothesis_name(h: HypothesisPolicy) -> &'static str {
    match h {
        HypothesisPolicy::Zero => "zero",
    }
}

pub fn hypothesis_parse(s: &str) -> Result<HypothesisPolicy, WireError> {
    match s {
        "zero" => Ok(HypothesisPolicy::Zero),
        other => Err(bad(format!("unknown hypothesis policy {other}"))),
    }
}

fn axis_name(a: Axis) -> &'static str {
    match a {
        Axis::X => "x",
        Axis::Y => "y",
    }
}

fn axis_parse(s: &str) -> Result<Axis, WireError> {
    match s {
        "x" => Ok(Axis::X),
        "y" => Ok(Axis::Y),
        other => Err(bad(format!("unknown axis {other}"))),
    }
}

pub fn backend_parse(s: &str) -> Result<PackBackend, WireError> {
    match s {
        "packed-strict" => Ok(PackBackend::Strict),
        "packed-literal" => Ok(PackBackend::Literal),
        other => Err(bad(format!("unknown packed backend {other}"))),
    }
}

// ----------------------------------------------------------------- scalars

fn scalar_json<S: Scalar>(v: &S) -> Value {
    Value::String(v.wire_render())
}

fn scalar_of<S: Scalar>(v: &Value, ctx: &PrecisionContext) -> Result<S, WireError> {
    let s = v
        .as_str()
        .ok_or_else(|| bad("scalar fields must be strings"))?;
    S::wire_parse(s, ctx).map_err(|e| bad(format!("unreadable scalar {s:?}: {e}")))
}

fn scalars_json<S: Scalar>(vs: &[S]) -> Value {
    Value::Array(vs.iter().map(scalar_json).collect())
}

fn scalars_of<S: Scalar>(v: &Value, ctx: &PrecisionContext) -> Result<Vec<S>, WireError> {
    v.as_array()
        .ok_or_else(|| bad("expected an array of scalars"))?
        .iter()
        .map(|x| scalar_of(x, ctx))
        .collect()
}

pub fn ctx_for(mode: &Mode) -> PrecisionContext {
    match mode {
        Mode::Exact => PrecisionContext::new_exact(),
        Mode::Precision { bits } => PrecisionContext::new_precision(*bits),
    }
}

// ----------------------------------------------------------------- bundles

pub fn bundle_to_json<S: Scalar>(b: &Bundle<S>) -> Value {
    let tuples: Vec<Value> = b
        .tuples
        .iter()
        .map(|t| {
            let mut m = Map::new();
            m.insert("b1".into(), scalar_json(&t.b1));
            m.insert("b2".into(), scalar_json(&t.b2));
            m.insert("r".into(), scalar_json(&t.r));
            m.insert("b_real".into(), scalar_json(&t.b_real));
            m.insert(
                "b_rat_axis".into(),
                Value::String(axis_name(t.b_rat_axis).into()),
            );
            m.insert("p0_real".into(), scalar_json(&t.p0_real));
            m.insert(
                "p0_rat_axis".into(),
                Value::String(axis_name(t.p0_rat_axis).into()),
            );
            if let Some(s) = &t.s {
                m.insert("s".into(), scalar_json(s));
            }
            Value::Object(m)
        })
        .collect();
    json!({
        "mode": b.header.mode.name(),
        "scalar": mode_name(&b.header.scalar_mode),
        "max_den": b.header.max_den.to_string(),
        "tuples": tuples,
        "pair": { "k": b.pair.k, "d": b.pair.d.to_string() },
    })
}

pub fn bundle_from_json<S: Scalar>(v: &Value) -> Result<Bundle<S>, WireError> {
    let mode = packmode_parse(str_of(v, "mode")?)?;
    let scalar_mode = mode_parse(str_of(v, "scalar")?)?;
    let max_den = bigint_of(v, "max_den")?;
    let ctx = ctx_for(&scalar_mode);
    let tuples_v = arr_of(v, "tuples")?;
    if tuples_v.len() != 3 {
        return Err(bad("bundle must have exactly three tuples"));
    }
    let mut tuples = Vec::with_capacity(3);
    for t in tuples_v {
        let s = match t.get("s") {
            Some(sv) => Some(scalar_of(sv, &ctx)?),
            None => None,
        };
        tuples.push(TupleRecord {
            b1: scalar_of(get(t, "b1")?, &ctx)?,
            b2: scalar_of(get(t, "b2")?, &ctx)?,
            r: scalar_of(get(t, "r")?, &ctx)?,
            b_real: scalar_of(get(t, "b_real")?, &ctx)?,
            b_rat_axis: axis_parse(str_of(t, "b_rat_axis")?)?,
            p0_real: scalar_of(get(t, "p0_real")?, &ctx)?,
            p0_rat_axis: axis_parse(str_of(t, "p0_rat_axis")?)?,
            s,
        });
    }
    let tuples: [TupleRecord<S>; 3] = tuples
        .try_into()
        .map_err(|_| bad("tuple conversion failed"))?;
    let pair_v = get(v, "pair")?;
    let pair = PackedPair {
        k: u32_of(pair_v, "k")?,
        d: bigint_of(pair_v, "d")?,
    };
    Ok(Bundle {
        header: BundleHeader {
            mode,
            scalar_mode,
            max_den,
        },
        tuples,
        pair,
    })
}

// ------------------------------------------------------------ codec records

/// A standalone encoded six-slope record plus its arithmetic configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct CodecRecordParts<S> {
    pub literal: crate::pencil::EncodedSix<S>,
    /// Present iff the record is strict.
    pub s: Option<S>,
    pub scalar_mode: Mode,
    pub max_den: BigInt,
}

pub fn codec_record_to_json<S: Scalar>(parts: &CodecRecordParts<S>) -> Value {
    let e = &parts.literal;
    let mut m = Map::new();
    m.insert("kind".into(), Value::String("encoded-six".into()));
    m.insert(
        "mode".into(),
        Value::String(if parts.s.is_some() { "strict" } else { "literal" }.into()),
    );
    m.insert(
        "scalar".into(),
        Value::String(mode_name(&parts.scalar_mode)),
    );
    m.insert("max_den".into(), Value::String(parts.max_den.to_string()));
    m.insert("b1".into(), scalar_json(&e.b1));
    m.insert("b2".into(), scalar_json(&e.b2));
    m.insert("r".into(), scalar_json(&e.r));
    m.insert("b_rat".into(), Value::String(format_rat(&e.b_rat)));
    m.insert(
        "b_rat_axis".into(),
        Value::String(axis_name(e.b_rat_axis).into()),
    );
    m.insert("b_real".into(), scalar_json(&e.b_real));
    m.insert("p0_rat".into(), Value::String(format_rat(&e.p0_rat)));
    m.insert(
        "p0_rat_axis".into(),
        Value::String(axis_name(e.p0_rat_axis).into()),
    );
    m.insert("p0_real".into(), scalar_json(&e.p0_real));
    if let Some(s) = &parts.s {
        m.insert("s".into(), scalar_json(s));
    }
    Value::Object(m)
}

/// Scalar mode recorded in a codec record, for backend dispatch.
pub fn codec_record_scalar_mode(v: &Value) -> Result<Mode, WireError> {
    mode_parse(str_of(v, "scalar")?)
}

pub fn codec_record_from_json<S: Scalar>(v: &Value) -> Result<CodecRecordParts<S>, WireError> {
    if str_of(v, "kind")? != "encoded-six" {
        return Err(bad("expected an encoded-six record"));
    }
    let scalar_mode = mode_parse(str_of(v, "scalar")?)?;
    let ctx = ctx_for(&scalar_mode);
    let mode = str_of(v, "mode")?;
    let s = match (mode, v.get("s")) {
        ("strict", Some(sv)) => Some(scalar_of(sv, &ctx)?),
        ("strict", None) => return Err(bad("strict record is missing field s")),
        ("literal", _) => None,
        (other, _) => return Err(bad(format!("unknown record mode {other}"))),
    };
    let rat_field = |key: &str| -> Result<crate::scalar::Rat, WireError> {
        parse_rat(str_of(v, key)?).map_err(|e| bad(format!("field {key}: {e}")))
    };
    Ok(CodecRecordParts {
        literal: crate::pencil::EncodedSix {
            b1: scalar_of(get(v, "b1")?, &ctx)?,
            b2: scalar_of(get(v, "b2")?, &ctx)?,
            r: scalar_of(get(v, "r")?, &ctx)?,
            b_rat: rat_field("b_rat")?,
            b_rat_axis: axis_parse(str_of(v, "b_rat_axis")?)?,
            b_real: scalar_of(get(v, "b_real")?, &ctx)?,
            p0_rat: rat_field("p0_rat")?,
            p0_rat_axis: axis_parse(str_of(v, "p0_rat_axis")?)?,
            p0_real: scalar_of(get(v, "p0_real")?, &ctx)?,
        },
        s,
        scalar_mode,
        max_den: bigint_of(v, "max_den")?,
    })
}

// --------------------------------------------------------- hierarchy files

fn slot_to_json<S: Scalar>(slot: &GroupSlot<S>) -> Value {
    match slot {
        GroupSlot::Packed(b) => json!({ "kind": "packed", "bundle": bundle_to_json(b) }),
        GroupSlot::Raw(vs) => json!({ "kind": "raw", "values": scalars_json(vs) }),
    }
}

fn slot_from_json<S: Scalar>(v: &Value, ctx: &PrecisionContext) -> Result<GroupSlot<S>, WireError> {
    match str_of(v, "kind")? {
        "packed" => Ok(GroupSlot::Packed(bundle_from_json(get(v, "bundle")?)?)),
        "raw" => Ok(GroupSlot::Raw(scalars_of(get(v, "values")?, ctx)?)),
        other => Err(bad(format!("unknown slot kind {other}"))),
    }
}

fn level_stats_to_json(ls: &LevelStats) -> Value {
    json!({
        "input_len": ls.input_len,
        "stored_values": ls.stored_values,
        "bundle_count": ls.bundle_count,
        "raw_count": ls.raw_count,
        "total_bits": ls.total_bits,
        "max_pair_bits": ls.max_pair_bits,
        "overflow_pairs": ls.overflow_pairs,
        "working_bits": ls.working_bits,
    })
}

fn level_stats_from_json(v: &Value) -> Result<LevelStats, WireError> {
    Ok(LevelStats {
        input_len: usize_of(v, "input_len")?,
        stored_values: usize_of(v, "stored_values")?,
        bundle_count: usize_of(v, "bundle_count")?,
        raw_count: usize_of(v, "raw_count")?,
        total_bits: u64_of(v, "total_bits")?,
        max_pair_bits: u64_of(v, "max_pair_bits")?,
        overflow_pairs: usize_of(v, "overflow_pairs")?,
        working_bits: u32_of(v, "working_bits")?,
    })
}

pub fn hier_to_json<S: Scalar>(pa: &PackedArray<S>) -> Value {
    let levels: Vec<Value> = pa
        .levels
        .iter()
        .map(|rec| {
            json!({
                "input_len": rec.input_len,
                "slots": rec.slots.iter().map(slot_to_json).collect::<Vec<_>>(),
                "tail_len": rec.tail_len,
                "working_bits": rec.working_bits,
                "offsets": rec.offsets,
                "tail_offset": rec.tail_offset,
                "output_len": rec.output_len,
            })
        })
        .collect();
    json!({
        "magic": HIER_MAGIC,
        "header": {
            "n": pa.n,
            "mode": pa.mode.name(),
            "scalar": mode_name(&pa.header.scalar_mode),
            "max_den": pa.header.max_den.to_string(),
            "policy": policy_name(pa.header.degenerate_policy),
            "hypothesis": hypothesis_name(pa.header.hypothesis),
            "perturbed": pa.header.perturbed
                .iter()
                .map(|(l, g)| json!([l, g]))
                .collect::<Vec<_>>(),
        },
        "levels": levels,
        "root": scalars_json(&pa.root),
        "stats": {
            "levels": pa.stats.levels.iter().map(level_stats_to_json).collect::<Vec<_>>(),
            "input_bits": pa.stats.input_bits,
            "root_values": pa.stats.root_values,
            "root_bits": pa.stats.root_bits,
        },
    })
}

pub fn hier_from_json<S: Scalar>(v: &Value) -> Result<PackedArray<S>, WireError> {
    let magic = str_of(v, "magic")?;
    if magic != HIER_MAGIC {
        return Err(bad(format!("expected magic {HIER_MAGIC}, found {magic}")));
    }
    let header_v = get(v, "header")?;
    let mode = packmode_parse(str_of(header_v, "mode")?)?;
    let scalar_mode = mode_parse(str_of(header_v, "scalar")?)?;
    let mut perturbed = Vec::new();
    for p in arr_of(header_v, "perturbed")? {
        let pair = p
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| bad("perturbed entries must be [level, group]"))?;
        let l = pair[0]
            .as_u64()
            .ok_or_else(|| bad("perturbed level must be an integer"))?;
        let g = pair[1]
            .as_u64()
            .ok_or_else(|| bad("perturbed group must be an integer"))?;
        perturbed.push((l as usize, g as usize));
    }
    let header = HierarchyHeader {
        scalar_mode,
        max_den: bigint_of(header_v, "max_den")?,
        degenerate_policy: policy_parse(str_of(header_v, "policy")?)?,
        hypothesis: hypothesis_parse(str_of(header_v, "hypothesis")?)?,
        perturbed,
    };
    let mut levels = Vec::new();
    for lv in arr_of(v, "levels")? {
        let working_bits = u32_of(lv, "working_bits")?;
        let lctx = match header.scalar_mode {
            Mode::Exact => PrecisionContext::new_exact(),
            Mode::Precision { .. } => PrecisionContext::new_precision(working_bits),
        };
        let slots = arr_of(lv, "slots")?
            .iter()
            .map(|s| slot_from_json(s, &lctx))
            .collect::<Result<Vec<_>, _>>()?;
        let offsets = arr_of(lv, "offsets")?
            .iter()
            .map(|o| {
                o.as_u64()
                    .map(|x| x as usize)
                    .ok_or_else(|| bad("offsets must be integers"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        levels.push(LevelRecord {
            input_len: usize_of(lv, "input_len")?,
            slots,
            tail_len: usize_of(lv, "tail_len")?,
            working_bits,
            offsets,
            tail_offset: usize_of(lv, "tail_offset")?,
            output_len: usize_of(lv, "output_len")?,
        });
    }
    let root_ctx = match header.scalar_mode {
        Mode::Exact => PrecisionContext::new_exact(),
        Mode::Precision { bits } => PrecisionContext::new_precision(
            levels.last().map_or(bits, |l| l.working_bits),
        ),
    };
    let root = scalars_of(get(v, "root")?, &root_ctx)?;
    let stats_v = get(v, "stats")?;
    let stats = HierarchyStats {
        levels: arr_of(stats_v, "levels")?
            .iter()
            .map(level_stats_from_json)
            .collect::<Result<Vec<_>, _>>()?,
        input_bits: u64_of(stats_v, "input_bits")?,
        root_values: usize_of(stats_v, "root_values")?,
        root_bits: u64_of(stats_v, "root_bits")?,
    };
    Ok(PackedArray {
        n: usize_of(header_v, "n")?,
        mode,
        header,
        levels,
        root,
        stats,
    })
}

/// A hierarchy file deserialized under whichever scalar backend its header
/// declares.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyHier {
    Exact(PackedArray<ExactScalar>),
    Real(PackedArray<AReal>),
}

pub fn hier_from_json_any(v: &Value) -> Result<AnyHier, WireError> {
    let header_v = get(v, "header")?;
    match mode_parse(str_of(header_v, "scalar")?)? {
        Mode::Exact => Ok(AnyHier::Exact(hier_from_json::<ExactScalar>(v)?)),
        Mode::Precision { .. } => Ok(AnyHier::Real(hier_from_json::<AReal>(v)?)),
    }
}

// ----------------------------------------------------------- locator files

fn rat_pair_json(p: &(crate::scalar::Rat, crate::scalar::Rat)) -> Value {
    json!([format_rat(&p.0), format_rat(&p.1)])
}

fn rat_pair_of(v: &Value) -> Result<(crate::scalar::Rat, crate::scalar::Rat), WireError> {
    let a = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| bad("points must be [x, y] pairs"))?;
    let xs = a[0]
        .as_str()
        .ok_or_else(|| bad("point coordinates must be rational strings"))?;
    let ys = a[1]
        .as_str()
        .ok_or_else(|| bad("point coordinates must be rational strings"))?;
    let x = parse_rat(xs).map_err(|e| bad(format!("bad coordinate {xs:?}: {e}")))?;
    let y = parse_rat(ys).map_err(|e| bad(format!("bad coordinate {ys:?}: {e}")))?;
    Ok((x, y))
}

pub fn locator_flat_to_json(dag: &LocatorDag) -> Value {
    let nodes: Vec<Value> = dag
        .nodes
        .iter()
        .map(|n| {
            let mut m = Map::new();
            m.insert("tri".into(), json!(n.tri));
            m.insert("children".into(), json!(n.children));
            if let Some(f) = n.face {
                m.insert("face".into(), json!(f));
            }
            m.insert("level".into(), json!(n.level));
            Value::Object(m)
        })
        .collect();
    json!({
        "magic": LOCATOR_MAGIC,
        "backend": "flat",
        "header": {
            "n0": dag.n0,
            "depth": dag.depth,
            "max_children": dag.max_children,
            "labels": dag.labels,
            "root": dag.root,
        },
        "points": dag.points.iter().map(rat_pair_json).collect::<Vec<_>>(),
        "nodes": nodes,
        "rounds": dag.rounds.iter().map(|r| json!({
            "round": r.round,
            "triangles_before": r.triangles_before,
            "triangles_after": r.triangles_after,
            "removed_vertices": r.removed_vertices,
        })).collect::<Vec<_>>(),
    })
}

pub fn locator_packed_to_json<S: Scalar>(pl: &PackedLocator<S>, scalar: &Mode) -> Value {
    let nodes: Vec<Value> = pl
        .nodes
        .iter()
        .map(|n| {
            let mut m = Map::new();
            m.insert("coords".into(), scalars_json(&n.coords[..]));
            m.insert("child_count".into(), json!(n.child_count));
            m.insert(
                "groups".into(),
                Value::Array(
                    n.groups
                        .iter()
                        .map(|g| match g {
                            NodeGroup::Packed(b) => {
                                json!({ "kind": "packed", "bundle": bundle_to_json(b) })
                            }
                            NodeGroup::Plain(vs) => {
                                json!({ "kind": "plain", "values": scalars_json(vs) })
                            }
                        })
                        .collect(),
                ),
            );
            m.insert("tail".into(), scalars_json(&n.tail));
            if let Some(f) = n.face {
                m.insert("face".into(), json!(f));
            }
            m.insert("level".into(), json!(n.level));
            m.insert(
                "fallbacks".into(),
                json!({ "to_strict": n.fallbacks.to_strict, "to_plain": n.fallbacks.to_plain }),
            );
            Value::Object(m)
        })
        .collect();
    json!({
        "magic": LOCATOR_MAGIC,
        "backend": pl.backend.name(),
        "scalar": mode_name(scalar),
        "max_den": pl.max_den.to_string(),
        "header": {
            "n0": pl.n0,
            "depth": pl.depth,
            "max_children": pl.max_children,
            "labels": pl.labels,
            "root": pl.root,
        },
        "nodes": nodes,
    })
}

fn locator_flat_from_json(v: &Value) -> Result<LocatorDag, WireError> {
    let header_v = get(v, "header")?;
    let labels = arr_of(header_v, "labels")?
        .iter()
        .map(|l| {
            l.as_str()
                .map(String::from)
                .ok_or_else(|| bad("labels must be strings"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let points = arr_of(v, "points")?
        .iter()
        .map(rat_pair_of)
        .collect::<Result<Vec<_>, _>>()?;
    let mut nodes = Vec::new();
    for nv in arr_of(v, "nodes")? {
        let tri_v = arr_of(nv, "tri")?;
        if tri_v.len() != 3 {
            return Err(bad("node tri must have three vertices"));
        }
        let mut tri = [0usize; 3];
        for (i, t) in tri_v.iter().enumerate() {
            tri[i] = t
                .as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| bad("tri entries must be integers"))?;
        }
        let children = arr_of(nv, "children")?
            .iter()
            .map(|c| {
                c.as_u64()
                    .and_then(|x| u32::try_from(x).ok())
                    .ok_or_else(|| bad("children must be node ids"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let face = match nv.get("face") {
            Some(f) => Some(
                f.as_u64()
                    .map(|x| x as usize)
                    .ok_or_else(|| bad("face must be a label index"))?,
            ),
            None => None,
        };
        nodes.push(DagNode {
            tri,
            children,
            face,
            level: u32_of(nv, "level")?,
        });
    }
    let rounds = arr_of(v, "rounds")?
        .iter()
        .map(|r| {
            Ok(RoundStats {
                round: usize_of(r, "round")?,
                triangles_before: usize_of(r, "triangles_before")?,
                triangles_after: usize_of(r, "triangles_after")?,
                removed_vertices: usize_of(r, "removed_vertices")?,
            })
        })
        .collect::<Result<Vec<_>, WireError>>()?;
    Ok(LocatorDag {
        points,
        nodes,
        root: u32_of(header_v, "root")?,
        n0: usize_of(header_v, "n0")?,
        labels,
        depth: usize_of(header_v, "depth")?,
        max_children: usize_of(header_v, "max_children")?,
        rounds,
    })
}

fn locator_packed_from_json<S: Scalar>(v: &Value) -> Result<PackedLocator<S>, WireError> {
    let backend = backend_parse(str_of(v, "backend")?)?;
    let scalar_mode = mode_parse(str_of(v, "scalar")?)?;
    let ctx = ctx_for(&scalar_mode);
    let header_v = get(v, "header")?;
    let labels = arr_of(header_v, "labels")?
        .iter()
        .map(|l| {
            l.as_str()
                .map(String::from)
                .ok_or_else(|| bad("labels must be strings"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut nodes = Vec::new();
    for nv in arr_of(v, "nodes")? {
        let coords_vec: Vec<S> = scalars_of(get(nv, "coords")?, &ctx)?;
        let coords: [S; 6] = coords_vec
            .try_into()
            .map_err(|_| bad("coords must hold six scalars"))?;
        let mut groups = Vec::new();
        for gv in arr_of(nv, "groups")? {
            match str_of(gv, "kind")? {
                "packed" => groups.push(NodeGroup::Packed(bundle_from_json(get(gv, "bundle")?)?)),
                "plain" => groups.push(NodeGroup::Plain(scalars_of(get(gv, "values")?, &ctx)?)),
                other => return Err(bad(format!("unknown group kind {other}"))),
            }
        }
        let face = match nv.get("face") {
            Some(f) => Some(
                f.as_u64()
                    .map(|x| x as usize)
                    .ok_or_else(|| bad("face must be a label index"))?,
            ),
            None => None,
        };
        let fb = get(nv, "fallbacks")?;
        nodes.push(PackedNode {
            coords,
            child_count: usize_of(nv, "child_count")?,
            groups,
            tail: scalars_of(get(nv, "tail")?, &ctx)?,
            face,
            level: u32_of(nv, "level")?,
            fallbacks: FallbackCounts {
                to_strict: usize_of(fb, "to_strict")?,
                to_plain: usize_of(fb, "to_plain")?,
            },
        });
    }
    Ok(PackedLocator {
        backend,
        max_den: bigint_of(v, "max_den")?,
        nodes,
        root: u32_of(header_v, "root")?,
        n0: usize_of(header_v, "n0")?,
        labels,
        depth: usize_of(header_v, "depth")?,
        max_children: usize_of(header_v, "max_children")?,
    })
}

/// A locator file deserialized per its backend and scalar headers.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyLocator {
    Flat(LocatorDag),
    PackedExact(PackedLocator<ExactScalar>),
    PackedReal(PackedLocator<AReal>),
}

pub fn locator_from_json(v: &Value) -> Result<AnyLocator, WireError> {
    let magic = str_of(v, "magic")?;
    if magic != LOCATOR_MAGIC {
        return Err(bad(format!(
            "expected magic {LOCATOR_MAGIC}, found {magic}"
        )));
    }
    match str_of(v, "backend")? {
        "flat" => Ok(AnyLocator::Flat(locator_flat_from_json(v)?)),
        _ => match mode_parse(str_of(v, "scalar")?)? {
            Mode::Exact => Ok(AnyLocator::PackedExact(locator_packed_from_json(v)?)),
            Mode::Precision { .. } => Ok(AnyLocator::PackedReal(locator_packed_from_json(v)?)),
        },
    }
}

// ------------------------------------------------------------- file text

/// Canonical document text: pretty JSON plus a trailing newline. Key order
/// is alphabetical, so equal structures yield byte-equal text.
pub fn document_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("documents are tree-shaped");
    s.push('\n');
    s
}

pub fn document_parse(text: &str) -> Result<Value, WireError> {
    serde_json::from_str(text).map_err(|e| bad(format!("not valid structured text: {e}")))
}
