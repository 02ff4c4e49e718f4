//! `codec encode|decode|collide`, plus the single-bundle `pack`/`unpack`.

use serde_json::{json, Value};

use geopack_core::pack::{pack18, unpack18, Bundle, PackMode};
use geopack_core::pencil::{
    collision_search, decode6_literal, decode6_strict, encode6, EncodedSixStrict, SlopeSix,
};
use geopack_core::scalar::{AReal, ExactScalar, Mode, Scalar};
use geopack_core::wire;

use crate::common::{self, Arith};
use crate::errors::CliError;
use crate::{CollideArgs, DecodeArgs, EncodeArgs, PackArgs, UnpackArgs};

fn slopes_json<S: Scalar>(xs: &[S]) -> Value {
    Value::Array(xs.iter().map(|v| Value::String(v.wire_render())).collect())
}

// ------------------------------------------------------------------ encode

pub fn encode(a: EncodeArgs) -> Result<(), CliError> {
    let ar = common::arith(&a.arith)?;
    match ar.mode {
        Mode::Exact => encode_impl::<ExactScalar>(&a, &ar),
        Mode::Precision { .. } => encode_impl::<AReal>(&a, &ar),
    }
}

fn encode_impl<S: Scalar>(a: &EncodeArgs, ar: &Arith) -> Result<(), CliError> {
    let text = common::values_source(&a.slopes, &a.input)?;
    let vals: Vec<S> = common::parse_scalars(&text, &ar.ctx)?;
    if vals.len() != 6 {
        return Err(CliError::validation(format!(
            "the codec takes exactly six slopes, got {}",
            vals.len()
        )));
    }
    let six = SlopeSix::new(std::array::from_fn(|i| vals[i].clone()));
    let enc = encode6(&six, &ar.max_den, &ar.ctx)?;
    let s_line = enc.s.render();
    let parts = wire::CodecRecordParts {
        literal: enc.literal,
        s: if a.literal { None } else { Some(enc.s) },
        scalar_mode: ar.mode.clone(),
        max_den: ar.max_den.clone(),
    };
    let doc = wire::codec_record_to_json(&parts);
    let inputs: Vec<&std::path::Path> = a.input.iter().map(|p| p.as_path()).collect();
    common::emit(&doc, &a.out.output, &inputs)?;
    if a.literal {
        common::human(&format!(
            "encoded six slopes into a literal record (5 scalars + 2 rationals); transversal slope {s_line} not stored"
        ));
    } else {
        common::human(&format!(
            "encoded six slopes into a strict record; transversal slope s = {s_line}"
        ));
    }
    Ok(())
}

// ------------------------------------------------------------------ decode

pub fn decode(a: DecodeArgs) -> Result<(), CliError> {
    let doc = common::read_document(&a.input)?;
    match wire::codec_record_scalar_mode(&doc)? {
        Mode::Exact => decode_impl::<ExactScalar>(&a, &doc),
        Mode::Precision { .. } => decode_impl::<AReal>(&a, &doc),
    }
}

fn decode_impl<S: Scalar>(a: &DecodeArgs, doc: &Value) -> Result<(), CliError> {
    let parts: wire::CodecRecordParts<S> = wire::codec_record_from_json(doc)?;
    let ctx = wire::ctx_for(&parts.scalar_mode);
    let (six, record, s_used, verified) = match parts.s {
        Some(s) => {
            let strict = EncodedSixStrict {
                literal: parts.literal,
                s,
            };
            let six = decode6_strict(&strict, &ctx)?;
            (six, "strict", strict.s, true)
        }
        None => {
            let s: S = common::parse_scalar_flag("--s-hypothesis", &a.s_hypothesis, &ctx)?;
            let six = decode6_literal(&parts.literal, &s, &ctx)?;
            (six, "literal", s, false)
        }
    };
    let out = json!({
        "kind": "slopes",
        "record": record,
        "scalar": wire::mode_name(&parts.scalar_mode),
        "s": s_used.wire_render(),
        "verified": verified,
        "slopes": slopes_json(&six.m),
    });
    common::emit(&out, &a.out.output, &[&a.input])?;
    common::human(&format!(
        "decoded a {record} record under s = {} ({})",
        s_used.render(),
        if verified { "self-checked" } else { "unverified hypothesis" },
    ));
    Ok(())
}

// ----------------------------------------------------------------- collide

pub fn collide(a: CollideArgs) -> Result<(), CliError> {
    let ar = common::arith(&a.arith)?;
    let report = match ar.mode {
        Mode::Exact => collision_search::<ExactScalar>(a.seed, a.trials, &ar.max_den, &ar.ctx),
        Mode::Precision { .. } => collision_search::<AReal>(a.seed, a.trials, &ar.max_den, &ar.ctx),
    };
    let exemplars: Vec<Value> = report
        .exemplars
        .iter()
        .map(|ex| {
            json!({
                "original": ex.original,
                "s_star": ex.s_star,
                "s_hypothesis": ex.s_hypothesis,
                "decoded": ex.decoded,
            })
        })
        .collect();
    let doc = json!({
        "kind": "collision-report",
        "config": {
            "seed": report.seed,
            "trials": report.trials,
            "scalar": wire::mode_name(&ar.mode),
            "max_den": ar.max_den.to_string(),
        },
        "encodable": report.encodable,
        "degenerate_hypotheses": report.degenerate_hypotheses,
        "mismatched_reencodes": report.mismatched_reencodes,
        "collisions": report.collisions,
        "verdict": report.injectivity_verdict(),
        "exemplars": exemplars,
    });
    common::emit(&doc, &a.out.output, &[])?;
    common::human(report.render().trim_end());
    Ok(())
}

// -------------------------------------------------------------------- pack

pub fn pack(a: PackArgs) -> Result<(), CliError> {
    let ar = common::arith(&a.arith)?;
    match ar.mode {
        Mode::Exact => pack_impl::<ExactScalar>(&a, &ar),
        Mode::Precision { .. } => pack_impl::<AReal>(&a, &ar),
    }
}

fn pack_impl<S: Scalar>(a: &PackArgs, ar: &Arith) -> Result<(), CliError> {
    let mode = wire::packmode_parse(&a.pack_mode)?;
    let text = common::values_source(&a.values, &a.input)?;
    let vals: Vec<S> = common::parse_scalars(&text, &ar.ctx)?;
    if vals.len() != 18 {
        return Err(CliError::validation(format!(
            "a bundle takes exactly eighteen values, got {}",
            vals.len()
        )));
    }
    let bundle = pack18(&vals, mode, &ar.max_den, &ar.ctx)?;
    let doc = wire::bundle_to_json(&bundle);
    let inputs: Vec<&std::path::Path> = a.input.iter().map(|p| p.as_path()).collect();
    common::emit(&doc, &a.out.output, &inputs)?;
    let stored = match mode {
        PackMode::Literal => 17,
        PackMode::Strict => 20,
    };
    common::human(&format!(
        "packed 18 values into a {} bundle ({stored} stored values)",
        mode.name()
    ));
    Ok(())
}

// ------------------------------------------------------------------ unpack

pub fn unpack(a: UnpackArgs) -> Result<(), CliError> {
    let doc = common::read_document(&a.input)?;
    let scalar_name = doc
        .get("scalar")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::validation("bundle document is missing its scalar mode"))?;
    match wire::mode_parse(scalar_name)? {
        Mode::Exact => unpack_impl::<ExactScalar>(&a, &doc),
        Mode::Precision { .. } => unpack_impl::<AReal>(&a, &doc),
    }
}

fn unpack_impl<S: Scalar>(a: &UnpackArgs, doc: &Value) -> Result<(), CliError> {
    let bundle: Bundle<S> = wire::bundle_from_json(doc)?;
    let ctx = wire::ctx_for(&bundle.header.scalar_mode);
    let hypothesis: Option<S> = match bundle.header.mode {
        PackMode::Strict => None,
        PackMode::Literal => Some(common::parse_scalar_flag(
            "--s-hypothesis",
            &a.s_hypothesis,
            &ctx,
        )?),
    };
    let unpacked = unpack18(&bundle, hypothesis.as_ref(), &ctx)?;
    let out = json!({
        "kind": "values",
        "scalar": wire::mode_name(&bundle.header.scalar_mode),
        "verified": unpacked.verified,
        "values": slopes_json(&unpacked.values),
    });
    common::emit(&out, &a.out.output, &[&a.input])?;
    common::human(&format!(
        "unpacked 18 values from a {} bundle ({})",
        bundle.header.mode.name(),
        if unpacked.verified {
            "self-checked"
        } else {
            "unverified hypothesis"
        },
    ));
    Ok(())
}
