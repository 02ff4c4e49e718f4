//! Eighteen scalars packed through three six-slope records.
//!
//! The eighteen inputs are grouped positionally (0–5, 6–11, 12–17) into three
//! six-slope tuples and passed through the slope codec. In literal mode each
//! tuple stores five scalars, so the bundle holds 15 scalars plus one packed
//! pair of the six anchor rationals — 17 stored numbers for 18 inputs. Strict
//! mode also keeps each tuple's transversal slope (guaranteed invertibility,
//! 20 stored numbers).

use num_bigint::BigInt;

use super::digits::{pack12, unpack12, PackedPair};
use super::PackError;
use crate::pencil::{
    decode6_literal, decode6_strict, encode6, Axis, EncodedSix, EncodedSixStrict, SlopeSix,
};
use crate::scalar::{Mode, PrecisionContext, Rat, Scalar};

/// Whether a bundle keeps the per-tuple transversal slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PackMode {
    /// 17 stored numbers; decoding needs a slope hypothesis and is unverified.
    Literal,
    /// 20 stored numbers; decoding is exact (in exact arithmetic).
    Strict,
}

impl PackMode {
    pub fn name(self) -> &'static str {
        match self {
            PackMode::Literal => "literal",
            PackMode::Strict => "strict",
        }
    }
}

/// Scalar part of one encoded six-slope tuple inside a bundle (the two
/// anchor rationals live in the bundle's packed pair).
#[derive(Debug, Clone, PartialEq)]
pub struct TupleRecord<S> {
    pub b1: S,
    pub b2: S,
    pub r: S,
    pub b_real: S,
    pub b_rat_axis: Axis,
    pub p0_real: S,
    pub p0_rat_axis: Axis,
    /// Present in strict mode only.
    pub s: Option<S>,
}

impl<S: Scalar> TupleRecord<S> {
    fn scalars(&self) -> Vec<&S> {
        let mut v = vec![&self.b1, &self.b2, &self.r, &self.b_real, &self.p0_real];
        if let Some(s) = &self.s {
            v.push(s);
        }
        v
    }

    fn to_encoded(&self, b_rat: &Rat, p0_rat: &Rat) -> EncodedSix<S> {
        EncodedSix {
            b1: self.b1.clone(),
            b2: self.b2.clone(),
            r: self.r.clone(),
            b_rat: b_rat.clone(),
            b_rat_axis: self.b_rat_axis,
            b_real: self.b_real.clone(),
            p0_rat: p0_rat.clone(),
            p0_rat_axis: self.p0_rat_axis,
            p0_real: self.p0_real.clone(),
        }
    }
}

/// Arithmetic configuration a bundle was produced under.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleHeader {
    pub mode: PackMode,
    pub scalar_mode: Mode,
    pub max_den: BigInt,
}

/// Three tuple records plus the packed pair of their six anchor rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct Bundle<S> {
    pub header: BundleHeader,
    pub tuples: [TupleRecord<S>; 3],
    pub pair: PackedPair,
}

impl<S: Scalar> Bundle<S> {
    /// Number of stored numbers: scalar slots plus the pair's two integers.
    /// Exactly 17 in literal mode and 20 in strict mode.
    pub fn stored_count(&self) -> usize {
        self.tuples.iter().map(|t| t.scalars().len()).sum::<usize>() + 2
    }

    /// The scalar slots in stream order (tuple-major).
    pub fn stored_scalars(&self) -> Vec<&S> {
        self.tuples.iter().flat_map(|t| t.scalars()).collect()
    }
}

/// Result of unpacking a bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct Unpacked18<S> {
    pub values: Vec<S>,
    /// False for literal bundles: the output depends on a slope hypothesis
    /// the bundle does not store, so it cannot be self-checked.
    pub verified: bool,
}

/// Pack eighteen scalars through three six-slope records.
pub fn pack18<S: Scalar>(
    xs: &[S],
    mode: PackMode,
    max_den: &BigInt,
    ctx: &PrecisionContext,
) -> Result<Bundle<S>, PackError> {
    assert_eq!(xs.len(), 18, "pack18 takes exactly eighteen scalars");
    let mut tuples: Vec<TupleRecord<S>> = Vec::with_capacity(3);
    let mut rationals: Vec<Rat> = Vec::with_capacity(6);
    for g in 0..3 {
        let six = SlopeSix::new(std::array::from_fn(|i| xs[6 * g + i].clone()));
        let enc = encode6(&six, max_den, ctx).map_err(|source| PackError::Codec {
            group: g,
            source,
        })?;
        rationals.push(enc.literal.b_rat.clone());
        rationals.push(enc.literal.p0_rat.clone());
        tuples.push(TupleRecord {
            b1: enc.literal.b1,
            b2: enc.literal.b2,
            r: enc.literal.r,
            b_real: enc.literal.b_real,
            b_rat_axis: enc.literal.b_rat_axis,
            p0_real: enc.literal.p0_real,
            p0_rat_axis: enc.literal.p0_rat_axis,
            s: match mode {
                PackMode::Literal => None,
                PackMode::Strict => Some(enc.s),
            },
        });
    }
    let rationals: [Rat; 6] = rationals.try_into().expect("six rationals");
    let bundle = Bundle {
        header: BundleHeader {
            mode,
            scalar_mode: ctx.mode,
            max_den: max_den.clone(),
        },
        tuples: tuples.try_into().map_err(|_| ()).expect("three tuples"),
        pair: pack12(&rationals),
    };
    debug_assert_eq!(
        bundle.stored_count(),
        match mode {
            PackMode::Literal => 17,
            PackMode::Strict => 20,
        }
    );
    Ok(bundle)
}

/// Unpack a bundle back to eighteen scalars.
///
/// Strict bundles decode with their stored slopes and are exact inverses in
/// exact arithmetic. Literal bundles decode under `hypothesis` (or zero when
/// `None`, the default policy) and come back flagged unverified.
pub fn unpack18<S: Scalar>(
    bundle: &Bundle<S>,
    hypothesis: Option<&S>,
    ctx: &PrecisionContext,
) -> Result<Unpacked18<S>, PackError> {
    let rationals = unpack12(&bundle.pair)?;
    let mut values: Vec<S> = Vec::with_capacity(18);
    let mut verified = true;
    for (g, tuple) in bundle.tuples.iter().enumerate() {
        let enc = tuple.to_encoded(&rationals[2 * g], &rationals[2 * g + 1]);
        let six = match (&bundle.header.mode, &tuple.s) {
            (PackMode::Strict, Some(s)) => {
                let strict = EncodedSixStrict {
                    literal: enc,
                    s: s.clone(),
                };
                decode6_strict(&strict, ctx).map_err(|source| PackError::Codec {
                    group: g,
                    source,
                })?
            }
            (PackMode::Strict, None) => {
                return Err(PackError::CorruptPack {
                    detail: format!("strict bundle missing slope for tuple {g}"),
                })
            }
            (PackMode::Literal, _) => {
                verified = false;
                let zero = S::zero_ctx(ctx);
                let s = hypothesis.unwrap_or(&zero);
                decode6_literal(&enc, s, ctx).map_err(|source| PackError::Codec {
                    group: g,
                    source,
                })?
            }
        };
        values.extend(six.m.into_iter());
    }
    Ok(Unpacked18 { values, verified })
}
