//! Six-slope codec: store six finite slopes as five scalars plus two small
//! rationals by realizing them as two line pencils sharing a transversal.
//!
//! The construction: three lines through the origin `A` with slopes
//! `m1, m2, m3` and three lines through a second apex `B` with slopes
//! `m4, m5, m6`. A transversal of slope `s` crosses a pencil in three points
//! whose signed spacing ratio depends only on the slopes; there is a slope
//! `s*` at which both pencils produce the same ratio, letting all six lines
//! pass through just three shared points `a, b, c` on one transversal `L`.
//! The stored record keeps two signed tangents (`L` to the first two lines of
//! the second pencil), the spacing ratio, and the two anchor points `B` and
//! `P0 ∈ L` — each anchor split into one exactly-stored rational coordinate
//! and one scalar coordinate.
//!
//! Decoding replays the construction. The *strict* variant stores `s*` and
//! inverts exactly; the *literal* variant stores only the five-plus-two
//! record, so decoding needs an externally supplied transversal-slope
//! hypothesis, and distinct hypotheses yield distinct valid figures that
//! re-encode to the same record — the ambiguity [`collision_search`]
//! quantifies.

mod codec;
mod collide;
mod figure;
mod ops;

pub use codec::{
    decode6_literal, decode6_strict, encode6, literal_eq, Axis, EncodedSix, EncodedSixStrict,
};
pub use collide::{
    collision_search, hypothesis_sweep, CollisionExemplar, CollisionReport, SweepOutcome,
};
pub use figure::{build_figure, rationalize, recompute_slopes, Figure, Point, RationalizedParts};
pub use ops::{angle_from_ratio, solve_common_slope, tan_between, transversal_ratio};

use crate::scalar::{PrecisionContext, Scalar};

/// Six finite slopes: the first three form the origin pencil, the last three
/// the second pencil. Each triple must be pairwise distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeSix<S> {
    pub m: [S; 6],
}

impl<S: Scalar> SlopeSix<S> {
    pub fn new(m: [S; 6]) -> Self {
        SlopeSix { m }
    }

    /// Check the pairwise-distinctness invariant of both triples.
    pub fn validate(&self) -> Result<(), PencilError> {
        for (i, j) in [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)] {
            if self.m[i].cmp_exact(&self.m[j]) == std::cmp::Ordering::Equal {
                return Err(PencilError::DegeneratePencil {
                    detail: format!("slopes {} and {} coincide", i + 1, j + 1),
                });
            }
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        self.m
            .iter()
            .map(|v| v.render())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PencilError {
    #[error("perpendicular pair: {detail}")]
    Perpendicular { detail: String },
    #[error("transversal parallel to a pencil line: {detail}")]
    Parallel { detail: String },
    #[error("degenerate pencil: {detail}")]
    DegeneratePencil { detail: String },
    #[error("no transversal slope equalizes the two pencil ratios")]
    NoCommonSlope,
    #[error("the two pencils have identical ratio functions; every slope works")]
    DegenerateFamily,
    #[error("second apex at infinity (chord lines parallel)")]
    ApexAtInfinity,
    #[error("second apex coincides with the origin apex")]
    CoincidentApex,
    #[error("degenerate figure: {detail}")]
    DegenerateFigure { detail: String },
    #[error("degenerate angle relation (zero or undefined cotangent)")]
    DegenerateAngle,
    #[error("common slope exists but is irrational over the current exact field")]
    UnrepresentableRoot,
    #[error("literal decode failed its internal angle-consistency check")]
    InconsistentLiteral,
}

/// Relative closeness used by roundtrip/consistency assertions:
/// `|x − y| ≤ 2^log2_bound · max(1, |x|, |y|)`.
pub fn within_rel_bound<S: Scalar>(x: &S, y: &S, log2_bound: i64) -> bool {
    use crate::scalar::rat_pow2;
    use std::cmp::Ordering;
    let d = x.sub(y).abs();
    if d.is_zero() {
        return true;
    }
    let ax = x.abs();
    let ay = y.abs();
    let mut scale = if ax.cmp_exact(&ay) == Ordering::Less { ay } else { ax };
    if scale.cmp_rat(&crate::scalar::rat_from_int(1)) == Ordering::Less {
        scale = x.make_rat(&crate::scalar::rat_from_int(1));
    }
    let thr = scale.mul(&x.make_rat(&rat_pow2(log2_bound)));
    d.cmp_exact(&thr) != Ordering::Greater
}

/// Shared context-aware equality for codec values.
pub fn values_equal<S: Scalar>(x: &S, y: &S, ctx: &PrecisionContext) -> bool {
    crate::scalar::eq_with_tol(x, y, ctx)
}
