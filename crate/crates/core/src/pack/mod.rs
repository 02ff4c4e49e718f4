//! Rational digit packing and the 18→17 bundle step.
//!
//! Two layers: [`digits`] packs six rationals into a self-describing pair of
//! integers (field width + concatenated digit fields), and [`bundle`] runs
//! eighteen scalars through three six-slope records so the whole group is
//! stored as 15 scalars plus one digit pair (literal mode) or 18 scalars plus
//! the pair (strict mode, exactly invertible).

pub mod bundle;
pub mod digits;

pub use bundle::{pack18, unpack18, Bundle, BundleHeader, PackMode, TupleRecord, Unpacked18};
pub use digits::{field_width, pack12, unpack12, PackedPair};

use crate::pencil::PencilError;

/// Errors from packing or unpacking.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PackError {
    /// A packed pair violates its structural invariants.
    #[error("corrupt packed pair: {detail}")]
    CorruptPack { detail: String },
    /// The slope codec rejected one of the three tuples.
    #[error("tuple group {group}: {source}")]
    Codec { group: usize, source: PencilError },
}
