//! Storage-oriented computational geometry kernels.
//!
//! The crate has five parts:
//!
//! * [`scalar`] — the two arithmetic backends shared by every pipeline: exact
//!   rationals (with one optional quadratic extension) and correctly-rounded
//!   arbitrary-precision binary floats, plus tolerance-aware comparison and
//!   best-rational approximation.
//! * [`pencil`] — the six-slope codec: two line pencils sharing a transversal
//!   let six slopes be stored as five scalars plus two small rationals, with a
//!   strict (invertible) and a literal (compressed, hypothesis-driven) decoder
//!   and a collision-search experiment around the literal decoder's ambiguity.
//! * [`pack`] — rational digit packing (12 digits into one integer pair) and
//!   the 18-value bundle built from three codec tuples.
//! * [`hierarchy`] — repeated bundling of an array into a shallow tower of
//!   levels with indexed fetch and size/bit accounting.
//! * [`pointloc`] — triangulation-refinement planar point location over a
//!   polygonal subdivision, with a flat backend and a packed backend whose
//!   per-node child data goes through the bundle codec.
//!
//! Everything randomized takes explicit seeds; every serialized artifact
//! carries its arithmetic configuration in a header.

pub mod hierarchy;
pub mod pack;
pub mod pencil;
pub mod pointloc;
pub mod scalar;
pub mod wire;

pub use hierarchy::{fetch, pack_all, path_of, FetchResult, HierarchyError, PackedArray};
pub use pointloc::{
    bound_and_triangulate, build_dag, extract_faces, ingest, pack_dag, random_delaunay,
    LocatorDag, PackBackend, PackedLocator, Subdivision,
};
pub use pencil::{EncodedSix, Figure, SlopeSix};
pub use scalar::{AReal, ExactScalar, Mode, PrecisionContext, Rat, Scalar};
