//! Planar point location by triangle-refinement hierarchy.
//!
//! Pipeline: a validated planar subdivision ([`subdivision`]) has its faces
//! traced ([`faces`]), is enclosed and triangulated ([`triangulate`]), and
//! is coarsened round by round into a logarithmic-depth query structure
//! ([`dag`]). Query nodes can additionally be stored through the tuple
//! codec ([`packed`]). [`delaunay`] generates random Delaunay subdivisions
//! for the experiment harnesses.

pub mod dag;
pub mod delaunay;
pub mod faces;
pub mod geom;
pub mod packed;
pub mod subdivision;
pub mod triangulate;

pub use dag::{build_dag, DagNode, LocateOutcome, LocatorDag, RoundStats};
pub use delaunay::random_delaunay;
pub use faces::{extract_faces, FaceError, Faces};
pub use geom::{on_segment, Pt};
pub use packed::{pack_dag, PackBackend, PackedLocator, PackedLocateOutcome};
pub use subdivision::{ingest, parse_document, render_document, IngestError, Subdivision};
pub use triangulate::{
    bound_and_triangulate, ear_clip, TriGrid, TriMap, Triangle, TriangulationError, OUTER_LABEL,
};
