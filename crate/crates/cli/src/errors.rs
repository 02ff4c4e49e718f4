//! Error-to-exit-code mapping.
//!
//! Validation errors (exit 2): the command line or an input file is wrong —
//! malformed documents, unparsable scalars, out-of-range indices, I/O
//! failures. Degeneracy errors (exit 3): the inputs parse but the exact
//! geometry rejects them — repeated slopes, apex at infinity, no common
//! transversal slope, non-simple subdivisions.

use std::fmt;

use geopack_core::hierarchy::HierarchyError;
use geopack_core::pack::PackError;
use geopack_core::pencil::PencilError;
use geopack_core::pointloc::{FaceError, IngestError, TriangulationError};
use geopack_core::scalar::ScalarParseError;
use geopack_core::wire::WireError;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Degeneracy(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Degeneracy(_) => 3,
        }
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "{m}"),
            CliError::Degeneracy(m) => write!(f, "{m}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<WireError> for CliError {
    fn from(e: WireError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<ScalarParseError> for CliError {
    fn from(e: ScalarParseError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<PencilError> for CliError {
    fn from(e: PencilError) -> Self {
        CliError::Degeneracy(e.to_string())
    }
}

impl From<TriangulationError> for CliError {
    fn from(e: TriangulationError) -> Self {
        CliError::Degeneracy(e.to_string())
    }
}

impl From<FaceError> for CliError {
    fn from(e: FaceError) -> Self {
        CliError::Degeneracy(e.to_string())
    }
}

impl From<PackError> for CliError {
    fn from(e: PackError) -> Self {
        match e {
            PackError::CorruptPack { .. } => CliError::Validation(e.to_string()),
            PackError::Codec { .. } => CliError::Degeneracy(e.to_string()),
        }
    }
}

impl From<HierarchyError> for CliError {
    fn from(e: HierarchyError) -> Self {
        match e {
            HierarchyError::DegenerateGroup { .. } => CliError::Degeneracy(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}
