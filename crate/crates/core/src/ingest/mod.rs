//! Study bundles: CSV loading, validation, IRI minting and knowledge-graph
//! emission.

mod config;
mod emit;
mod iri;
mod load;
mod model;
mod validate;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{FileNames, FixtureSettings, IngestConfig};
pub use emit::{emit_kg, participant_iri, result_locals, study_iri};
pub use iri::{mint_iri, EntityKind, IriError};
pub use load::{load_bundle, parse_items_csv};
pub use model::{ParticipantRecord, ResultRecord, Sex, StudyBundle, StudyMetadata, TestItemDef};
pub use validate::{validate_bundle, ValidationReport, Warning, WarningKind};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("missing file {}", .0.display())]
    MissingFile(PathBuf),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{file}: header mismatch: expected `{expected}`, found `{found}`")]
    Header {
        file: String,
        expected: String,
        found: String,
    },
    #[error("{file}:{line}: {message}")]
    Row {
        file: String,
        line: u64,
        message: String,
    },
    #[error("{file}:{line}: unknown {kind} {id:?}")]
    Dangling {
        file: String,
        line: u64,
        kind: &'static str,
        id: String,
    },
    #[error("{file}:{line}: duplicate key {key}")]
    Duplicate { file: String, line: u64, key: String },
    #[error("{file}: {message}")]
    File { file: String, message: String },
    #[error("config: {0}")]
    Config(String),
}
