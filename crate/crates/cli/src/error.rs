use thiserror::Error;

use morekg::alias::AliasError;
use morekg::fixture::FixtureError;
use morekg::ingest::IngestError;
use morekg::ontology::SchemaError;
use morekg::privacy::PolicyError;
use morekg::query::QueryError;
use morekg::rules::RuleError;
use morekg::serdes::SerdesError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Serdes(#[from] SerdesError),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Rules(#[from] RuleError),
    #[error("query: {0}")]
    Query(#[from] QueryError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Alias(#[from] AliasError),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    /// Already reported; only the exit code remains.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => crate::EXIT_USAGE,
            _ => crate::EXIT_DOMAIN,
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> CliError {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
