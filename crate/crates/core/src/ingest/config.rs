use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::IngestError;

/// CSV file names inside a bundle directory.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileNames {
    pub study: String,
    pub participants: String,
    pub test_items: String,
    pub results: String,
}

impl Default for FileNames {
    fn default() -> Self {
        FileNames {
            study: "study.csv".into(),
            participants: "participants.csv".into(),
            test_items: "test_items.csv".into(),
            results: "results.csv".into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FixtureSettings {
    pub seed: Option<u64>,
}

/// Ingestion settings, read from TOML:
///
/// ```toml
/// alias_table = "aliases.toml"   # optional
///
/// [files]
/// study = "study.csv"
/// participants = "participants.csv"
/// test_items = "test_items.csv"
/// results = "results.csv"
///
/// [fixture]
/// seed = 42
/// ```
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestConfig {
    pub files: FileNames,
    pub alias_table: Option<PathBuf>,
    pub fixture: FixtureSettings,
}

impl IngestConfig {
    pub fn parse(text: &str) -> Result<IngestConfig, IngestError> {
        toml::from_str(text).map_err(|e| IngestError::Config(e.to_string()))
    }

    /// Loads a config file; a relative `alias_table` resolves against the
    /// config file's directory.
    pub fn load(path: &Path) -> Result<IngestConfig, IngestError> {
        let text = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::parse(&text)?;
        if let (Some(table), Some(dir)) = (&cfg.alias_table, path.parent()) {
            if table.is_relative() {
                cfg.alias_table = Some(dir.join(table));
            }
        }
        Ok(cfg)
    }
}
