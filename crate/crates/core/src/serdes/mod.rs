//! N-Triples and Turtle-subset reading and writing.
//!
//! Canonical N-Triples (sorted, one triple per line) is the golden-file
//! format. The Turtle subset covers `@prefix`/`PREFIX`, prefixed names, the
//! `a` keyword, `;` and `,` lists, typed and language-tagged literals, and
//! numeric/boolean shorthands. Collections, blank-node property lists and
//! base IRIs are not supported.

mod ntriples;
mod turtle;

use std::path::Path;

use thiserror::Error;

use crate::lexer::{Pos, SyntaxError};
use crate::rdf::{Graph, PrefixError, PrefixMap, TermError};

pub use ntriples::{parse_ntriples, write_ntriples};
pub use turtle::{parse_turtle, parse_turtle_with_prefixes, write_turtle};

#[derive(Debug, Error)]
pub enum SerdesError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("{pos}: {source}")]
    Prefix { pos: Pos, source: PrefixError },
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("unsupported file extension for {0} (expected .nt or .ttl)")]
    UnknownFormat(String),
}

impl SerdesError {
    /// Attaches a position to position-less term errors.
    pub(crate) fn at(self, pos: Pos) -> SerdesError {
        match self {
            SerdesError::Term(e) => SerdesError::Syntax(SyntaxError::new(pos, e.to_string())),
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    NTriples,
    Turtle,
}

impl Format {
    pub fn from_path(path: &Path) -> Option<Format> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("nt") => Some(Format::NTriples),
            Some("ttl") => Some(Format::Turtle),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SerializationConfig {
    pub format: Format,
    pub prefixes: PrefixMap,
    /// Sorted, byte-deterministic output.
    pub canonical: bool,
}

impl SerializationConfig {
    pub fn ntriples() -> Self {
        SerializationConfig {
            format: Format::NTriples,
            prefixes: PrefixMap::empty(),
            canonical: true,
        }
    }

    pub fn turtle() -> Self {
        SerializationConfig {
            format: Format::Turtle,
            prefixes: PrefixMap::default(),
            canonical: true,
        }
    }

    pub fn for_format(format: Format) -> Self {
        match format {
            Format::NTriples => Self::ntriples(),
            Format::Turtle => Self::turtle(),
        }
    }
}

pub fn write(graph: &Graph, cfg: &SerializationConfig) -> String {
    match cfg.format {
        Format::NTriples => write_ntriples(graph, cfg),
        Format::Turtle => write_turtle(graph, cfg),
    }
}

pub fn parse(text: &str, format: Format) -> Result<Graph, SerdesError> {
    match format {
        Format::NTriples => parse_ntriples(text),
        Format::Turtle => parse_turtle(text),
    }
}

/// Reads a `.nt` or `.ttl` file, picking the parser from the extension.
pub fn read_file(path: &Path) -> Result<Graph, SerdesError> {
    let format = Format::from_path(path).ok_or_else(|| SerdesError::UnknownFormat(path.display().to_string()))?;
    let text = std::fs::read_to_string(path).map_err(|source| SerdesError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text, format)
}

/// Writes canonically in the format implied by the extension.
pub fn write_file(path: &Path, graph: &Graph) -> Result<(), SerdesError> {
    let format = Format::from_path(path).ok_or_else(|| SerdesError::UnknownFormat(path.display().to_string()))?;
    let text = write(graph, &SerializationConfig::for_format(format));
    std::fs::write(path, text).map_err(|source| SerdesError::Io {
        path: path.display().to_string(),
        source,
    })
}
