//! IRI alias tables: remap vocabulary IRIs (for example schematic OBO names
//! to numeric OBO identifiers) across a whole graph.
//!
//! ```toml
//! [prefixes]
//! ro = "http://purl.obolibrary.org/obo/RO_"
//!
//! [aliases]
//! "obi:has_specified_output" = "obi:0000299"
//! "pato:executes" = "ro:0000057"
//! ```

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::rdf::{Graph, PrefixError, PrefixMap, Term};

#[derive(Debug, Error)]
pub enum AliasError {
    #[error("{path}: {message}")]
    Read { path: String, message: String },
    #[error("alias table: {0}")]
    Parse(String),
    #[error("alias table entry {entry:?}: {source}")]
    Prefix { entry: String, source: PrefixError },
    #[error("alias table maps {0} more than once")]
    Duplicate(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AliasFile {
    #[serde(default)]
    prefixes: BTreeMap<String, String>,
    #[serde(default)]
    aliases: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasTable {
    map: BTreeMap<Term, Term>,
}

impl AliasTable {
    pub fn parse(text: &str) -> Result<AliasTable, AliasError> {
        let file: AliasFile = toml::from_str(text).map_err(|e| AliasError::Parse(e.to_string()))?;
        let mut pm = PrefixMap::default();
        for (prefix, ns) in &file.prefixes {
            pm.insert(prefix, ns);
        }
        let expand = |entry: &str| {
            pm.expand_any(entry).map_err(|source| AliasError::Prefix {
                entry: entry.to_string(),
                source,
            })
        };
        let mut map = BTreeMap::new();
        for (from, to) in &file.aliases {
            let from_term = expand(from)?;
            if map.insert(from_term, expand(to)?).is_some() {
                return Err(AliasError::Duplicate(from.clone()));
            }
        }
        Ok(AliasTable { map })
    }

    pub fn load(path: &Path) -> Result<AliasTable, AliasError> {
        let text = std::fs::read_to_string(path).map_err(|e| AliasError::Read {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, iri: &Term) -> Option<&Term> {
        self.map.get(iri)
    }

    /// Rewrites every aliased IRI in subject, predicate or object position.
    /// Aliases apply once; they are not chained.
    pub fn apply(&self, g: &Graph) -> Graph {
        if self.map.is_empty() {
            return g.clone();
        }
        let mut out = Graph::new();
        let mut cache: HashMap<u32, u32> = HashMap::new();
        for [s, p, o] in g.iter_ids() {
            let mut remap = |id: u32| -> u32 {
                *cache.entry(id).or_insert_with(|| {
                    let t = g.term(id);
                    out.intern(self.map.get(t).unwrap_or(t))
                })
            };
            let t = [remap(s), remap(p), remap(o)];
            out.insert_ids(t);
        }
        out
    }
}
