use std::collections::BTreeMap;

use thiserror::Error;

use super::term::{Term, TermError};
use crate::vocab;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrefixError {
    #[error("unresolved prefix {0:?}")]
    UnresolvedPrefix(String),
    #[error("not a prefixed name: {0:?}")]
    NotACurie(String),
    #[error(transparent)]
    Term(#[from] TermError),
}

/// Prefix label to namespace IRI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixMap {
    map: BTreeMap<String, String>,
}

impl Default for PrefixMap {
    fn default() -> Self {
        let mut pm = PrefixMap::empty();
        for (prefix, ns) in [
            ("more", vocab::MORE_NS),
            ("obi", vocab::OBI_NS),
            ("iao", vocab::IAO_NS),
            ("bfo", vocab::BFO_NS),
            ("pato", vocab::PATO_NS),
            ("xsd", vocab::XSD_NS),
            ("rdf", vocab::RDF_NS),
            ("rdfs", vocab::RDFS_NS),
        ] {
            pm.insert(prefix, ns);
        }
        pm
    }
}

impl PrefixMap {
    pub fn empty() -> Self {
        PrefixMap {
            map: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, prefix: &str, namespace: &str) {
        self.map.insert(prefix.to_string(), namespace.to_string());
    }

    pub fn get(&self, prefix: &str) -> Option<&str> {
        self.map.get(prefix).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn resolve(&self, prefix: &str, local: &str) -> Result<Term, PrefixError> {
        let ns = self
            .get(prefix)
            .ok_or_else(|| PrefixError::UnresolvedPrefix(prefix.to_string()))?;
        Ok(Term::iri(&format!("{ns}{local}"))?)
    }

    /// Expands `prefix:local` against the registered namespaces.
    pub fn expand(&self, curie: &str) -> Result<Term, PrefixError> {
        let (prefix, local) = curie
            .split_once(':')
            .ok_or_else(|| PrefixError::NotACurie(curie.to_string()))?;
        self.resolve(prefix, local)
    }

    /// Expands a CURIE, or accepts `<iri>` / a bare absolute IRI verbatim.
    pub fn expand_any(&self, text: &str) -> Result<Term, PrefixError> {
        if let Some(inner) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
            return Ok(Term::iri(inner)?);
        }
        if text.contains("://") {
            return Ok(Term::iri(text)?);
        }
        self.expand(text)
    }

    /// Longest registered namespace that prefixes `iri`, with its label.
    pub fn split<'a>(&'a self, iri: &'a str) -> Option<(&'a str, &'a str)> {
        self.map
            .iter()
            .filter(|(_, ns)| iri.starts_with(ns.as_str()))
            .max_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| b.0.cmp(a.0)))
            .map(|(prefix, ns)| (prefix.as_str(), &iri[ns.len()..]))
    }

    /// `prefix:local` for the longest matching namespace, else `<iri>`.
    /// Non-IRI terms render in N-Triples form.
    pub fn compact(&self, term: &Term) -> String {
        match term {
            Term::Iri(iri) => match self.split(iri) {
                Some((prefix, local)) => format!("{prefix}:{local}"),
                None => format!("<{iri}>"),
            },
            other => other.to_string(),
        }
    }
}
