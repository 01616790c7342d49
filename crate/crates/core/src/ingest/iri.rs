use std::fmt;

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use thiserror::Error;

use crate::rdf::Term;
use crate::vocab::KG_BASE;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IriError {
    #[error("empty {0} component in IRI")]
    EmptyComponent(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityKind {
    Study,
    Person,
    Quality,
    Disposition,
    Plan,
    Process,
    Role,
    Datum,
    ValueSpec,
}

impl EntityKind {
    pub const ALL: [EntityKind; 9] = [
        EntityKind::Study,
        EntityKind::Person,
        EntityKind::Quality,
        EntityKind::Disposition,
        EntityKind::Plan,
        EntityKind::Process,
        EntityKind::Role,
        EntityKind::Datum,
        EntityKind::ValueSpec,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityKind::Study => "study",
            EntityKind::Person => "person",
            EntityKind::Quality => "quality",
            EntityKind::Disposition => "disposition",
            EntityKind::Plan => "plan",
            EntityKind::Process => "process",
            EntityKind::Role => "role",
            EntityKind::Datum => "datum",
            EntityKind::ValueSpec => "valuespec",
        }
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

const COMPONENT: &AsciiSet = &NON_ALPHANUMERIC.remove(b'_').remove(b'-');

/// `https://w3id.org/more/kg/{study}/{kind}/{local}` with each component
/// percent-encoded outside `[A-Za-z0-9_-]`.
pub fn mint_iri(study_id: &str, kind: EntityKind, local: &str) -> Result<Term, IriError> {
    if study_id.is_empty() {
        return Err(IriError::EmptyComponent("study"));
    }
    if local.is_empty() {
        return Err(IriError::EmptyComponent("local"));
    }
    let iri = format!(
        "{KG_BASE}{}/{kind}/{}",
        utf8_percent_encode(study_id, COMPONENT),
        utf8_percent_encode(local, COMPONENT)
    );
    Ok(Term::Iri(iri.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn person_iri() {
        let t = mint_iri("st01", EntityKind::Person, "p007").unwrap();
        assert_eq!(t.as_iri(), Some("https://w3id.org/more/kg/st01/person/p007"));
        assert_eq!(t, mint_iri("st01", EntityKind::Person, "p007").unwrap());
    }

    #[test]
    fn encodes_reserved_characters() {
        let t = mint_iri("st 1", EntityKind::Datum, "a/b#c").unwrap();
        assert_eq!(t.as_iri(), Some("https://w3id.org/more/kg/st%201/datum/a%2Fb%23c"));
    }

    #[test]
    fn empty_component_rejected() {
        assert_eq!(mint_iri("", EntityKind::Plan, "x"), Err(IriError::EmptyComponent("study")));
        assert_eq!(mint_iri("st01", EntityKind::Plan, ""), Err(IriError::EmptyComponent("local")));
    }

    #[test]
    fn kinds_separate_namespaces() {
        let iris: std::collections::BTreeSet<_> = EntityKind::ALL
            .iter()
            .map(|k| mint_iri("st01", *k, "p007_handgrip_s1").unwrap())
            .collect();
        assert_eq!(iris.len(), EntityKind::ALL.len());
    }
}
