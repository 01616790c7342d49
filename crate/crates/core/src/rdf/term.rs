use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::vocab::{RDF_LANG_STRING, XSD_STRING};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("IRI must not be empty")]
    EmptyIri,
    #[error("IRI contains whitespace: {0:?}")]
    WhitespaceInIri(String),
    #[error("IRI contains a character not allowed in IRI references: {0:?}")]
    InvalidIriChar(String),
    #[error("invalid blank node label: {0:?}")]
    InvalidBlankLabel(String),
    #[error("invalid language tag: {0:?}")]
    InvalidLanguageTag(String),
    #[error("triple subject must be an IRI or blank node, got {0}")]
    LiteralSubject(Term),
    #[error("triple predicate must be an IRI, got {0}")]
    NonIriPredicate(Term),
}

/// An RDF literal. The datatype is always present; plain literals carry
/// `xsd:string` and language-tagged ones `rdf:langString`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: Arc<str>,
    datatype: Arc<str>,
    language: Option<Arc<str>>,
}

impl Literal {
    pub fn string(lexical: impl Into<Arc<str>>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Arc::from(XSD_STRING),
            language: None,
        }
    }

    /// A typed literal. The datatype IRI is validated like any other IRI.
    pub fn typed(lexical: impl Into<Arc<str>>, datatype: &str) -> Result<Self, TermError> {
        check_iri(datatype)?;
        Ok(Literal {
            lexical: lexical.into(),
            datatype: Arc::from(datatype),
            language: None,
        })
    }

    pub fn lang(lexical: impl Into<Arc<str>>, tag: &str) -> Result<Self, TermError> {
        let valid = !tag.is_empty()
            && tag.split('-').all(|part| {
                !part.is_empty() && part.chars().all(|c| c.is_ascii_alphanumeric())
            })
            && tag.chars().next().is_some_and(|c| c.is_ascii_alphabetic());
        if !valid {
            return Err(TermError::InvalidLanguageTag(tag.to_string()));
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype: Arc::from(RDF_LANG_STRING),
            language: Some(Arc::from(tag)),
        })
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &str {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Arc<str>),
    Blank(Arc<str>),
    Literal(Literal),
}

fn check_iri(iri: &str) -> Result<(), TermError> {
    if iri.is_empty() {
        return Err(TermError::EmptyIri);
    }
    let plain = |b: u8| b.is_ascii_graphic() && !matches!(b, b'<' | b'>' | b'"' | b'{' | b'}' | b'|' | b'^' | b'`' | b'\\');
    if iri.bytes().all(plain) {
        return Ok(());
    }
    if iri.chars().any(char::is_whitespace) {
        return Err(TermError::WhitespaceInIri(iri.to_string()));
    }
    if iri.chars().any(|c| c.is_control() || "<>\"{}|^`\\".contains(c)) {
        return Err(TermError::InvalidIriChar(iri.to_string()));
    }
    Ok(())
}

pub(crate) fn is_blank_label(label: &str) -> bool {
    !label.is_empty()
        && label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

impl Term {
    pub fn iri(iri: &str) -> Result<Term, TermError> {
        check_iri(iri)?;
        Ok(Term::Iri(Arc::from(iri)))
    }

    pub fn blank(label: &str) -> Result<Term, TermError> {
        if !is_blank_label(label) {
            return Err(TermError::InvalidBlankLabel(label.to_string()));
        }
        Ok(Term::Blank(Arc::from(label)))
    }

    /// Builds an IRI term from a constant known to be well formed.
    pub(crate) fn named(iri: &'static str) -> Term {
        debug_assert!(check_iri(iri).is_ok());
        Term::Iri(Arc::from(iri))
    }

    pub fn string(lexical: &str) -> Term {
        Term::Literal(Literal::string(lexical))
    }

    pub fn typed(lexical: &str, datatype: &str) -> Result<Term, TermError> {
        Literal::typed(lexical, datatype).map(Term::Literal)
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }
}

pub(crate) fn escape_literal(out: &mut String, lexical: &str) {
    for c in lexical.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 || c as u32 == 0x7f => {
                out.push_str(&format!("\\u{:04X}", c as u32));
            }
            c => out.push(c),
        }
    }
}

/// N-Triples rendering.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::Blank(label) => write!(f, "_:{label}"),
            Term::Literal(lit) => {
                let mut s = String::with_capacity(lit.lexical.len() + 2);
                s.push('"');
                escape_literal(&mut s, &lit.lexical);
                s.push('"');
                f.write_str(&s)?;
                if let Some(lang) = &lit.language {
                    write!(f, "@{lang}")
                } else if &*lit.datatype != XSD_STRING {
                    write!(f, "^^<{}>", lit.datatype)
                } else {
                    Ok(())
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Triple, TermError> {
        if subject.is_literal() {
            return Err(TermError::LiteralSubject(subject));
        }
        if !predicate.is_iri() {
            return Err(TermError::NonIriPredicate(predicate));
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    pub(crate) fn validate(&self) -> Result<(), TermError> {
        if self.subject.is_literal() {
            return Err(TermError::LiteralSubject(self.subject.clone()));
        }
        if !self.predicate.is_iri() {
            return Err(TermError::NonIriPredicate(self.predicate.clone()));
        }
        Ok(())
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}
