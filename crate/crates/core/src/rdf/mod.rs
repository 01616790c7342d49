//! RDF terms, triples, the indexed in-memory graph and prefix handling.

mod graph;
mod prefix;
mod term;

pub use graph::{Dictionary, Graph, IdTriple, IndexKind, TermId, TripleIndex};
pub use prefix::{PrefixError, PrefixMap};
pub use term::{Literal, Term, TermError, Triple};
pub(crate) use term::escape_literal;
