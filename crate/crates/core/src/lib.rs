//! Knowledge-graph toolkit for motor performance study data.
//!
//! Tabular study bundles are loaded and validated ([`ingest`]), turned into a
//! BFO/IAO/OBI-patterned graph over the MO|RE vocabulary ([`ontology`]),
//! materialized with forward-chaining rules ([`rules`]), queried with a
//! SPARQL subset ([`query`]) and filtered into role-specific views
//! ([`privacy`]).

pub mod alias;
pub mod fixture;
pub mod ingest;
pub mod lexer;
pub mod numeric;
pub mod ontology;
pub mod pattern;
pub mod privacy;
pub mod query;
pub mod rdf;
pub mod rules;
pub mod serdes;
pub mod vocab;

pub use rdf::{Graph, PrefixMap, Term, Triple};
