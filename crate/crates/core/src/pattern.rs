//! Triple patterns with variables, shared by rules and queries.

use std::collections::BTreeSet;
use std::fmt;

use crate::rdf::{PrefixMap, Term, TermId};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternTerm {
    Var(String),
    Const(Term),
}

impl PatternTerm {
    pub fn var(name: &str) -> Self {
        PatternTerm::Var(name.to_string())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Const(_) => None,
        }
    }

    pub fn render(&self, pm: &PrefixMap) -> String {
        match self {
            PatternTerm::Var(v) => format!("?{v}"),
            PatternTerm::Const(t) => pm.compact(t),
        }
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Const(t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(
        subject: impl Into<PatternTerm>,
        predicate: impl Into<PatternTerm>,
        object: impl Into<PatternTerm>,
    ) -> Self {
        TriplePattern {
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
        }
    }

    pub fn terms(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.terms().into_iter().filter_map(PatternTerm::as_var)
    }

    pub fn render(&self, pm: &PrefixMap) -> String {
        format!(
            "{} {} {}",
            self.subject.render(pm),
            self.predicate.render(pm),
            self.object.render(pm)
        )
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&PrefixMap::empty()))
    }
}

pub fn variables_of<'a>(patterns: impl IntoIterator<Item = &'a TriplePattern>) -> BTreeSet<String> {
    patterns
        .into_iter()
        .flat_map(|p| p.variables().map(str::to_string).collect::<Vec<_>>())
        .collect()
}

/// A pattern slot after dictionary encoding: a constant id or a variable
/// slot index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Const(TermId),
    Var(usize),
}

pub type CompiledPattern = [Slot; 3];

/// Binding row indexed by variable slot.
pub type Binding = Vec<Option<TermId>>;

/// The lookup key for `pattern` under `binding`.
pub fn lookup_key(pattern: &CompiledPattern, binding: &Binding) -> [Option<TermId>; 3] {
    pattern.map(|slot| match slot {
        Slot::Const(id) => Some(id),
        Slot::Var(v) => binding[v],
    })
}

/// Extends `binding` with the variables of `pattern` matched against
/// `triple`. Returns the newly bound slots, or `None` on conflict (a
/// repeated variable bound to two different terms).
pub fn unify(pattern: &CompiledPattern, triple: &[TermId; 3], binding: &mut Binding) -> Option<Vec<usize>> {
    let mut fresh = Vec::new();
    for (slot, &value) in pattern.iter().zip(triple.iter()) {
        match *slot {
            Slot::Const(id) => {
                if id != value {
                    undo(binding, &fresh);
                    return None;
                }
            }
            Slot::Var(v) => match binding[v] {
                Some(bound) if bound != value => {
                    undo(binding, &fresh);
                    return None;
                }
                Some(_) => {}
                None => {
                    binding[v] = Some(value);
                    fresh.push(v);
                }
            },
        }
    }
    Some(fresh)
}

pub fn undo(binding: &mut Binding, slots: &[usize]) {
    for &v in slots {
        binding[v] = None;
    }
}

/// Greedy join order: starting from the variables in `initially_bound`,
/// repeatedly pick the pattern with the most determined positions, ties
/// broken by the smaller `estimate`, then by original position.
pub fn greedy_order(
    patterns: &[CompiledPattern],
    initially_bound: &[bool],
    estimate: impl Fn(usize) -> usize,
) -> Vec<usize> {
    let mut bound = initially_bound.to_vec();
    let mut remaining: Vec<usize> = (0..patterns.len()).collect();
    let mut order = Vec::with_capacity(patterns.len());
    while !remaining.is_empty() {
        let score = |i: usize| {
            let determined = patterns[i]
                .iter()
                .filter(|s| match s {
                    Slot::Const(_) => true,
                    Slot::Var(v) => bound[*v],
                })
                .count();
            (std::cmp::Reverse(determined), estimate(i), i)
        };
        let (pick_at, &pick) = remaining
            .iter()
            .enumerate()
            .min_by_key(|(_, &i)| score(i))
            .expect("non-empty");
        remaining.remove(pick_at);
        for slot in patterns[pick] {
            if let Slot::Var(v) = slot {
                bound[v] = true;
            }
        }
        order.push(pick);
    }
    order
}

/// Failure while reading a pattern term.
#[derive(Debug)]
pub(crate) enum TermFailure {
    Syntax(crate::lexer::SyntaxError),
    Prefix {
        pos: crate::lexer::Pos,
        source: crate::rdf::PrefixError,
    },
}

impl From<crate::lexer::SyntaxError> for TermFailure {
    fn from(e: crate::lexer::SyntaxError) -> Self {
        TermFailure::Syntax(e)
    }
}

/// Position of a term inside a triple pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Position {
    Subject,
    Predicate,
    Object,
}

/// Reads a variable, IRI, prefixed name, blank node, literal or (in
/// predicate position) the `a` keyword.
pub(crate) fn read_pattern_term(
    ts: &mut crate::lexer::TokenStream<'_>,
    pm: &PrefixMap,
    position: Position,
) -> Result<PatternTerm, TermFailure> {
    use crate::lexer::{SyntaxError, Tok};
    use crate::rdf::Literal;
    use crate::vocab::*;

    let pos = ts.pos();
    let syntax = |msg: String| TermFailure::Syntax(SyntaxError::new(pos, msg));
    let Some(token) = ts.next() else {
        return Err(ts.unexpected("term").into());
    };
    let term = match token.tok {
        Tok::Var(v) => return Ok(PatternTerm::Var(v)),
        Tok::Word(w) if w == "a" && position == Position::Predicate => Term::named(RDF_TYPE),
        Tok::IriRef(iri) => Term::iri(&iri).map_err(|e| syntax(e.to_string()))?,
        Tok::PName { prefix, local } => pm
            .resolve(&prefix, &local)
            .map_err(|source| TermFailure::Prefix { pos, source })?,
        Tok::Blank(label) => Term::blank(&label).map_err(|e| syntax(e.to_string()))?,
        Tok::Str(lexical) => {
            let lit = match ts.peek() {
                Some(Tok::LangTag(_)) => {
                    let Some(Tok::LangTag(tag)) = ts.next().map(|t| t.tok) else {
                        unreachable!()
                    };
                    Literal::lang(lexical, &tag)
                }
                Some(Tok::DatatypeMarker) => {
                    ts.next();
                    let dt = read_pattern_term(ts, pm, Position::Object)?;
                    match dt {
                        PatternTerm::Const(Term::Iri(dt)) => Literal::typed(lexical, &dt),
                        _ => return Err(syntax("datatype must be an IRI".into())),
                    }
                }
                _ => Ok(Literal::string(lexical)),
            };
            Term::Literal(lit.map_err(|e| syntax(e.to_string()))?)
        }
        Tok::Integer(s) => Term::typed(&s, XSD_INTEGER).expect("valid datatype"),
        Tok::Decimal(s) => Term::typed(&s, XSD_DECIMAL).expect("valid datatype"),
        Tok::Double(s) => Term::typed(&s, XSD_DOUBLE).expect("valid datatype"),
        Tok::Word(w) if w == "true" || w == "false" => Term::typed(&w, XSD_BOOLEAN).expect("valid datatype"),
        other => return Err(syntax(format!("expected term, found {other}"))),
    };
    match position {
        Position::Subject if term.is_literal() => Err(syntax(format!("literal {term} in subject position"))),
        Position::Predicate if !term.is_iri() => Err(syntax(format!("predicate must be an IRI, found {term}"))),
        _ => Ok(PatternTerm::Const(term)),
    }
}
