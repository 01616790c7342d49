//! Datalog-style triple-pattern rules and semi-naive forward chaining.
//!
//! Rule files are line oriented:
//!
//! ```text
//! @prefix ex: <http://example.org/> .
//! # comment
//! name: ?a ex:p ?b & ?b ex:p ?c => ?a ex:p ?c .
//! ```

mod engine;
mod parser;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::lexer::{Pos, SyntaxError};
use crate::pattern::{PatternTerm, TriplePattern};
use crate::rdf::{PrefixError, PrefixMap, Term};
use crate::vocab::RDF_TYPE;

pub use engine::{materialize, materialize_with_stats, MaterializeStats};
pub use parser::parse_rules;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("{pos}: {source}")]
    Prefix { pos: Pos, source: PrefixError },
    #[error("duplicate rule name {0:?}")]
    DuplicateName(String),
    #[error("rule {rule:?}: head variable ?{var} does not occur in the body")]
    UnboundHeadVariable { rule: String, var: String },
    #[error("rule {0:?} has an empty body")]
    EmptyBody(String),
    #[error("rule {0:?} has an empty head")]
    EmptyHead(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub body: Vec<TriplePattern>,
    pub head: Vec<TriplePattern>,
}

impl Rule {
    /// Checks that the body is non-empty and every head variable is bound by
    /// the body.
    pub fn validate(&self) -> Result<(), RuleError> {
        if self.body.is_empty() {
            return Err(RuleError::EmptyBody(self.name.clone()));
        }
        if self.head.is_empty() {
            return Err(RuleError::EmptyHead(self.name.clone()));
        }
        let bound = crate::pattern::variables_of(&self.body);
        for var in crate::pattern::variables_of(&self.head) {
            if !bound.contains(&var) {
                return Err(RuleError::UnboundHeadVariable {
                    rule: self.name.clone(),
                    var,
                });
            }
        }
        Ok(())
    }

    pub fn render(&self, pm: &PrefixMap) -> String {
        let atoms = |ps: &[TriplePattern]| {
            ps.iter()
                .map(|p| {
                    [&p.subject, &p.predicate, &p.object]
                        .iter()
                        .enumerate()
                        .map(|(i, t)| render_term(t, pm, i == 1))
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect::<Vec<_>>()
                .join(" & ")
        };
        format!("{}: {} => {} .", self.name, atoms(&self.body), atoms(&self.head))
    }
}

fn safe_local(local: &str) -> bool {
    !local.is_empty()
        && !local.starts_with('-')
        && local.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn render_term(t: &PatternTerm, pm: &PrefixMap, predicate: bool) -> String {
    match t {
        PatternTerm::Var(v) => format!("?{v}"),
        PatternTerm::Const(Term::Iri(iri)) if predicate && &**iri == RDF_TYPE => "a".into(),
        PatternTerm::Const(term @ Term::Iri(iri)) => match pm.split(iri) {
            Some((prefix, local)) if safe_local(local) => format!("{prefix}:{local}"),
            _ => term.to_string(),
        },
        PatternTerm::Const(other) => other.to_string(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleSet {
    rules: Vec<Rule>,
}

impl RuleSet {
    pub fn new() -> Self {
        RuleSet::default()
    }

    pub fn push(&mut self, rule: Rule) -> Result<(), RuleError> {
        rule.validate()?;
        if self.rules.iter().any(|r| r.name == rule.name) {
            return Err(RuleError::DuplicateName(rule.name));
        }
        self.rules.push(rule);
        Ok(())
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn get(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// The built-in rules: subclass transitivity, type propagation and the
    /// two `more:measures_disposition` shortcut variants.
    pub fn builtins() -> RuleSet {
        parse_rules(BUILTIN_RULES, false).expect("built-in rules are valid")
    }

    /// Rule-file text with `@prefix` lines for the namespaces in use.
    pub fn to_text(&self) -> String {
        let pm = PrefixMap::default();
        let mut used = BTreeSet::new();
        for rule in &self.rules {
            for p in rule.body.iter().chain(&rule.head) {
                for t in p.terms() {
                    if let PatternTerm::Const(Term::Iri(iri)) = t {
                        if let Some((prefix, local)) = pm.split(iri) {
                            if safe_local(local) && &**iri != RDF_TYPE {
                                used.insert(prefix.to_string());
                            }
                        }
                    }
                }
            }
        }
        let namespaces: BTreeMap<_, _> = pm.iter().collect();
        let mut out = String::new();
        for prefix in &used {
            out.push_str(&format!("@prefix {prefix}: <{}> .\n", namespaces[prefix.as_str()]));
        }
        if !used.is_empty() {
            out.push('\n');
        }
        for rule in &self.rules {
            out.push_str(&rule.render(&pm));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub const BUILTIN_RULES: &str = "\
# Subclass transitivity and type propagation (RDFS subset).
subclass-transitivity: ?a rdfs:subClassOf ?b & ?b rdfs:subClassOf ?c => ?a rdfs:subClassOf ?c .
type-propagation: ?x a ?c & ?c rdfs:subClassOf ?d => ?x a ?d .

# A test item measures the disposition whose value its process outputs.
measures-disposition: ?proc pato:executes ?item & ?proc obi:has_specified_output ?datum & ?datum obi:has_value_specification ?vs & ?vs obi:specifies_value_of ?disp => ?item more:measures_disposition ?disp .
measures-disposition-via-plan: ?plan bfo:concretizes ?item & ?proc obi:realizes ?plan & ?proc obi:has_specified_output ?datum & ?datum obi:has_value_specification ?vs & ?vs obi:specifies_value_of ?disp => ?item more:measures_disposition ?disp .
";

/// The `pato:executes`-based `more:measures_disposition` shortcut.
pub fn builtin_shortcut_rule() -> Rule {
    RuleSet::builtins()
        .get("measures-disposition")
        .cloned()
        .expect("built-in shortcut rule")
}
