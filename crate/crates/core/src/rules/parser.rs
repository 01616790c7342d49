use crate::lexer::{SyntaxError, Tok, TokenStream};
use crate::pattern::{read_pattern_term, Position, TermFailure, TriplePattern};
use crate::rdf::PrefixMap;

use super::{Rule, RuleError, RuleSet};

impl From<TermFailure> for RuleError {
    fn from(f: TermFailure) -> Self {
        match f {
            TermFailure::Syntax(e) => RuleError::Syntax(e),
            TermFailure::Prefix { pos, source } => RuleError::Prefix { pos, source },
        }
    }
}

fn atom(ts: &mut TokenStream<'_>, pm: &PrefixMap) -> Result<TriplePattern, RuleError> {
    let s = read_pattern_term(ts, pm, Position::Subject)?;
    let p = read_pattern_term(ts, pm, Position::Predicate)?;
    let o = read_pattern_term(ts, pm, Position::Object)?;
    Ok(TriplePattern::new(s, p, o))
}

fn atoms(ts: &mut TokenStream<'_>, pm: &PrefixMap) -> Result<Vec<TriplePattern>, RuleError> {
    let mut out = vec![atom(ts, pm)?];
    while ts.eat_punct("&") {
        out.push(atom(ts, pm)?);
    }
    Ok(out)
}

/// Parses a rule file. Rules are validated (non-empty body, head variables
/// bound, unique names); with `with_builtins` the built-in rules come first.
/// The default prefixes are predeclared.
pub fn parse_rules(text: &str, with_builtins: bool) -> Result<RuleSet, RuleError> {
    let mut set = if with_builtins { RuleSet::builtins() } else { RuleSet::new() };
    let mut pm = PrefixMap::default();
    let mut ts = TokenStream::new(text);
    while !ts.at_end() {
        let pos = ts.pos();
        match ts.next().map(|t| t.tok) {
            Some(Tok::LangTag(d)) if d == "prefix" => {
                let pos = ts.pos();
                let prefix = match ts.next().map(|t| t.tok) {
                    Some(Tok::PName { prefix, local }) if local.is_empty() => prefix,
                    _ => return Err(SyntaxError::new(pos, "expected prefix label ending in ':'").into()),
                };
                let pos = ts.pos();
                let Some(Tok::IriRef(ns)) = ts.next().map(|t| t.tok) else {
                    return Err(SyntaxError::new(pos, "expected namespace IRI").into());
                };
                pm.insert(&prefix, &ns);
                ts.expect_punct(".")?;
            }
            Some(Tok::PName { prefix: name, local }) if local.is_empty() => {
                let body = atoms(&mut ts, &pm)?;
                ts.expect_punct("=>")?;
                let head = atoms(&mut ts, &pm)?;
                ts.expect_punct(".")?;
                set.push(Rule { name, body, head })?;
            }
            Some(other) => {
                return Err(SyntaxError::new(pos, format!("expected `name:` or @prefix, found {other}")).into())
            }
            None => return Err(ts.unexpected("rule").into()),
        }
    }
    Ok(set)
}
