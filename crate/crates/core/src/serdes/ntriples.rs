use crate::lexer::{SyntaxError, Tok, TokenStream};
use crate::rdf::{Graph, Literal, Term, TermId, Triple};

use super::{SerdesError, SerializationConfig};

fn term_from(tok: Tok, ts: &mut TokenStream<'_>) -> Result<Term, SerdesError> {
    match tok {
        Tok::IriRef(iri) => Ok(Term::iri(&iri)?),
        Tok::Blank(label) => Ok(Term::blank(&label)?),
        Tok::Str(lexical) => match ts.peek() {
            Some(Tok::LangTag(_)) => {
                let Some(Tok::LangTag(tag)) = ts.next().map(|t| t.tok) else {
                    unreachable!()
                };
                Ok(Term::Literal(Literal::lang(lexical, &tag)?))
            }
            Some(Tok::DatatypeMarker) => {
                ts.next();
                let pos = ts.pos();
                match ts.next().map(|t| t.tok) {
                    Some(Tok::IriRef(dt)) => Ok(Term::Literal(Literal::typed(lexical, &dt)?)),
                    _ => Err(SyntaxError::new(pos, "expected datatype IRI after ^^").into()),
                }
            }
            _ => Ok(Term::string(&lexical)),
        },
        other => Err(SyntaxError::new(ts.pos(), format!("unexpected token {other}")).into()),
    }
}

/// Parses N-Triples. Every triple must sit on a single line.
pub fn parse_ntriples(text: &str) -> Result<Graph, SerdesError> {
    let mut ts = TokenStream::new(text);
    let mut graph = Graph::new();
    while !ts.at_end() {
        let start = ts.pos();
        let mut terms = Vec::with_capacity(3);
        for role in ["subject", "predicate", "object"] {
            let pos = ts.pos();
            let Some(tok) = ts.next() else {
                return Err(ts.unexpected(role).into());
            };
            if tok.pos.line != start.line {
                return Err(SyntaxError::new(tok.pos, "triple spans more than one line").into());
            }
            let term = term_from(tok.tok, &mut ts).map_err(|e| e.at(pos))?;
            let ok = match role {
                "subject" => !term.is_literal(),
                "predicate" => term.is_iri(),
                _ => true,
            };
            if !ok {
                return Err(SyntaxError::new(pos, format!("invalid {role}: {term}")).into());
            }
            terms.push(term);
        }
        let dot_pos = ts.pos();
        ts.expect_punct(".")?;
        if dot_pos.line != start.line {
            return Err(SyntaxError::new(dot_pos, "triple spans more than one line").into());
        }
        let o = terms.pop().expect("object");
        let p = terms.pop().expect("predicate");
        let s = terms.pop().expect("subject");
        graph.insert(&Triple::new(s, p, o)?)?;
    }
    Ok(graph)
}

/// Serializes as N-Triples, one triple per line. Canonical mode sorts the
/// lines by the serialized (subject, predicate, object).
pub fn write_ntriples(graph: &Graph, cfg: &SerializationConfig) -> String {
    let mut rendered: Vec<Option<String>> = vec![None; graph.term_count()];
    let mut rows: Vec<[TermId; 3]> = graph.iter_ids().collect();
    for id in rows.iter().flatten() {
        rendered[*id as usize].get_or_insert_with(|| graph.term(*id).to_string());
    }
    let text = |id: TermId| rendered[id as usize].as_deref().expect("rendered");
    if cfg.canonical {
        rows.sort_unstable_by(|a, b| a.map(text).cmp(&b.map(text)));
    }
    let mut out = String::with_capacity(rows.len() * 96);
    for [s, p, o] in rows {
        out.push_str(text(s));
        out.push(' ');
        out.push_str(text(p));
        out.push(' ');
        out.push_str(text(o));
        out.push_str(" .\n");
    }
    out
}
