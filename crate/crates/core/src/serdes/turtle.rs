use crate::lexer::{SyntaxError, Tok, TokenStream};
use crate::rdf::{Graph, Literal, PrefixMap, Term, Triple};
use crate::vocab::{RDF_TYPE, XSD_BOOLEAN, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER, XSD_STRING};

use super::{SerdesError, SerializationConfig};

struct TurtleParser<'a> {
    ts: TokenStream<'a>,
    prefixes: PrefixMap,
    graph: Graph,
}

impl TurtleParser<'_> {
    fn resolve(&self, prefix: &str, local: &str, pos: crate::lexer::Pos) -> Result<Term, SerdesError> {
        self.prefixes
            .resolve(prefix, local)
            .map_err(|source| SerdesError::Prefix { pos, source })
    }

    fn directive(&mut self, sparql_style: bool) -> Result<(), SerdesError> {
        let pos = self.ts.pos();
        let prefix = match self.ts.next().map(|t| t.tok) {
            Some(Tok::PName { prefix, local }) if local.is_empty() => prefix,
            _ => return Err(SyntaxError::new(pos, "expected prefix label ending in ':'").into()),
        };
        let pos = self.ts.pos();
        let ns = match self.ts.next().map(|t| t.tok) {
            Some(Tok::IriRef(iri)) => iri,
            _ => return Err(SyntaxError::new(pos, "expected namespace IRI").into()),
        };
        self.prefixes.insert(&prefix, &ns);
        if !sparql_style {
            self.ts.expect_punct(".")?;
        }
        Ok(())
    }

    fn iri_or_blank(&mut self, what: &str) -> Result<Term, SerdesError> {
        let pos = self.ts.pos();
        match self.ts.next().map(|t| t.tok) {
            Some(Tok::IriRef(iri)) => Term::iri(&iri).map_err(|e| SerdesError::from(e).at(pos)),
            Some(Tok::PName { prefix, local }) => self.resolve(&prefix, &local, pos),
            Some(Tok::Blank(label)) => Term::blank(&label).map_err(|e| SerdesError::from(e).at(pos)),
            Some(Tok::Punct("[")) | Some(Tok::Punct("(")) => Err(SyntaxError::new(
                pos,
                "blank node property lists and collections are not supported",
            )
            .into()),
            Some(other) => Err(SyntaxError::new(pos, format!("expected {what}, found {other}")).into()),
            None => Err(self.ts.unexpected(what).into()),
        }
    }

    fn predicate(&mut self) -> Result<Term, SerdesError> {
        if matches!(self.ts.peek(), Some(Tok::Word(w)) if w == "a") {
            self.ts.next();
            return Ok(Term::named(RDF_TYPE));
        }
        let pos = self.ts.pos();
        let term = self.iri_or_blank("predicate")?;
        if !term.is_iri() {
            return Err(SyntaxError::new(pos, "predicate must be an IRI").into());
        }
        Ok(term)
    }

    fn object(&mut self) -> Result<Term, SerdesError> {
        let pos = self.ts.pos();
        let lit = |lex: String, dt: &str| -> Result<Term, SerdesError> {
            Ok(Term::Literal(Literal::typed(lex, dt)?))
        };
        match self.ts.peek() {
            Some(Tok::Str(_)) => {
                let Some(Tok::Str(lexical)) = self.ts.next().map(|t| t.tok) else {
                    unreachable!()
                };
                match self.ts.peek() {
                    Some(Tok::LangTag(_)) => {
                        let Some(Tok::LangTag(tag)) = self.ts.next().map(|t| t.tok) else {
                            unreachable!()
                        };
                        Literal::lang(lexical, &tag)
                            .map(Term::Literal)
                            .map_err(|e| SerdesError::from(e).at(pos))
                    }
                    Some(Tok::DatatypeMarker) => {
                        self.ts.next();
                        let dt_pos = self.ts.pos();
                        let dt = self.iri_or_blank("datatype IRI")?;
                        let Some(dt) = dt.as_iri() else {
                            return Err(SyntaxError::new(dt_pos, "datatype must be an IRI").into());
                        };
                        lit(lexical, dt)
                    }
                    _ => lit(lexical, XSD_STRING),
                }
            }
            Some(Tok::Integer(_)) | Some(Tok::Decimal(_)) | Some(Tok::Double(_)) => {
                match self.ts.next().map(|t| t.tok) {
                    Some(Tok::Integer(s)) => lit(s, XSD_INTEGER),
                    Some(Tok::Decimal(s)) => lit(s, XSD_DECIMAL),
                    Some(Tok::Double(s)) => lit(s, XSD_DOUBLE),
                    _ => unreachable!(),
                }
            }
            Some(Tok::Word(w)) if w == "true" || w == "false" => {
                let w = w.clone();
                self.ts.next();
                lit(w, XSD_BOOLEAN)
            }
            _ => self.iri_or_blank("object"),
        }
    }

    fn triples(&mut self) -> Result<(), SerdesError> {
        let subject_pos = self.ts.pos();
        let subject = self.iri_or_blank("subject")?;
        loop {
            let predicate = self.predicate()?;
            loop {
                let object = self.object()?;
                let triple = Triple::new(subject.clone(), predicate.clone(), object)
                    .map_err(|e| SerdesError::from(e).at(subject_pos))?;
                self.graph.insert(&triple)?;
                if !self.ts.eat_punct(",") {
                    break;
                }
            }
            if !self.ts.eat_punct(";") {
                break;
            }
            // Repeated or trailing semicolons are allowed.
            while self.ts.eat_punct(";") {}
            if self.ts.is_punct(".") {
                break;
            }
        }
        self.ts.expect_punct(".")?;
        Ok(())
    }

    fn document(&mut self) -> Result<(), SerdesError> {
        while !self.ts.at_end() {
            match self.ts.peek() {
                Some(Tok::LangTag(d)) if d == "prefix" => {
                    self.ts.next();
                    self.directive(false)?;
                }
                Some(Tok::LangTag(d)) if d == "base" => {
                    return Err(SyntaxError::new(self.ts.pos(), "@base is not supported").into());
                }
                Some(Tok::Word(w)) if w.eq_ignore_ascii_case("prefix") => {
                    self.ts.next();
                    self.directive(true)?;
                }
                Some(Tok::Word(w)) if w.eq_ignore_ascii_case("base") => {
                    return Err(SyntaxError::new(self.ts.pos(), "BASE is not supported").into());
                }
                _ => self.triples()?,
            }
        }
        Ok(())
    }
}

/// Parses the Turtle subset into a fully expanded graph. No prefixes are
/// predeclared.
pub fn parse_turtle(text: &str) -> Result<Graph, SerdesError> {
    parse_turtle_with_prefixes(text, PrefixMap::empty())
}

/// Like [`parse_turtle`] with `prefixes` predeclared.
pub fn parse_turtle_with_prefixes(text: &str, prefixes: PrefixMap) -> Result<Graph, SerdesError> {
    let mut parser = TurtleParser {
        ts: TokenStream::new(text),
        prefixes,
        graph: Graph::new(),
    };
    parser.document()?;
    Ok(parser.graph)
}

fn safe_local(local: &str) -> bool {
    local
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        && !local.starts_with('-')
}

fn iri_text(pm: &PrefixMap, iri: &str) -> String {
    match pm.split(iri) {
        Some((prefix, local)) if safe_local(local) => format!("{prefix}:{local}"),
        _ => format!("<{iri}>"),
    }
}

fn term_text(pm: &PrefixMap, term: &Term) -> String {
    match term {
        Term::Iri(iri) => iri_text(pm, iri),
        Term::Blank(label) => format!("_:{label}"),
        Term::Literal(lit) => {
            let mut s = String::with_capacity(lit.lexical().len() + 16);
            s.push('"');
            crate::rdf::escape_literal(&mut s, lit.lexical());
            s.push('"');
            if let Some(lang) = lit.language() {
                s.push('@');
                s.push_str(lang);
            } else if lit.datatype() != XSD_STRING {
                s.push_str("^^");
                s.push_str(&iri_text(pm, lit.datatype()));
            }
            s
        }
    }
}

/// Writes a prefix block followed by one block per subject, using `;` for
/// predicate lists, `,` for object lists and `a` for `rdf:type`. Literals
/// always keep their lexical form.
pub fn write_turtle(graph: &Graph, cfg: &SerializationConfig) -> String {
    let pm = &cfg.prefixes;
    let mut out = String::new();
    for (prefix, ns) in pm.iter() {
        out.push_str(&format!("@prefix {prefix}: <{ns}> .\n"));
    }

    let mut triples: Vec<[u32; 3]> = graph.iter_ids().collect();
    // Per-term (sort key, rendered text), computed once per distinct term.
    let mut cache: std::collections::HashMap<u32, (String, String)> = std::collections::HashMap::new();
    for t in &triples {
        for &id in t {
            cache.entry(id).or_insert_with(|| {
                let term = graph.term(id);
                (term.to_string(), term_text(pm, term))
            });
        }
    }
    let type_id = graph.id_of(&Term::named(RDF_TYPE));
    if cfg.canonical {
        let key = |id: &u32| cache[id].0.as_str();
        triples.sort_unstable_by(|a, b| {
            key(&a[0])
                .cmp(key(&b[0]))
                .then_with(|| (Some(a[1]) != type_id).cmp(&(Some(b[1]) != type_id)))
                .then_with(|| key(&a[1]).cmp(key(&b[1])))
                .then_with(|| key(&a[2]).cmp(key(&b[2])))
        });
    }

    let mut i = 0;
    while i < triples.len() {
        let subject = triples[i][0];
        out.push('\n');
        out.push_str(&cache[&subject].1);
        let mut first_predicate = true;
        while i < triples.len() && triples[i][0] == subject {
            let predicate = triples[i][1];
            out.push_str(if first_predicate { " " } else { " ;\n    " });
            first_predicate = false;
            if Some(predicate) == type_id {
                out.push('a');
            } else {
                out.push_str(&cache[&predicate].1);
            }
            out.push(' ');
            let mut first_object = true;
            while i < triples.len() && triples[i][0] == subject && triples[i][1] == predicate {
                if !first_object {
                    out.push_str(", ");
                }
                first_object = false;
                out.push_str(&cache[&triples[i][2]].1);
                i += 1;
            }
        }
        out.push_str(" .\n");
    }
    out
}
