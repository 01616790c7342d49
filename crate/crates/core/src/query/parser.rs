use crate::lexer::{Pos, SyntaxError, Tok, TokenStream};
use crate::pattern::{read_pattern_term, PatternTerm, Position, TermFailure, TriplePattern};
use crate::rdf::{PrefixMap, Term};

use super::ast::*;
use super::QueryError;

impl From<TermFailure> for QueryError {
    fn from(f: TermFailure) -> Self {
        match f {
            TermFailure::Syntax(e) => QueryError::Syntax(e),
            TermFailure::Prefix { pos, source } => QueryError::Prefix { pos, source },
        }
    }
}

struct Parser<'a> {
    ts: TokenStream<'a>,
    pm: PrefixMap,
}

fn err<T>(pos: Pos, msg: impl Into<String>) -> Result<T, QueryError> {
    Err(SyntaxError::new(pos, msg).into())
}

impl Parser<'_> {
    fn var(&mut self) -> Result<String, QueryError> {
        let pos = self.ts.pos();
        match self.ts.next().map(|t| t.tok) {
            Some(Tok::Var(v)) => Ok(v),
            Some(other) => err(pos, format!("expected variable, found {other}")),
            None => Err(self.ts.unexpected("variable").into()),
        }
    }

    fn natural(&mut self) -> Result<usize, QueryError> {
        let pos = self.ts.pos();
        match self.ts.next().map(|t| t.tok) {
            Some(Tok::Integer(n)) => n.parse().or_else(|_| err(pos, format!("expected a natural number, found {n}"))),
            Some(other) => err(pos, format!("expected a natural number, found {other}")),
            None => Err(self.ts.unexpected("number").into()),
        }
    }

    fn prologue(&mut self) -> Result<(), QueryError> {
        while self.ts.eat_keyword("PREFIX") {
            let pos = self.ts.pos();
            let prefix = match self.ts.next().map(|t| t.tok) {
                Some(Tok::PName { prefix, local }) if local.is_empty() => prefix,
                _ => return err(pos, "expected prefix label ending in ':'"),
            };
            let pos = self.ts.pos();
            let Some(Tok::IriRef(ns)) = self.ts.next().map(|t| t.tok) else {
                return err(pos, "expected namespace IRI");
            };
            self.pm.insert(&prefix, &ns);
        }
        Ok(())
    }

    fn aggregate(&mut self) -> Result<Aggregate, QueryError> {
        let pos = self.ts.pos();
        let func = match self.ts.next().map(|t| t.tok) {
            Some(Tok::Word(w)) => match w.to_ascii_uppercase().as_str() {
                "COUNT" => AggFunc::Count,
                "SUM" => AggFunc::Sum,
                "AVG" => AggFunc::Avg,
                "MIN" => AggFunc::Min,
                "MAX" => AggFunc::Max,
                _ => return err(pos, format!("unknown aggregate {w}")),
            },
            Some(other) => return err(pos, format!("expected aggregate, found {other}")),
            None => return Err(self.ts.unexpected("aggregate").into()),
        };
        self.ts.expect_punct("(")?;
        let distinct = self.ts.eat_keyword("DISTINCT");
        let arg = if func == AggFunc::Count && self.ts.eat_punct("*") {
            None
        } else {
            Some(self.var()?)
        };
        self.ts.expect_punct(")")?;
        self.ts.expect_keyword("AS")?;
        let alias = self.var()?;
        self.ts.expect_punct(")")?;
        Ok(Aggregate {
            func,
            distinct,
            arg,
            alias,
        })
    }

    fn projection(&mut self) -> Result<Projection, QueryError> {
        if self.ts.eat_punct("*") {
            return Ok(Projection::All);
        }
        let mut items = Vec::new();
        loop {
            match self.ts.peek() {
                Some(Tok::Var(_)) => items.push(SelectItem::Var(self.var()?)),
                Some(Tok::Punct("(")) => {
                    self.ts.next();
                    items.push(SelectItem::Aggregate(self.aggregate()?));
                }
                _ => break,
            }
        }
        if items.is_empty() {
            return Err(self.ts.unexpected("projection").into());
        }
        Ok(Projection::Items(items))
    }

    fn pattern_term(&mut self, position: Position) -> Result<PatternTerm, QueryError> {
        Ok(match read_pattern_term(&mut self.ts, &self.pm, position)? {
            PatternTerm::Const(Term::Blank(label)) => PatternTerm::Var(format!("{BLANK_VAR_PREFIX}{label}")),
            other => other,
        })
    }

    fn triples(&mut self, out: &mut Vec<TriplePattern>) -> Result<(), QueryError> {
        let subject = self.pattern_term(Position::Subject)?;
        loop {
            let predicate = self.pattern_term(Position::Predicate)?;
            loop {
                let object = self.pattern_term(Position::Object)?;
                out.push(TriplePattern::new(subject.clone(), predicate.clone(), object));
                if !self.ts.eat_punct(",") {
                    break;
                }
            }
            if !self.ts.eat_punct(";") {
                break;
            }
            while self.ts.eat_punct(";") {}
            if self.ts.is_punct(".") || self.ts.is_punct("}") || self.ts.is_keyword("FILTER") {
                break;
            }
        }
        Ok(())
    }

    fn primary(&mut self) -> Result<Expr, QueryError> {
        if self.ts.eat_punct("(") {
            let e = self.expr()?;
            self.ts.expect_punct(")")?;
            return Ok(e);
        }
        if self.ts.eat_keyword("BOUND") {
            self.ts.expect_punct("(")?;
            let v = self.var()?;
            self.ts.expect_punct(")")?;
            return Ok(Expr::Bound(v));
        }
        if let Some(Tok::Var(_)) = self.ts.peek() {
            return Ok(Expr::Var(self.var()?));
        }
        match self.pattern_term(Position::Object)? {
            PatternTerm::Const(t) => Ok(Expr::Const(t)),
            PatternTerm::Var(v) => Ok(Expr::Var(v)),
        }
    }

    fn relational(&mut self) -> Result<Expr, QueryError> {
        let left = self.primary()?;
        let op = match self.ts.peek() {
            Some(Tok::Punct("=")) => CmpOp::Eq,
            Some(Tok::Punct("!=")) => CmpOp::Ne,
            Some(Tok::Punct("<")) => CmpOp::Lt,
            Some(Tok::Punct("<=")) => CmpOp::Le,
            Some(Tok::Punct(">")) => CmpOp::Gt,
            Some(Tok::Punct(">=")) => CmpOp::Ge,
            _ => return Ok(left),
        };
        self.ts.next();
        let right = self.primary()?;
        Ok(Expr::Cmp(op, Box::new(left), Box::new(right)))
    }

    fn unary(&mut self) -> Result<Expr, QueryError> {
        if self.ts.eat_punct("!") {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        self.relational()
    }

    fn conjunction(&mut self) -> Result<Expr, QueryError> {
        let mut e = self.unary()?;
        while self.ts.eat_punct("&&") {
            e = Expr::And(Box::new(e), Box::new(self.unary()?));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr, QueryError> {
        let mut e = self.conjunction()?;
        while self.ts.eat_punct("||") {
            e = Expr::Or(Box::new(e), Box::new(self.conjunction()?));
        }
        Ok(e)
    }

    fn group_graph_pattern(&mut self, patterns: &mut Vec<TriplePattern>, filters: &mut Vec<Expr>) -> Result<(), QueryError> {
        self.ts.expect_punct("{")?;
        loop {
            if self.ts.eat_punct("}") {
                return Ok(());
            }
            if self.ts.eat_punct(".") {
                continue;
            }
            if self.ts.eat_keyword("FILTER") {
                self.ts.expect_punct("(")?;
                filters.push(self.expr()?);
                self.ts.expect_punct(")")?;
                continue;
            }
            if self.ts.at_end() {
                return Err(self.ts.unexpected("`}`").into());
            }
            if let Some(Tok::Word(w)) = self.ts.peek() {
                if ["OPTIONAL", "UNION", "GRAPH", "MINUS", "BIND", "VALUES", "SERVICE"]
                    .iter()
                    .any(|k| w.eq_ignore_ascii_case(k))
                {
                    return err(self.ts.pos(), format!("{} is not supported", w.to_ascii_uppercase()));
                }
            }
            self.triples(patterns)?;
            if !(self.ts.is_punct(".") || self.ts.is_punct("}") || self.ts.is_keyword("FILTER")) {
                return Err(self.ts.unexpected("`.` or `}`").into());
            }
        }
    }

    fn modifiers(&mut self, q: &mut Query) -> Result<(), QueryError> {
        if self.ts.eat_keyword("GROUP") {
            self.ts.expect_keyword("BY")?;
            q.group_by.push(self.var()?);
            while let Some(Tok::Var(_)) = self.ts.peek() {
                q.group_by.push(self.var()?);
            }
        }
        if self.ts.eat_keyword("ORDER") {
            self.ts.expect_keyword("BY")?;
            loop {
                let key = match self.ts.peek() {
                    Some(Tok::Var(_)) => OrderKey {
                        var: self.var()?,
                        descending: false,
                    },
                    Some(Tok::Word(w)) if w.eq_ignore_ascii_case("ASC") || w.eq_ignore_ascii_case("DESC") => {
                        let descending = w.eq_ignore_ascii_case("DESC");
                        self.ts.next();
                        self.ts.expect_punct("(")?;
                        let var = self.var()?;
                        self.ts.expect_punct(")")?;
                        OrderKey { var, descending }
                    }
                    _ => break,
                };
                q.order_by.push(key);
            }
            if q.order_by.is_empty() {
                return Err(self.ts.unexpected("order condition").into());
            }
        }
        loop {
            if self.ts.eat_keyword("LIMIT") {
                q.limit = Some(self.natural()?);
            } else if self.ts.eat_keyword("OFFSET") {
                q.offset = Some(self.natural()?);
            } else {
                break;
            }
        }
        Ok(())
    }

    fn query(&mut self) -> Result<Query, QueryError> {
        self.prologue()?;
        self.ts.expect_keyword("SELECT")?;
        let distinct = self.ts.eat_keyword("DISTINCT");
        let projection = self.projection()?;
        self.ts.eat_keyword("WHERE");
        let mut q = Query {
            prefixes: PrefixMap::empty(),
            distinct,
            projection,
            patterns: Vec::new(),
            filters: Vec::new(),
            group_by: Vec::new(),
            order_by: Vec::new(),
            limit: None,
            offset: None,
        };
        let (mut patterns, mut filters) = (Vec::new(), Vec::new());
        self.group_graph_pattern(&mut patterns, &mut filters)?;
        q.patterns = patterns;
        q.filters = filters;
        self.modifiers(&mut q)?;
        if !self.ts.at_end() {
            return Err(self.ts.unexpected("end of query").into());
        }
        q.prefixes = self.pm.clone();
        Ok(q)
    }
}

fn check(q: &Query) -> Result<(), QueryError> {
    let in_where = q.pattern_variables();
    let known = |v: &str| in_where.iter().any(|w| w == v);
    let mut filter_vars = Vec::new();
    for f in &q.filters {
        f.variables(&mut filter_vars);
    }
    for v in filter_vars.iter().chain(&q.group_by) {
        if !known(v) {
            return Err(QueryError::UnknownVariable(v.clone()));
        }
    }
    let mut columns: Vec<&str> = Vec::new();
    if let Projection::Items(items) = &q.projection {
        for item in items {
            match item {
                SelectItem::Var(v) => {
                    if !known(v) {
                        return Err(QueryError::UnknownVariable(v.clone()));
                    }
                }
                SelectItem::Aggregate(a) => {
                    if let Some(arg) = &a.arg {
                        if !known(arg) {
                            return Err(QueryError::UnknownVariable(arg.clone()));
                        }
                    }
                    if known(&a.alias) {
                        return Err(QueryError::DuplicateColumn(a.alias.clone()));
                    }
                }
            }
            if columns.contains(&item.column()) {
                return Err(QueryError::DuplicateColumn(item.column().to_string()));
            }
            columns.push(item.column());
        }
    }
    if q.is_grouped() {
        match &q.projection {
            Projection::All => {
                if let Some(v) = in_where.iter().find(|v| !q.group_by.contains(v)) {
                    return Err(QueryError::Ungrouped(v.clone()));
                }
            }
            Projection::Items(items) => {
                for item in items {
                    if let SelectItem::Var(v) = item {
                        if !q.group_by.contains(v) {
                            return Err(QueryError::Ungrouped(v.clone()));
                        }
                    }
                }
            }
        }
        for key in &q.order_by {
            if !q.group_by.contains(&key.var) && !columns.contains(&key.var.as_str()) {
                return Err(QueryError::Ungrouped(key.var.clone()));
            }
        }
    } else {
        for key in &q.order_by {
            if !known(&key.var) {
                return Err(QueryError::UnknownVariable(key.var.clone()));
            }
        }
    }
    Ok(())
}

/// Parses and checks a query. The default prefixes are predeclared and may
/// be overridden by `PREFIX` declarations.
pub fn parse_query(text: &str) -> Result<Query, QueryError> {
    let mut p = Parser {
        ts: TokenStream::new(text),
        pm: PrefixMap::default(),
    };
    let q = p.query()?;
    check(&q)?;
    Ok(q)
}

#[cfg(test)]
pub(crate) fn tests_cq1() -> &'static str {
    tests::CQ1
}
