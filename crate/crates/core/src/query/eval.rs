use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use num_rational::BigRational;
use num_traits::Zero;

use crate::numeric::literal_value;
use crate::pattern::{lookup_key, undo, unify, Binding, CompiledPattern, PatternTerm, Slot};
use crate::rdf::{Graph, Term, TermId};
use crate::vocab::{self, OBI_HAS_SPECIFIED_NUMERIC_VALUE, XSD_BOOLEAN, XSD_STRING};

use super::ast::*;
use super::explain::plan_order;
use crate::numeric::literal_date;
use super::value::{compare_values, NumKind, Number, SolutionTable, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalOptions {
    /// Decimal places for AVG results.
    pub precision: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { precision: 6 }
    }
}

pub fn evaluate(g: &Graph, q: &Query) -> SolutionTable {
    evaluate_with(g, q, &EvalOptions::default())
}

/// Evaluates `q` over `g`: BGP join (bag semantics), FILTER, grouping and
/// aggregation, ORDER BY (stable), projection, DISTINCT, OFFSET and LIMIT.
pub fn evaluate_with(g: &Graph, q: &Query, opts: &EvalOptions) -> SolutionTable {
    let mut slots: HashMap<String, usize> = HashMap::new();
    for p in &q.patterns {
        for v in p.variables() {
            let next = slots.len();
            slots.entry(v.to_string()).or_insert(next);
        }
    }
    let solutions = match_bgp(g, q, &slots);
    let solutions: Vec<Binding> = solutions
        .into_iter()
        .filter(|b| q.filters.iter().all(|f| truth(f, b, &slots, g) == Some(true)))
        .collect();

    let mut warnings = Vec::new();
    let (env, rows) = if q.is_grouped() {
        group(g, q, &slots, &solutions, opts, &mut warnings)
    } else {
        let vars = q.pattern_variables();
        let rows = solutions
            .iter()
            .map(|b| {
                vars.iter()
                    .map(|v| b[slots[v]].map(|id| Value::Term(g.term(id).clone())))
                    .collect()
            })
            .collect();
        (vars, rows)
    };
    finish(q, env, rows, warnings)
}

fn match_bgp(g: &Graph, q: &Query, slots: &HashMap<String, usize>) -> Vec<Binding> {
    let mut compiled: Vec<CompiledPattern> = Vec::with_capacity(q.patterns.len());
    for p in &q.patterns {
        let mut c = [Slot::Var(0); 3];
        for (slot, t) in c.iter_mut().zip(p.terms()) {
            *slot = match t {
                PatternTerm::Var(v) => Slot::Var(slots[v]),
                PatternTerm::Const(term) => match g.id_of(term) {
                    Some(id) => Slot::Const(id),
                    None => return Vec::new(),
                },
            };
        }
        compiled.push(c);
    }
    let order: Vec<usize> = plan_order(g, &q.patterns).into_iter().map(|(i, _)| i).collect();
    let mut out = Vec::new();
    let mut binding: Binding = vec![None; slots.len()];
    join(g, &compiled, &order, 0, &mut binding, &mut out);
    out
}

fn join(g: &Graph, patterns: &[CompiledPattern], order: &[usize], depth: usize, binding: &mut Binding, out: &mut Vec<Binding>) {
    let Some(&i) = order.get(depth) else {
        out.push(binding.clone());
        return;
    };
    let [s, p, o] = lookup_key(&patterns[i], binding);
    for t in g.match_ids(s, p, o) {
        if let Some(fresh) = unify(&patterns[i], &t, binding) {
            join(g, patterns, order, depth + 1, binding, out);
            undo(binding, &fresh);
        }
    }
}

/// Intermediate expression value.
enum Ev<'a> {
    Term(&'a Term),
    Bool(bool),
}

fn eval<'a>(e: &'a Expr, b: &Binding, slots: &HashMap<String, usize>, g: &'a Graph) -> Option<Ev<'a>> {
    match e {
        Expr::Var(v) => slots.get(v).and_then(|&s| b[s]).map(|id| Ev::Term(g.term(id))),
        Expr::Const(t) => Some(Ev::Term(t)),
        Expr::Bound(v) => Some(Ev::Bool(slots.get(v).and_then(|&s| b[s]).is_some())),
        Expr::Cmp(op, l, r) => {
            let l = eval(l, b, slots, g)?;
            let r = eval(r, b, slots, g)?;
            compare(*op, &l, &r).map(Ev::Bool)
        }
        Expr::And(l, r) => match (truth(l, b, slots, g), truth(r, b, slots, g)) {
            (Some(false), _) | (_, Some(false)) => Some(Ev::Bool(false)),
            (Some(true), Some(true)) => Some(Ev::Bool(true)),
            _ => None,
        },
        Expr::Or(l, r) => match (truth(l, b, slots, g), truth(r, b, slots, g)) {
            (Some(true), _) | (_, Some(true)) => Some(Ev::Bool(true)),
            (Some(false), Some(false)) => Some(Ev::Bool(false)),
            _ => None,
        },
        Expr::Not(e) => truth(e, b, slots, g).map(|t| Ev::Bool(!t)),
    }
}

/// Effective boolean value; `None` is a type error.
fn truth(e: &Expr, b: &Binding, slots: &HashMap<String, usize>, g: &Graph) -> Option<bool> {
    match eval(e, b, slots, g)? {
        Ev::Bool(v) => Some(v),
        Ev::Term(Term::Literal(l)) => {
            if l.datatype() == XSD_BOOLEAN {
                match l.lexical() {
                    "true" | "1" => Some(true),
                    "false" | "0" => Some(false),
                    _ => None,
                }
            } else if let Some(n) = literal_value(l) {
                Some(!n.is_zero())
            } else if l.datatype() == XSD_STRING || l.language().is_some() {
                Some(!l.lexical().is_empty())
            } else {
                None
            }
        }
        Ev::Term(_) => None,
    }
}

fn as_bool(v: &Ev<'_>) -> Option<bool> {
    match v {
        Ev::Bool(b) => Some(*b),
        Ev::Term(Term::Literal(l)) if l.datatype() == XSD_BOOLEAN => match l.lexical() {
            "true" | "1" => Some(true),
            "false" | "0" => Some(false),
            _ => None,
        },
        _ => None,
    }
}

fn ordering_holds(op: CmpOp, ord: Ordering) -> bool {
    match op {
        CmpOp::Eq => ord == Ordering::Equal,
        CmpOp::Ne => ord != Ordering::Equal,
        CmpOp::Lt => ord == Ordering::Less,
        CmpOp::Le => ord != Ordering::Greater,
        CmpOp::Gt => ord == Ordering::Greater,
        CmpOp::Ge => ord != Ordering::Less,
    }
}

/// Numeric literals compare by value, dates chronologically, plain strings
/// and booleans by value. Other pairs support only `=` and `!=` (term
/// identity); ordering them is a type error.
fn compare(op: CmpOp, l: &Ev<'_>, r: &Ev<'_>) -> Option<bool> {
    if let (Some(a), Some(b)) = (as_bool(l), as_bool(r)) {
        return Some(ordering_holds(op, a.cmp(&b)));
    }
    let (Ev::Term(a), Ev::Term(b)) = (l, r) else {
        return None;
    };
    if let (Term::Literal(x), Term::Literal(y)) = (a, b) {
        if let (Some(p), Some(q)) = (literal_value(x), literal_value(y)) {
            return Some(ordering_holds(op, p.cmp(&q)));
        }
        if let (Some(p), Some(q)) = (literal_date(x), literal_date(y)) {
            return Some(ordering_holds(op, p.cmp(&q)));
        }
        let plain = |l: &crate::rdf::Literal| l.datatype() == XSD_STRING;
        if plain(x) && plain(y) {
            return Some(ordering_holds(op, x.lexical().cmp(y.lexical())));
        }
    }
    match op {
        CmpOp::Eq => Some(a == b),
        CmpOp::Ne => Some(a != b),
        _ => None,
    }
}

/// Numeric reading of an aggregate input: a numeric literal, or a node
/// with exactly one numeric `obi:has_specified_numeric_value`.
#[derive(Clone)]
struct Numeric {
    value: BigRational,
    integer: bool,
    literal: TermId,
}

fn numeric_of(g: &Graph, id: TermId, hsnv: Option<TermId>) -> Option<Numeric> {
    match g.term(id) {
        Term::Literal(l) => literal_value(l).map(|value| Numeric {
            value,
            integer: vocab::is_integer_datatype(l.datatype()),
            literal: id,
        }),
        _ => {
            let hsnv = hsnv?;
            let mut values = g.match_ids(Some(id), Some(hsnv), None);
            let first = values.next()?;
            if values.next().is_some() {
                return None;
            }
            match g.term(first[2]) {
                Term::Literal(_) => numeric_of(g, first[2], None),
                _ => None,
            }
        }
    }
}

struct Aggregator<'g> {
    g: &'g Graph,
    hsnv: Option<TermId>,
    cache: HashMap<TermId, Option<Numeric>>,
    precision: usize,
}

impl Aggregator<'_> {
    fn numeric(&mut self, id: TermId) -> Option<Numeric> {
        let (g, hsnv) = (self.g, self.hsnv);
        self.cache.entry(id).or_insert_with(|| numeric_of(g, id, hsnv)).clone()
    }

    fn run(&mut self, a: &Aggregate, rows: &[&Binding], slot: Option<usize>, warnings: &mut Vec<String>) -> Option<Value> {
        let mut inputs: Vec<TermId> = match slot {
            Some(s) => rows.iter().filter_map(|b| b[s]).collect(),
            None => Vec::new(),
        };
        if a.distinct {
            let mut seen = HashSet::new();
            inputs.retain(|id| seen.insert(*id));
        }
        let integer = |n: usize| {
            Some(Value::Number(Number {
                value: BigRational::from_integer(n.into()),
                kind: NumKind::Integer,
            }))
        };
        match a.func {
            AggFunc::Count => match slot {
                Some(_) => integer(inputs.len()),
                None if a.distinct => {
                    let distinct: HashSet<&Binding> = rows.iter().copied().collect();
                    integer(distinct.len())
                }
                None => integer(rows.len()),
            },
            AggFunc::Sum | AggFunc::Avg => {
                if inputs.is_empty() {
                    return None;
                }
                let mut sum = BigRational::zero();
                let mut all_integer = true;
                for &id in &inputs {
                    let Some(n) = self.numeric(id) else {
                        warnings.push(format!(
                            "{}(?{}) over non-numeric value {}; result unbound",
                            a.func.name(),
                            a.arg.as_deref().unwrap_or("*"),
                            self.g.term(id)
                        ));
                        return None;
                    };
                    all_integer &= n.integer;
                    sum += n.value;
                }
                let (value, kind) = if a.func == AggFunc::Avg {
                    (sum / BigRational::from_integer(inputs.len().into()), NumKind::Rounded(self.precision))
                } else if all_integer {
                    (sum, NumKind::Integer)
                } else {
                    (sum, NumKind::Decimal)
                };
                Some(Value::Number(Number { value, kind }))
            }
            AggFunc::Min | AggFunc::Max => {
                let candidates: Vec<Value> = inputs
                    .iter()
                    .map(|&id| {
                        let id = match self.g.term(id) {
                            Term::Literal(_) => id,
                            _ => self.numeric(id).map_or(id, |n| n.literal),
                        };
                        Value::Term(self.g.term(id).clone())
                    })
                    .collect();
                if a.func == AggFunc::Min {
                    candidates.into_iter().min_by(|x, y| compare_values(Some(x), Some(y)))
                } else {
                    candidates.into_iter().max_by(|x, y| compare_values(Some(x), Some(y)))
                }
            }
        }
    }
}

type Rows = Vec<Vec<Option<Value>>>;

/// Groups solutions by the GROUP BY variables (groups in order of first
/// appearance) and computes aggregates. Without GROUP BY all solutions form
/// one group, even when there are none.
fn group(
    g: &Graph,
    q: &Query,
    slots: &HashMap<String, usize>,
    solutions: &[Binding],
    opts: &EvalOptions,
    warnings: &mut Vec<String>,
) -> (Vec<String>, Rows) {
    let key_slots: Vec<usize> = q.group_by.iter().map(|v| slots[v]).collect();
    let mut index: HashMap<Vec<Option<TermId>>, usize> = HashMap::new();
    let mut groups: Vec<(Vec<Option<TermId>>, Vec<&Binding>)> = Vec::new();
    if q.group_by.is_empty() {
        groups.push((Vec::new(), solutions.iter().collect()));
    } else {
        for b in solutions {
            let key: Vec<Option<TermId>> = key_slots.iter().map(|&s| b[s]).collect();
            let at = *index.entry(key.clone()).or_insert_with(|| {
                groups.push((key, Vec::new()));
                groups.len() - 1
            });
            groups[at].1.push(b);
        }
    }

    let aggregates: Vec<&Aggregate> = q.aggregates().collect();
    let mut env = q.group_by.clone();
    env.extend(aggregates.iter().map(|a| a.alias.clone()));
    let mut agg = Aggregator {
        g,
        hsnv: g.id_of(&vocab::term(OBI_HAS_SPECIFIED_NUMERIC_VALUE)),
        cache: HashMap::new(),
        precision: opts.precision,
    };
    let rows = groups
        .into_iter()
        .map(|(key, members)| {
            let mut row: Vec<Option<Value>> = key.iter().map(|id| id.map(|id| Value::Term(g.term(id).clone()))).collect();
            for a in &aggregates {
                let slot = a.arg.as_ref().map(|v| slots[v]);
                row.push(agg.run(a, &members, slot, warnings));
            }
            row
        })
        .collect();
    (env, rows)
}

fn finish(q: &Query, env: Vec<String>, mut rows: Rows, warnings: Vec<String>) -> SolutionTable {
    let at = |name: &str| env.iter().position(|e| e == name).expect("checked at parse time");
    if !q.order_by.is_empty() {
        let keys: Vec<(usize, bool)> = q.order_by.iter().map(|k| (at(&k.var), k.descending)).collect();
        rows.sort_by(|x, y| {
            for &(i, desc) in &keys {
                let ord = compare_values(x[i].as_ref(), y[i].as_ref());
                let ord = if desc { ord.reverse() } else { ord };
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            Ordering::Equal
        });
    }
    let columns = q.columns();
    let picks: Vec<usize> = columns.iter().map(|c| at(c)).collect();
    let mut projected: Rows = rows
        .into_iter()
        .map(|mut r| picks.iter().map(|&i| r[i].take()).collect())
        .collect();
    if q.distinct {
        let mut seen = HashSet::new();
        projected.retain(|r| seen.insert(r.clone()));
    }
    let offset = q.offset.unwrap_or(0).min(projected.len());
    projected.drain(..offset);
    if let Some(limit) = q.limit {
        projected.truncate(limit);
    }
    SolutionTable {
        columns,
        rows: projected,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::parse_query;
    use crate::serdes::parse_turtle_with_prefixes;
    use crate::rdf::PrefixMap;

    fn graph(ttl: &str) -> Graph {
        let mut pm = PrefixMap::default();
        pm.insert("ex", "http://ex.org/");
        parse_turtle_with_prefixes(ttl, pm).unwrap()
    }

    fn run(g: &Graph, q: &str) -> Vec<Vec<String>> {
        let q = format!("PREFIX ex: <http://ex.org/>\n{q}");
        evaluate(g, &parse_query(&q).unwrap()).rendered()
    }

    #[test]
    fn empty_graph_empty_table() {
        let t = evaluate(&Graph::new(), &parse_query("SELECT ?x WHERE { ?x a more:Study }").unwrap());
        assert!(t.is_empty());
        assert_eq!(t.columns, vec!["x"]);
    }

    #[test]
    fn avg_dereferences_value_specifications() {
        let g = graph(
            "ex:t1 a more:HandgripTestProcess ; obi:has_specified_output ex:d1 ; obi:has_participant ex:p1 .
             ex:d1 a iao:ScalarMeasurementDatum ; obi:has_value_specification ex:v1 .
             ex:v1 obi:has_specified_numeric_value \"20.0\"^^xsd:decimal .
             ex:t2 a more:HandgripTestProcess ; obi:has_specified_output ex:d2 ; obi:has_participant ex:p2 .
             ex:d2 a iao:ScalarMeasurementDatum ; obi:has_value_specification ex:v2 .
             ex:v2 obi:has_specified_numeric_value \"21.5\"^^xsd:decimal .
             ex:t3 a more:HandgripTestProcess ; obi:has_specified_output ex:d3 ; obi:has_participant ex:p3 .
             ex:d3 a iao:ScalarMeasurementDatum ; obi:has_value_specification ex:v3 .
             ex:v3 obi:has_specified_numeric_value \"11\"^^xsd:decimal .
             ex:p1 more:hasAge 8 . ex:p2 more:hasAge 8 . ex:p3 more:hasAge 7 .",
        );
        let rows = run(&g, super::super::parser::tests_cq1());
        assert_eq!(rows, vec![vec!["7", "11.000000"], vec!["8", "20.750000"]]);
    }

    #[test]
    fn non_numeric_avg_is_unbound_with_warning() {
        let g = graph("ex:a ex:v \"x\" . ex:b ex:v 2 .");
        let q = parse_query("PREFIX ex: <http://ex.org/> SELECT (AVG(?v) AS ?m) (COUNT(?v) AS ?n) WHERE { ?s ex:v ?v }").unwrap();
        let t = evaluate(&g, &q);
        assert_eq!(t.rendered(), vec![vec!["", "2"]]);
        assert_eq!(t.warnings.len(), 1);
    }

    #[test]
    fn empty_aggregate_group() {
        let g = graph("ex:a ex:v 1 .");
        assert_eq!(
            run(&g, "SELECT (COUNT(*) AS ?n) (SUM(?v) AS ?s) WHERE { ?x ex:missing ?v }"),
            vec![vec!["0", ""]]
        );
        assert!(run(&g, "SELECT ?x (COUNT(*) AS ?n) WHERE { ?x ex:missing ?v } GROUP BY ?x").is_empty());
    }

    #[test]
    fn sum_min_max_count_distinct() {
        let g = graph("ex:a ex:v 1 . ex:b ex:v 2 . ex:c ex:v 2 . ex:d ex:v 2.5 .");
        assert_eq!(
            run(
                &g,
                "SELECT (SUM(?v) AS ?s) (MIN(?v) AS ?lo) (MAX(?v) AS ?hi) (COUNT(DISTINCT ?v) AS ?n) WHERE { ?x ex:v ?v }"
            ),
            vec![vec!["7.5", "1", "2.5", "3"]]
        );
        assert_eq!(run(&g, "SELECT (SUM(?v) AS ?s) WHERE { ?x ex:v ?v FILTER(?v < 2.5) }"), vec![vec!["5"]]);
    }

    #[test]
    fn filters_three_valued() {
        let g = graph("ex:a ex:y 2014 . ex:b ex:y 2016 . ex:c ex:y \"n/a\" . ex:d ex:y ex:e .");
        assert_eq!(
            run(&g, "SELECT ?x WHERE { ?x ex:y ?y FILTER(?y >= 2015 && ?y <= 2020) }"),
            vec![vec!["http://ex.org/b"]]
        );
        // "n/a" < 2015 is an error: excluded by FILTER and by its negation.
        assert_eq!(run(&g, "SELECT ?x WHERE { ?x ex:y ?y FILTER(!(?y < 2015)) } ORDER BY ?x").len(), 1);
        assert_eq!(run(&g, "SELECT ?x WHERE { ?x ex:y ?y FILTER(?y < 2015 || true) }").len(), 4);
        assert_eq!(run(&g, "SELECT ?x WHERE { ?x ex:y ?y FILTER(?y = ex:e) }"), vec![vec!["http://ex.org/d"]]);
    }

    #[test]
    fn dates_compare_chronologically() {
        let g = graph("ex:a ex:d \"2015-03-01\"^^xsd:date . ex:b ex:d \"2014-12-31\"^^xsd:date .");
        assert_eq!(
            run(&g, "SELECT ?x WHERE { ?x ex:d ?d FILTER(?d > \"2015-01-01\"^^xsd:date) }"),
            vec![vec!["http://ex.org/a"]]
        );
        assert_eq!(run(&g, "SELECT ?d WHERE { ?x ex:d ?d } ORDER BY DESC(?d)")[0], vec!["2015-03-01"]);
    }

    #[test]
    fn distinct_order_limit_offset() {
        let g = graph("ex:a ex:p ex:z . ex:b ex:p ex:z . ex:c ex:p ex:y .");
        assert_eq!(run(&g, "SELECT ?o WHERE { ?s ex:p ?o }").len(), 3);
        assert_eq!(
            run(&g, "SELECT DISTINCT ?o WHERE { ?s ex:p ?o } ORDER BY ?o"),
            vec![vec!["http://ex.org/y"], vec!["http://ex.org/z"]]
        );
        assert_eq!(
            run(&g, "SELECT ?s WHERE { ?s ex:p ?o } ORDER BY DESC(?s) LIMIT 1 OFFSET 1"),
            vec![vec!["http://ex.org/b"]]
        );
    }

    #[test]
    fn unknown_constant_yields_nothing() {
        let g = graph("ex:a ex:p ex:b .");
        assert!(run(&g, "SELECT ?s WHERE { ?s ex:nothere ?o }").is_empty());
        assert_eq!(run(&g, "SELECT (COUNT(*) AS ?n) WHERE { ?s ex:nothere ?o }"), vec![vec!["0"]]);
    }
}
