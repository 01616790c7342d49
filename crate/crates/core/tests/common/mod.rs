//! Test-side oracles and generators. Nothing here uses the store's indexes
//! or the engines under test: joins are nested loops over triple lists.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use proptest::prelude::*;

use morekg::fixture::{generate, FixtureSpec};
use morekg::ingest::{emit_kg, StudyBundle};
use morekg::ontology::{build_schema, OntologySchema};
use morekg::pattern::{PatternTerm, TriplePattern};
use morekg::rules::RuleSet;
use morekg::{Graph, Term, Triple};

pub type Bindings = HashMap<String, Term>;

fn bind(p: &PatternTerm, t: &Term, b: &mut Bindings) -> bool {
    match p {
        PatternTerm::Const(c) => c == t,
        PatternTerm::Var(v) => match b.get(v) {
            Some(bound) => bound == t,
            None => {
                b.insert(v.clone(), t.clone());
                true
            }
        },
    }
}

/// All solutions of `body` over `triples`, by nested loops in body order.
pub fn nested_loop(triples: &[Triple], body: &[TriplePattern]) -> Vec<Bindings> {
    let mut out = Vec::new();
    fn go(triples: &[Triple], body: &[TriplePattern], b: Bindings, out: &mut Vec<Bindings>) {
        let Some((first, rest)) = body.split_first() else {
            out.push(b);
            return;
        };
        for t in triples {
            if let PatternTerm::Const(c) = &first.predicate {
                if *c != t.predicate {
                    continue;
                }
            }
            let mut nb = b.clone();
            if bind(&first.subject, &t.subject, &mut nb)
                && bind(&first.predicate, &t.predicate, &mut nb)
                && bind(&first.object, &t.object, &mut nb)
            {
                go(triples, rest, nb, out);
            }
        }
    }
    go(triples, body, Bindings::new(), &mut out);
    out
}

pub fn instantiate(p: &TriplePattern, b: &Bindings) -> Option<Triple> {
    let get = |t: &PatternTerm| match t {
        PatternTerm::Const(c) => Some(c.clone()),
        PatternTerm::Var(v) => b.get(v).cloned(),
    };
    Triple::new(get(&p.subject)?, get(&p.predicate)?, get(&p.object)?).ok()
}

/// Naive fixpoint: every round re-evaluates every rule over the whole
/// triple set until nothing new appears.
pub fn naive_fixpoint(g: &Graph, rules: &RuleSet) -> BTreeSet<Triple> {
    let mut all: BTreeSet<Triple> = g.iter().collect();
    loop {
        let triples: Vec<Triple> = all.iter().cloned().collect();
        let mut fresh = Vec::new();
        for rule in rules.rules() {
            for b in nested_loop(&triples, &rule.body) {
                for h in &rule.head {
                    if let Some(t) = instantiate(h, &b) {
                        if !all.contains(&t) {
                            fresh.push(t);
                        }
                    }
                }
            }
        }
        if fresh.is_empty() {
            return all;
        }
        all.extend(fresh);
    }
}

pub fn triples_of(g: &Graph) -> BTreeSet<Triple> {
    g.iter().collect()
}

pub struct Fixture {
    pub bundle: StudyBundle,
    pub schema: OntologySchema,
    /// Emitted data only.
    pub data: Graph,
    /// Schema graph plus data.
    pub kg: Graph,
}

pub fn fixture(participants: usize, items: usize, seed: u64) -> Fixture {
    let bundle = generate(&FixtureSpec {
        participants,
        items,
        seed,
        ..FixtureSpec::default()
    })
    .unwrap();
    let schema = build_schema(&bundle.items).unwrap();
    let data = emit_kg(&bundle, &schema);
    let mut kg = schema.graph.clone();
    kg.extend_from(&data);
    Fixture { bundle, schema, data, kg }
}

pub fn iri(s: &str) -> Term {
    Term::iri(s).unwrap()
}

/// Random IRIs, blank nodes and literals covering escapes, language tags
/// and typed values.
pub fn arb_iri() -> impl Strategy<Value = Term> {
    prop_oneof![
        "[a-z]{1,6}".prop_map(|l| iri(&format!("http://ex.org/{l}"))),
        "[A-Za-z0-9_]{1,8}".prop_map(|l| iri(&format!("https://w3id.org/more#{l}"))),
        "[a-z0-9%/#?=&.-]{1,12}".prop_map(|l| iri(&format!("urn:x:{l}"))),
        Just(iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")),
        "[a-z]{1,4}".prop_map(|l| iri(&format!("http://purl.obolibrary.org/obo/OBI_{l}"))),
    ]
}

pub fn arb_blank() -> impl Strategy<Value = Term> {
    "[A-Za-z][A-Za-z0-9_-]{0,6}".prop_map(|l| Term::blank(&l).unwrap())
}

pub fn arb_literal() -> impl Strategy<Value = Term> {
    use morekg::vocab::*;
    prop_oneof![
        any::<String>().prop_map(|s| Term::string(&s)),
        "[ -~]{0,10}".prop_map(|s| Term::string(&s)),
        ("[^\u{0}]{0,8}", "[a-z]{2}(-[A-Z]{2})?").prop_map(|(s, tag)| {
            Term::Literal(morekg::rdf::Literal::lang(s, &tag).unwrap())
        }),
        any::<i64>().prop_map(|n| Term::typed(&n.to_string(), XSD_INTEGER).unwrap()),
        (any::<i32>(), 0u32..1000).prop_map(|(a, b)| Term::typed(&format!("{a}.{b}"), XSD_DECIMAL).unwrap()),
        "-?[0-9]\\.[0-9]{1,3}E-?[0-9]{1,2}".prop_map(|s| Term::typed(&s, XSD_DOUBLE).unwrap()),
        prop_oneof![Just("true"), Just("false")].prop_map(|s| Term::typed(s, XSD_BOOLEAN).unwrap()),
        (1990i32..2030, 1u32..13, 1u32..29)
            .prop_map(|(y, m, d)| Term::typed(&format!("{y:04}-{m:02}-{d:02}"), XSD_DATE).unwrap()),
        ("[a-z]{1,5}", "[a-z]{1,5}").prop_map(|(s, dt)| Term::typed(&s, &format!("http://ex.org/dt/{dt}")).unwrap()),
        "[0-9]{1,3}".prop_map(|s| Term::typed(&s, "http://www.w3.org/2001/XMLSchema#string").unwrap()),
    ]
}

pub fn arb_triple() -> impl Strategy<Value = Triple> {
    (
        prop_oneof![3 => arb_iri(), 1 => arb_blank()],
        arb_iri(),
        prop_oneof![2 => arb_iri(), 1 => arb_blank(), 3 => arb_literal()],
    )
        .prop_map(|(s, p, o)| Triple::new(s, p, o).unwrap())
}

pub fn arb_graph(max: usize) -> impl Strategy<Value = Graph> {
    prop::collection::vec(arb_triple(), 0..max).prop_map(|ts| {
        let mut g = Graph::new();
        for t in &ts {
            g.insert(t).unwrap();
        }
        g
    })
}

/// Triple counts per predicate, for diagnostics.
pub fn predicate_histogram(g: &Graph) -> BTreeMap<String, usize> {
    let mut h = BTreeMap::new();
    for t in g.iter() {
        *h.entry(t.predicate.to_string()).or_default() += 1;
    }
    h
}
