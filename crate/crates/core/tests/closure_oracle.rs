mod common;

use proptest::prelude::*;

use morekg::ontology::{build_schema, builtin_items, rdfs_closure, SchemaError};
use morekg::rules::parse_rules;
use morekg::vocab::{self, *};
use morekg::{Graph, Term, Triple};

use common::*;

fn rdfs_rules() -> morekg::rules::RuleSet {
    parse_rules(
        "transitive: ?a rdfs:subClassOf ?b & ?b rdfs:subClassOf ?c => ?a rdfs:subClassOf ?c .\n\
         propagate: ?x a ?c & ?c rdfs:subClassOf ?d => ?x a ?d .",
        false,
    )
    .unwrap()
}

/// Fixpoint of the two RDFS rules over `g` plus the schema's subclass axioms.
fn closure_oracle(g: &Graph, schema_graph: &Graph) -> std::collections::BTreeSet<Triple> {
    let mut input = g.clone();
    for t in schema_graph.matches(None, Some(&vocab::term(RDFS_SUBCLASS_OF)), None) {
        input.insert(&t).unwrap();
    }
    naive_fixpoint(&input, &rdfs_rules())
}

fn class(i: u8) -> Term {
    iri(&format!("http://ex.org/C{i}"))
}

/// Subclass edges only from lower to higher index, so the hierarchy is a DAG.
fn arb_hierarchy() -> impl Strategy<Value = Graph> {
    let edge = (0u8..10, 1u8..10).prop_filter_map("ordered", |(a, d)| {
        let b = a.checked_add(d).filter(|b| *b < 12)?;
        Some(Triple::new(class(a), vocab::term(RDFS_SUBCLASS_OF), class(b)).unwrap())
    });
    let typing = (0u8..16, 0u8..12).prop_map(|(x, c)| {
        Triple::new(iri(&format!("http://ex.org/x{x}")), vocab::term(RDF_TYPE), class(c)).unwrap()
    });
    (prop::collection::vec(edge, 0..20), prop::collection::vec(typing, 0..30)).prop_map(|(es, ts)| {
        let mut g = Graph::new();
        for t in es.iter().chain(&ts) {
            g.insert(t).unwrap();
        }
        g
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn closure_equals_naive_fixpoint(g in arb_hierarchy()) {
        let schema = build_schema(&[]).unwrap();
        let closed = rdfs_closure(&g, &schema).unwrap();
        prop_assert_eq!(triples_of(&closed), closure_oracle(&g, &schema.graph));
    }
}

#[test]
fn closure_matches_oracle_on_fixture() {
    let f = fixture(10, 4, 2);
    let closed = rdfs_closure(&f.data, &f.schema).unwrap();
    assert_eq!(triples_of(&closed), closure_oracle(&f.data, &f.schema.graph));
}

#[test]
fn subsumption_chain_holds_for_every_individual() {
    let f = fixture(30, 2, 42);
    let closed = rdfs_closure(&f.data, &f.schema).unwrap();
    let ty = vocab::term(RDF_TYPE);
    let typed = |x: &Term, c: &'static str| closed.contains(&Triple::new(x.clone(), ty.clone(), vocab::term(c)).unwrap());

    let studies = closed.matches(None, Some(&ty), Some(&vocab::term(MORE_STUDY)));
    assert_eq!(studies.len(), 1);
    for s in &studies {
        assert!(typed(&s.subject, IAO_PLAN_SPECIFICATION));
        assert!(typed(&s.subject, IAO_INFORMATION_CONTENT_ENTITY));
    }
    let processes = closed.matches(None, Some(&ty), Some(&vocab::term(MORE_HANDGRIP_TEST_PROCESS)));
    assert_eq!(processes.len(), 30);
    for p in &processes {
        assert!(typed(&p.subject, OBI_ASSAY));
        assert!(typed(&p.subject, BFO_PROCESS));
    }
}

#[test]
fn cycles_are_rejected() {
    let mut g = Graph::new();
    let sub = vocab::term(RDFS_SUBCLASS_OF);
    g.add(&class(0), &sub, &class(1)).unwrap();
    g.add(&class(1), &sub, &class(2)).unwrap();
    g.add(&class(2), &sub, &class(0)).unwrap();
    let err = rdfs_closure(&g, &build_schema(&builtin_items()).unwrap()).unwrap_err();
    match err {
        SchemaError::Cycle(path) => assert_eq!(path.len(), 4),
        other => panic!("unexpected {other:?}"),
    }
}
