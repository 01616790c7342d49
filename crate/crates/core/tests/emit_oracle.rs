mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use morekg::fixture::{generate, FixtureSpec, Years};
use morekg::ingest::{emit_kg, load_bundle, mint_iri, EntityKind, IngestConfig, StudyBundle};
use morekg::ontology::{build_schema, disposition_slug};
use morekg::vocab::{self, *};
use morekg::{Graph, Term};

use common::*;

/// Triple count from the bundle alone.
fn expected_triples(b: &StudyBundle) -> usize {
    let years = (b.study.year_end - b.study.year_start + 1) as usize;
    let study = 4 + years + usize::from(b.study.doi.is_some());
    let items = 3 * b.items.len();
    let kinds: BTreeSet<String> = b.items.iter().map(|i| disposition_slug(&i.disposition_label)).collect();
    // Person: type, study link. Per anthropometric: the direct value, then
    // quality (3), datum (4) and value specification (5).
    let per_person = 2 + 4 * (1 + 3 + 4 + 5) + 3 * kinds.len();
    let people: usize = b.participants.iter().map(|p| per_person + usize::from(p.sex.is_some())).sum();
    // Plan 3, role 4, value spec 5, datum 3, process 8.
    let results: usize = b
        .results
        .iter()
        .map(|r| 23 + usize::from(r.session_date.is_some()) + usize::from(r.trial.is_some()))
        .sum();
    study + items + people + results
}

fn objects(g: &Graph, s: &Term, p: &'static str) -> Vec<Term> {
    g.matches(Some(s), Some(&vocab::term(p)), None).into_iter().map(|t| t.object).collect()
}

fn instances(g: &Graph, class: &'static str) -> Vec<Term> {
    g.matches(None, Some(&vocab::term(RDF_TYPE)), Some(&vocab::term(class)))
        .into_iter()
        .map(|t| t.subject)
        .collect()
}

fn check_patterns(b: &StudyBundle, g: &Graph) {
    let ty = vocab::term(RDF_TYPE);
    let processes: Vec<Term> = b
        .items
        .iter()
        .flat_map(|i| {
            g.matches(None, Some(&ty), Some(&morekg::ontology::process_class(&i.key)))
                .into_iter()
                .map(|t| t.subject)
        })
        .collect();
    assert_eq!(processes.len(), b.results.len());
    for p in &processes {
        let outputs = objects(g, p, OBI_HAS_SPECIFIED_OUTPUT);
        assert_eq!(outputs.len(), 1, "{p}");
        let participants = objects(g, p, OBI_HAS_PARTICIPANT);
        assert_eq!(participants.len(), 1, "{p}");
        let person = &participants[0];
        let roles: Vec<Term> = objects(g, person, OBI_HAS_ROLE)
            .into_iter()
            .filter(|r| objects(g, p, OBI_REALIZES).contains(r))
            .collect();
        assert_eq!(roles.len(), 1, "{p}");
        assert!(objects(g, &roles[0], RDF_TYPE).contains(&vocab::term(OBI_EVALUANT_ROLE)));
        assert_eq!(objects(g, &roles[0], BFO_INHERES_IN), vec![person.clone()]);
        assert!(!instances(g, IAO_SCALAR_MEASUREMENT_DATUM).contains(p));
    }
    for d in instances(g, IAO_SCALAR_MEASUREMENT_DATUM) {
        let vs = objects(g, &d, OBI_HAS_VALUE_SPECIFICATION);
        assert_eq!(vs.len(), 1, "{d}");
        assert_eq!(objects(g, &vs[0], OBI_SPECIFIES_VALUE_OF).len(), 1);
        assert_eq!(objects(g, &vs[0], OBI_HAS_SPECIFIED_NUMERIC_VALUE).len(), 1);
    }
    for vs in g.matches(None, Some(&vocab::term(OBI_SPECIFIES_VALUE_OF)), None) {
        assert_eq!(objects(g, &vs.subject, OBI_SPECIFIES_VALUE_OF).len(), 1);
    }
    // Every subject except vocabulary individuals is linked to the study.
    let study = vocab::term(MORE_PART_OF_STUDY);
    let subjects: BTreeSet<Term> = g.iter().map(|t| t.subject).collect();
    for s in subjects {
        let is_study = objects(g, &s, RDF_TYPE).contains(&vocab::term(MORE_STUDY));
        assert!(is_study || g.count(Some(&s), Some(&study), None) == 1, "{s}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn count_matches_oracle(participants in 0usize..25, items in 0usize..5, seed in any::<u64>()) {
        let b = generate(&FixtureSpec { participants, items, seed, years: Years::Within(2000, 2030), ..FixtureSpec::default() }).unwrap();
        let g = emit_kg(&b, &build_schema(&b.items).unwrap());
        prop_assert_eq!(g.len(), expected_triples(&b));
    }
}

#[test]
fn fixture_count_and_patterns() {
    let f = fixture(30, 2, 42);
    assert_eq!(f.data.len(), expected_triples(&f.bundle));
    check_patterns(&f.bundle, &f.data);
}

fn write(dir: &std::path::Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

/// A bundle with a DOI, missing sex, undated rows and left/right trials.
fn handmade() -> StudyBundle {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "study.csv", "id,title,year_start,year_end,doi\nst09,Grip study,2016,2018,10.1234/xyz\n");
    write(
        d,
        "participants.csv",
        "participant_id,age,sex,height_cm,weight_kg,bmi\np1,8,f,130.0,26.0,15.4\np2,9,,140.5,33.0,16.7\n",
    );
    write(
        d,
        "test_items.csv",
        "key,label,disposition_label,unit,datatype\nhandgrip,Handgrip,grip strength,kg,xsd:decimal\nsit_and_reach,Sit & Reach,flexibility,cm,xsd:decimal\n",
    );
    write(
        d,
        "results.csv",
        "participant_id,test_item,value,session_date,trial\n\
         p1,handgrip,12.5,2016-03-01,left\n\
         p1,handgrip,13.0,2016-03-01,right\n\
         p1,sit_and_reach,21,,\n\
         p2,handgrip,15.25,2017-05-02,\n",
    );
    load_bundle(d, &IngestConfig::default()).unwrap()
}

#[test]
fn handmade_bundle_count_and_patterns() {
    let b = handmade();
    let g = emit_kg(&b, &build_schema(&b.items).unwrap());
    assert_eq!(g.len(), expected_triples(&b));
    check_patterns(&b, &g);

    let left = mint_iri("st09", EntityKind::Process, "p1_handgrip_s1").unwrap();
    assert_eq!(objects(&g, &left, MORE_TRIAL), vec![Term::string("left")]);
    let vs = mint_iri("st09", EntityKind::ValueSpec, "p2_handgrip_s1").unwrap();
    assert_eq!(
        objects(&g, &vs, OBI_HAS_SPECIFIED_NUMERIC_VALUE),
        vec![Term::typed("15.25", XSD_DECIMAL).unwrap()]
    );
    assert_eq!(objects(&g, &vs, IAO_HAS_MEASUREMENT_UNIT_LABEL), vec![Term::string("kg")]);
}

#[test]
fn emission_is_deterministic_and_order_independent() {
    let b = handmade();
    let schema = build_schema(&b.items).unwrap();
    let g = emit_kg(&b, &schema);
    assert_eq!(emit_kg(&b, &schema), g);
    let mut shuffled = b.clone();
    shuffled.participants.reverse();
    shuffled.results.reverse();
    shuffled.items.reverse();
    assert_eq!(emit_kg(&shuffled, &schema), g);
}

#[test]
fn minted_iris_are_unique_across_kinds() {
    let f = fixture(30, 2, 42);
    let mut seen = BTreeSet::new();
    for t in f.data.matches(None, Some(&vocab::term(RDF_TYPE)), None) {
        if let Term::Iri(iri) = &t.subject {
            if iri.starts_with(KG_BASE) {
                seen.insert(iri.to_string());
            }
        }
    }
    let people = f.bundle.participants.len();
    // Study, persons, 4 anthropometric triples per person, one disposition
    // per item kind per person and 5 individuals per result.
    assert_eq!(seen.len(), 1 + people * (1 + 12 + 2) + 5 * f.bundle.results.len());
}
