use std::collections::BTreeMap;

use super::iri::{mint_iri, EntityKind};
use super::model::{StudyBundle, TestItemDef};
use crate::ontology::{self, disposition_slug, OntologySchema, ANTHROPOMETRICS};
use crate::rdf::{Graph, Term, TermId};
use crate::vocab::*;

struct Emitter<'a> {
    study_id: &'a str,
    g: Graph,
    study: TermId,
    part_of: TermId,
    rdf_type: TermId,
}

impl<'a> Emitter<'a> {
    fn mint(&self, kind: EntityKind, local: &str) -> Term {
        mint_iri(self.study_id, kind, local).expect("validated bundle ids are non-empty")
    }

    fn id(&mut self, t: &Term) -> TermId {
        self.g.intern(t)
    }

    fn add(&mut self, s: TermId, p: &'static str, o: &Term) {
        let p = self.g.intern(&term(p));
        let o = self.g.intern(o);
        self.g.insert_ids([s, p, o]);
    }

    fn add_ids(&mut self, s: TermId, p: &'static str, o: TermId) {
        let p = self.g.intern(&term(p));
        self.g.insert_ids([s, p, o]);
    }

    /// Types `s` with `class` and links it to the study.
    fn individual(&mut self, s: &Term, class: &Term) -> TermId {
        let s = self.id(s);
        let c = self.id(class);
        self.g.insert_ids([s, self.rdf_type, c]);
        self.g.insert_ids([s, self.part_of, self.study]);
        s
    }
}

fn literal(lexical: &str, datatype: &str) -> Term {
    Term::typed(lexical, datatype).expect("vocabulary datatypes are valid IRIs")
}

pub fn study_iri(study_id: &str) -> Term {
    mint_iri(study_id, EntityKind::Study, study_id).expect("study id is non-empty")
}

pub fn participant_iri(study_id: &str, participant_id: &str) -> Term {
    mint_iri(study_id, EntityKind::Person, participant_id).expect("participant id is non-empty")
}

/// Local name per result, aligned with `b.results`: `{participant}_{item}_s{n}`
/// where `n` is the 1-based rank among that participant's results for the
/// item ordered by (session date, trial).
pub fn result_locals(b: &StudyBundle) -> Vec<String> {
    let mut groups: BTreeMap<(&str, &str), Vec<usize>> = BTreeMap::new();
    for (i, r) in b.results.iter().enumerate() {
        groups.entry((&r.participant_id, &r.item)).or_default().push(i);
    }
    let mut locals = vec![String::new(); b.results.len()];
    for ((pid, item), mut idx) in groups {
        idx.sort_by(|&x, &y| {
            let (a, c) = (&b.results[x], &b.results[y]);
            (a.session_date, &a.trial).cmp(&(c.session_date, &c.trial))
        });
        for (rank, i) in idx.into_iter().enumerate() {
            locals[i] = format!("{pid}_{item}_s{}", rank + 1);
        }
    }
    locals
}

fn kind_of(schema: &OntologySchema, item: &TestItemDef) -> (Term, String) {
    match schema.kinds.get(&item.key) {
        Some(k) => (k.iri.clone(), k.label.clone()),
        None => (ontology::disposition_class(&item.disposition_label), item.disposition_label.clone()),
    }
}

/// Instantiates the MO|RE pattern for one study bundle.
///
/// Study: `more:Study` with label, start/end years and one
/// `more:conductedInYear` per year. Items: the shared test-item individual
/// linked to the study. Participants: `more:Person` with direct
/// `more:hasAge`/`hasHeight`/`hasWeight`/`hasBMI` literals, the
/// quality/datum/value-specification pattern for each of those, and one
/// disposition per disposition kind measured in the bundle. Results: plan,
/// process, evaluant role, scalar datum and value specification.
pub fn emit_kg(b: &StudyBundle, schema: &OntologySchema) -> Graph {
    let sid = b.study.id.as_str();
    let mut g = Graph::new();
    let study_term = study_iri(sid);
    let study = g.intern(&study_term);
    let part_of = g.intern(&term(MORE_PART_OF_STUDY));
    let rdf_type = g.intern(&term(RDF_TYPE));
    let mut e = Emitter {
        study_id: sid,
        g,
        study,
        part_of,
        rdf_type,
    };

    let st = e.study;
    e.add(st, RDF_TYPE, &term(MORE_STUDY));
    e.add(st, RDFS_LABEL, &Term::string(&b.study.title));
    e.add(st, MORE_YEAR_START, &literal(&b.study.year_start.to_string(), XSD_INTEGER));
    e.add(st, MORE_YEAR_END, &literal(&b.study.year_end.to_string(), XSD_INTEGER));
    for year in b.study.years() {
        e.add(st, MORE_CONDUCTED_IN_YEAR, &literal(&year.to_string(), XSD_INTEGER));
    }
    if let Some(doi) = &b.study.doi {
        e.add(st, MORE_DOI, &Term::string(doi));
    }

    let mut kinds: BTreeMap<String, (Term, String)> = BTreeMap::new();
    for item in &b.items {
        let individual = e.individual(&ontology::item_iri(&item.key), &term(MORE_TEST_ITEM));
        e.add(individual, RDFS_LABEL, &Term::string(&item.label));
        let (class, label) = kind_of(schema, item);
        kinds.insert(disposition_slug(&label), (class, label));
    }

    for p in &b.participants {
        let pid = p.participant_id.as_str();
        let person = e.individual(&participant_iri(sid, pid), &term(MORE_PERSON));
        let age = p.age.to_string();
        let values = [
            (age.as_str(), XSD_INTEGER),
            (p.height.lexical(), XSD_DECIMAL),
            (p.weight.lexical(), XSD_DECIMAL),
            (p.bmi.lexical(), XSD_DECIMAL),
        ];
        for (a, (lexical, datatype)) in ANTHROPOMETRICS.iter().zip(values) {
            let value = literal(lexical, datatype);
            e.add(person, a.property, &value);
            let local = format!("{pid}_{}", a.slug);
            let quality = e.individual(&e.mint(EntityKind::Quality, &local), &a.quality());
            e.add_ids(quality, BFO_INHERES_IN, person);
            let datum = e.individual(&e.mint(EntityKind::Datum, &local), &a.datum_class());
            let vs = e.individual(&e.mint(EntityKind::ValueSpec, &local), &a.value_spec_class());
            e.add_ids(datum, IAO_IS_ABOUT, quality);
            e.add_ids(datum, OBI_HAS_VALUE_SPECIFICATION, vs);
            e.add(vs, OBI_HAS_SPECIFIED_NUMERIC_VALUE, &value);
            e.add(vs, IAO_HAS_MEASUREMENT_UNIT_LABEL, &Term::string(a.unit));
            e.add_ids(vs, OBI_SPECIFIES_VALUE_OF, quality);
        }
        if let Some(sex) = p.sex {
            e.add(person, MORE_HAS_SEX, &Term::string(sex.code()));
        }
        for (slug, (class, _)) in &kinds {
            let disp = e.individual(&e.mint(EntityKind::Disposition, &format!("{pid}_{slug}")), class);
            e.add_ids(disp, BFO_INHERES_IN, person);
        }
    }

    let locals = result_locals(b);
    for (r, local) in b.results.iter().zip(&locals) {
        let item_def = b.item(&r.item).expect("validated bundle references known items");
        let (_, label) = kind_of(schema, item_def);
        let person = e.id(&participant_iri(sid, &r.participant_id));
        let item = e.id(&ontology::item_iri(&r.item));
        let disp_local = format!("{}_{}", r.participant_id, disposition_slug(&label));
        let disposition = e.id(&e.mint(EntityKind::Disposition, &disp_local));

        let plan = e.individual(&e.mint(EntityKind::Plan, local), &term(IAO_PLAN));
        e.add_ids(plan, BFO_CONCRETIZES, item);

        let role = e.individual(&e.mint(EntityKind::Role, local), &term(OBI_EVALUANT_ROLE));
        e.add_ids(role, BFO_INHERES_IN, person);
        e.add_ids(person, OBI_HAS_ROLE, role);

        let vs = e.individual(&e.mint(EntityKind::ValueSpec, local), &term(OBI_VALUE_SPECIFICATION));
        e.add(vs, OBI_HAS_SPECIFIED_NUMERIC_VALUE, &literal(r.value.lexical(), &item_def.datatype));
        e.add(vs, IAO_HAS_MEASUREMENT_UNIT_LABEL, &Term::string(&item_def.unit));
        e.add_ids(vs, OBI_SPECIFIES_VALUE_OF, disposition);

        let datum = e.individual(&e.mint(EntityKind::Datum, local), &term(IAO_SCALAR_MEASUREMENT_DATUM));
        e.add_ids(datum, OBI_HAS_VALUE_SPECIFICATION, vs);

        let process = e.individual(&e.mint(EntityKind::Process, local), &ontology::process_class(&r.item));
        e.add_ids(process, OBI_REALIZES, plan);
        e.add_ids(process, OBI_REALIZES, role);
        e.add_ids(process, OBI_REALIZES, disposition);
        e.add_ids(process, PATO_EXECUTES, item);
        e.add_ids(process, OBI_HAS_PARTICIPANT, person);
        e.add_ids(process, OBI_HAS_SPECIFIED_OUTPUT, datum);
        if let Some(date) = r.session_date {
            e.add(process, MORE_SESSION_DATE, &literal(&date.format("%Y-%m-%d").to_string(), XSD_DATE));
        }
        if let Some(trial) = &r.trial {
            e.add(process, MORE_TRIAL, &Term::string(trial));
        }
    }
    e.g
}
