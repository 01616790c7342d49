//! The MO|RE schema: fixed BFO/IAO/OBI subsumption axioms, per-test-item
//! process classes and disposition kinds, and an RDFS-subset closure
//! (subclass transitivity plus type propagation).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::ingest::TestItemDef;
use crate::privacy::SensitivityLevel;
use crate::rdf::{Graph, PrefixMap, Term, TermId};
use crate::vocab::{self, *};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("duplicate test item key {0:?}")]
    DuplicateItem(String),
    #[error("test item {key:?} has non-numeric datatype <{datatype}>")]
    NonNumericItem { key: String, datatype: String },
    #[error("invalid test item key {0:?}")]
    InvalidKey(String),
    #[error("subclass cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
}

/// A kind of disposition measured by a test item (e.g. grip strength).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DispositionKind {
    pub iri: Term,
    pub label: String,
    pub unit: String,
    pub datatype: String,
}

#[derive(Debug, Clone)]
pub struct OntologySchema {
    pub graph: Graph,
    pub items: Vec<TestItemDef>,
    /// Disposition kind per item key.
    pub kinds: BTreeMap<String, DispositionKind>,
    /// Filled by [`crate::privacy::annotate_schema`].
    pub sensitivity: BTreeMap<Term, SensitivityLevel>,
}

/// `shuttle_run` -> `ShuttleRun`, `grip strength` -> `GripStrength`.
pub fn camel_case(text: &str) -> String {
    text.split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(|w| {
            let mut cs = w.chars();
            let first = cs.next().expect("non-empty word").to_ascii_uppercase();
            std::iter::once(first).chain(cs).collect::<String>()
        })
        .collect()
}

/// The test-item individual, e.g. `more:Handgrip`.
pub fn item_iri(key: &str) -> Term {
    vocab::more(&camel_case(key))
}

/// The item's process class, e.g. `more:HandgripTestProcess`.
pub fn process_class(key: &str) -> Term {
    vocab::more(&format!("{}TestProcess", camel_case(key)))
}

/// The disposition class for a disposition label, e.g.
/// `more:GripStrengthDisposition`.
pub fn disposition_class(label: &str) -> Term {
    vocab::more(&format!("{}Disposition", camel_case(label)))
}

/// Snake-case slug of a disposition label, used in instance IRIs.
pub fn disposition_slug(label: &str) -> String {
    label
        .split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_ascii_lowercase)
        .collect::<Vec<_>>()
        .join("_")
}

/// Anthropometric quality with its quality, datum and value-specification
/// classes, the direct shortcut property and unit.
#[derive(Debug, Clone, Copy)]
pub struct Anthropometric {
    pub slug: &'static str,
    pub quality_class: &'static str,
    pub property: &'static str,
    pub unit: &'static str,
}

pub const ANTHROPOMETRICS: [Anthropometric; 4] = [
    Anthropometric { slug: "age", quality_class: "Age", property: MORE_HAS_AGE, unit: "years" },
    Anthropometric { slug: "height", quality_class: "Height", property: MORE_HAS_HEIGHT, unit: "cm" },
    Anthropometric { slug: "weight", quality_class: "Weight", property: MORE_HAS_WEIGHT, unit: "kg" },
    Anthropometric { slug: "bmi", quality_class: "BodyMassIndex", property: MORE_HAS_BMI, unit: "kg/m2" },
];

impl Anthropometric {
    pub fn quality(&self) -> Term {
        vocab::more(self.quality_class)
    }

    pub fn datum_class(&self) -> Term {
        vocab::more(&format!("{}Datum", self.quality_class))
    }

    pub fn value_spec_class(&self) -> Term {
        vocab::more(&format!("{}ValueSpecification", self.quality_class))
    }
}

/// Test items shipped with the toolkit.
pub fn builtin_items() -> Vec<TestItemDef> {
    let item = |key: &str, label: &str, disposition: &str, unit: &str| TestItemDef {
        key: key.into(),
        label: label.into(),
        disposition_label: disposition.into(),
        unit: unit.into(),
        datatype: XSD_DECIMAL.into(),
    };
    vec![
        item("handgrip", "Handgrip", "grip strength", "kg"),
        item("shuttle_run", "Shuttle Run Test", "aerobic endurance", "s"),
        item("sit_and_reach", "Sit & Reach", "flexibility", "cm"),
        item("dash_20m", "20 meter Dash", "speed", "s"),
    ]
}

const FIXED_SUBCLASS_AXIOMS: &[(&str, &str)] = &[
    // MO|RE
    (MORE_STUDY, IAO_PLAN_SPECIFICATION),
    (MORE_TEST_ITEM, IAO_PLAN_SPECIFICATION),
    (MORE_TEST_PROCESS, OBI_ASSAY),
    (MORE_TEST_PROCESS, BFO_PROCESS),
    (MORE_HANDGRIP_TEST_PROCESS, MORE_TEST_PROCESS),
    (MORE_PERSON, BFO_MATERIAL_ENTITY),
    // IAO / OBI
    (IAO_PLAN_SPECIFICATION, IAO_INFORMATION_CONTENT_ENTITY),
    (IAO_SCALAR_MEASUREMENT_DATUM, IAO_MEASUREMENT_DATUM),
    (IAO_MEASUREMENT_DATUM, IAO_INFORMATION_CONTENT_ENTITY),
    (OBI_VALUE_SPECIFICATION, IAO_INFORMATION_CONTENT_ENTITY),
    (IAO_INFORMATION_CONTENT_ENTITY, BFO_GENERICALLY_DEPENDENT_CONTINUANT),
    (IAO_PLAN, BFO_REALIZABLE_ENTITY),
    (OBI_EVALUANT_ROLE, BFO_ROLE),
    // BFO skeleton
    (BFO_ROLE, BFO_REALIZABLE_ENTITY),
    (BFO_DISPOSITION, BFO_REALIZABLE_ENTITY),
    (BFO_REALIZABLE_ENTITY, BFO_SPECIFICALLY_DEPENDENT_CONTINUANT),
    (BFO_QUALITY, BFO_SPECIFICALLY_DEPENDENT_CONTINUANT),
    (BFO_SPECIFICALLY_DEPENDENT_CONTINUANT, BFO_CONTINUANT),
    (BFO_GENERICALLY_DEPENDENT_CONTINUANT, BFO_CONTINUANT),
    (BFO_MATERIAL_ENTITY, BFO_INDEPENDENT_CONTINUANT),
    (BFO_INDEPENDENT_CONTINUANT, BFO_CONTINUANT),
    (BFO_PROCESS, BFO_OCCURRENT),
    (BFO_CONTINUANT, BFO_ENTITY),
    (BFO_OCCURRENT, BFO_ENTITY),
];

const PROPERTIES: &[&str] = &[
    PATO_EXECUTES,
    OBI_HAS_SPECIFIED_OUTPUT,
    OBI_HAS_VALUE_SPECIFICATION,
    OBI_SPECIFIES_VALUE_OF,
    OBI_HAS_SPECIFIED_NUMERIC_VALUE,
    OBI_HAS_ROLE,
    OBI_HAS_PARTICIPANT,
    OBI_REALIZES,
    BFO_CONCRETIZES,
    BFO_INHERES_IN,
    IAO_IS_ABOUT,
    IAO_HAS_MEASUREMENT_UNIT_LABEL,
    MORE_MEASURES_DISPOSITION,
    MORE_HAS_AGE,
    MORE_HAS_HEIGHT,
    MORE_HAS_WEIGHT,
    MORE_HAS_BMI,
    MORE_HAS_SEX,
    MORE_PART_OF_STUDY,
    MORE_CONDUCTED_IN_YEAR,
    MORE_YEAR_START,
    MORE_YEAR_END,
    MORE_DOI,
    MORE_SESSION_DATE,
    MORE_TRIAL,
    MORE_SENSITIVITY_LEVEL,
];

fn valid_key(key: &str) -> bool {
    !key.is_empty()
        && key
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        && key.chars().any(|c| c.is_ascii_alphanumeric())
}

/// Builds the schema graph: fixed axioms, property declarations, and per
/// item a process subclass, a test-item individual and a disposition kind.
pub fn build_schema(items: &[TestItemDef]) -> Result<OntologySchema, SchemaError> {
    let mut g = Graph::new();
    let ty = term(RDF_TYPE);
    let sub = term(RDFS_SUBCLASS_OF);
    let label = term(RDFS_LABEL);
    let class = term(RDFS_CLASS);
    let add = |g: &mut Graph, s: &Term, p: &Term, o: &Term| {
        g.add(s, p, o).expect("schema triples are well formed");
    };

    for (c, d) in FIXED_SUBCLASS_AXIOMS {
        add(&mut g, &term(c), &sub, &term(d));
        add(&mut g, &term(c), &ty, &class);
        add(&mut g, &term(d), &ty, &class);
    }
    for p in PROPERTIES {
        add(&mut g, &term(p), &ty, &term(RDF_PROPERTY));
    }
    for a in &ANTHROPOMETRICS {
        for (c, d) in [
            (a.quality(), term(BFO_QUALITY)),
            (a.datum_class(), term(IAO_SCALAR_MEASUREMENT_DATUM)),
            (a.value_spec_class(), term(OBI_VALUE_SPECIFICATION)),
        ] {
            add(&mut g, &c, &sub, &d);
            add(&mut g, &c, &ty, &class);
        }
    }

    let mut seen = BTreeSet::new();
    let mut kinds = BTreeMap::new();
    for item in items {
        if !valid_key(&item.key) {
            return Err(SchemaError::InvalidKey(item.key.clone()));
        }
        if !seen.insert(item.key.clone()) {
            return Err(SchemaError::DuplicateItem(item.key.clone()));
        }
        if !vocab::is_numeric_datatype(&item.datatype) {
            return Err(SchemaError::NonNumericItem {
                key: item.key.clone(),
                datatype: item.datatype.clone(),
            });
        }
        let process = process_class(&item.key);
        add(&mut g, &process, &sub, &term(MORE_TEST_PROCESS));
        add(&mut g, &process, &ty, &class);
        let individual = item_iri(&item.key);
        add(&mut g, &individual, &ty, &term(MORE_TEST_ITEM));
        add(&mut g, &individual, &label, &Term::string(&item.label));
        let kind = DispositionKind {
            iri: disposition_class(&item.disposition_label),
            label: item.disposition_label.clone(),
            unit: item.unit.clone(),
            datatype: item.datatype.clone(),
        };
        add(&mut g, &kind.iri, &sub, &term(BFO_DISPOSITION));
        add(&mut g, &kind.iri, &ty, &class);
        add(&mut g, &kind.iri, &label, &Term::string(&kind.label));
        kinds.insert(item.key.clone(), kind);
    }

    superclass_map(&g)?;
    Ok(OntologySchema {
        graph: g,
        items: items.to_vec(),
        kinds,
        sensitivity: BTreeMap::new(),
    })
}

impl OntologySchema {
    pub fn item(&self, key: &str) -> Option<&TestItemDef> {
        self.items.iter().find(|i| i.key == key)
    }

    /// Classes declared in the schema graph.
    pub fn classes(&self) -> BTreeSet<Term> {
        self.graph
            .matches(None, Some(&term(RDF_TYPE)), Some(&term(RDFS_CLASS)))
            .into_iter()
            .map(|t| t.subject)
            .collect()
    }

    /// True when `iri` occurs anywhere in the schema graph.
    pub fn mentions(&self, iri: &Term) -> bool {
        self.graph.count(Some(iri), None, None) > 0 || self.graph.count(None, None, Some(iri)) > 0
    }
}

/// Direct superclasses per class from the `rdfs:subClassOf` triples of the
/// given graphs. Fails on a cycle, naming it.
fn superclass_map_of(graphs: &[&Graph]) -> Result<BTreeMap<Term, BTreeSet<Term>>, SchemaError> {
    let sub = term(RDFS_SUBCLASS_OF);
    let mut direct: BTreeMap<Term, BTreeSet<Term>> = BTreeMap::new();
    for g in graphs {
        for t in g.matches(None, Some(&sub), None) {
            if t.subject != t.object {
                direct.entry(t.subject).or_default().insert(t.object);
            } else {
                return Err(SchemaError::Cycle(vec![t.subject.to_string(), t.object.to_string()]));
            }
        }
    }
    find_cycle(&direct)?;
    Ok(direct)
}

fn superclass_map(g: &Graph) -> Result<BTreeMap<Term, BTreeSet<Term>>, SchemaError> {
    superclass_map_of(&[g])
}

fn find_cycle(direct: &BTreeMap<Term, BTreeSet<Term>>) -> Result<(), SchemaError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    let mut marks: HashMap<&Term, Mark> = HashMap::new();
    for root in direct.keys() {
        if marks.contains_key(root) {
            continue;
        }
        // Iterative DFS keeping the active path for cycle reporting.
        let mut path: Vec<&Term> = vec![root];
        let mut stack: Vec<std::collections::btree_set::Iter<'_, Term>> =
            vec![direct.get(root).map(|s| s.iter()).unwrap_or_default()];
        marks.insert(root, Mark::Active);
        while let Some(children) = stack.last_mut() {
            match children.next() {
                Some(child) => match marks.get(child) {
                    Some(Mark::Active) => {
                        let start = path.iter().position(|t| *t == child).unwrap_or(0);
                        let mut cycle: Vec<String> = path[start..].iter().map(|t| t.to_string()).collect();
                        cycle.push(child.to_string());
                        return Err(SchemaError::Cycle(cycle));
                    }
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(child, Mark::Active);
                        path.push(child);
                        stack.push(direct.get(child).map(|s| s.iter()).unwrap_or_default());
                    }
                },
                None => {
                    stack.pop();
                    if let Some(done) = path.pop() {
                        marks.insert(done, Mark::Done);
                    }
                }
            }
        }
    }
    Ok(())
}

/// Strict ancestors of every class, from an acyclic direct-superclass map.
fn ancestors(direct: &BTreeMap<Term, BTreeSet<Term>>) -> BTreeMap<Term, BTreeSet<Term>> {
    fn visit(
        c: &Term,
        direct: &BTreeMap<Term, BTreeSet<Term>>,
        memo: &mut BTreeMap<Term, BTreeSet<Term>>,
    ) -> BTreeSet<Term> {
        if let Some(done) = memo.get(c) {
            return done.clone();
        }
        let mut all = BTreeSet::new();
        if let Some(parents) = direct.get(c) {
            for p in parents {
                all.insert(p.clone());
                all.extend(visit(p, direct, memo));
            }
        }
        memo.insert(c.clone(), all.clone());
        all
    }
    let mut memo = BTreeMap::new();
    for c in direct.keys() {
        visit(c, direct, &mut memo);
    }
    memo
}

/// Returns `g` plus the transitive closure of `rdfs:subClassOf` (over the
/// subclass triples of `g` and the schema) and, for every `x rdf:type C`,
/// `x rdf:type D` for each superclass `D` of `C`.
pub fn rdfs_closure(g: &Graph, schema: &OntologySchema) -> Result<Graph, SchemaError> {
    let direct = superclass_map_of(&[g, &schema.graph])?;
    let up = ancestors(&direct);
    let mut out = g.clone();
    let sub = out.intern(&term(RDFS_SUBCLASS_OF));
    let ty = out.intern(&term(RDF_TYPE));

    let mut up_ids: HashMap<TermId, Vec<TermId>> = HashMap::new();
    for (class, supers) in &up {
        if supers.is_empty() {
            continue;
        }
        let c = out.intern(class);
        let ids: Vec<TermId> = supers.iter().map(|s| out.intern(s)).collect();
        for &d in &ids {
            out.insert_ids([c, sub, d]);
        }
        up_ids.insert(c, ids);
    }

    let typed: Vec<[TermId; 3]> = out.match_ids(None, Some(ty), None).collect();
    for [x, _, c] in typed {
        if let Some(supers) = up_ids.get(&c) {
            for &d in supers {
                out.insert_ids([x, ty, d]);
            }
        }
    }
    Ok(out)
}

/// The schema graph as canonical Turtle.
pub fn export_schema(schema: &OntologySchema) -> String {
    let cfg = crate::serdes::SerializationConfig {
        prefixes: PrefixMap::default(),
        ..crate::serdes::SerializationConfig::turtle()
    };
    crate::serdes::write_turtle(&schema.graph, &cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::Triple;

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(Term::iri(s).unwrap(), Term::iri(p).unwrap(), Term::iri(o).unwrap()).unwrap()
    }

    fn handgrip() -> TestItemDef {
        builtin_items().into_iter().next().unwrap()
    }

    #[test]
    fn naming() {
        assert_eq!(camel_case("shuttle_run"), "ShuttleRun");
        assert_eq!(camel_case("grip strength"), "GripStrength");
        assert_eq!(process_class("handgrip").as_iri(), Some(MORE_HANDGRIP_TEST_PROCESS));
        assert_eq!(disposition_slug("Aerobic Endurance"), "aerobic_endurance");
    }

    #[test]
    fn handgrip_registry() {
        let schema = build_schema(&[handgrip()]).unwrap();
        assert!(schema.graph.contains(&t(
            MORE_HANDGRIP_TEST_PROCESS,
            RDFS_SUBCLASS_OF,
            MORE_TEST_PROCESS
        )));
        assert!(schema.graph.contains(&t(
            "https://w3id.org/more#Handgrip",
            RDF_TYPE,
            MORE_TEST_ITEM
        )));
        assert_eq!(schema.kinds["handgrip"].iri, vocab::more("GripStrengthDisposition"));
    }

    #[test]
    fn shuttle_run_process_class() {
        let items: Vec<_> = builtin_items().into_iter().filter(|i| i.key == "shuttle_run").collect();
        let schema = build_schema(&items).unwrap();
        assert!(schema.graph.contains(&t(
            "https://w3id.org/more#ShuttleRunTestProcess",
            RDFS_SUBCLASS_OF,
            MORE_TEST_PROCESS
        )));
    }

    #[test]
    fn empty_registry_has_only_fixed_axioms() {
        let schema = build_schema(&[]).unwrap();
        assert_eq!(schema.graph.count(None, Some(&term(RDF_TYPE)), Some(&term(MORE_TEST_ITEM))), 0);
        for (c, d) in FIXED_SUBCLASS_AXIOMS {
            assert!(schema.graph.contains(&t(c, RDFS_SUBCLASS_OF, d)));
        }
        for p in [PATO_EXECUTES, OBI_REALIZES, BFO_CONCRETIZES, MORE_HAS_AGE, MORE_CONDUCTED_IN_YEAR] {
            assert!(schema.graph.contains(&t(p, RDF_TYPE, RDF_PROPERTY)));
        }
    }

    #[test]
    fn duplicate_and_bad_items_rejected() {
        assert_eq!(
            build_schema(&[handgrip(), handgrip()]).unwrap_err(),
            SchemaError::DuplicateItem("handgrip".into())
        );
        let mut bad = handgrip();
        bad.datatype = XSD_STRING.into();
        assert!(matches!(build_schema(&[bad]), Err(SchemaError::NonNumericItem { .. })));
    }

    #[test]
    fn study_individual_gains_iao_types() {
        let schema = build_schema(&[]).unwrap();
        let mut g = Graph::new();
        g.insert(&t("http://ex.org/st", RDF_TYPE, MORE_STUDY)).unwrap();
        let closed = rdfs_closure(&g, &schema).unwrap();
        assert!(closed.contains(&t("http://ex.org/st", RDF_TYPE, IAO_PLAN_SPECIFICATION)));
        assert!(closed.contains(&t("http://ex.org/st", RDF_TYPE, IAO_INFORMATION_CONTENT_ENTITY)));
        assert!(closed.is_subset_of(&rdfs_closure(&closed, &schema).unwrap()));
        assert_eq!(rdfs_closure(&closed, &schema).unwrap(), closed);
    }

    #[test]
    fn handgrip_process_is_assay_and_process() {
        let schema = build_schema(&[handgrip()]).unwrap();
        let mut g = Graph::new();
        g.insert(&t("http://ex.org/p1", RDF_TYPE, MORE_HANDGRIP_TEST_PROCESS)).unwrap();
        let closed = rdfs_closure(&g, &schema).unwrap();
        assert!(closed.contains(&t("http://ex.org/p1", RDF_TYPE, OBI_ASSAY)));
        assert!(closed.contains(&t("http://ex.org/p1", RDF_TYPE, BFO_PROCESS)));
        assert!(closed.contains(&t("http://ex.org/p1", RDF_TYPE, BFO_OCCURRENT)));
    }

    #[test]
    fn cycle_is_reported() {
        let schema = build_schema(&[]).unwrap();
        let mut g = Graph::new();
        g.insert(&t("http://ex.org/A", RDFS_SUBCLASS_OF, "http://ex.org/B")).unwrap();
        g.insert(&t("http://ex.org/B", RDFS_SUBCLASS_OF, "http://ex.org/C")).unwrap();
        g.insert(&t("http://ex.org/C", RDFS_SUBCLASS_OF, "http://ex.org/A")).unwrap();
        match rdfs_closure(&g, &schema) {
            Err(SchemaError::Cycle(path)) => {
                assert_eq!(path.first(), path.last());
                assert_eq!(path.len(), 4);
            }
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn export_reparses() {
        let schema = build_schema(&builtin_items()).unwrap();
        let text = export_schema(&schema);
        assert_eq!(crate::serdes::parse_turtle(&text).unwrap(), schema.graph);
    }
}
