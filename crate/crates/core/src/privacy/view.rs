use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use chrono::Datelike;
use num_traits::Zero;

use crate::numeric::{literal_date, literal_value};
use crate::ontology::OntologySchema;
use crate::rdf::{Graph, Literal, Term, TermId, Triple};
use crate::vocab::{self, MORE_SENSITIVITY_LEVEL, RDFS_SUBCLASS_OF, RDF_TYPE};

use super::policy::{GeneralizationSpec, Policy, PolicyError, Role, SensitivityLevel};

/// En dash between the bounds of a band label.
pub const BAND_SEPARATOR: char = '\u{2013}';

/// Schema with sensitivity annotations attached.
#[derive(Debug, Clone)]
pub struct AnnotatedSchema {
    pub schema: OntologySchema,
    /// Targets the schema never mentions.
    pub warnings: Vec<String>,
}

impl AnnotatedSchema {
    pub fn graph(&self) -> &Graph {
        &self.schema.graph
    }
}

/// Adds `(target, more:sensitivityLevel, "level")` per policy annotation.
pub fn annotate_schema(schema: &OntologySchema, p: &Policy) -> AnnotatedSchema {
    let mut out = schema.clone();
    let level_p = vocab::term(MORE_SENSITIVITY_LEVEL);
    let mut warnings = Vec::new();
    for (target, level) in &p.annotations {
        if !schema.mentions(target) {
            warnings.push(format!("{target} does not occur in the schema"));
        }
        out.graph
            .add(target, &level_p, &Term::string(level.as_str()))
            .expect("IRI subject and predicate");
        out.sensitivity.insert(target.clone(), *level);
    }
    AnnotatedSchema { schema: out, warnings }
}

/// Predicate carrying the banded values of `property`.
pub fn band_predicate(property: &Term) -> Term {
    match property {
        Term::Iri(iri) => Term::Iri(format!("{iri}Band").into()),
        other => other.clone(),
    }
}

fn floor_to(value: &BigRational, width: u32) -> BigInt {
    let w = BigInt::from(width);
    (value / BigRational::from_integer(w.clone())).floor().to_integer() * w
}

/// Band label for a numeric or date literal. Integer values and date years
/// get the inclusive range `lo–(lo+w-1)`; other numbers the half-open range
/// `lo–(lo+w)`. `None` for values that cannot be banded.
pub fn band_label(lit: &Literal, spec: GeneralizationSpec) -> Option<String> {
    let w = BigInt::from(spec.width);
    let (lo, hi) = if let Some(v) = literal_value(lit) {
        let lo = floor_to(&v, spec.width);
        let hi = if v.is_integer() { &lo + &w - 1 } else { &lo + &w };
        (lo, hi)
    } else {
        let year = literal_date(lit)?.year();
        let lo = floor_to(&BigRational::from_integer(year.into()), spec.width);
        let hi = &lo + &w - 1;
        (lo, hi)
    };
    Some(format!("{lo}{BAND_SEPARATOR}{hi}"))
}

/// True when `label` is a band aligned to `width` and spanning at least it.
fn is_valid_band(label: &str, width: u32) -> bool {
    let Some((lo, hi)) = label.split_once(BAND_SEPARATOR) else {
        return false;
    };
    let (Ok(lo), Ok(hi)) = (lo.parse::<BigInt>(), hi.parse::<BigInt>()) else {
        return false;
    };
    let w = BigInt::from(width);
    let span = &hi - &lo;
    (&lo % &w).is_zero() && (span == &w - 1 || span == w)
}

/// Classes whose instances the role may not see: annotated classes with a
/// denied level and, through `rdfs:subClassOf` in `g`, all their subclasses.
fn denied_classes(g: &Graph, p: &Policy, role: &Role) -> HashSet<TermId> {
    let mut denied: HashSet<TermId> = p
        .annotations
        .iter()
        .filter(|(_, l)| !role.allows(**l))
        .filter_map(|(t, _)| g.id_of(t))
        .collect();
    let Some(sub) = g.id_of(&vocab::term(RDFS_SUBCLASS_OF)) else {
        return denied;
    };
    let mut frontier: Vec<TermId> = denied.iter().copied().collect();
    while let Some(class) = frontier.pop() {
        for [child, _, _] in g.match_ids(None, Some(sub), Some(class)) {
            if denied.insert(child) {
                frontier.push(child);
            }
        }
    }
    denied
}

/// Subjects typed with a denied class.
fn denied_instances(g: &Graph, p: &Policy, role: &Role) -> HashSet<TermId> {
    let Some(ty) = g.id_of(&vocab::term(RDF_TYPE)) else {
        return HashSet::new();
    };
    denied_classes(g, p, role)
        .into_iter()
        .flat_map(|c| g.match_ids(None, Some(ty), Some(c)).map(|[s, _, _]| s))
        .collect()
}

/// Builds the view of `g` for `role`:
/// instances of denied classes lose every triple that mentions them;
/// triples whose predicate has a denied level are dropped;
/// generalized properties are replaced by band literals on `{p}Band`
/// (values that cannot be banded are dropped, as are source triples already
/// using a band predicate). Everything else passes through unchanged.
pub fn apply_policy(g: &Graph, p: &Policy, role: &str) -> Result<Graph, PolicyError> {
    let role = p.role(role)?;
    let hidden = denied_instances(g, p, role);
    let mut level_cache: HashMap<TermId, SensitivityLevel> = HashMap::new();
    let mut level_of = |id: TermId| *level_cache.entry(id).or_insert_with(|| p.level(g.term(id)));
    let bands: HashMap<TermId, (GeneralizationSpec, Term)> = role
        .generalizations
        .iter()
        .filter_map(|(t, spec)| g.id_of(t).map(|id| (id, (*spec, band_predicate(t)))))
        .collect();
    let band_preds: HashSet<Term> = role.generalizations.keys().map(band_predicate).collect();

    let mut view = Graph::new();
    for [s, pr, o] in g.iter_ids() {
        if hidden.contains(&s) || hidden.contains(&pr) || hidden.contains(&o) {
            continue;
        }
        if let Some((spec, band_p)) = bands.get(&pr) {
            let label = match g.term(o) {
                Term::Literal(l) => band_label(l, *spec),
                _ => None,
            };
            let band_ok = !role.generalizations.contains_key(band_p) && role.allows(p.level(band_p));
            if let (Some(label), true) = (label, band_ok) {
                view.add(g.term(s), band_p, &Term::string(&label)).expect("valid triple");
            }
            continue;
        }
        if !role.allows(level_of(pr)) || band_preds.contains(g.term(pr)) {
            continue;
        }
        let (s, pr, o) = (view.intern(g.term(s)), view.intern(g.term(pr)), view.intern(g.term(o)));
        view.insert_ids([s, pr, o]);
    }
    Ok(view)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    DeniedPredicate(SensitivityLevel),
    DeniedInstance { node: Term, class: Term },
    UngeneralizedValue,
    MalformedBand,
}

impl ViolationKind {
    pub fn describe(&self) -> String {
        match self {
            ViolationKind::DeniedPredicate(l) => format!("predicate has denied level {l}"),
            ViolationKind::DeniedInstance { node, class } => format!("{node} is an instance of denied class {class}"),
            ViolationKind::UngeneralizedValue => "raw value of a generalized property".to_string(),
            ViolationKind::MalformedBand => "band label malformed or narrower than the configured width".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub triple: Triple,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub role: String,
    pub triples_checked: usize,
    /// View triples per predicate sensitivity level.
    pub level_counts: BTreeMap<SensitivityLevel, usize>,
    pub violations: Vec<Violation>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "role {}: {} triples checked, {} violation(s)\n",
            self.role,
            self.triples_checked,
            self.violations.len()
        );
        for (level, n) in &self.level_counts {
            let _ = writeln!(out, "  {level}: {n}");
        }
        for v in &self.violations {
            let _ = writeln!(out, "  VIOLATION {} -- {}", v.triple, v.kind.describe());
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(["role", "subject", "predicate", "object", "violation"]).expect("in-memory write");
        for v in &self.violations {
            w.write_record([
                self.role.clone(),
                v.triple.subject.to_string(),
                v.triple.predicate.to_string(),
                v.triple.object.to_string(),
                v.kind.describe(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

/// Lists every triple of `view` that the role's policy does not permit.
/// Instance checks use the `rdf:type` and `rdfs:subClassOf` triples present
/// in the view itself.
pub fn audit_view(view: &Graph, p: &Policy, role: &str) -> Result<AuditReport, PolicyError> {
    let r = p.role(role)?;
    let denied = denied_classes(view, p, r);
    let ty = view.id_of(&vocab::term(RDF_TYPE));
    let class_of = |node: TermId| -> Option<TermId> {
        let ty = ty?;
        view.match_ids(Some(node), Some(ty), None)
            .map(|[_, _, c]| c)
            .find(|c| denied.contains(c))
    };
    let band_widths: HashMap<Term, u32> = r
        .generalizations
        .iter()
        .map(|(t, spec)| (band_predicate(t), spec.width))
        .collect();

    let mut report = AuditReport {
        role: role.to_string(),
        triples_checked: 0,
        level_counts: BTreeMap::new(),
        violations: Vec::new(),
    };
    for [s, pr, o] in view.iter_ids() {
        report.triples_checked += 1;
        let predicate = view.term(pr);
        let level = p.level(predicate);
        *report.level_counts.entry(level).or_default() += 1;
        let triple = || Triple::new(view.term(s).clone(), predicate.clone(), view.term(o).clone()).expect("stored triple");
        let mut flag = |kind| report.violations.push(Violation { triple: triple(), kind });
        if !r.allows(level) {
            flag(ViolationKind::DeniedPredicate(level));
        }
        if r.generalizations.contains_key(predicate) {
            flag(ViolationKind::UngeneralizedValue);
        }
        if let Some(&width) = band_widths.get(predicate) {
            let ok = match view.term(o) {
                Term::Literal(l) => is_valid_band(l.lexical(), width),
                _ => false,
            };
            if !ok {
                flag(ViolationKind::MalformedBand);
            }
        }
        for node in [s, o] {
            if let Some(c) = class_of(node) {
                flag(ViolationKind::DeniedInstance {
                    node: view.term(node).clone(),
                    class: view.term(c).clone(),
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::{generate, FixtureSpec};
    use crate::ingest::emit_kg;
    use crate::ontology::{build_schema, builtin_items};
    use crate::privacy::default_policy;
    use crate::vocab::{MORE_HAS_AGE, MORE_HAS_BMI, MORE_PERSON};

    fn fixture_kg() -> (OntologySchema, Graph) {
        let b = generate(&FixtureSpec::default()).unwrap();
        let schema = build_schema(&builtin_items()).unwrap();
        let g = emit_kg(&b, &schema);
        (schema, g)
    }

    fn lit(lex: &str, dt: &str) -> Literal {
        Literal::typed(lex, dt).unwrap()
    }

    #[test]
    fn band_arithmetic() {
        let w5 = GeneralizationSpec { width: 5 };
        assert_eq!(band_label(&lit("7", vocab::XSD_INTEGER), w5).unwrap(), "5\u{2013}9");
        assert_eq!(band_label(&lit("10", vocab::XSD_INTEGER), w5).unwrap(), "10\u{2013}14");
        assert_eq!(band_label(&lit("-1", vocab::XSD_INTEGER), w5).unwrap(), "-5\u{2013}-1");
        assert_eq!(band_label(&lit("17.3", vocab::XSD_DECIMAL), w5).unwrap(), "15\u{2013}20");
        assert_eq!(band_label(&lit("2014-06-01", vocab::XSD_DATE), w5).unwrap(), "2010\u{2013}2014");
        assert_eq!(band_label(&Literal::string("seven"), w5), None);
        assert!(is_valid_band("5\u{2013}9", 5));
        assert!(is_valid_band("15\u{2013}20", 5));
        assert!(!is_valid_band("5\u{2013}7", 5));
        assert!(!is_valid_band("6\u{2013}10", 5));
        assert!(!is_valid_band("7", 5));
    }

    #[test]
    fn annotation_triples() {
        let schema = build_schema(&builtin_items()).unwrap();
        let p = Policy::parse(
            "[[annotations]]\ntarget = \"more:hasAge\"\nlevel = \"identifying\"\n\
             [[annotations]]\ntarget = \"more:neverUsed\"\nlevel = \"health\"\n[[roles]]\nname = \"r\"",
        )
        .unwrap();
        let a = annotate_schema(&schema, &p);
        let level_p = vocab::term(MORE_SENSITIVITY_LEVEL);
        assert_eq!(a.graph().len(), schema.graph.len() + 2);
        assert_eq!(
            a.graph().matches(Some(&vocab::term(MORE_HAS_AGE)), Some(&level_p), None)[0].object,
            Term::string("identifying")
        );
        assert_eq!(a.warnings.len(), 1);
        assert!(a.warnings[0].contains("neverUsed"));
        let again = annotate_schema(&a.schema, &p);
        assert_eq!(again.graph(), a.graph());
        assert_eq!(a.schema.sensitivity.len(), 2);
    }

    #[test]
    fn public_view_of_fixture() {
        let (_, g) = fixture_kg();
        let p = default_policy();
        let view = apply_policy(&g, &p, "public").unwrap();
        assert_eq!(view.count(None, Some(&vocab::term(MORE_HAS_AGE)), None), 0);
        assert_eq!(view.count(None, Some(&vocab::term(MORE_HAS_BMI)), None), 0);
        for t in view.iter() {
            assert_eq!(p.level(&t.predicate), SensitivityLevel::Public, "{t}");
        }
        let persons = g.count(None, Some(&vocab::term(RDF_TYPE)), Some(&vocab::term(MORE_PERSON)));
        let band = band_predicate(&vocab::term(MORE_HAS_AGE));
        assert_eq!(view.count(None, Some(&band), None), persons);
        assert_eq!(view.count(None, None, Some(&vocab::more("Age"))), 0);
        assert!(audit_view(&view, &p, "public").unwrap().is_clean());
        assert!(view.is_subset_of(&g) || view.count(None, Some(&band), None) > 0);
        assert_eq!(g, fixture_kg().1, "source untouched");
    }

    #[test]
    fn age_seven_lands_in_five_to_nine() {
        let mut g = Graph::new();
        let person = Term::iri("http://ex.org/p1").unwrap();
        g.add(&person, &vocab::term(MORE_HAS_AGE), &Term::typed("7", vocab::XSD_INTEGER).unwrap())
            .unwrap();
        let view = apply_policy(&g, &default_policy(), "public").unwrap();
        let expected = Triple::new(person, vocab::more("hasAgeBand"), Term::string("5\u{2013}9")).unwrap();
        assert_eq!(view.to_sorted_vec(), vec![expected]);
    }

    #[test]
    fn researcher_view_equals_source() {
        let (_, g) = fixture_kg();
        let p = default_policy();
        let view = apply_policy(&g, &p, "researcher").unwrap();
        assert_eq!(view, g);
        let report = audit_view(&view, &p, "researcher").unwrap();
        assert!(report.is_clean());
        assert_eq!(report.triples_checked, g.len());
        assert_eq!(report.level_counts.values().sum::<usize>(), g.len());
    }

    #[test]
    fn inserted_denied_triple_is_reported() {
        let (_, g) = fixture_kg();
        let p = default_policy();
        let mut view = apply_policy(&g, &p, "public").unwrap();
        view.add(
            &Term::iri("http://ex.org/p1").unwrap(),
            &vocab::term(MORE_HAS_BMI),
            &Term::typed("17.1", vocab::XSD_DECIMAL).unwrap(),
        )
        .unwrap();
        let report = audit_view(&view, &p, "public").unwrap();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::DeniedPredicate(SensitivityLevel::Health));
        assert!(report.to_text().contains("VIOLATION"));
        assert_eq!(report.to_csv().lines().count(), 2);
    }

    #[test]
    fn denied_class_star_is_removed() {
        let (_, g) = fixture_kg();
        let p = default_policy();
        let view = apply_policy(&g, &p, "public").unwrap();
        let ty = vocab::term(RDF_TYPE);
        for class in ["Age", "AgeDatum", "AgeValueSpecification", "BodyMassIndex"] {
            let instances = g.matches(None, Some(&ty), Some(&vocab::more(class)));
            assert!(!instances.is_empty());
            for i in instances {
                assert_eq!(view.count(Some(&i.subject), None, None), 0);
                assert_eq!(view.count(None, None, Some(&i.subject)), 0);
            }
        }
        let mut tampered = view.clone();
        tampered
            .add(&Term::iri("http://ex.org/q").unwrap(), &ty, &vocab::more("Age"))
            .unwrap();
        let report = audit_view(&tampered, &p, "public").unwrap();
        assert!(matches!(report.violations[0].kind, ViolationKind::DeniedInstance { .. }));
    }

    #[test]
    fn unknown_role() {
        assert!(matches!(
            apply_policy(&Graph::new(), &default_policy(), "admin"),
            Err(PolicyError::UnknownRole(_))
        ));
    }
}
