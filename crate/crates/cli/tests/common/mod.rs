//! Independent oracles for the acceptance suite. They read bundle CSV files
//! directly and evaluate rules with nested loops over plain triple lists.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use morekg::pattern::{PatternTerm, TriplePattern};
use morekg::rdf::Literal;
use morekg::rules::RuleSet;
use morekg::vocab::{XSD_BOOLEAN, XSD_DATE, XSD_DECIMAL, XSD_INTEGER, XSD_STRING};
use morekg::{Graph, Term, Triple};

pub type Row = HashMap<String, String>;

pub fn read_csv(path: &Path) -> Vec<Row> {
    let mut r = csv::Reader::from_path(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let headers = r.headers().unwrap().clone();
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            headers.iter().map(str::to_string).zip(rec.iter().map(str::to_string)).collect()
        })
        .collect()
}

/// Exact value of a plain decimal string such as `-12.50`.
pub fn decimal(text: &str) -> BigRational {
    let (neg, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    let numer: BigInt = format!("{whole}{frac}").parse().unwrap_or_else(|_| panic!("not a decimal: {text}"));
    let v = BigRational::new(numer, BigInt::from(10).pow(frac.len() as u32));
    if neg {
        -v
    } else {
        v
    }
}

/// `v` rounded half away from zero to `places` decimals, rendered with
/// exactly that many.
pub fn render_fixed(v: &BigRational, places: u32) -> String {
    let scale = BigInt::from(10).pow(places);
    let scaled = v.abs() * BigRational::from_integer(scale.clone());
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let n = (scaled + half).floor().to_integer();
    let (int, frac) = (&n / &scale, &n % &scale);
    let sign = if v.is_negative() && !n.is_zero() { "-" } else { "" };
    format!("{sign}{int}.{frac:0>width$}", width = places as usize)
}

/// CQ1 by hand: mean handgrip value per participant age over the bundles'
/// CSV files, ordered by age.
pub fn cq1_oracle(bundles: &[&Path]) -> Vec<(u32, BigRational)> {
    let mut by_age: BTreeMap<u32, (BigRational, usize)> = BTreeMap::new();
    for dir in bundles {
        let ages: HashMap<String, u32> = read_csv(&dir.join("participants.csv"))
            .into_iter()
            .map(|r| (r["participant_id"].clone(), r["age"].parse().unwrap()))
            .collect();
        for r in read_csv(&dir.join("results.csv")) {
            if r["test_item"] != "handgrip" {
                continue;
            }
            let e = by_age.entry(ages[&r["participant_id"]]).or_insert((BigRational::zero(), 0));
            e.0 += decimal(&r["value"]);
            e.1 += 1;
        }
    }
    by_age
        .into_iter()
        .map(|(age, (sum, n))| (age, sum / BigRational::from_integer(n.into())))
        .collect()
}

/// `shuttle_run` -> `ShuttleRun`.
pub fn pascal(key: &str) -> String {
    key.split(['_', ' ', '-'])
        .filter(|w| !w.is_empty())
        .map(|w| {
            let mut cs = w.chars();
            let first = cs.next().unwrap().to_uppercase().collect::<String>();
            first + cs.as_str()
        })
        .collect()
}

/// CQ2 by hand: item IRIs of the studies whose year range meets [lo, hi].
pub fn cq2_oracle(bundles: &[&Path], lo: i32, hi: i32) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for dir in bundles {
        let study = &read_csv(&dir.join("study.csv"))[0];
        let (start, end): (i32, i32) = (study["year_start"].parse().unwrap(), study["year_end"].parse().unwrap());
        if start <= hi && end >= lo {
            for item in read_csv(&dir.join("test_items.csv")) {
                out.insert(format!("https://w3id.org/more#{}", pascal(&item["key"])));
            }
        }
    }
    out
}

type Bindings = HashMap<String, Term>;

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

/// Every solution of `body` over `triples`, by nested loops in body order.
pub fn nested_loop(triples: &[Triple], body: &[TriplePattern]) -> Vec<Bindings> {
    fn go(triples: &[Triple], body: &[TriplePattern], b: Bindings, out: &mut Vec<Bindings>) {
        let Some((first, rest)) = body.split_first() else {
            out.push(b);
            return;
        };
        for t in triples {
            let mut nb = b.clone();
            if bind(&first.predicate, &t.predicate, &mut nb)
                && bind(&first.subject, &t.subject, &mut nb)
                && bind(&first.object, &t.object, &mut nb)
            {
                go(triples, rest, nb, out);
            }
        }
    }
    let mut out = Vec::new();
    go(triples, body, Bindings::new(), &mut out);
    out
}

fn instantiate(p: &TriplePattern, b: &Bindings) -> Option<Triple> {
    let get = |t: &PatternTerm| match t {
        PatternTerm::Const(c) => Some(c.clone()),
        PatternTerm::Var(v) => b.get(v).cloned(),
    };
    Triple::new(get(&p.subject)?, get(&p.predicate)?, get(&p.object)?).ok()
}

/// Naive forward chaining: each round applies every rule to the full set.
pub fn naive_closure(g: &Graph, rules: &RuleSet) -> BTreeSet<Triple> {
    let mut all: BTreeSet<Triple> = g.iter().collect();
    loop {
        let triples: Vec<Triple> = all.iter().cloned().collect();
        let mut fresh = BTreeSet::new();
        for rule in rules.rules() {
            for b in nested_loop(&triples, &rule.body) {
                for h in &rule.head {
                    if let Some(t) = instantiate(h, &b) {
                        if !all.contains(&t) {
                            fresh.insert(t);
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

/// Distinct head triples a single rule derives from `triples` in one pass.
pub fn naive_one_pass(triples: &[Triple], body: &[TriplePattern], head: &[TriplePattern]) -> BTreeSet<Triple> {
    nested_loop(triples, body)
        .iter()
        .flat_map(|b| head.iter().filter_map(|h| instantiate(h, b)))
        .collect()
}

pub fn iri(s: &str) -> Term {
    Term::iri(s).unwrap()
}

pub fn arb_iri() -> impl Strategy<Value = Term> {
    prop_oneof![
        (0u8..20).prop_map(|i| iri(&format!("http://ex.org/r{i}"))),
        "[a-z]{1,6}".prop_map(|s| iri(&format!("https://w3id.org/more#{s}"))),
        "[a-zA-Z0-9é_~.-]{1,8}".prop_map(|s| iri(&format!("urn:x:{s}"))),
        (0u8..5).prop_map(|i| iri(&format!("http://purl.obolibrary.org/obo/OBI_000{i}"))),
    ]
}

pub fn arb_blank() -> impl Strategy<Value = Term> {
    "[a-z][a-z0-9]{0,4}".prop_map(|s| Term::blank(&s).unwrap())
}

pub fn arb_literal() -> impl Strategy<Value = Term> {
    prop_oneof![
        "[ -~é\u{2013}\t\n\r\"\\\\]{0,12}".prop_map(|s| Term::string(&s)),
        (any::<i64>()).prop_map(|n| Term::typed(&n.to_string(), XSD_INTEGER).unwrap()),
        (any::<i32>(), 0u32..1000).prop_map(|(a, b)| Term::typed(&format!("{a}.{b}"), XSD_DECIMAL).unwrap()),
        (1900i32..2100, 1u32..13, 1u32..29)
            .prop_map(|(y, m, d)| Term::typed(&format!("{y}-{m:02}-{d:02}"), XSD_DATE).unwrap()),
        any::<bool>().prop_map(|b| Term::typed(&b.to_string(), XSD_BOOLEAN).unwrap()),
        ("[a-z ]{0,6}", prop_oneof![Just("en"), Just("de"), Just("en-GB")])
            .prop_map(|(s, l)| Term::Literal(Literal::lang(s, l).unwrap())),
        "[a-z]{0,4}".prop_map(|s| Term::typed(&s, XSD_STRING).unwrap()),
    ]
}

pub fn arb_triple() -> impl Strategy<Value = Triple> {
    let subject = prop_oneof![3 => arb_iri(), 1 => arb_blank()];
    let object = prop_oneof![2 => arb_iri(), 1 => arb_blank(), 3 => arb_literal()];
    (subject, arb_iri(), object).prop_map(|(s, p, o)| Triple::new(s, p, o).unwrap())
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
