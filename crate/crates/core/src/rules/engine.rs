use std::collections::{BTreeMap, HashMap};

use crate::pattern::{greedy_order, lookup_key, unify, Binding, CompiledPattern, PatternTerm, Slot, TriplePattern};
use crate::rdf::{Graph, IdTriple, TripleIndex};

use super::{Rule, RuleSet};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MaterializeStats {
    /// Semi-naive rounds until no new triple appeared.
    pub iterations: usize,
    /// Triples added to the input graph.
    pub inferred: usize,
    /// New triples first derived by each rule.
    pub per_rule: BTreeMap<String, usize>,
}

struct CompiledRule<'r> {
    rule: &'r Rule,
    body: Vec<CompiledPattern>,
    head: Vec<CompiledPattern>,
    vars: usize,
}

fn compile<'r>(rule: &'r Rule, g: &mut Graph) -> CompiledRule<'r> {
    let mut slots: HashMap<String, usize> = HashMap::new();
    let mut compile_pattern = |p: &TriplePattern, g: &mut Graph| -> CompiledPattern {
        p.terms().map(|t| match t {
            PatternTerm::Var(v) => {
                let next = slots.len();
                Slot::Var(*slots.entry(v.clone()).or_insert(next))
            }
            PatternTerm::Const(c) => Slot::Const(g.intern(c)),
        })
    };
    let body = rule.body.iter().map(|p| compile_pattern(p, g)).collect();
    let head = rule.head.iter().map(|p| compile_pattern(p, g)).collect();
    CompiledRule {
        rule,
        body,
        head,
        vars: slots.len(),
    }
}

/// Joins `order[depth..]` against `g`, calling `emit` per complete binding.
fn join(
    g: &Graph,
    patterns: &[CompiledPattern],
    order: &[usize],
    depth: usize,
    binding: &mut Binding,
    emit: &mut dyn FnMut(&Binding),
) {
    let Some(&i) = order.get(depth) else {
        emit(binding);
        return;
    };
    let [s, p, o] = lookup_key(&patterns[i], binding);
    for t in g.match_ids(s, p, o) {
        if let Some(fresh) = unify(&patterns[i], &t, binding) {
            join(g, patterns, order, depth + 1, binding, emit);
            crate::pattern::undo(binding, &fresh);
        }
    }
}

fn instantiate(head: &CompiledPattern, binding: &Binding) -> IdTriple {
    head.map(|slot| match slot {
        Slot::Const(id) => id,
        Slot::Var(v) => binding[v].expect("head variables are bound by the body"),
    })
}

/// Evaluates one rule with body atom `delta_atom` restricted to `delta`
/// (or unrestricted when `delta` is `None`) and the remaining atoms joined
/// against `g`.
fn fire(
    g: &Graph,
    rule: &CompiledRule<'_>,
    delta: Option<(&TripleIndex, usize)>,
    out: &mut Vec<IdTriple>,
) {
    let mut binding: Binding = vec![None; rule.vars];
    let estimate = |i: usize| {
        let key = lookup_key(&rule.body[i], &vec![None; rule.vars]);
        g.index().count(key[0], key[1], key[2])
    };
    let mut emit = |b: &Binding| {
        for h in &rule.head {
            out.push(instantiate(h, b));
        }
    };
    match delta {
        None => {
            let order = greedy_order(&rule.body, &vec![false; rule.vars], estimate);
            join(g, &rule.body, &order, 0, &mut binding, &mut emit);
        }
        Some((delta, atom)) => {
            let first = &rule.body[atom];
            let [s, p, o] = lookup_key(first, &binding);
            let mut bound = vec![false; rule.vars];
            for slot in first {
                if let Slot::Var(v) = slot {
                    bound[*v] = true;
                }
            }
            let rest: Vec<usize> = (0..rule.body.len()).filter(|&i| i != atom).collect();
            let rest_patterns: Vec<CompiledPattern> = rest.iter().map(|&i| rule.body[i]).collect();
            let order = greedy_order(&rest_patterns, &bound, |j| estimate(rest[j]));
            for t in delta.matches(s, p, o) {
                if let Some(fresh) = unify(first, &t, &mut binding) {
                    join(g, &rest_patterns, &order, 0, &mut binding, &mut emit);
                    crate::pattern::undo(&mut binding, &fresh);
                }
            }
        }
    }
}

fn well_formed(g: &Graph, t: &IdTriple) -> bool {
    !g.term(t[0]).is_literal() && g.term(t[1]).is_iri()
}

/// Least fixpoint of `g` under `rules`, by semi-naive iteration: the first
/// round evaluates every rule over the whole graph; later rounds only
/// consider derivations that use at least one triple from the previous
/// round's delta.
pub fn materialize_with_stats(g: &Graph, rules: &RuleSet) -> (Graph, MaterializeStats) {
    let mut out = g.clone();
    let compiled: Vec<CompiledRule<'_>> = rules.rules().iter().map(|r| compile(r, &mut out)).collect();
    let mut stats = MaterializeStats::default();
    let mut delta: Option<TripleIndex> = None;
    loop {
        stats.iterations += 1;
        let mut fresh = TripleIndex::new();
        for rule in &compiled {
            let mut derived = Vec::new();
            match &delta {
                None => fire(&out, rule, None, &mut derived),
                Some(d) => {
                    for atom in 0..rule.body.len() {
                        fire(&out, rule, Some((d, atom)), &mut derived);
                    }
                }
            }
            let mut count = 0;
            for t in derived {
                if !out.contains_ids(&t) && well_formed(&out, &t) && fresh.insert(t) {
                    count += 1;
                }
            }
            if count > 0 {
                *stats.per_rule.entry(rule.rule.name.clone()).or_default() += count;
            }
        }
        if fresh.is_empty() {
            break;
        }
        stats.inferred += fresh.len();
        for t in fresh.iter() {
            out.insert_ids(t);
        }
        delta = Some(fresh);
    }
    (out, stats)
}

pub fn materialize(g: &Graph, rules: &RuleSet) -> Graph {
    materialize_with_stats(g, rules).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::Term;
    use crate::rules::builtin_shortcut_rule;
    use crate::vocab::*;

    fn iri(s: &str) -> Term {
        Term::iri(&format!("http://ex.org/{s}")).unwrap()
    }

    fn chain(g: &mut Graph, n: &str, disp: &str, with_vs: bool) {
        let (proc_, datum, vs) = (iri(&format!("proc{n}")), iri(&format!("datum{n}")), iri(&format!("vs{n}")));
        g.add(&proc_, &term(PATO_EXECUTES), &iri("Handgrip")).unwrap();
        g.add(&proc_, &term(OBI_HAS_SPECIFIED_OUTPUT), &datum).unwrap();
        if with_vs {
            g.add(&datum, &term(OBI_HAS_VALUE_SPECIFICATION), &vs).unwrap();
        }
        g.add(&vs, &term(OBI_SPECIFIES_VALUE_OF), &iri(disp)).unwrap();
    }

    fn shortcut_only() -> RuleSet {
        let mut rs = RuleSet::new();
        rs.push(builtin_shortcut_rule()).unwrap();
        rs
    }

    #[test]
    fn empty_graph() {
        assert!(materialize(&Graph::new(), &RuleSet::builtins()).is_empty());
    }

    #[test]
    fn one_chain_one_inference() {
        let mut g = Graph::new();
        chain(&mut g, "1", "disp1", true);
        let (out, stats) = materialize_with_stats(&g, &shortcut_only());
        assert_eq!(stats.inferred, 1);
        assert!(out
            .matches(Some(&iri("Handgrip")), Some(&term(MORE_MEASURES_DISPOSITION)), Some(&iri("disp1")))
            .len()
            == 1);
    }

    #[test]
    fn missing_value_spec_no_inference() {
        let mut g = Graph::new();
        chain(&mut g, "1", "disp1", false);
        assert_eq!(materialize_with_stats(&g, &shortcut_only()).1.inferred, 0);
    }

    #[test]
    fn two_participants_two_inferences() {
        let mut g = Graph::new();
        chain(&mut g, "1", "disp1", true);
        chain(&mut g, "2", "disp2", true);
        chain(&mut g, "3", "disp2", true);
        assert_eq!(materialize_with_stats(&g, &shortcut_only()).1.inferred, 2);
    }

    #[test]
    fn transitive_chain_and_idempotence() {
        let mut g = Graph::new();
        let sub = term(RDFS_SUBCLASS_OF);
        for i in 0..6 {
            g.add(&iri(&format!("C{i}")), &sub, &iri(&format!("C{}", i + 1))).unwrap();
        }
        g.add(&iri("x"), &term(RDF_TYPE), &iri("C0")).unwrap();
        let rs = RuleSet::builtins();
        let (once, stats) = materialize_with_stats(&g, &rs);
        // 21 subclass pairs, 7 types.
        assert_eq!(once.len(), 21 + 7);
        assert!(stats.iterations > 2);
        assert!(g.is_subset_of(&once));
        let (twice, again) = materialize_with_stats(&once, &rs);
        assert_eq!(again.inferred, 0);
        assert_eq!(twice, once);
    }

    #[test]
    fn ill_formed_heads_skipped() {
        let rs = crate::rules::parse_rules("@prefix ex: <http://ex.org/> .\nflip: ?s ex:p ?o => ?o ex:p ?s .", false).unwrap();
        let mut g = Graph::new();
        g.add(&iri("a"), &iri("p"), &Term::string("lit")).unwrap();
        g.add(&iri("a"), &iri("p"), &iri("b")).unwrap();
        let out = materialize(&g, &rs);
        assert_eq!(out.len(), 3);
    }
}
