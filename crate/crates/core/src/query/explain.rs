use std::collections::BTreeSet;
use std::fmt;

use crate::pattern::{PatternTerm, TriplePattern};
use crate::rdf::Graph;

use super::ast::Query;

/// Number of triples matching the pattern's constants, ignoring variables.
/// Zero when a constant does not occur in the graph.
pub(crate) fn static_estimate(g: &Graph, p: &TriplePattern) -> usize {
    let mut key = [None; 3];
    for (slot, t) in key.iter_mut().zip(p.terms()) {
        if let PatternTerm::Const(c) = t {
            match g.id_of(c) {
                Some(id) => *slot = Some(id),
                None => return 0,
            }
        }
    }
    g.index().count(key[0], key[1], key[2])
}

/// Join order: start with the pattern of smallest estimate (earliest on
/// ties); then repeatedly take the smallest-estimate pattern sharing a
/// variable with those already chosen, falling back to any remaining
/// pattern when none is connected.
pub(crate) fn plan_order(g: &Graph, patterns: &[TriplePattern]) -> Vec<(usize, usize)> {
    let estimates: Vec<usize> = patterns.iter().map(|p| static_estimate(g, p)).collect();
    let mut remaining: Vec<usize> = (0..patterns.len()).collect();
    let mut bound: BTreeSet<&str> = BTreeSet::new();
    let mut order = Vec::with_capacity(patterns.len());
    while !remaining.is_empty() {
        let connected: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| patterns[i].variables().any(|v| bound.contains(v)))
            .collect();
        let pool = if connected.is_empty() { &remaining } else { &connected };
        let pick = *pool
            .iter()
            .min_by_key(|&&i| (estimates[i], i))
            .expect("non-empty pool");
        remaining.retain(|&i| i != pick);
        bound.extend(patterns[pick].variables());
        order.push((pick, estimates[pick]));
    }
    order
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanStep {
    /// Position of the pattern in the WHERE clause.
    pub index: usize,
    pub pattern: String,
    pub estimate: usize,
}

/// The join order the evaluator will use. Informational only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanDescription {
    pub steps: Vec<PlanStep>,
}

impl fmt::Display for PlanDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, step) in self.steps.iter().enumerate() {
            writeln!(
                f,
                "{}. {}  [pattern {}, est. {}]",
                n + 1,
                step.pattern,
                step.index + 1,
                step.estimate
            )?;
        }
        Ok(())
    }
}

pub fn explain(g: &Graph, q: &Query) -> PlanDescription {
    let steps = plan_order(g, &q.patterns)
        .into_iter()
        .map(|(index, estimate)| PlanStep {
            index,
            pattern: q.patterns[index].render(&q.prefixes),
            estimate,
        })
        .collect();
    PlanDescription { steps }
}
