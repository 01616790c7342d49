//! Pipeline stages shared by the commands and the test suites.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use morekg::alias::AliasTable;
use morekg::ingest::{emit_kg, load_bundle, validate_bundle, IngestConfig, StudyBundle, TestItemDef, ValidationReport};
use morekg::ontology::{build_schema, OntologySchema};
use morekg::privacy::{apply_policy, default_policy, load_policy, Policy};
use morekg::query::{evaluate, parse_query, SolutionTable};
use morekg::rules::{materialize_with_stats, parse_rules, MaterializeStats, RuleSet};
use morekg::serdes;
use morekg::Graph;

use crate::CliError;

pub fn load_config(path: Option<&Path>) -> Result<IngestConfig, CliError> {
    Ok(match path {
        Some(p) => IngestConfig::load(p)?,
        None => IngestConfig::default(),
    })
}

pub fn load_bundles(dirs: &[PathBuf], cfg: &IngestConfig) -> Result<Vec<StudyBundle>, CliError> {
    let bundles = dirs
        .iter()
        .map(|d| load_bundle(d, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let mut seen = BTreeMap::new();
    for (b, dir) in bundles.iter().zip(dirs) {
        if let Some(prev) = seen.insert(b.study.id.clone(), dir) {
            return Err(CliError::Failed(format!(
                "study id {:?} appears in both {} and {}",
                b.study.id,
                prev.display(),
                dir.display()
            )));
        }
    }
    Ok(bundles)
}

/// Union of the bundles' item tables. A key defined differently by two
/// bundles is an error.
pub fn merged_items(bundles: &[StudyBundle]) -> Result<Vec<TestItemDef>, CliError> {
    let mut items: BTreeMap<&str, &TestItemDef> = BTreeMap::new();
    for b in bundles {
        for item in &b.items {
            match items.get(item.key.as_str()) {
                Some(prev) if *prev != item => {
                    return Err(CliError::Failed(format!(
                        "test item {:?} is defined differently in study {:?}",
                        item.key, b.study.id
                    )))
                }
                _ => {
                    items.insert(&item.key, item);
                }
            }
        }
    }
    Ok(items.into_values().cloned().collect())
}

pub fn validate_all(bundles: &[StudyBundle]) -> Vec<(String, ValidationReport)> {
    bundles.iter().map(|b| (b.study.id.clone(), validate_bundle(b))).collect()
}

/// Schema graph plus the emission of every bundle; studies are emitted in
/// parallel and merged.
pub fn emit_all(bundles: &[StudyBundle]) -> Result<(OntologySchema, Graph), CliError> {
    let schema = build_schema(&merged_items(bundles)?)?;
    let parts: Vec<Graph> = std::thread::scope(|scope| {
        let handles: Vec<_> = bundles.iter().map(|b| scope.spawn(|| emit_kg(b, &schema))).collect();
        handles.into_iter().map(|h| h.join().expect("emission does not panic")).collect()
    });
    let mut g = schema.graph.clone();
    for part in &parts {
        g.extend_from(part);
    }
    Ok((schema, g))
}

pub fn rule_set(extra: Option<&Path>, builtins: bool) -> Result<RuleSet, CliError> {
    match extra {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            Ok(parse_rules(&text, builtins)?)
        }
        None => Ok(RuleSet::builtins()),
    }
}

pub fn materialize(g: &Graph, rules: &RuleSet) -> (Graph, MaterializeStats) {
    materialize_with_stats(g, rules)
}

/// Bundles to graph: emission, optional materialization, then IRI aliasing
/// from the config's alias table.
pub fn build_graph(
    bundles: &[StudyBundle],
    cfg: &IngestConfig,
    rules: Option<&RuleSet>,
) -> Result<Graph, CliError> {
    let (_, mut g) = emit_all(bundles)?;
    if let Some(rules) = rules {
        g = materialize(&g, rules).0;
    }
    if let Some(table) = &cfg.alias_table {
        g = AliasTable::load(table)?.apply(&g);
    }
    Ok(g)
}

pub fn read_graph(path: &Path) -> Result<Graph, CliError> {
    Ok(serdes::read_file(path)?)
}

pub fn write_graph(path: &Path, g: &Graph) -> Result<(), CliError> {
    Ok(serdes::write_file(path, g)?)
}

pub fn resolve_policy(path: Option<&Path>) -> Result<Policy, CliError> {
    Ok(match path {
        Some(p) => load_policy(p)?,
        None => default_policy(),
    })
}

/// The graph a query for `role` sees.
pub fn role_view(g: &Graph, policy: &Policy, role: Option<&str>) -> Result<Option<Graph>, CliError> {
    role.map(|r| apply_policy(g, policy, r)).transpose().map_err(CliError::from)
}

pub fn run_query(g: &Graph, text: &str) -> Result<SolutionTable, CliError> {
    Ok(evaluate(g, &parse_query(text)?))
}
