use std::io::Write;
use std::path::Path;

use morekg::fixture::{generate, write_bundle, FixtureSpec, Years};
use morekg::ingest::parse_items_csv;
use morekg::ontology::{build_schema, builtin_items, export_schema};
use morekg::privacy::{annotate_schema, apply_policy, audit_view};
use morekg::query::{explain, parse_query, to_csv, to_text_table, evaluate};
use morekg::serdes::{write_turtle, SerializationConfig};
use morekg::PrefixMap;

use crate::args::*;
use crate::cq;
use crate::pipeline::*;
use crate::CliError;

pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build(a) => build(a),
        Command::Materialize(a) => materialize_cmd(a),
        Command::Query(a) => query(a),
        Command::Cq(a) => cq_run(a),
        Command::Redact(a) => redact(a),
        Command::Audit(a) => audit(a),
        Command::Schema { command } => schema(command),
        Command::Rules { command } => rules(command),
        Command::Validate(a) => validate(a),
        Command::GenFixture(a) => gen_fixture(a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

fn report_warnings(bundles: &[morekg::ingest::StudyBundle]) -> usize {
    let mut total = 0;
    for (study, report) in validate_all(bundles) {
        for w in &report.warnings {
            eprintln!("warning: {study}: {w}");
        }
        total += report.warnings.len();
    }
    total
}

fn build(a: BuildArgs) -> Result<(), CliError> {
    let cfg = load_config(a.config.as_deref())?;
    let bundles = load_bundles(&a.bundles, &cfg)?;
    report_warnings(&bundles);
    let rules = if a.materialize {
        Some(rule_set(a.rules.as_deref(), true)?)
    } else {
        None
    };
    let g = build_graph(&bundles, &cfg, rules.as_ref())?;
    write_graph(&a.out, &g)?;
    eprintln!("wrote {} triples to {}", g.len(), a.out.display());
    Ok(())
}

fn materialize_cmd(a: MaterializeArgs) -> Result<(), CliError> {
    let g = read_graph(&a.input)?;
    let rules = rule_set(a.rules.as_deref(), !a.no_builtins)?;
    let (out, stats) = materialize(&g, &rules);
    write_graph(&a.out, &out)?;
    if a.stats {
        eprintln!("iterations: {}", stats.iterations);
        eprintln!("inferred: {}", stats.inferred);
        for (rule, n) in &stats.per_rule {
            eprintln!("  {rule}: {n}");
        }
    }
    Ok(())
}

fn query(a: QueryArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&a.query).map_err(|e| CliError::io(&a.query, e))?;
    let q = parse_query(&text)?;
    let g = read_graph(&a.kg)?;
    let view = match &a.role {
        Some(_) => role_view(&g, &resolve_policy(a.policy.policy.as_deref())?, a.role.as_deref())?,
        None => None,
    };
    let target = view.as_ref().unwrap_or(&g);
    if a.explain {
        return emit(None, &format!("{}\n", explain(target, &q)));
    }
    let table = evaluate(target, &q);
    for w in &table.warnings {
        eprintln!("warning: {w}");
    }
    let out = match a.format {
        TableFormat::Csv => to_csv(&table),
        TableFormat::Table => to_text_table(&table, &PrefixMap::default()),
    };
    emit(None, &out)
}

fn cq_run(a: CqArgs) -> Result<(), CliError> {
    let g = read_graph(&a.kg)?;
    let policy = resolve_policy(a.policy.policy.as_deref())?;
    let cases = cq::discover(&a.cases).map_err(|e| CliError::io(&a.cases, e))?;
    if cases.is_empty() {
        println!("0 cases in {}", a.cases.display());
        return Ok(());
    }
    let (results, summary) = cq::run_suite(&g, &policy, &cases);
    for r in &results {
        println!("{r}");
    }
    println!("{summary}");
    if summary.all_passed() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{} of {} cases did not pass", summary.total() - summary.passed, summary.total())))
    }
}

fn redact(a: RedactArgs) -> Result<(), CliError> {
    let policy = resolve_policy(a.policy.policy.as_deref())?;
    policy.role(&a.role)?;
    let g = read_graph(&a.kg)?;
    let view = apply_policy(&g, &policy, &a.role)?;
    let report = audit_view(&view, &policy, &a.role)?;
    if !report.is_clean() {
        eprint!("{}", report.to_text());
        return Err(CliError::Failed("view failed its audit; nothing written".into()));
    }
    write_graph(&a.out, &view)?;
    eprintln!(
        "role {}: kept {} of {} triples",
        a.role,
        view.len(),
        g.len()
    );
    Ok(())
}

fn audit(a: AuditArgs) -> Result<(), CliError> {
    let policy = resolve_policy(a.policy.policy.as_deref())?;
    let view = read_graph(&a.view)?;
    let report = audit_view(&view, &policy, &a.role)?;
    let text = match a.format {
        ReportFormat::Text => report.to_text(),
        ReportFormat::Csv => report.to_csv(),
    };
    emit(None, &text)?;
    if report.is_clean() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{} violation(s)", report.violations.len())))
    }
}

fn schema(c: SchemaCommand) -> Result<(), CliError> {
    let SchemaCommand::Export {
        items,
        annotate,
        policy,
        out,
    } = c;
    let items = match items {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            parse_items_csv(&path.display().to_string(), &text)?
        }
        None => builtin_items(),
    };
    let schema = build_schema(&items)?;
    let text = if annotate {
        let annotated = annotate_schema(&schema, &resolve_policy(policy.policy.as_deref())?);
        for w in &annotated.warnings {
            eprintln!("warning: {w}");
        }
        write_turtle(annotated.graph(), &SerializationConfig::turtle())
    } else {
        export_schema(&schema)
    };
    emit(out.as_deref(), &text)
}

fn rules(c: RulesCommand) -> Result<(), CliError> {
    let RulesCommand::Export { rules, out } = c;
    let set = rule_set(rules.as_deref(), true)?;
    emit(out.as_deref(), &set.to_text())
}

fn validate(a: ValidateArgs) -> Result<(), CliError> {
    let cfg = load_config(a.config.as_deref())?;
    let bundles = load_bundles(&a.bundles, &cfg)?;
    for b in &bundles {
        let (p, i, r) = b.counts();
        println!("{}: {p} participants, {i} test items, {r} results", b.study.id);
    }
    merged_items(&bundles)?;
    let warnings = report_warnings(&bundles);
    println!("{warnings} warning(s)");
    if a.strict && warnings > 0 {
        return Err(CliError::Failed(format!("{warnings} warning(s) in strict mode")));
    }
    Ok(())
}

fn gen_fixture(a: GenFixtureArgs) -> Result<(), CliError> {
    let spec = FixtureSpec {
        seed: a.seed,
        participants: a.participants,
        items: a.items,
        study_id: a.study_id,
        years: match a.years {
            Some((lo, hi)) => Years::Fixed(lo, hi),
            None => Years::Within(a.within.0, a.within.1),
        },
        ages: a.ages,
    };
    let bundle = generate(&spec)?;
    std::fs::create_dir_all(&a.out_dir).map_err(|e| CliError::io(&a.out_dir, e))?;
    write_bundle(&bundle, &a.out_dir)?;
    eprintln!(
        "wrote study {} ({}-{}) with {} participants and {} results to {}",
        bundle.study.id,
        bundle.study.year_start,
        bundle.study.year_end,
        bundle.participants.len(),
        bundle.results.len(),
        a.out_dir.display()
    );
    Ok(())
}
