//! Competency-question harness: each case is a query file `<name>.rq` and
//! an expected result `<name>.csv` in the same directory. A query line
//! `# role: <name>` evaluates the case over that role's view; without it
//! the researcher view is used (or the source graph when the policy has no
//! researcher role).

use std::fmt;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use num_traits::Signed;

use morekg::numeric::parse_rational;
use morekg::privacy::{apply_policy, Policy};
use morekg::query::{evaluate, parse_query, SolutionTable};
use morekg::Graph;

pub const DEFAULT_ROLE: &str = "researcher";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CqCase {
    pub name: String,
    pub query: PathBuf,
    pub expected: PathBuf,
    pub role: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    /// 1-based data row; 0 for the header.
    pub row: usize,
    pub column: String,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.row == 0 {
            write!(f, "header: expected {}, got {}", self.expected, self.actual)
        } else {
            write!(
                f,
                "row {}, column ?{}: expected {:?}, got {:?}",
                self.row, self.column, self.expected, self.actual
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass { rows: usize },
    Fail(Vec<Mismatch>),
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseResult {
    pub name: String,
    pub outcome: Outcome,
}

impl fmt::Display for CaseResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Pass { rows } => write!(f, "PASS {} ({rows} rows)", self.name),
            Outcome::Fail(ms) => {
                write!(f, "FAIL {}", self.name)?;
                for m in ms {
                    write!(f, "\n  {m}")?;
                }
                Ok(())
            }
            Outcome::Error(e) => write!(f, "ERROR {}: {e}", self.name),
        }
    }
}

/// `# role: name` declared in a query file.
fn declared_role(query: &str) -> Option<String> {
    query.lines().find_map(|l| {
        let rest = l.trim().strip_prefix('#')?.trim();
        let role = rest.strip_prefix("role:")?.trim();
        (!role.is_empty()).then(|| role.to_string())
    })
}

/// Cases in `dir`, sorted by name.
pub fn discover(dir: &Path) -> std::io::Result<Vec<CqCase>> {
    let mut cases = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("rq") {
            continue;
        }
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
        let role = std::fs::read_to_string(&path).ok().as_deref().and_then(declared_role);
        cases.push(CqCase {
            expected: path.with_extension("csv"),
            query: path,
            name,
            role,
        });
    }
    cases.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(cases)
}

const TOLERANCE_DENOMINATOR: u64 = 1_000_000_000;

/// Equal text, or both decimal numbers within 1e-9.
pub fn cells_match(expected: &str, actual: &str) -> bool {
    if expected == actual {
        return true;
    }
    match (parse_rational(expected), parse_rational(actual)) {
        (Some(e), Some(a)) => {
            let tol = BigRational::new(1.into(), TOLERANCE_DENOMINATOR.into());
            (e - a).abs() <= tol
        }
        _ => false,
    }
}

fn read_expected(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>), String> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| e.to_string())?.iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    Ok((header, rows))
}

/// Cell-by-cell comparison. Rows are compared in order when `ordered`,
/// otherwise after sorting both sides.
pub fn compare(
    columns: &[String],
    mut actual: Vec<Vec<String>>,
    expected_csv: &str,
    ordered: bool,
) -> Result<Vec<Mismatch>, String> {
    let (header, mut expected) = read_expected(expected_csv)?;
    if header != columns {
        return Ok(vec![Mismatch {
            row: 0,
            column: String::new(),
            expected: header.join(","),
            actual: columns.join(","),
        }]);
    }
    if !ordered {
        expected.sort();
        actual.sort();
    }
    let mut out = Vec::new();
    for i in 0..expected.len().max(actual.len()) {
        let (e, a) = (expected.get(i), actual.get(i));
        for (c, column) in columns.iter().enumerate() {
            let ec = e.and_then(|r| r.get(c)).map_or("<missing row>", String::as_str);
            let ac = a.and_then(|r| r.get(c)).map_or("<missing row>", String::as_str);
            if !cells_match(ec, ac) {
                out.push(Mismatch {
                    row: i + 1,
                    column: column.clone(),
                    expected: ec.to_string(),
                    actual: ac.to_string(),
                });
            }
        }
    }
    Ok(out)
}

fn evaluate_case(g: &Graph, policy: &Policy, case: &CqCase) -> Result<(SolutionTable, bool), String> {
    let text = std::fs::read_to_string(&case.query).map_err(|e| format!("{}: {e}", case.query.display()))?;
    let q = parse_query(&text).map_err(|e| e.to_string())?;
    let role = case.role.as_deref().unwrap_or(DEFAULT_ROLE);
    let view;
    let target = if case.role.is_none() && policy.role(DEFAULT_ROLE).is_err() {
        g
    } else {
        view = apply_policy(g, policy, role).map_err(|e| e.to_string())?;
        &view
    };
    Ok((evaluate(target, &q), !q.order_by.is_empty()))
}

pub fn run_case(g: &Graph, policy: &Policy, case: &CqCase) -> CaseResult {
    let outcome = (|| {
        let expected = std::fs::read_to_string(&case.expected)
            .map_err(|e| format!("expected result {}: {e}", case.expected.display()))?;
        let (table, ordered) = evaluate_case(g, policy, case)?;
        let rows = table.len();
        let mismatches = compare(&table.columns, table.rendered(), &expected, ordered)?;
        Ok(if mismatches.is_empty() {
            Outcome::Pass { rows }
        } else {
            Outcome::Fail(mismatches)
        })
    })()
    .unwrap_or_else(Outcome::Error);
    CaseResult {
        name: case.name.clone(),
        outcome,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

impl Summary {
    pub fn total(&self) -> usize {
        self.passed + self.failed + self.errors
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.errors == 0
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} cases: {} passed, {} failed, {} errors",
            self.total(),
            self.passed,
            self.failed,
            self.errors
        )
    }
}

pub fn run_suite(g: &Graph, policy: &Policy, cases: &[CqCase]) -> (Vec<CaseResult>, Summary) {
    let mut summary = Summary::default();
    let results: Vec<CaseResult> = cases.iter().map(|c| run_case(g, policy, c)).collect();
    for r in &results {
        match r.outcome {
            Outcome::Pass { .. } => summary.passed += 1,
            Outcome::Fail(_) => summary.failed += 1,
            Outcome::Error(_) => summary.errors += 1,
        }
    }
    (results, summary)
}
