use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable naming the default policy file.
pub const POLICY_ENV: &str = "MORE_KG_POLICY";

#[derive(Debug, Parser)]
#[command(name = "morekg", version, about = "MO|RE motor performance knowledge graph toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load study bundles and write the knowledge graph.
    Build(BuildArgs),
    /// Run the rule set to a fixpoint over a graph.
    Materialize(MaterializeArgs),
    /// Evaluate a query file against a graph.
    Query(QueryArgs),
    /// Run a directory of competency-question cases.
    Cq(CqArgs),
    /// Write the view of a graph for one role.
    Redact(RedactArgs),
    /// Check a view against a role's policy.
    Audit(AuditArgs),
    /// Ontology schema utilities.
    Schema {
        #[command(subcommand)]
        command: SchemaCommand,
    },
    /// Rule set utilities.
    Rules {
        #[command(subcommand)]
        command: RulesCommand,
    },
    /// Load and check study bundles without emitting a graph.
    Validate(ValidateArgs),
    /// Generate a deterministic synthetic study bundle.
    GenFixture(GenFixtureArgs),
}

#[derive(Debug, Args)]
pub struct PolicyArg {
    /// Policy file; defaults to $MORE_KG_POLICY, then the built-in policy.
    #[arg(long, env = POLICY_ENV)]
    pub policy: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Bundle directories (one study each).
    #[arg(required = true)]
    pub bundles: Vec<PathBuf>,
    /// Output graph (.ttl or .nt).
    #[arg(short, long)]
    pub out: PathBuf,
    /// Ingest configuration (TOML).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Materialize with the rule set before writing.
    #[arg(long)]
    pub materialize: bool,
    /// Extra rules added after the built-in rules.
    #[arg(long, requires = "materialize")]
    pub rules: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MaterializeArgs {
    /// Input graph (.ttl or .nt).
    pub input: PathBuf,
    /// Output graph (.ttl or .nt).
    #[arg(short, long)]
    pub out: PathBuf,
    /// Extra rules file.
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// Use only the rules from --rules.
    #[arg(long, requires = "rules")]
    pub no_builtins: bool,
    /// Print iteration and per-rule counts to standard error.
    #[arg(long)]
    pub stats: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Table,
    Csv,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    /// Graph file (.ttl or .nt).
    pub kg: PathBuf,
    /// Query file.
    pub query: PathBuf,
    /// Evaluate over this role's view.
    #[arg(long)]
    pub role: Option<String>,
    #[command(flatten)]
    pub policy: PolicyArg,
    #[arg(long, value_enum, default_value_t = TableFormat::Table)]
    pub format: TableFormat,
    /// Print the join plan instead of evaluating.
    #[arg(long)]
    pub explain: bool,
}

#[derive(Debug, Args)]
pub struct CqArgs {
    /// Graph file (.ttl or .nt).
    pub kg: PathBuf,
    /// Directory of `<name>.rq` queries with `<name>.csv` expected results.
    pub cases: PathBuf,
    #[command(flatten)]
    pub policy: PolicyArg,
}

#[derive(Debug, Args)]
pub struct RedactArgs {
    /// Source graph (.ttl or .nt).
    pub kg: PathBuf,
    #[arg(long)]
    pub role: String,
    /// Output view (.ttl or .nt).
    #[arg(short, long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub policy: PolicyArg,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// View graph (.ttl or .nt).
    pub view: PathBuf,
    #[arg(long)]
    pub role: String,
    #[command(flatten)]
    pub policy: PolicyArg,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum SchemaCommand {
    /// Write the schema graph as Turtle.
    Export {
        /// Test item table; defaults to the built-in items.
        #[arg(long)]
        items: Option<PathBuf>,
        /// Add the policy's sensitivity annotations.
        #[arg(long)]
        annotate: bool,
        #[command(flatten)]
        policy: PolicyArg,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RulesCommand {
    /// Write the built-in rules (plus an optional rules file) as rule text.
    Export {
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(required = true)]
    pub bundles: Vec<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Exit 1 when there are warnings.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct GenFixtureArgs {
    /// Output directory; created when missing.
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 30)]
    pub participants: usize,
    #[arg(long, default_value_t = 2)]
    pub items: usize,
    #[arg(long, default_value = "st01")]
    pub study_id: String,
    /// Exact study years, e.g. 2015-2016.
    #[arg(long, value_parser = parse_range::<i32>, conflicts_with = "within")]
    pub years: Option<(i32, i32)>,
    /// Span for a random one to three year window.
    #[arg(long, value_parser = parse_range::<i32>, default_value = "2010-2024")]
    pub within: (i32, i32),
    /// Inclusive participant age range.
    #[arg(long, value_parser = parse_range::<u32>, default_value = "6-10")]
    pub ages: (u32, u32),
}

fn parse_range<T: std::str::FromStr + PartialOrd>(s: &str) -> Result<(T, T), String> {
    let (a, b) = s.split_once('-').ok_or_else(|| format!("expected LO-HI, got {s:?}"))?;
    let a = a.trim().parse::<T>().map_err(|_| format!("bad lower bound in {s:?}"))?;
    let b = b.trim().parse::<T>().map_err(|_| format!("bad upper bound in {s:?}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a, b))
}
