//! A SPARQL subset: basic graph patterns, FILTER, GROUP BY with COUNT, SUM,
//! AVG, MIN and MAX, ORDER BY, DISTINCT, LIMIT and OFFSET.

mod ast;
mod eval;
mod explain;
mod output;
mod parser;
mod value;

use thiserror::Error;

use crate::lexer::{Pos, SyntaxError};
use crate::rdf::PrefixError;

pub use ast::{AggFunc, Aggregate, CmpOp, Expr, OrderKey, Projection, Query, SelectItem};
pub use eval::{evaluate, evaluate_with, EvalOptions};
pub use explain::{explain, PlanDescription, PlanStep};
pub use output::{to_csv, to_text_table};
pub use parser::parse_query;
pub use value::{compare_values, NumKind, Number, SolutionTable, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("{pos}: {source}")]
    Prefix { pos: Pos, source: PrefixError },
    #[error("projected variable ?{0} is neither grouped nor aggregated")]
    Ungrouped(String),
    #[error("variable ?{0} does not occur in the WHERE clause")]
    UnknownVariable(String),
    #[error("duplicate output column ?{0}")]
    DuplicateColumn(String),
}
