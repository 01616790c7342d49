use std::fmt;

use crate::pattern::TriplePattern;
use crate::rdf::{PrefixMap, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggFunc {
    Count,
    Sum,
    Avg,
    Min,
    Max,
}

impl AggFunc {
    pub fn name(self) -> &'static str {
        match self {
            AggFunc::Count => "COUNT",
            AggFunc::Sum => "SUM",
            AggFunc::Avg => "AVG",
            AggFunc::Min => "MIN",
            AggFunc::Max => "MAX",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aggregate {
    pub func: AggFunc,
    pub distinct: bool,
    /// `None` for `COUNT(*)`.
    pub arg: Option<String>,
    pub alias: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SelectItem {
    Var(String),
    Aggregate(Aggregate),
}

impl SelectItem {
    pub fn column(&self) -> &str {
        match self {
            SelectItem::Var(v) => v,
            SelectItem::Aggregate(a) => &a.alias,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projection {
    /// `SELECT *`
    All,
    Items(Vec<SelectItem>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    Const(Term),
    Bound(String),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
}

impl Expr {
    pub fn variables(&self, out: &mut Vec<String>) {
        match self {
            Expr::Var(v) | Expr::Bound(v) => out.push(v.clone()),
            Expr::Const(_) => {}
            Expr::Cmp(_, a, b) | Expr::And(a, b) | Expr::Or(a, b) => {
                a.variables(out);
                b.variables(out);
            }
            Expr::Not(e) => e.variables(out),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => write!(f, "?{v}"),
            Expr::Const(t) => write!(f, "{t}"),
            Expr::Bound(v) => write!(f, "BOUND(?{v})"),
            Expr::Cmp(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::And(a, b) => write!(f, "({a} && {b})"),
            Expr::Or(a, b) => write!(f, "({a} || {b})"),
            Expr::Not(e) => write!(f, "!{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderKey {
    pub var: String,
    pub descending: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub prefixes: PrefixMap,
    pub distinct: bool,
    pub projection: Projection,
    pub patterns: Vec<TriplePattern>,
    pub filters: Vec<Expr>,
    pub group_by: Vec<String>,
    pub order_by: Vec<OrderKey>,
    pub limit: Option<usize>,
    pub offset: Option<usize>,
}

impl Query {
    pub fn aggregates(&self) -> impl Iterator<Item = &Aggregate> {
        let items: &[SelectItem] = match &self.projection {
            Projection::All => &[],
            Projection::Items(items) => items,
        };
        items.iter().filter_map(|i| match i {
            SelectItem::Aggregate(a) => Some(a),
            SelectItem::Var(_) => None,
        })
    }

    /// True when the query groups (explicit GROUP BY or any aggregate).
    pub fn is_grouped(&self) -> bool {
        !self.group_by.is_empty() || self.aggregates().next().is_some()
    }

    /// Variables of the WHERE patterns in order of first appearance,
    /// excluding blank-node placeholders.
    pub fn pattern_variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for p in &self.patterns {
            for v in p.variables() {
                if !is_blank_var(v) && !out.iter().any(|o| o == v) {
                    out.push(v.to_string());
                }
            }
        }
        out
    }

    /// Output column names.
    pub fn columns(&self) -> Vec<String> {
        match &self.projection {
            Projection::All => self.pattern_variables(),
            Projection::Items(items) => items.iter().map(|i| i.column().to_string()).collect(),
        }
    }
}

/// Blank nodes in WHERE patterns become variables with this prefix.
pub(crate) const BLANK_VAR_PREFIX: &str = "_:";

pub(crate) fn is_blank_var(v: &str) -> bool {
    v.starts_with(BLANK_VAR_PREFIX)
}
