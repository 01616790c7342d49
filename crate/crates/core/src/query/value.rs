use std::cmp::Ordering;
use std::fmt;

use chrono::NaiveDate;
use num_rational::BigRational;

use crate::numeric::{format_exact, format_fixed, literal_date, literal_value};
use crate::rdf::Term;
use crate::vocab::{XSD_DECIMAL, XSD_INTEGER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NumKind {
    Integer,
    /// Exact decimal.
    Decimal,
    /// Rounded half away from zero to this many places (AVG results).
    Rounded(usize),
}

/// An exact numeric aggregate result.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Number {
    pub value: BigRational,
    pub kind: NumKind,
}

impl Number {
    pub fn lexical(&self) -> String {
        match self.kind {
            NumKind::Integer => self.value.to_integer().to_string(),
            NumKind::Decimal => format_exact(&self.value).unwrap_or_else(|| format_fixed(&self.value, 18)),
            NumKind::Rounded(places) => format_fixed(&self.value, places),
        }
    }

    pub fn datatype(&self) -> &'static str {
        match self.kind {
            NumKind::Integer => XSD_INTEGER,
            _ => XSD_DECIMAL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Term(Term),
    Number(Number),
}

impl Value {
    /// Lexical form for literals and numbers, the IRI for IRIs, `_:label`
    /// for blank nodes.
    pub fn lexical(&self) -> String {
        match self {
            Value::Term(Term::Iri(i)) => i.to_string(),
            Value::Term(Term::Blank(b)) => format!("_:{b}"),
            Value::Term(Term::Literal(l)) => l.lexical().to_string(),
            Value::Number(n) => n.lexical(),
        }
    }

    /// Exact numeric value of numeric literals and numbers.
    pub fn numeric(&self) -> Option<BigRational> {
        match self {
            Value::Term(Term::Literal(l)) => literal_value(l),
            Value::Number(n) => Some(n.value.clone()),
            Value::Term(_) => None,
        }
    }

    pub fn date(&self) -> Option<NaiveDate> {
        match self {
            Value::Term(Term::Literal(l)) => literal_date(l),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lexical())
    }
}

fn rank(v: Option<&Value>) -> u8 {
    match v {
        None => 0,
        Some(Value::Term(Term::Blank(_))) => 1,
        Some(Value::Term(Term::Iri(_))) => 2,
        Some(v) if v.numeric().is_some() => 3,
        Some(v) if v.date().is_some() => 4,
        Some(_) => 5,
    }
}

/// Total order used by ORDER BY and MIN/MAX: unbound, blank nodes, IRIs,
/// numeric values (by value), dates (chronologically), then other literals
/// (by lexical form, datatype and language).
pub fn compare_values(a: Option<&Value>, b: Option<&Value>) -> Ordering {
    let (ra, rb) = (rank(a), rank(b));
    if ra != rb {
        return ra.cmp(&rb);
    }
    let (Some(a), Some(b)) = (a, b) else {
        return Ordering::Equal;
    };
    match ra {
        3 => a
            .numeric()
            .cmp(&b.numeric())
            .then_with(|| a.lexical().cmp(&b.lexical())),
        4 => a.date().cmp(&b.date()).then_with(|| a.lexical().cmp(&b.lexical())),
        _ => match (a, b) {
            (Value::Term(Term::Literal(x)), Value::Term(Term::Literal(y))) => (x.lexical(), x.datatype(), x.language())
                .cmp(&(y.lexical(), y.datatype(), y.language())),
            _ => a.lexical().cmp(&b.lexical()),
        },
    }
}

/// Query results: named columns and rows of optional values.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolutionTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<Value>>>,
    /// Non-fatal problems, such as non-numeric AVG input.
    pub warnings: Vec<String>,
}

impl SolutionTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn cell(&self, row: usize, column: &str) -> Option<&Value> {
        let c = self.column(column)?;
        self.rows.get(row)?.get(c)?.as_ref()
    }

    /// Rows rendered as strings, unbound cells empty.
    pub fn rendered(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|c| c.as_ref().map(Value::lexical).unwrap_or_default()).collect())
            .collect()
    }
}
