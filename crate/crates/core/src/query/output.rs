use crate::rdf::{PrefixMap, Term};

use super::value::{SolutionTable, Value};

/// RFC-4180 CSV: header of column names, full IRIs, lexical forms, empty
/// cells for unbound values.
pub fn to_csv(table: &SolutionTable) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(&table.columns).expect("in-memory write");
    for row in table.rendered() {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 input")
}

fn display_cell(v: Option<&Value>, pm: &PrefixMap) -> String {
    match v {
        None => String::new(),
        Some(Value::Term(t @ Term::Iri(_))) => pm.compact(t),
        Some(v) => v.lexical(),
    }
}

/// Aligned plain-text table with compacted IRIs.
pub fn to_text_table(table: &SolutionTable, pm: &PrefixMap) -> String {
    let header: Vec<String> = table.columns.iter().map(|c| format!("?{c}")).collect();
    let cells: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| r.iter().map(|c| display_cell(c.as_ref(), pm)).collect())
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |row: &[String]| {
        let padded: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join(" | ").trim_end().to_string()
    };
    let mut out = line(&header);
    out.push('\n');
    out.push_str(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-"));
    out.push('\n');
    for row in &cells {
        out.push_str(&line(row));
        out.push('\n');
    }
    out.push_str(&format!("({} row{})\n", cells.len(), if cells.len() == 1 { "" } else { "s" }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> SolutionTable {
        SolutionTable {
            columns: vec!["x".into(), "label".into()],
            rows: vec![
                vec![
                    Some(Value::Term(Term::iri("https://w3id.org/more#Handgrip").unwrap())),
                    Some(Value::Term(Term::string("Sit, Reach"))),
                ],
                vec![None, Some(Value::Term(Term::string("x")))],
            ],
            warnings: vec![],
        }
    }

    #[test]
    fn csv_quotes_and_full_iris() {
        assert_eq!(
            to_csv(&table()),
            "x,label\nhttps://w3id.org/more#Handgrip,\"Sit, Reach\"\n,x\n"
        );
    }

    #[test]
    fn text_table_compacts() {
        let text = to_text_table(&table(), &PrefixMap::default());
        assert!(text.contains("more:Handgrip"));
        assert!(text.ends_with("(2 rows)\n"));
    }
}
