use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use chrono::NaiveDate;
use csv::StringRecord;

use super::model::*;
use super::{IngestConfig, IngestError};
use crate::numeric::Decimal;
use crate::rdf::PrefixMap;
use crate::vocab;

const STUDY_HEADER: &[&str] = &["id", "title", "year_start", "year_end", "doi"];
const PARTICIPANTS_HEADER: &[&str] = &["participant_id", "age", "sex", "height_cm", "weight_kg", "bmi"];
const ITEMS_HEADER: &[&str] = &["key", "label", "disposition_label", "unit", "datatype"];
const RESULTS_HEADER: &[&str] = &["participant_id", "test_item", "value", "session_date", "trial"];

/// One CSV table: its display name and data rows with source line numbers.
struct Table {
    file: String,
    rows: Vec<(u64, StringRecord)>,
}

impl Table {
    fn parse(file: &str, text: &str, header: &[&str]) -> Result<Table, IngestError> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let found = reader.headers().map_err(|e| csv_error(file, e))?.clone();
        if found.iter().ne(header.iter().copied()) {
            return Err(IngestError::Header {
                file: file.to_string(),
                expected: header.join(","),
                found: found.iter().collect::<Vec<_>>().join(","),
            });
        }
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| csv_error(file, e))?;
            let line = record.position().map_or(0, |p| p.line());
            rows.push((line, record));
        }
        Ok(Table {
            file: file.to_string(),
            rows,
        })
    }

    fn row_error(&self, line: u64, message: impl Into<String>) -> IngestError {
        IngestError::Row {
            file: self.file.clone(),
            line,
            message: message.into(),
        }
    }
}

fn csv_error(file: &str, e: csv::Error) -> IngestError {
    let line = e.position().map_or(0, |p| p.line());
    IngestError::Row {
        file: file.to_string(),
        line,
        message: e.to_string(),
    }
}

fn read(dir: &Path, name: &str) -> Result<String, IngestError> {
    let path = dir.join(name);
    if !path.is_file() {
        return Err(IngestError::MissingFile(path));
    }
    std::fs::read_to_string(&path).map_err(|source| IngestError::Io { path, source })
}

fn optional(field: &str) -> Option<&str> {
    let field = field.trim();
    (!field.is_empty()).then_some(field)
}

fn positive_decimal(t: &Table, line: u64, column: &str, text: &str) -> Result<Decimal, IngestError> {
    let d = Decimal::parse(text).ok_or_else(|| t.row_error(line, format!("{column}: not a decimal: {text:?}")))?;
    if *d.value() <= num_traits::Zero::zero() {
        return Err(t.row_error(line, format!("{column}: must be positive, got {text}")));
    }
    Ok(d)
}

fn is_study_id(id: &str) -> bool {
    !id.is_empty()
        && id
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_' || b == b'-')
}

fn parse_study(t: &Table) -> Result<StudyMetadata, IngestError> {
    let [(line, row)] = t.rows.as_slice() else {
        return Err(IngestError::File {
            file: t.file.clone(),
            message: format!("expected exactly one data row, found {}", t.rows.len()),
        });
    };
    let line = *line;
    let id = row[0].trim();
    if !is_study_id(id) {
        return Err(t.row_error(line, format!("id: {id:?} does not match [a-z0-9_-]+")));
    }
    let year = |i: usize, name: &str| {
        row[i]
            .trim()
            .parse::<i32>()
            .map_err(|_| t.row_error(line, format!("{name}: not a year: {:?}", &row[i])))
    };
    let (year_start, year_end) = (year(2, "year_start")?, year(3, "year_end")?);
    if year_start > year_end {
        return Err(t.row_error(line, format!("year_start {year_start} after year_end {year_end}")));
    }
    Ok(StudyMetadata {
        id: id.to_string(),
        title: row[1].trim().to_string(),
        year_start,
        year_end,
        doi: optional(&row[4]).map(str::to_string),
    })
}

fn parse_participants(t: &Table) -> Result<Vec<ParticipantRecord>, IngestError> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(t.rows.len());
    for (line, row) in &t.rows {
        let line = *line;
        let id = row[0].trim();
        if id.is_empty() {
            return Err(t.row_error(line, "participant_id: empty"));
        }
        if !seen.insert(id.to_string()) {
            return Err(IngestError::Duplicate {
                file: t.file.clone(),
                line,
                key: format!("participant_id={id}"),
            });
        }
        let age = row[1]
            .trim()
            .parse::<u32>()
            .map_err(|_| t.row_error(line, format!("age: not a non-negative integer: {:?}", &row[1])))?;
        let sex = match optional(&row[2]) {
            None => None,
            Some(code) => Some(Sex::parse(code).ok_or_else(|| t.row_error(line, format!("sex: expected f, m or d, got {code:?}")))?),
        };
        out.push(ParticipantRecord {
            participant_id: id.to_string(),
            age,
            sex,
            height: positive_decimal(t, line, "height_cm", &row[3])?,
            weight: positive_decimal(t, line, "weight_kg", &row[4])?,
            bmi: positive_decimal(t, line, "bmi", &row[5])?,
        });
    }
    Ok(out)
}

fn parse_items(t: &Table) -> Result<Vec<TestItemDef>, IngestError> {
    let prefixes = PrefixMap::default();
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(t.rows.len());
    for (line, row) in &t.rows {
        let line = *line;
        let key = row[0].trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return Err(t.row_error(line, format!("key: invalid item key {key:?}")));
        }
        if !seen.insert(key.to_string()) {
            return Err(IngestError::Duplicate {
                file: t.file.clone(),
                line,
                key: format!("key={key}"),
            });
        }
        let disposition_label = row[2].trim();
        if disposition_label.is_empty() {
            return Err(t.row_error(line, "disposition_label: empty"));
        }
        let dt_text = row[4].trim();
        let datatype = prefixes
            .expand_any(dt_text)
            .map_err(|e| t.row_error(line, format!("datatype: {e}")))?;
        let datatype = datatype.as_iri().unwrap_or_default().to_string();
        if !vocab::is_numeric_datatype(&datatype) {
            return Err(t.row_error(line, format!("datatype: {dt_text} is not numeric")));
        }
        out.push(TestItemDef {
            key: key.to_string(),
            label: row[1].trim().to_string(),
            disposition_label: disposition_label.to_string(),
            unit: row[3].trim().to_string(),
            datatype,
        });
    }
    Ok(out)
}

fn parse_results(
    t: &Table,
    participants: &[ParticipantRecord],
    items: &[TestItemDef],
) -> Result<Vec<ResultRecord>, IngestError> {
    let known: HashSet<&str> = participants.iter().map(|p| p.participant_id.as_str()).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(t.rows.len());
    for (line, row) in &t.rows {
        let line = *line;
        let pid = row[0].trim();
        if !known.contains(pid) {
            return Err(IngestError::Dangling {
                file: t.file.clone(),
                line,
                kind: "participant",
                id: pid.to_string(),
            });
        }
        let key = row[1].trim();
        let Some(item) = items.iter().find(|i| i.key == key) else {
            return Err(IngestError::Dangling {
                file: t.file.clone(),
                line,
                kind: "test item",
                id: key.to_string(),
            });
        };
        let value = Decimal::parse(&row[2])
            .ok_or_else(|| t.row_error(line, format!("value: not numeric: {:?}", &row[2])))?;
        if vocab::is_integer_datatype(&item.datatype) && !value.is_integral() {
            return Err(t.row_error(line, format!("value: {value} is not an integer")));
        }
        let session_date = match optional(&row[3]) {
            None => None,
            Some(d) => Some(
                NaiveDate::parse_from_str(d, "%Y-%m-%d")
                    .map_err(|_| t.row_error(line, format!("session_date: not an ISO date: {d:?}")))?,
            ),
        };
        let record = ResultRecord {
            participant_id: pid.to_string(),
            item: key.to_string(),
            value,
            session_date,
            trial: optional(&row[4]).map(str::to_string),
        };
        let k = (pid.to_string(), key.to_string(), session_date, record.trial.clone());
        if !seen.insert(k) {
            return Err(IngestError::Duplicate {
                file: t.file.clone(),
                line,
                key: format!(
                    "({pid}, {key}, {}, {})",
                    session_date.map(|d| d.to_string()).unwrap_or_default(),
                    record.trial.as_deref().unwrap_or("")
                ),
            });
        }
        out.push(record);
    }
    Ok(out)
}

/// Parses a `test_items.csv` table on its own.
pub fn parse_items_csv(file: &str, text: &str) -> Result<Vec<TestItemDef>, IngestError> {
    parse_items(&Table::parse(file, text, ITEMS_HEADER)?)
}

/// Loads and cross-references the four CSV tables of a bundle directory.
pub fn load_bundle(dir: &Path, config: &IngestConfig) -> Result<StudyBundle, IngestError> {
    let names = &config.files;
    let table = |name: &str, header: &[&str]| -> Result<Table, IngestError> {
        Table::parse(name, &read(dir, name)?, header)
    };
    let study = parse_study(&table(&names.study, STUDY_HEADER)?)?;
    let participants = parse_participants(&table(&names.participants, PARTICIPANTS_HEADER)?)?;
    let items = parse_items(&table(&names.test_items, ITEMS_HEADER)?)?;
    let results = parse_results(&table(&names.results, RESULTS_HEADER)?, &participants, &items)?;
    Ok(StudyBundle {
        study,
        participants,
        items,
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_bundle(dir: &Path, participants: &str, results: &str) {
        std::fs::write(dir.join("study.csv"), "id,title,year_start,year_end,doi\nst01,Pilot,2015,2016,\n").unwrap();
        std::fs::write(
            dir.join("participants.csv"),
            format!("participant_id,age,sex,height_cm,weight_kg,bmi\n{participants}"),
        )
        .unwrap();
        std::fs::write(
            dir.join("test_items.csv"),
            "key,label,disposition_label,unit,datatype\nhandgrip,Handgrip,grip strength,kg,xsd:decimal\n",
        )
        .unwrap();
        std::fs::write(
            dir.join("results.csv"),
            format!("participant_id,test_item,value,session_date,trial\n{results}"),
        )
        .unwrap();
    }

    #[test]
    fn minimal_bundle() {
        let dir = tempfile::tempdir().unwrap();
        write_bundle(dir.path(), "p001,8,f,130.0,26.5,15.7\n", "p001,handgrip,32.5,2015-03-02,left\n");
        let b = load_bundle(dir.path(), &IngestConfig::default()).unwrap();
        assert_eq!(b.counts(), (1, 1, 1));
        assert_eq!(b.results[0].value.lexical(), "32.5");
        assert_eq!(b.items[0].datatype, vocab::XSD_DECIMAL);
        assert_eq!(b.study.doi, None);
    }

    #[test]
    fn dangling_participant_names_row() {
        let dir = tempfile::tempdir().unwrap();
        write_bundle(dir.path(), "p001,8,f,130.0,26.5,15.7\n", "p001,handgrip,30,,\np999,handgrip,31,,\n");
        match load_bundle(dir.path(), &IngestConfig::default()).unwrap_err() {
            IngestError::Dangling { line, id, file, .. } => {
                assert_eq!((line, id.as_str(), file.as_str()), (3, "p999", "results.csv"));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn missing_file_named() {
        let dir = tempfile::tempdir().unwrap();
        write_bundle(dir.path(), "", "");
        std::fs::remove_file(dir.path().join("participants.csv")).unwrap();
        let err = load_bundle(dir.path(), &IngestConfig::default()).unwrap_err();
        assert!(err.to_string().contains("participants.csv"), "{err}");
    }

    #[test]
    fn row_level_errors() {
        let dir = tempfile::tempdir().unwrap();
        write_bundle(dir.path(), "p001,8,f,130.0,26.5,15.7\n", "p001,handgrip,strong,,\n");
        assert!(matches!(
            load_bundle(dir.path(), &IngestConfig::default()),
            Err(IngestError::Row { line: 2, .. })
        ));
        write_bundle(dir.path(), "p001,8,x,130.0,26.5,15.7\n", "");
        assert!(matches!(load_bundle(dir.path(), &IngestConfig::default()), Err(IngestError::Row { .. })));
        write_bundle(dir.path(), "p001,8,f,130.0,26.5,15.7\np001,9,m,131,27,15\n", "");
        assert!(matches!(
            load_bundle(dir.path(), &IngestConfig::default()),
            Err(IngestError::Duplicate { line: 3, .. })
        ));
        write_bundle(dir.path(), "p001,8,f,130.0,26.5,15.7\n", "p001,handgrip,30,2015-01-01,\np001,handgrip,31,2015-01-01,\n");
        assert!(matches!(load_bundle(dir.path(), &IngestConfig::default()), Err(IngestError::Duplicate { .. })));
    }

    #[test]
    fn header_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        write_bundle(dir.path(), "", "");
        std::fs::write(dir.path().join("results.csv"), "participant,test_item,value,session_date,trial\n").unwrap();
        assert!(matches!(
            load_bundle(dir.path(), &IngestConfig::default()),
            Err(IngestError::Header { .. })
        ));
    }

    #[test]
    fn custom_file_names() {
        let dir = tempfile::tempdir().unwrap();
        write_bundle(dir.path(), "p001,8,,130.0,26.5,15.7\n", "");
        std::fs::rename(dir.path().join("results.csv"), dir.path().join("scores.csv")).unwrap();
        let cfg = IngestConfig::parse("[files]\nresults = \"scores.csv\"\n").unwrap();
        let b = load_bundle(dir.path(), &cfg).unwrap();
        assert_eq!(b.participants[0].sex, None);
    }
}
