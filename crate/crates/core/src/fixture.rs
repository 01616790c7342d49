//! Seeded synthetic study bundles.
//!
//! All values are drawn as integer tenths, so the CSV output is a pure
//! function of the [`FixtureSpec`].

use std::path::Path;

use chrono::NaiveDate;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ingest::{ParticipantRecord, ResultRecord, Sex, StudyBundle, StudyMetadata, TestItemDef};
use crate::numeric::Decimal;
use crate::ontology::builtin_items;

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("at most {max} built-in test items are available, {requested} requested")]
    TooManyItems { requested: usize, max: usize },
    #[error("invalid fixture setting: {0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: String, source: csv::Error },
}

/// How the study's years are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Years {
    /// Exactly these years.
    Fixed(i32, i32),
    /// A random window of one to three years inside this span.
    Within(i32, i32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureSpec {
    pub seed: u64,
    pub participants: usize,
    pub items: usize,
    pub study_id: String,
    pub years: Years,
    /// Inclusive participant age range.
    pub ages: (u32, u32),
}

impl Default for FixtureSpec {
    fn default() -> Self {
        FixtureSpec {
            seed: 42,
            participants: 30,
            items: 2,
            study_id: "st01".into(),
            years: Years::Within(2010, 2024),
            ages: (6, 10),
        }
    }
}

/// `lo..=hi` tenths as a decimal string, e.g. 325 -> "32.5".
fn tenths(v: i64) -> Decimal {
    let sign = if v < 0 { "-" } else { "" };
    Decimal::parse(&format!("{sign}{}.{}", v.abs() / 10, v.abs() % 10)).expect("well-formed decimal")
}

fn round_tenths(r: &BigRational) -> i64 {
    let scaled = r * BigRational::from_integer(BigInt::from(10));
    let rounded = scaled.round();
    rounded.to_integer().try_into().expect("fixture values are small")
}

/// Result value range in tenths of the item's unit.
fn value_range(key: &str, age: u32) -> (i64, i64) {
    let age = age as i64;
    match key {
        "handgrip" => {
            let centre = 20 * age - 40;
            ((centre - 40).max(50), (centre + 40).clamp(90, 600))
        }
        "shuttle_run" => (200, 1200),
        "sit_and_reach" => (100, 350),
        "dash_20m" => (32, 60),
        _ => (10, 1000),
    }
}

pub fn generate(spec: &FixtureSpec) -> Result<StudyBundle, FixtureError> {
    let catalogue = builtin_items();
    if spec.items > catalogue.len() {
        return Err(FixtureError::TooManyItems {
            requested: spec.items,
            max: catalogue.len(),
        });
    }
    if spec.ages.0 > spec.ages.1 {
        return Err(FixtureError::Invalid(format!("age range {}-{}", spec.ages.0, spec.ages.1)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (year_start, year_end) = match spec.years {
        Years::Fixed(a, b) if a <= b => (a, b),
        Years::Within(a, b) if a <= b => {
            let start = rng.gen_range(a..=b);
            let len = rng.gen_range(0..=2);
            (start, (start + len).min(b))
        }
        Years::Fixed(a, b) | Years::Within(a, b) => {
            return Err(FixtureError::Invalid(format!("year range {a}-{b}")));
        }
    };
    let items: Vec<TestItemDef> = catalogue.into_iter().take(spec.items).collect();
    let study = StudyMetadata {
        id: spec.study_id.clone(),
        title: format!("Synthetic motor performance study {}", spec.study_id),
        year_start,
        year_end,
        doi: None,
    };

    let width = spec.participants.to_string().len().max(3);
    let mut participants = Vec::with_capacity(spec.participants);
    let mut results = Vec::with_capacity(spec.participants * items.len());
    for n in 1..=spec.participants {
        let participant_id = format!("p{n:0width$}");
        let age = rng.gen_range(spec.ages.0..=spec.ages.1);
        let sex = match rng.gen_range(0..100) {
            0..=48 => Some(Sex::Female),
            49..=97 => Some(Sex::Male),
            _ => Some(Sex::Diverse),
        };
        let height_t = (750 + 65 * age as i64 + rng.gen_range(-80..=80)).max(500);
        let bmi_target = rng.gen_range(135..=220);
        let h = BigRational::new(BigInt::from(height_t), BigInt::from(1000));
        let h2 = &h * &h;
        let weight_t = round_tenths(&(BigRational::new(BigInt::from(bmi_target), BigInt::from(10)) * &h2)).max(1);
        let bmi_t = round_tenths(&(BigRational::new(BigInt::from(weight_t), BigInt::from(10)) / &h2));
        participants.push(ParticipantRecord {
            participant_id: participant_id.clone(),
            age,
            sex,
            height: tenths(height_t),
            weight: tenths(weight_t),
            bmi: tenths(bmi_t),
        });
        for item in &items {
            let (lo, hi) = value_range(&item.key, age);
            let value = tenths(rng.gen_range(lo..=hi));
            let year = rng.gen_range(year_start..=year_end);
            let day = rng.gen_range(0..365);
            let session_date = NaiveDate::from_ymd_opt(year, 1, 1).map(|d| d + chrono::Days::new(day));
            results.push(ResultRecord {
                participant_id: participant_id.clone(),
                item: item.key.clone(),
                value,
                session_date,
                trial: None,
            });
        }
    }
    Ok(StudyBundle {
        study,
        participants,
        items,
        results,
    })
}

fn compact_datatype(iri: &str) -> String {
    crate::rdf::PrefixMap::default()
        .split(iri)
        .map(|(p, l)| format!("{p}:{l}"))
        .unwrap_or_else(|| iri.to_string())
}

/// Writes the four CSV tables of `b` into `dir` (created if missing).
pub fn write_bundle(b: &StudyBundle, dir: &Path) -> Result<(), FixtureError> {
    std::fs::create_dir_all(dir).map_err(|source| FixtureError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let table = |name: &str, header: &[&str], rows: Vec<Vec<String>>| -> Result<(), FixtureError> {
        let path = dir.join(name);
        let err = |source| FixtureError::Csv {
            path: path.display().to_string(),
            source,
        };
        let mut w = csv::Writer::from_path(&path).map_err(err)?;
        w.write_record(header).map_err(err)?;
        for row in rows {
            w.write_record(&row).map_err(err)?;
        }
        w.flush().map_err(|source| FixtureError::Io {
            path: path.display().to_string(),
            source,
        })
    };
    let s = &b.study;
    table(
        "study.csv",
        &["id", "title", "year_start", "year_end", "doi"],
        vec![vec![
            s.id.clone(),
            s.title.clone(),
            s.year_start.to_string(),
            s.year_end.to_string(),
            s.doi.clone().unwrap_or_default(),
        ]],
    )?;
    table(
        "participants.csv",
        &["participant_id", "age", "sex", "height_cm", "weight_kg", "bmi"],
        b.participants
            .iter()
            .map(|p| {
                vec![
                    p.participant_id.clone(),
                    p.age.to_string(),
                    p.sex.map(|s| s.code().to_string()).unwrap_or_default(),
                    p.height.lexical().to_string(),
                    p.weight.lexical().to_string(),
                    p.bmi.lexical().to_string(),
                ]
            })
            .collect(),
    )?;
    table(
        "test_items.csv",
        &["key", "label", "disposition_label", "unit", "datatype"],
        b.items
            .iter()
            .map(|i| {
                vec![
                    i.key.clone(),
                    i.label.clone(),
                    i.disposition_label.clone(),
                    i.unit.clone(),
                    compact_datatype(&i.datatype),
                ]
            })
            .collect(),
    )?;
    table(
        "results.csv",
        &["participant_id", "test_item", "value", "session_date", "trial"],
        b.results
            .iter()
            .map(|r| {
                vec![
                    r.participant_id.clone(),
                    r.item.clone(),
                    r.value.lexical().to_string(),
                    r.session_date.map(|d| d.format("%Y-%m-%d").to_string()).unwrap_or_default(),
                    r.trial.clone().unwrap_or_default(),
                ]
            })
            .collect(),
    )?;
    Ok(())
}
