use std::fmt;

use chrono::NaiveDate;

use crate::numeric::Decimal;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StudyMetadata {
    pub id: String,
    pub title: String,
    pub year_start: i32,
    pub year_end: i32,
    pub doi: Option<String>,
}

impl StudyMetadata {
    pub fn years(&self) -> std::ops::RangeInclusive<i32> {
        self.year_start..=self.year_end
    }

    /// True when the study's years intersect `[from, to]`.
    pub fn overlaps(&self, from: i32, to: i32) -> bool {
        self.year_start <= to && from <= self.year_end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sex {
    Female,
    Male,
    Diverse,
}

impl Sex {
    pub fn parse(code: &str) -> Option<Sex> {
        match code {
            "f" => Some(Sex::Female),
            "m" => Some(Sex::Male),
            "d" => Some(Sex::Diverse),
            _ => None,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            Sex::Female => "f",
            Sex::Male => "m",
            Sex::Diverse => "d",
        }
    }
}

impl fmt::Display for Sex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticipantRecord {
    pub participant_id: String,
    pub age: u32,
    pub sex: Option<Sex>,
    /// Centimetres.
    pub height: Decimal,
    /// Kilograms.
    pub weight: Decimal,
    /// kg/m².
    pub bmi: Decimal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestItemDef {
    pub key: String,
    pub label: String,
    pub disposition_label: String,
    pub unit: String,
    /// Full XSD datatype IRI.
    pub datatype: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultRecord {
    pub participant_id: String,
    pub item: String,
    pub value: Decimal,
    pub session_date: Option<NaiveDate>,
    pub trial: Option<String>,
}

impl ResultRecord {
    /// The uniqueness key `(participant, item, session_date, trial)`.
    pub fn key(&self) -> (&str, &str, Option<NaiveDate>, Option<&str>) {
        (&self.participant_id, &self.item, self.session_date, self.trial.as_deref())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StudyBundle {
    pub study: StudyMetadata,
    pub participants: Vec<ParticipantRecord>,
    pub items: Vec<TestItemDef>,
    pub results: Vec<ResultRecord>,
}

impl StudyBundle {
    pub fn participant(&self, id: &str) -> Option<&ParticipantRecord> {
        self.participants.iter().find(|p| p.participant_id == id)
    }

    pub fn item(&self, key: &str) -> Option<&TestItemDef> {
        self.items.iter().find(|i| i.key == key)
    }

    /// `(participants, items, results)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.participants.len(), self.items.len(), self.results.len())
    }
}
