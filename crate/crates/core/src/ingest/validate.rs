use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::model::StudyBundle;
use crate::numeric::format_fixed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum WarningKind {
    BmiMismatch,
    AgeOutlier,
    DuplicateSession,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub kind: WarningKind,
    pub participant_id: String,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.participant_id, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.warnings.is_empty()
    }

    pub fn count(&self, kind: WarningKind) -> usize {
        self.warnings.iter().filter(|w| w.kind == kind).count()
    }
}

/// Maximum tolerated |recorded BMI - weight / height_m²|.
pub fn bmi_tolerance() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

pub const MAX_PLAUSIBLE_AGE: u32 = 120;

/// Data-quality warnings: BMI inconsistent with height and weight, implausible
/// ages, and repeated sessions (same participant, item, date and value under
/// different trial labels, or an exact repeat of the result key).
pub fn validate_bundle(b: &StudyBundle) -> ValidationReport {
    let mut warnings = Vec::new();
    let hundred = BigRational::from_integer(BigInt::from(100));
    for p in &b.participants {
        let metres = p.height.value() / &hundred;
        let computed = p.weight.value() / (&metres * &metres);
        if (&computed - p.bmi.value()).abs() > bmi_tolerance() {
            warnings.push(Warning {
                kind: WarningKind::BmiMismatch,
                participant_id: p.participant_id.clone(),
                message: format!(
                    "recorded BMI {} differs from weight/height² = {} by more than 0.5",
                    p.bmi,
                    format_fixed(&computed, 2)
                ),
            });
        }
        if p.age > MAX_PLAUSIBLE_AGE {
            warnings.push(Warning {
                kind: WarningKind::AgeOutlier,
                participant_id: p.participant_id.clone(),
                message: format!("age {} exceeds {MAX_PLAUSIBLE_AGE}", p.age),
            });
        }
    }

    let mut by_key: BTreeMap<_, usize> = BTreeMap::new();
    let mut by_value: BTreeMap<_, Vec<Option<&str>>> = BTreeMap::new();
    for r in &b.results {
        *by_key.entry(r.key()).or_default() += 1;
        by_value
            .entry((r.participant_id.as_str(), r.item.as_str(), r.session_date, r.value.value().clone()))
            .or_default()
            .push(r.trial.as_deref());
    }
    for ((pid, item, date, trial), n) in by_key {
        if n > 1 {
            warnings.push(Warning {
                kind: WarningKind::DuplicateSession,
                participant_id: pid.to_string(),
                message: format!(
                    "{n} results for {item} on {} trial {}",
                    date.map(|d| d.to_string()).unwrap_or_else(|| "undated".into()),
                    trial.unwrap_or("-")
                ),
            });
        }
    }
    for ((pid, item, date, value), trials) in by_value {
        let mut distinct = trials.clone();
        distinct.sort();
        distinct.dedup();
        if distinct.len() > 1 {
            warnings.push(Warning {
                kind: WarningKind::DuplicateSession,
                participant_id: pid.to_string(),
                message: format!(
                    "{item} value {} repeated on {} under trials {}",
                    format_fixed(&value, 2),
                    date.map(|d| d.to_string()).unwrap_or_else(|| "undated".into()),
                    distinct.iter().map(|t| t.unwrap_or("-")).collect::<Vec<_>>().join("/")
                ),
            });
        }
    }
    ValidationReport { warnings }
}
