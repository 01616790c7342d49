use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

use crate::rdf::{PrefixError, PrefixMap, Term};

/// Policy shipped with the toolkit.
pub const DEFAULT_POLICY: &str = include_str!("default.policy");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SensitivityLevel {
    Public,
    Identifying,
    Health,
}

impl SensitivityLevel {
    pub const ALL: [SensitivityLevel; 3] = [SensitivityLevel::Public, SensitivityLevel::Identifying, SensitivityLevel::Health];

    pub fn as_str(self) -> &'static str {
        match self {
            SensitivityLevel::Public => "public",
            SensitivityLevel::Identifying => "identifying",
            SensitivityLevel::Health => "health",
        }
    }
}

impl FromStr for SensitivityLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SensitivityLevel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| format!("unknown sensitivity level {s:?}"))
    }
}

impl fmt::Display for SensitivityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
pub enum PolicyError {
    #[error("{path}: {message}")]
    Read { path: String, message: String },
    #[error("policy: {0}")]
    Parse(String),
    #[error("policy: {0}")]
    UnknownLevel(String),
    #[error("policy target {target:?}: {source}")]
    Prefix { target: String, source: PrefixError },
    #[error("policy annotates {0} with more than one level")]
    ConflictingAnnotation(Term),
    #[error("policy defines no roles")]
    NoRoles,
    #[error("policy defines role {0:?} more than once")]
    DuplicateRole(String),
    #[error("role {role:?} generalizes {target}, which carries no sensitivity annotation")]
    UnannotatedGeneralization { role: String, target: Term },
    #[error("role {role:?} generalizes {target} more than once")]
    DuplicateGeneralization { role: String, target: Term },
    #[error("role {role:?}: band width for {target} must be positive")]
    ZeroWidth { role: String, target: Term },
    #[error("unknown role {0:?}")]
    UnknownRole(String),
}

/// Replace values by bands `lo–hi` of the given width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneralizationSpec {
    pub width: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Role {
    pub name: String,
    /// Always contains [`SensitivityLevel::Public`].
    pub allowed: BTreeSet<SensitivityLevel>,
    pub generalizations: BTreeMap<Term, GeneralizationSpec>,
}

impl Role {
    pub fn allows(&self, level: SensitivityLevel) -> bool {
        self.allowed.contains(&level)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Policy {
    pub note: Option<String>,
    pub annotations: BTreeMap<Term, SensitivityLevel>,
    pub roles: Vec<Role>,
}

impl Policy {
    /// Validates and assembles a policy.
    pub fn new(
        note: Option<String>,
        annotations: BTreeMap<Term, SensitivityLevel>,
        roles: Vec<Role>,
    ) -> Result<Policy, PolicyError> {
        if roles.is_empty() {
            return Err(PolicyError::NoRoles);
        }
        let mut names = BTreeSet::new();
        for r in &roles {
            if !names.insert(r.name.as_str()) {
                return Err(PolicyError::DuplicateRole(r.name.clone()));
            }
            for (target, spec) in &r.generalizations {
                if !annotations.contains_key(target) {
                    return Err(PolicyError::UnannotatedGeneralization {
                        role: r.name.clone(),
                        target: target.clone(),
                    });
                }
                if spec.width == 0 {
                    return Err(PolicyError::ZeroWidth {
                        role: r.name.clone(),
                        target: target.clone(),
                    });
                }
            }
        }
        let roles = roles
            .into_iter()
            .map(|mut r| {
                r.allowed.insert(SensitivityLevel::Public);
                r
            })
            .collect();
        Ok(Policy { note, annotations, roles })
    }

    pub fn parse(text: &str) -> Result<Policy, PolicyError> {
        let file: PolicyFile = toml::from_str(text).map_err(|e| PolicyError::Parse(e.to_string()))?;
        let mut pm = PrefixMap::default();
        for (prefix, ns) in &file.prefixes {
            pm.insert(prefix, ns);
        }
        let expand = |target: &str| {
            pm.expand_any(target).map_err(|source| PolicyError::Prefix {
                target: target.to_string(),
                source,
            })
        };
        let level = |s: &str| s.parse::<SensitivityLevel>().map_err(PolicyError::UnknownLevel);

        let mut annotations = BTreeMap::new();
        for a in &file.annotations {
            let target = expand(&a.target)?;
            let level = level(&a.level)?;
            if annotations.insert(target.clone(), level).is_some_and(|prev| prev != level) {
                return Err(PolicyError::ConflictingAnnotation(target));
            }
        }
        let mut roles = Vec::new();
        for r in &file.roles {
            let allowed = r.allow.iter().map(|l| level(l)).collect::<Result<_, _>>()?;
            let mut generalizations = BTreeMap::new();
            for g in &r.generalize {
                let target = expand(&g.target)?;
                if generalizations
                    .insert(target.clone(), GeneralizationSpec { width: g.width })
                    .is_some()
                {
                    return Err(PolicyError::DuplicateGeneralization {
                        role: r.name.clone(),
                        target,
                    });
                }
            }
            roles.push(Role {
                name: r.name.clone(),
                allowed,
                generalizations,
            });
        }
        Policy::new(file.note, annotations, roles)
    }

    /// Level of `target`; unannotated targets are public.
    pub fn level(&self, target: &Term) -> SensitivityLevel {
        self.annotations.get(target).copied().unwrap_or(SensitivityLevel::Public)
    }

    pub fn role(&self, name: &str) -> Result<&Role, PolicyError> {
        self.roles
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| PolicyError::UnknownRole(name.to_string()))
    }

    pub fn role_names(&self) -> impl Iterator<Item = &str> {
        self.roles.iter().map(|r| r.name.as_str())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolicyFile {
    note: Option<String>,
    #[serde(default)]
    prefixes: BTreeMap<String, String>,
    #[serde(default)]
    annotations: Vec<AnnotationEntry>,
    #[serde(default)]
    roles: Vec<RoleEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AnnotationEntry {
    target: String,
    level: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RoleEntry {
    name: String,
    #[serde(default)]
    allow: Vec<String>,
    #[serde(default)]
    generalize: Vec<GeneralizeEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneralizeEntry {
    target: String,
    width: u32,
}

pub fn load_policy(path: &Path) -> Result<Policy, PolicyError> {
    let text = std::fs::read_to_string(path).map_err(|e| PolicyError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Policy::parse(&text)
}

pub fn default_policy() -> Policy {
    Policy::parse(DEFAULT_POLICY).expect("shipped policy is valid")
}
