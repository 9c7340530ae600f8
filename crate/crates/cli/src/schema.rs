//! JSON system description.
//!
//! ```json
//! {
//!   "levels": [{"label": "g", "energy": 0.0}, ...],
//!   "transitions": [{"upper": "e", "lower": "g", "kappa": 1.0, "bath": "L", "temperature": 0.2}, ...],
//!   "drives": [{"upper": "e", "lower": "g", "rabi": 0.5}, ...],
//!   "bath_groups": {"L": ["eg", ...], "R": [...]}
//! }
//! ```
//!
//! Bath-group members name transitions by the concatenated labels of their
//! levels (`"ea"` for e → a) or by their index in `transitions`.

use std::collections::BTreeMap;

use qdrive_core::model::{LevelSpec, TransitionSpec};
use qdrive_core::{DriveSpec, SystemSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDoc {
    pub levels: Vec<LevelDoc>,
    pub transitions: Vec<TransitionDoc>,
    #[serde(default)]
    pub drives: Vec<DriveDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bath_groups: Option<BTreeMap<String, Vec<GroupMember>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelDoc {
    pub label: String,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDoc {
    pub upper: String,
    pub lower: String,
    pub kappa: f64,
    pub bath: String,
    pub temperature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveDoc {
    pub upper: String,
    pub lower: String,
    pub rabi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupMember {
    Index(usize),
    Name(String),
}

impl SpecDoc {
    pub fn from_spec(spec: &SystemSpec) -> Self {
        let bath_groups = spec.bath_groups().map(|groups| {
            groups
                .iter()
                .map(|(name, members)| {
                    let names = members.iter().map(|&k| GroupMember::Name(spec.transition_name(k))).collect();
                    (name.clone(), names)
                })
                .collect()
        });
        Self {
            levels: spec.levels().iter().map(|l| LevelDoc { label: l.label.clone(), energy: l.energy }).collect(),
            transitions: spec
                .transitions()
                .iter()
                .map(|t| TransitionDoc {
                    upper: t.upper.clone(),
                    lower: t.lower.clone(),
                    kappa: t.kappa,
                    bath: t.bath.clone(),
                    temperature: t.temperature,
                })
                .collect(),
            drives: spec
                .drives()
                .iter()
                .map(|d| DriveDoc { upper: d.upper.clone(), lower: d.lower.clone(), rabi: d.rabi })
                .collect(),
            bath_groups,
        }
    }

    pub fn into_spec(self) -> Result<SystemSpec, CliError> {
        let names: Vec<String> = self.transitions.iter().map(|t| format!("{}{}", t.upper, t.lower)).collect();
        let groups = match self.bath_groups {
            None => None,
            Some(groups) => {
                let mut out = BTreeMap::new();
                for (group, members) in groups {
                    let mut idx = Vec::with_capacity(members.len());
                    for member in members {
                        idx.push(resolve_member(&names, &group, member)?);
                    }
                    out.insert(group, idx);
                }
                Some(out)
            }
        };
        let levels = self.levels.into_iter().map(|l| LevelSpec { label: l.label, energy: l.energy }).collect();
        let transitions = self
            .transitions
            .into_iter()
            .map(|t| TransitionSpec {
                upper: t.upper,
                lower: t.lower,
                kappa: t.kappa,
                bath: t.bath,
                temperature: t.temperature,
            })
            .collect();
        let drives =
            self.drives.into_iter().map(|d| DriveSpec { upper: d.upper, lower: d.lower, rabi: d.rabi }).collect();
        Ok(SystemSpec::new(levels, transitions, drives, groups)?)
    }
}

fn resolve_member(names: &[String], group: &str, member: GroupMember) -> Result<usize, CliError> {
    match member {
        GroupMember::Index(k) => Ok(k),
        GroupMember::Name(name) => {
            let hits: Vec<usize> = (0..names.len()).filter(|&k| names[k] == name).collect();
            match hits.as_slice() {
                [k] => Ok(*k),
                [] => Err(CliError::Input(format!("bath_groups.{group}: no transition named {name:?}"))),
                _ => Err(CliError::Input(format!(
                    "bath_groups.{group}: transition name {name:?} is ambiguous; use its index"
                ))),
            }
        }
    }
}

/// Parses and validates a JSON system description. Syntax and schema errors
/// carry the line and column reported by the parser.
pub fn parse_spec(text: &str) -> Result<SystemSpec, CliError> {
    let doc: SpecDoc = serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid system JSON: {e}")))?;
    doc.into_spec()
}

pub fn to_json(spec: &SystemSpec) -> String {
    let mut text = serde_json::to_string_pretty(&SpecDoc::from_spec(spec)).expect("spec documents always serialize");
    text.push('\n');
    text
}
