//! Declarative description of a few-level open system and preset builders.
//!
//! A [`SystemSpec`] lists the energy levels, the thermal transitions (each
//! with its own decay rate, bath label and temperature) and the resonant
//! drives. Energies are in units of a reference gap and rates in units of a
//! reference decay rate; by convention the lowest level sits at energy 0,
//! but nothing downstream depends on that gauge except the reported energy.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::str::FromStr;

use crate::{Error, Result};

/// Largest supported number of levels (dense d² × d² generator).
pub const MAX_LEVELS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSpec {
    pub label: String,
    pub energy: f64,
}

/// Thermal transition `upper → lower` with spontaneous rate `kappa` into a
/// bath at `temperature`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionSpec {
    pub upper: String,
    pub lower: String,
    pub kappa: f64,
    pub bath: String,
    pub temperature: f64,
}

/// Resonant drive between two levels with Rabi coupling `rabi`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveSpec {
    pub upper: String,
    pub lower: String,
    pub rabi: f64,
}

impl LevelSpec {
    pub fn new(label: &str, energy: f64) -> Self {
        Self { label: label.to_string(), energy }
    }
}

impl TransitionSpec {
    pub fn new(upper: &str, lower: &str, kappa: f64, bath: &str, temperature: f64) -> Self {
        Self { upper: upper.to_string(), lower: lower.to_string(), kappa, bath: bath.to_string(), temperature }
    }
}

impl DriveSpec {
    pub fn new(upper: &str, lower: &str, rabi: f64) -> Self {
        Self { upper: upper.to_string(), lower: lower.to_string(), rabi }
    }
}

/// A validated system description.
///
/// Construction through [`SystemSpec::new`] checks every invariant and
/// resolves level labels to indices once, so the numerical modules can work
/// with plain indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    levels: Vec<LevelSpec>,
    transitions: Vec<TransitionSpec>,
    drives: Vec<DriveSpec>,
    bath_groups: Option<BTreeMap<String, Vec<usize>>>,
    transition_idx: Vec<(usize, usize)>,
    drive_idx: Vec<(usize, usize)>,
}

impl SystemSpec {
    pub fn new(
        levels: Vec<LevelSpec>,
        transitions: Vec<TransitionSpec>,
        drives: Vec<DriveSpec>,
        bath_groups: Option<BTreeMap<String, Vec<usize>>>,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidSpec(msg));
        let d = levels.len();
        if !(2..=MAX_LEVELS).contains(&d) {
            return invalid(format!("number of levels must be in 2..={MAX_LEVELS}, got {d}"));
        }
        for (i, level) in levels.iter().enumerate() {
            if level.label.is_empty() {
                return invalid(format!("levels[{i}]: empty label"));
            }
            if !level.energy.is_finite() {
                return invalid(format!("levels[{i}] ({}): energy must be finite", level.label));
            }
            if levels[..i].iter().any(|l| l.label == level.label) {
                return invalid(format!("levels[{i}]: duplicate label {:?}", level.label));
            }
        }
        let find = |what: &str, label: &str| -> Result<usize> {
            levels
                .iter()
                .position(|l| l.label == label)
                .ok_or_else(|| Error::InvalidSpec(format!("{what}: unknown level {label:?}")))
        };

        let mut transition_idx = Vec::with_capacity(transitions.len());
        for (k, t) in transitions.iter().enumerate() {
            let ctx = format!("transitions[{k}]");
            let (u, l) = (find(&ctx, &t.upper)?, find(&ctx, &t.lower)?);
            if !(levels[u].energy > levels[l].energy) {
                return invalid(format!(
                    "{ctx}: upper level {:?} must lie strictly above lower level {:?}",
                    t.upper, t.lower
                ));
            }
            if !(t.kappa >= 0.0 && t.kappa.is_finite()) {
                return invalid(format!("{ctx}: kappa must be finite and >= 0"));
            }
            if !(t.temperature >= 0.0 && t.temperature.is_finite()) {
                return invalid(format!("{ctx}: temperature must be finite and >= 0"));
            }
            if transition_idx.iter().any(|&p| same_pair(p, (u, l))) {
                return invalid(format!("{ctx}: duplicate transition for pair ({}, {})", t.upper, t.lower));
            }
            transition_idx.push((u, l));
        }

        let mut drive_idx = Vec::with_capacity(drives.len());
        for (k, dr) in drives.iter().enumerate() {
            let ctx = format!("drives[{k}]");
            let (u, l) = (find(&ctx, &dr.upper)?, find(&ctx, &dr.lower)?);
            if u == l {
                return invalid(format!("{ctx}: drive must connect two distinct levels"));
            }
            if !(dr.rabi >= 0.0 && dr.rabi.is_finite()) {
                return invalid(format!("{ctx}: rabi must be finite and >= 0"));
            }
            if drive_idx.iter().any(|&p| same_pair(p, (u, l))) {
                return invalid(format!("{ctx}: duplicate drive for pair ({}, {})", dr.upper, dr.lower));
            }
            drive_idx.push((u, l));
        }

        if let Some(groups) = &bath_groups {
            for (name, members) in groups {
                if let Some(&bad) = members.iter().find(|&&m| m >= transitions.len()) {
                    return invalid(format!("bath_groups[{name:?}]: transition index {bad} out of range"));
                }
            }
        }

        Ok(Self { levels, transitions, drives, bath_groups, transition_idx, drive_idx })
    }

    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[LevelSpec] {
        &self.levels
    }

    pub fn transitions(&self) -> &[TransitionSpec] {
        &self.transitions
    }

    pub fn drives(&self) -> &[DriveSpec] {
        &self.drives
    }

    pub fn bath_groups(&self) -> Option<&BTreeMap<String, Vec<usize>>> {
        self.bath_groups.as_ref()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn level_index(&self, label: &str) -> Option<usize> {
        self.levels.iter().position(|l| l.label == label)
    }

    /// (upper, lower) level indices of transition `k`.
    pub fn transition_levels(&self, k: usize) -> (usize, usize) {
        self.transition_idx[k]
    }

    /// (upper, lower) level indices of drive `k` as written in the spec.
    pub fn drive_levels(&self, k: usize) -> (usize, usize) {
        self.drive_idx[k]
    }

    /// Energy gap E_upper − E_lower of transition `k`.
    pub fn transition_gap(&self, k: usize) -> f64 {
        let (u, l) = self.transition_idx[k];
        self.levels[u].energy - self.levels[l].energy
    }

    /// Bose–Einstein occupancy of the bath mode resonant with transition `k`.
    pub fn occupancy(&self, k: usize) -> f64 {
        bose_occupancy(self.transition_gap(k), self.transitions[k].temperature)
            .expect("validated transitions have a positive gap")
    }

    /// Short name `<upper><lower>` of transition `k`, e.g. `"ea"`.
    pub fn transition_name(&self, k: usize) -> String {
        let t = &self.transitions[k];
        format!("{}{}", t.upper, t.lower)
    }

    /// The common temperature of all transitions, if there is exactly one.
    pub fn single_temperature(&self) -> Option<f64> {
        let mut temps = self.transitions.iter().map(|t| t.temperature);
        let first = temps.next()?;
        temps.all(|t| t == first).then_some(first)
    }

    /// Copy with every drive amplitude set to zero (the t < 0 generator).
    pub fn undriven(&self) -> Self {
        let mut out = self.clone();
        for d in &mut out.drives {
            d.rabi = 0.0;
        }
        out
    }

    /// Copy with every level energy shifted by `offset`.
    pub fn shifted(&self, offset: f64) -> Self {
        let mut out = self.clone();
        for l in &mut out.levels {
            l.energy += offset;
        }
        out
    }

    /// Copy with drive `k` set to `rabi`.
    pub fn with_rabi(&self, k: usize, rabi: f64) -> Result<Self> {
        let mut drives = self.drives.clone();
        drives.get_mut(k).ok_or_else(|| Error::Usage(format!("no drive with index {k}")))?.rabi = rabi;
        Self::new(self.levels.clone(), self.transitions.clone(), drives, self.bath_groups.clone())
    }

    /// Unordered level pairs touched by any transition or drive, each as
    /// (upper, lower) by energy, in first-appearance order.
    pub fn coupled_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for &(a, b) in self.transition_idx.iter().chain(&self.drive_idx) {
            let p = if self.levels[a].energy >= self.levels[b].energy { (a, b) } else { (b, a) };
            if !pairs.iter().any(|&q| same_pair(q, p)) {
                pairs.push(p);
            }
        }
        pairs
    }
}

fn same_pair(a: (usize, usize), b: (usize, usize)) -> bool {
    a == b || (a.0 == b.1 && a.1 == b.0)
}

/// Mean thermal occupation `1/(exp(gap/T) − 1)` of a bath mode.
///
/// Exactly zero at `temperature == 0`.
pub fn bose_occupancy(gap: f64, temperature: f64) -> Result<f64> {
    if !(gap > 0.0) {
        return Err(Error::Domain(format!("energy gap must be positive, got {gap}")));
    }
    if !(temperature >= 0.0) {
        return Err(Error::Domain(format!("temperature must be >= 0, got {temperature}")));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / libm::expm1(gap / temperature))
}

/// Λ configuration: levels a < b ≪ e with E_ba = 0.01 and E_ea = 1, both
/// upper-level decays at rate 1, no b → a decay, drive on a–e.
pub fn lambda_preset(omega: f64, temperature: f64) -> Result<SystemSpec> {
    SystemSpec::new(
        vec![LevelSpec::new("a", 0.0), LevelSpec::new("b", 0.01), LevelSpec::new("e", 1.0)],
        vec![
            TransitionSpec::new("e", "a", 1.0, "env", temperature),
            TransitionSpec::new("e", "b", 1.0, "env", temperature),
        ],
        vec![DriveSpec::new("e", "a", omega)],
        None,
    )
}

/// V configuration: levels g ≪ b < a with E_bg = 0.99 and E_ag = 1, both
/// decays to g at rate 1, no a → b decay, drive on g–a.
pub fn v_preset(omega: f64, temperature: f64) -> Result<SystemSpec> {
    SystemSpec::new(
        vec![LevelSpec::new("g", 0.0), LevelSpec::new("b", 0.99), LevelSpec::new("a", 1.0)],
        vec![
            TransitionSpec::new("a", "g", 1.0, "env", temperature),
            TransitionSpec::new("b", "g", 1.0, "env", temperature),
        ],
        vec![DriveSpec::new("a", "g", omega)],
        None,
    )
}

/// Which transition of the diamond is driven.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiamondMode {
    /// Drive a–e (Λ-type): low steady absorption.
    Avoid,
    /// Drive g–a (V-type): high steady absorption.
    Seek,
}

impl FromStr for DiamondMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "avoid" => Ok(Self::Avoid),
            "seek" => Ok(Self::Seek),
            other => Err(Error::Usage(format!("diamond mode must be \"avoid\" or \"seek\", got {other:?}"))),
        }
    }
}

/// Four-level diamond g < a < b < e with gaps (E_ag, E_bg, E_eb) =
/// (0.9, 1.1, 0.8) × E_ea. Transitions ea, ag couple to bath L and eb, bg to
/// bath R; all at rate 1.
pub fn diamond_preset(mode: DiamondMode, omega: f64, t_left: f64, t_right: f64) -> Result<SystemSpec> {
    let drive = match mode {
        DiamondMode::Avoid => DriveSpec::new("e", "a", omega),
        DiamondMode::Seek => DriveSpec::new("a", "g", omega),
    };
    let mut groups = BTreeMap::new();
    groups.insert("L".to_string(), vec![0, 1]);
    groups.insert("R".to_string(), vec![2, 3]);
    SystemSpec::new(
        vec![LevelSpec::new("g", 0.0), LevelSpec::new("a", 0.9), LevelSpec::new("b", 1.1), LevelSpec::new("e", 1.9)],
        vec![
            TransitionSpec::new("e", "a", 1.0, "L", t_left),
            TransitionSpec::new("a", "g", 1.0, "L", t_left),
            TransitionSpec::new("e", "b", 1.0, "R", t_right),
            TransitionSpec::new("b", "g", 1.0, "R", t_right),
        ],
        vec![drive],
        Some(groups),
    )
}
