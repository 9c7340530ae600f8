//! Named scenarios and command-line overrides.

use std::fmt;
use std::str::FromStr;

use qdrive_core::model::{diamond_preset, lambda_preset, v_preset, DiamondMode};
use qdrive_core::{InitialState, RunProtocol, SystemSpec};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioId {
    Fig1,
    Fig2,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
    Custom,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 9] = [
        ScenarioId::Fig1,
        ScenarioId::Fig2,
        ScenarioId::Fig3a,
        ScenarioId::Fig3b,
        ScenarioId::Fig4a,
        ScenarioId::Fig4b,
        ScenarioId::Fig5a,
        ScenarioId::Fig5b,
        ScenarioId::Custom,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioId::Fig1 => "fig1",
            ScenarioId::Fig2 => "fig2",
            ScenarioId::Fig3a => "fig3a",
            ScenarioId::Fig3b => "fig3b",
            ScenarioId::Fig4a => "fig4a",
            ScenarioId::Fig4b => "fig4b",
            ScenarioId::Fig5a => "fig5a",
            ScenarioId::Fig5b => "fig5b",
            ScenarioId::Custom => "custom",
        }
    }

    /// The preset system with its default parameters, or `None` for `custom`.
    ///
    /// fig1: Λ, Ω = 0.5, T = 0 (`--temp 0.1` gives the warm run).
    /// fig2: V, Ω = 0.5, T = 0 (`--temp 0.3` gives the warm run).
    /// fig3a/b: ◇ avoid/seek, Ω = 0.5 (`--rabi 0.4` for the weaker drive), T = 0.5.
    /// fig4a/b: ◇ seek, Ω = 0.5, (T_L, T_R) = (0.2, 0.4) / (0.4, 0.2).
    /// fig5a/b: ◇ avoid, same temperatures as fig4.
    pub fn preset(self) -> Option<SystemSpec> {
        use DiamondMode::{Avoid, Seek};
        let spec = match self {
            ScenarioId::Fig1 => lambda_preset(0.5, 0.0),
            ScenarioId::Fig2 => v_preset(0.5, 0.0),
            ScenarioId::Fig3a => diamond_preset(Avoid, 0.5, 0.5, 0.5),
            ScenarioId::Fig3b => diamond_preset(Seek, 0.5, 0.5, 0.5),
            ScenarioId::Fig4a => diamond_preset(Seek, 0.5, 0.2, 0.4),
            ScenarioId::Fig4b => diamond_preset(Seek, 0.5, 0.4, 0.2),
            ScenarioId::Fig5a => diamond_preset(Avoid, 0.5, 0.2, 0.4),
            ScenarioId::Fig5b => diamond_preset(Avoid, 0.5, 0.4, 0.2),
            ScenarioId::Custom => return None,
        };
        Some(spec.expect("preset parameters are valid"))
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL.into_iter().find(|id| id.as_str() == s).ok_or_else(|| {
            let known: Vec<&str> = Self::ALL.iter().map(|id| id.as_str()).collect();
            format!("unknown scenario {s:?} (expected one of {})", known.join(", "))
        })
    }
}

/// Parameter overrides applied on top of a preset or custom system.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    /// Rabi coupling of every drive.
    pub rabi: Option<f64>,
    /// Temperature of every transition.
    pub temp: Option<f64>,
    /// Temperature of the transitions in bath group `L`.
    pub temp_left: Option<f64>,
    /// Temperature of the transitions in bath group `R`.
    pub temp_right: Option<f64>,
    pub tmax: Option<f64>,
    pub rtol: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, spec: &SystemSpec) -> Result<SystemSpec, CliError> {
        let mut transitions = spec.transitions().to_vec();
        let mut drives = spec.drives().to_vec();
        if let Some(rabi) = self.rabi {
            drives.iter_mut().for_each(|d| d.rabi = rabi);
        }
        if let Some(t) = self.temp {
            transitions.iter_mut().for_each(|tr| tr.temperature = t);
        }
        for (group, temp) in [("L", self.temp_left), ("R", self.temp_right)] {
            let Some(t) = temp else { continue };
            let members = spec.bath_groups().and_then(|g| g.get(group)).ok_or_else(|| {
                CliError::Input(format!(
                    "--temp-{} needs a bath group {group:?}",
                    if group == "L" { "left" } else { "right" }
                ))
            })?;
            for &k in members {
                transitions[k].temperature = t;
            }
        }
        Ok(SystemSpec::new(spec.levels().to_vec(), transitions, drives, spec.bath_groups().cloned())?)
    }

    /// Run protocol shared by every scenario: t_max = 1000, samples every
    /// 0.1, a 2-unit undriven window, and a thermal start when all baths
    /// share one temperature (the undriven steady state otherwise).
    pub fn protocol(&self, spec: &SystemSpec) -> Result<RunProtocol, CliError> {
        let mut protocol = RunProtocol { initial_state: InitialState::default_for(spec), ..RunProtocol::default() };
        if let Some(t) = self.tmax {
            protocol.t_max = t;
        }
        if let Some(rtol) = self.rtol {
            protocol.rtol = rtol;
        }
        protocol.validate()?;
        Ok(protocol)
    }
}
