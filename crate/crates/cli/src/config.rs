//! Scenario configuration files.
//!
//! A config is a JSON object with a `schema_version`, a scenario name and one
//! optional block per module. Unknown keys are rejected at every level.
//! Missing fields take their defaults, and [`ScenarioConfig::resolve`] fills
//! in everything that depends on the unit preset, so the effective config
//! written next to the outputs is complete and reparses to the same value.

use crate::error::CliError;
use serde::{Deserialize, Serialize};
use std::path::Path;
use wavequanta::thermal::SourceModel;
use wavequanta::Units;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub scenario: String,
    #[serde(default)]
    pub units: Units,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
    /// Seed for every random test state in the scenario.
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Deliberate defect used as a negative control by `verify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wigner: Option<WignerBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub helicity: Option<HelicityBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kinetics: Option<KineticsBlock>,
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Reference evolutions use frequencies 5 % too high.
    WrongDispersion,
}

impl Fault {
    pub const DISPERSION_SCALE: f64 = 1.05;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialProfile {
    GaussianBump,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeBlock {
    pub mass: f64,
    pub omega0: f64,
    pub kappa: f64,
    pub ell: f64,
    pub n_sites: usize,
    /// Step as a fraction of `1 / omega_max`.
    pub dt_factor: f64,
    pub steps: usize,
    pub sample_every: usize,
    pub initial: InitialProfile,
    pub amplitude: f64,
    /// Bump width in lattice sites.
    pub width: f64,
    pub n_quanta: u32,
    pub hbar: Option<f64>,
}

impl Default for LatticeBlock {
    fn default() -> Self {
        LatticeBlock {
            mass: 1.0,
            omega0: 0.0,
            kappa: 1.0,
            ell: 1.0,
            n_sites: 256,
            dt_factor: 0.01,
            steps: 10_000,
            sample_every: 100,
            initial: InitialProfile::GaussianBump,
            amplitude: 1.0,
            width: 8.0,
            n_quanta: 1,
            hbar: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WignerBlock {
    pub n: usize,
    pub ell: f64,
    /// Packet centre in units of the mode spacing.
    pub k0_cells: f64,
    /// Packet width parameter `g`; the spectral width is `1 / sqrt(g)`.
    pub g: f64,
    pub n_quanta: u32,
    pub hbar: Option<f64>,
    pub group_velocity: f64,
    pub times: Vec<f64>,
    /// Keep every `stride`-th node along each axis in the CSV output.
    pub csv_stride: usize,
    pub binary: bool,
}

impl Default for WignerBlock {
    fn default() -> Self {
        WignerBlock {
            n: 1024,
            ell: 1.0,
            k0_cells: 100.0,
            g: 400.0,
            n_quanta: 1,
            hbar: None,
            group_velocity: 1.0,
            times: vec![0.0, 50.0],
            csv_stride: 4,
            binary: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldBlock {
    pub box_len: f64,
    pub m_max: i32,
    pub epsilon: f64,
    pub mu: f64,
    pub c: Option<f64>,
    pub amplitude: f64,
    /// Real-space grid points per axis; `None` picks the smallest alias-free size.
    pub grid_n: Option<usize>,
    pub hbar: Option<f64>,
    pub n_photons: u32,
    pub t: f64,
}

impl Default for FieldBlock {
    fn default() -> Self {
        FieldBlock {
            box_len: 3.0,
            m_max: 2,
            epsilon: 2.0,
            mu: 1.5,
            c: None,
            amplitude: 0.3,
            grid_n: None,
            hbar: None,
            n_photons: 5,
            t: 0.7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneMode {
    pub m: [i32; 3],
    pub sigma: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HelicityBlock {
    pub k: f64,
    pub v: f64,
    pub points: usize,
    pub half_width: f64,
    pub t: f64,
    pub h0: Option<f64>,
    /// `dt = dt_ratio * h / v` at every level.
    pub dt_ratio: f64,
    pub levels: usize,
    pub fine_step: f64,
    pub epsilon: f64,
    pub mu: f64,
    pub c: Option<f64>,
    pub grid_n: usize,
    pub box_len: f64,
    pub plane_modes: Vec<PlaneMode>,
    /// Time step of the plane-wave check as a fraction of the period.
    pub period_fraction: f64,
}

impl Default for HelicityBlock {
    fn default() -> Self {
        HelicityBlock {
            k: 1.3,
            v: 0.8,
            points: 40,
            half_width: 1.5,
            t: 0.3,
            h0: None,
            dt_ratio: 0.5,
            levels: 4,
            fine_step: 1e-3,
            epsilon: 1.8,
            mu: 1.2,
            c: None,
            grid_n: 8,
            box_len: 3.0,
            plane_modes: vec![PlaneMode { m: [0, 0, 1], sigma: 1 }, PlaneMode { m: [1, -1, 2], sigma: -1 }],
            period_fraction: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KineticsBlock {
    pub model: SourceModel,
    pub temperature: Option<f64>,
    pub gamma: f64,
    pub epsilon: f64,
    pub mu: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub cells: usize,
    /// Final time in units of `1 / gamma`.
    pub t_end_gamma: f64,
    pub samples: usize,
    /// Initial state as a multiple of the equilibrium.
    pub initial_fill: f64,
    pub lambda_points: usize,
}

impl Default for KineticsBlock {
    fn default() -> Self {
        KineticsBlock {
            model: SourceModel::WienStimulated,
            temperature: None,
            gamma: 1.0,
            epsilon: 1.0,
            mu: 1.0,
            x_min: 1e-3,
            x_max: 30.0,
            cells: 512,
            t_end_gamma: 30.0,
            samples: 30,
            initial_fill: 0.0,
            lambda_points: 256,
        }
    }
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::Parse(format!(
                "unsupported schema_version {} (this build reads {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Default scenario when no config file is given.
    pub fn bare(scenario: &str) -> Self {
        ScenarioConfig {
            schema_version: SCHEMA_VERSION,
            scenario: scenario.to_string(),
            units: Units::Natural,
            output_dir: None,
            seed: default_seed(),
            fault: None,
            lattice: None,
            wigner: None,
            field: None,
            helicity: None,
            kinetics: None,
        }
    }

    /// Replace every unit-dependent default by its value.
    pub fn resolve(&mut self) {
        let u = self.units;
        if let Some(b) = &mut self.lattice {
            b.hbar.get_or_insert(u.hbar());
        }
        if let Some(b) = &mut self.wigner {
            b.hbar.get_or_insert(u.hbar());
        }
        if let Some(b) = &mut self.field {
            b.hbar.get_or_insert(u.hbar());
            b.c.get_or_insert(u.light_speed());
            let n = 4 * b.m_max.max(0) as usize + 2;
            b.grid_n.get_or_insert(n);
        }
        if let Some(b) = &mut self.helicity {
            b.c.get_or_insert(u.light_speed());
            b.h0.get_or_insert(0.2 / b.k);
        }
        if let Some(b) = &mut self.kinetics {
            b.temperature.get_or_insert(match u {
                Units::Natural => 1.0,
                Units::MevPs => 300.0,
            });
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_fills_defaults() {
        let cfg = ScenarioConfig::parse(r#"{"schema_version": 1, "scenario": "x", "lattice": {}}"#).unwrap();
        assert_eq!(cfg.lattice, Some(LatticeBlock::default()));
        assert_eq!(cfg.seed, 1);
        assert!(cfg.wigner.is_none());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        for bad in [
            r#"{"schema_version": 1, "scenario": "x", "colour": 1}"#,
            r#"{"schema_version": 1, "scenario": "x", "lattice": {"massss": 1}}"#,
            r#"{"schema_version": 1, "scenario": "x", "kinetics": {"model": "planck"}}"#,
        ] {
            assert!(matches!(ScenarioConfig::parse(bad), Err(CliError::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn schema_version_is_checked() {
        let err = ScenarioConfig::parse(r#"{"schema_version": 2, "scenario": "x"}"#).unwrap_err();
        assert!(err.to_string().contains("schema_version"));
    }

    #[test]
    fn resolved_config_round_trips() {
        let mut cfg = ScenarioConfig::bare("all");
        cfg.units = Units::MevPs;
        cfg.fault = Some(Fault::WrongDispersion);
        cfg.lattice = Some(LatticeBlock { dt_factor: 0.1 / 3.0, ..Default::default() });
        cfg.wigner = Some(WignerBlock::default());
        cfg.field = Some(FieldBlock::default());
        cfg.helicity = Some(HelicityBlock::default());
        cfg.kinetics = Some(KineticsBlock::default());
        cfg.resolve();
        let back = ScenarioConfig::parse(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.kinetics.unwrap().temperature, Some(300.0));
    }
}
