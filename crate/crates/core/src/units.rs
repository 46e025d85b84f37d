//! Unit presets.
//!
//! `Natural` sets hbar = c = k_B = 1. `MevPs` measures energy in meV, time in
//! ps, length in micrometres and temperature in kelvin, with h = 4.1 meV ps
//! and k_B = 0.086 meV/K.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Units {
    #[default]
    Natural,
    MevPs,
}

impl Units {
    /// Planck's constant h = 2 pi hbar.
    pub fn planck(self) -> f64 {
        match self {
            Units::Natural => 2.0 * PI,
            Units::MevPs => 4.1,
        }
    }

    pub fn hbar(self) -> f64 {
        self.planck() / (2.0 * PI)
    }

    pub fn boltzmann(self) -> f64 {
        match self {
            Units::Natural => 1.0,
            Units::MevPs => 0.086,
        }
    }

    /// Vacuum speed of light.
    pub fn light_speed(self) -> f64 {
        match self {
            Units::Natural => 1.0,
            // micrometres per picosecond
            Units::MevPs => 299.792_458,
        }
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Units::Natural => "natural",
            Units::MevPs => "mev-ps",
        })
    }
}

impl FromStr for Units {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "natural" => Ok(Units::Natural),
            "mev-ps" => Ok(Units::MevPs),
            other => Err(format!("unknown unit preset `{other}` (expected natural or mev-ps)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        assert!((Units::Natural.hbar() - 1.0).abs() < 1e-15);
        assert!((Units::MevPs.planck() - 4.1).abs() < 1e-15);
        assert_eq!("mev-ps".parse::<Units>().unwrap(), Units::MevPs);
        assert!("si".parse::<Units>().is_err());
        assert_eq!(Units::MevPs.to_string(), "mev-ps");
    }
}
