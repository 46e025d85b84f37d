//! One runner per module. Each returns its outputs in memory together with
//! the invariants it measured.

pub mod field;
pub mod helicity;
pub mod phonon;
pub mod thermal;
pub mod wigner;

use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::report::Outcome;
use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Module {
    Lattice,
    Wigner,
    Field,
    Helicity,
    Kinetics,
}

impl Module {
    pub const ALL: [Module; 5] = [Module::Lattice, Module::Wigner, Module::Field, Module::Helicity, Module::Kinetics];

    pub fn name(self) -> &'static str {
        match self {
            Module::Lattice => "lattice",
            Module::Wigner => "wigner",
            Module::Field => "field",
            Module::Helicity => "helicity",
            Module::Kinetics => "kinetics",
        }
    }

    pub fn present(self, cfg: &ScenarioConfig) -> bool {
        match self {
            Module::Lattice => cfg.lattice.is_some(),
            Module::Wigner => cfg.wigner.is_some(),
            Module::Field => cfg.field.is_some(),
            Module::Helicity => cfg.helicity.is_some(),
            Module::Kinetics => cfg.kinetics.is_some(),
        }
    }

    /// Add the module's default block when the config has none.
    pub fn ensure(self, cfg: &mut ScenarioConfig) {
        match self {
            Module::Lattice => _ = cfg.lattice.get_or_insert_with(Default::default),
            Module::Wigner => _ = cfg.wigner.get_or_insert_with(Default::default),
            Module::Field => _ = cfg.field.get_or_insert_with(Default::default),
            Module::Helicity => _ = cfg.helicity.get_or_insert_with(Default::default),
            Module::Kinetics => _ = cfg.kinetics.get_or_insert_with(Default::default),
        }
    }

    /// Run the module on a resolved config whose block is present.
    pub fn run(self, cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
        let missing = || CliError::Validation(format!("config has no `{}` block", self.name()));
        match self {
            Module::Lattice => phonon::run(cfg.lattice.as_ref().ok_or_else(missing)?, cfg.seed, cfg.fault),
            Module::Wigner => wigner::run(cfg.wigner.as_ref().ok_or_else(missing)?, cfg.fault),
            Module::Field => field::run(cfg.field.as_ref().ok_or_else(missing)?, cfg.seed, cfg.fault),
            Module::Helicity => helicity::run(cfg.helicity.as_ref().ok_or_else(missing)?, cfg.seed, cfg.fault),
            Module::Kinetics => thermal::run(cfg.kinetics.as_ref().ok_or_else(missing)?, cfg.units, cfg.fault),
        }
    }
}
