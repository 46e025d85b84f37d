//! Free electromagnetic field in a homogeneous, isotropic, non-dispersive medium.
//!
//! Field equations are written with the vacuum speed `c` explicit:
//!
//! ```text
//! eps dE/dt = c curl H - j        mu dH/dt = -c curl E
//! E = -(1/c) dA/dt                B = curl A = mu H
//! ```
//!
//! The Riemann-Silberstein vector `F = sqrt(eps) E + i sqrt(mu) H` then obeys
//! `dF/dt = -i v curl F - j / sqrt(eps)` with `v = c / sqrt(eps mu)`.

pub mod modes;
pub mod residual;
pub mod wigner3d;

pub use modes::{
    action_area_3d, normalize_photons, photon_action_wave, polarization_basis, potential_from_psi,
    random_transverse_modes, PhotonActionWave, PhotonMode, PhotonModeSet, PhotonPsi,
};
pub use residual::{
    circular_plane_wave, curl_evolution_residual, damped_standing_wave, energy_flow_residual,
    CircularWave,
};
pub use wigner3d::{wigner_3d, Wigner3d};

use crate::error::{invalid, Error, Result};
use crate::spectral::{Grid3, VectorField};
use crate::Complex64;
use serde::{Deserialize, Serialize};

/// Relative slack allowed below `epsilon = 1`.
const EPS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumParams {
    pub epsilon: f64,
    pub mu: f64,
    /// Vacuum speed of light.
    pub c: f64,
}

impl Default for MediumParams {
    fn default() -> Self {
        MediumParams {
            epsilon: 1.0,
            mu: 1.0,
            c: 1.0,
        }
    }
}

impl MediumParams {
    pub fn new(epsilon: f64, mu: f64, c: f64) -> Result<Self> {
        let m = MediumParams { epsilon, mu, c };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 1.0 - EPS_SLACK && self.epsilon.is_finite()) {
            return Err(invalid("epsilon", format!("must be >= 1, got {}", self.epsilon)));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(invalid("mu", format!("must be positive, got {}", self.mu)));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(invalid("c", format!("must be positive, got {}", self.c)));
        }
        Ok(())
    }

    /// Phase velocity `c / sqrt(eps mu)`.
    pub fn v(&self) -> f64 {
        self.c / (self.epsilon * self.mu).sqrt()
    }

    /// Effective oscillator mass of a potential mode, `1 / (mu v^2)`.
    pub fn mode_mass(&self) -> f64 {
        1.0 / (self.mu * self.v() * self.v())
    }
}

fn check_same(a: &VectorField, b: &VectorField) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch(format!("{:?} vs {:?}", a.grid, b.grid)));
    }
    Ok(())
}

/// `F = sqrt(eps) E + i sqrt(mu) H` from real fields.
pub fn riemann_silberstein(e: &VectorField, h: &VectorField, medium: &MediumParams) -> Result<VectorField> {
    check_same(e, h)?;
    let se = medium.epsilon.sqrt();
    let sm = medium.mu.sqrt();
    let i = Complex64::i();
    let comps = std::array::from_fn(|d| {
        e.comps[d]
            .iter()
            .zip(&h.comps[d])
            .map(|(ev, hv)| ev.re * se + i * (hv.re * sm))
            .collect()
    });
    Ok(VectorField { grid: e.grid, comps })
}

/// Energy density `w = F.F*/2` and flux `Y = i v F x F*/2`.
pub fn energy_and_poynting(f: &VectorField, medium: &MediumParams) -> (Vec<f64>, [Vec<f64>; 3]) {
    let n = f.grid.cells();
    let v = medium.v();
    let mut w = vec![0.0; n];
    let mut y = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for idx in 0..n {
        let fv = f.at(idx);
        let fc = fv.map(|z| z.conj());
        w[idx] = 0.5 * fv.dot(&fc).re;
        let cross = fv.cross(&fc) * Complex64::new(0.0, 0.5 * v);
        for d in 0..3 {
            y[d][idx] = cross[d].re;
        }
    }
    (w, y)
}

/// Snapshot of the four real fields together with `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSnapshot {
    pub e: VectorField,
    pub b: VectorField,
    pub d: VectorField,
    pub h: VectorField,
    pub f: VectorField,
    pub medium: MediumParams,
}

impl FieldSnapshot {
    /// Build from `E` and `B`; imaginary parts of the inputs are discarded.
    pub fn new(e: &VectorField, b: &VectorField, medium: MediumParams) -> Result<Self> {
        check_same(e, b)?;
        let real = |f: &VectorField, s: f64| VectorField {
            grid: f.grid,
            comps: f.comps.clone().map(|c| c.into_iter().map(|z| Complex64::from(z.re * s)).collect()),
        };
        let e = real(e, 1.0);
        let b = real(b, 1.0);
        let d = real(&e, medium.epsilon);
        let h = real(&b, 1.0 / medium.mu);
        let f = riemann_silberstein(&e, &h, &medium)?;
        Ok(FieldSnapshot { e, b, d, h, f, medium })
    }

    pub fn grid(&self) -> Grid3 {
        self.e.grid
    }

    /// `w = (E.D + H.B)/2` evaluated from the real fields.
    pub fn energy_density_direct(&self) -> Vec<f64> {
        (0..self.grid().cells())
            .map(|i| {
                let ed: f64 = (0..3).map(|c| self.e.comps[c][i].re * self.d.comps[c][i].re).sum();
                let hb: f64 = (0..3).map(|c| self.h.comps[c][i].re * self.b.comps[c][i].re).sum();
                0.5 * (ed + hb)
            })
            .collect()
    }

    /// `c E x H` evaluated from the real fields.
    pub fn poynting_direct(&self) -> [Vec<f64>; 3] {
        let n = self.grid().cells();
        let c = self.medium.c;
        let mut y = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        for i in 0..n {
            let e = self.e.at(i).map(|z| z.re);
            let h = self.h.at(i).map(|z| z.re);
            let s = e.cross(&h) * c;
            for d in 0..3 {
                y[d][i] = s[d];
            }
        }
        y
    }

    /// Total energy `int w d^3x` by the periodic trapezoid rule.
    pub fn total_energy(&self) -> f64 {
        let (w, _) = energy_and_poynting(&self.f, &self.medium);
        w.iter().sum::<f64>() * self.grid().cell_volume()
    }
}
