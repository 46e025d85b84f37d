//! `photon-field`: random transverse mode sets, their energy by every route,
//! and the Riemann-Silberstein evolution law on snapshots.

use crate::config::{Fault, FieldBlock};
use crate::error::{invalid, CliError};
use crate::report::{Check, Outcome};
use serde::Serialize;
use std::f64::consts::PI;
use wavequanta::em::*;
use wavequanta::gridio::BinaryGrid;
use wavequanta::spectral::{Grid3, VectorField};

pub const ENERGY_ROUTE_TOL: f64 = 1e-6;
pub const CONSERVATION_TOL: f64 = 1e-12;
pub const DUAL_TOL: f64 = 1e-12;
pub const RESIDUAL_TOL: f64 = 1e-6;
pub const PHOTON_TOL: f64 = 1e-8;

#[derive(Debug, Serialize)]
struct EnergyReport {
    modes: usize,
    grid_n: usize,
    energy_x_space: f64,
    energy_k_space: f64,
    energy_action: f64,
    energy_phase_space: f64,
    max_route_difference: f64,
    energy_at_t: f64,
    t: f64,
    photon_number: f64,
    normalized_photons: u32,
    normalized_action_area_over_h: f64,
    normalized_wigner_total: f64,
    dual_w_difference: f64,
    dual_y_difference: f64,
    curl_residual: f64,
    energy_flow_residual: f64,
    residual_dt: f64,
}

fn validate(b: &FieldBlock) -> Result<(MediumParams, Grid3), CliError> {
    if b.m_max < 1 {
        return Err(invalid("field.m_max", "need at least one mode shell"));
    }
    if !(b.box_len > 0.0 && b.box_len.is_finite()) {
        return Err(invalid("field.box_len", format!("must be positive, got {}", b.box_len)));
    }
    if !(b.amplitude > 0.0 && b.amplitude.is_finite()) {
        return Err(invalid("field.amplitude", format!("must be positive, got {}", b.amplitude)));
    }
    if b.n_photons == 0 {
        return Err(invalid("field.n_photons", "must be at least 1"));
    }
    if !b.t.is_finite() {
        return Err(invalid("field.t", "must be finite"));
    }
    let need = 4 * b.m_max as usize + 2;
    let n = b.grid_n.unwrap_or(need);
    if n < need {
        return Err(invalid("field.grid_n", format!("products of modes up to {} alias below {need} points", b.m_max)));
    }
    let medium = MediumParams::new(b.epsilon, b.mu, b.c.unwrap_or(1.0))?;
    Ok((medium, Grid3::new(n, b.box_len)?))
}

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

pub fn run(b: &FieldBlock, seed: u64, fault: Option<Fault>) -> Result<Outcome, CliError> {
    let (medium, grid) = validate(b)?;
    let hbar = b.hbar.unwrap_or(1.0);
    let set = random_transverse_modes(b.box_len, b.m_max, medium, b.amplitude, seed)?;

    let e_x = set.energy_x_space(grid)?;
    let e_k = set.energy_k_space();
    let psi = photon_action_wave(&set, hbar)?;
    let e_w = psi.energy();
    let v = medium.v();
    let e_p = wigner_3d(&psi)?.weighted_total(|p| v * p.norm());
    let route = [e_k, e_w, e_p].iter().fold(0.0_f64, |m, e| m.max((e - e_x).abs() / e_x));
    let later = set.evolve(b.t);
    let e_t = later.energy_x_space(grid)?;

    let normed = normalize_photons(&psi, b.n_photons)?;
    let area_over_h = action_area_3d(&normed) / (2.0 * PI * hbar);
    let wigner_total = wigner_3d(&normed)?.total();

    let snap = later.snapshot(grid)?;
    let (w, y) = energy_and_poynting(&snap.f, &medium);
    let wd = snap.energy_density_direct();
    let yd = snap.poynting_direct();
    let dual_w = max_abs(w.iter().zip(&wd).map(|(a, b)| a - b)) / max_abs(wd.iter().cloned());
    let dual_y = max_abs((0..3).flat_map(|d| y[d].iter().zip(&yd[d]).map(|(a, b)| a - b).collect::<Vec<_>>()))
        / max_abs(yd.iter().flatten().cloned());

    let wmax = set.modes.iter().map(|m| set.omega(m)).fold(0.0, f64::max);
    let dt = 1e-3 * 2.0 * PI / wmax;
    let evolving = match fault {
        Some(Fault::WrongDispersion) => PhotonModeSet {
            medium: MediumParams::new(medium.epsilon, medium.mu, medium.c * Fault::DISPERSION_SCALE)?,
            ..set.clone()
        },
        None => set.clone(),
    };
    let series: Vec<VectorField> = (0..5)
        .map(|n| Ok(evolving.evolve(b.t + n as f64 * dt).snapshot(grid)?.f))
        .collect::<Result<_, CliError>>()?;
    let curl = curl_evolution_residual(&series, dt, &medium, None)?;
    let (ws, ys): (Vec<_>, Vec<_>) = series.iter().map(|f| energy_and_poynting(f, &medium)).unzip();
    let flow = energy_flow_residual(grid, &ws, &ys, None, dt)?;

    let mut out = Outcome::default();
    out.artifacts.text("modes.json", {
        let mut s = set.to_json();
        s.push('\n');
        s
    });
    out.artifacts.bytes("field_f.wqg", BinaryGrid::from(&snap.f).to_bytes());
    out.artifacts.json(
        "field_report.json",
        &EnergyReport {
            modes: set.modes.len(),
            grid_n: grid.n,
            energy_x_space: e_x,
            energy_k_space: e_k,
            energy_action: e_w,
            energy_phase_space: e_p,
            max_route_difference: route,
            energy_at_t: e_t,
            t: b.t,
            photon_number: psi.photon_number(),
            normalized_photons: b.n_photons,
            normalized_action_area_over_h: area_over_h,
            normalized_wigner_total: wigner_total,
            dual_w_difference: dual_w,
            dual_y_difference: dual_y,
            curl_residual: curl,
            energy_flow_residual: flow,
            residual_dt: dt,
        },
    );
    let np = f64::from(b.n_photons);
    out.checks.push(Check::at_most("field.energy_routes", route, ENERGY_ROUTE_TOL));
    out.checks.push(Check::at_most("field.energy_conservation", (e_t - e_x).abs() / e_x, CONSERVATION_TOL));
    out.checks.push(Check::at_most("field.photon_area", (area_over_h - np).abs() / np, CONSERVATION_TOL));
    out.checks.push(Check::at_most("field.wigner_total", (wigner_total - np).abs(), PHOTON_TOL));
    out.checks.push(Check::at_most("field.dual_energy_density", dual_w, DUAL_TOL));
    out.checks.push(Check::at_most("field.dual_energy_flux", dual_y, DUAL_TOL));
    out.checks.push(Check::at_most("field.curl_law", curl, RESIDUAL_TOL));
    out.checks.push(Check::at_most("field.energy_flow_law", flow, RESIDUAL_TOL));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> FieldBlock {
        FieldBlock {
            m_max: 1,
            c: Some(3.0),
            ..Default::default()
        }
    }

    #[test]
    fn random_set_passes() {
        let out = run(&small(), 3, None).unwrap();
        assert!(out.failed().is_empty(), "{:?}", out.checks);
        assert_eq!(out.artifacts.names(), ["modes.json", "field_f.wqg", "field_report.json"]);
    }

    #[test]
    fn wrong_dispersion_breaks_the_curl_law() {
        let out = run(&small(), 3, Some(Fault::WrongDispersion)).unwrap();
        assert!(out.failed().contains(&"field.curl_law".to_string()), "{:?}", out.checks);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let b = FieldBlock { grid_n: Some(4), ..small() };
        assert_eq!(run(&b, 3, None).unwrap_err().exit_code(), 3);
    }
}
