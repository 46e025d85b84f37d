//! `thermal-relax`: relaxation of a homogeneous photon gas towards its
//! equilibrium, plus the spectral peak and photon count of the Planck law.

use crate::config::{Fault, KineticsBlock};
use crate::error::{invalid, CliError};
use crate::report::{Check, Outcome};
use serde::Serialize;
use wavequanta::em::MediumParams;
use wavequanta::gridio::{csv_document, fmt_f64};
use wavequanta::thermal::*;
use wavequanta::Units;

pub const PRODUCT_REFERENCE: f64 = 1.26;
pub const PRODUCT_BAND: f64 = 0.01;
pub const PRODUCT_ORACLE_TOL: f64 = 1e-4;
pub const N_M_REFERENCE: f64 = 0.48;
pub const N_M_BAND: [f64; 2] = [0.47, 0.50];
pub const N_M_ORACLE_TOL: f64 = 1e-6;
pub const STATIONARITY_TOL: f64 = 1e-13;
pub const EXACT_TOL: f64 = 1e-10;
pub const RATE_TOL: f64 = 1e-8;
pub const DAMPING_TOL: f64 = 1e-10;

/// Equilibrium report; the first seven fields are the documented interface.
#[derive(Debug, Serialize)]
pub struct EquilibriumReport {
    pub model: SourceModel,
    #[serde(rename = "T")]
    pub temperature: f64,
    pub gamma: f64,
    pub residual_norm: f64,
    pub lambda_m: f64,
    pub product: f64,
    #[serde(rename = "N_m")]
    pub n_m: f64,
    pub units: Units,
    pub product_oracle: f64,
    pub x_peak: f64,
    #[serde(rename = "N_m_closed_form")]
    pub n_m_closed_form: f64,
    #[serde(rename = "N_m_quadrature_error")]
    pub n_m_quadrature_error: f64,
    #[serde(rename = "N_m_reference")]
    pub n_m_reference: f64,
    pub t_end: f64,
    pub final_max_distance: f64,
    pub monotone: bool,
    pub exact_solution_error: f64,
    pub decay_rate_error: f64,
    pub damping_only_error: f64,
    pub bounds_hold: bool,
}

fn validate(b: &KineticsBlock, units: Units) -> Result<KineticParams, CliError> {
    if !(b.t_end_gamma > 0.0 && b.t_end_gamma.is_finite()) {
        return Err(invalid("kinetics.t_end_gamma", format!("must be positive, got {}", b.t_end_gamma)));
    }
    if b.samples < 2 {
        return Err(invalid("kinetics.samples", "need at least two samples"));
    }
    if b.lambda_points < 2 {
        return Err(invalid("kinetics.lambda_points", "need at least two wavelengths"));
    }
    if !(b.initial_fill >= 0.0 && b.initial_fill.is_finite()) {
        return Err(invalid("kinetics.initial_fill", "must be non-negative"));
    }
    Ok(KineticParams::new(b.temperature.unwrap_or(1.0), b.gamma, b.epsilon, b.mu, units)?)
}

/// Oracle: `x = 5 (1 - e^-x)` solved by bisection, turned into `lambda_m p_T / hbar`.
pub fn product_oracle(params: &KineticParams) -> f64 {
    let g = |x: f64| x - 5.0 * (1.0 - (-x).exp());
    let (mut lo, mut hi) = (1.0_f64, 10.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    2.0 * std::f64::consts::PI * params.medium.v() / (x * params.units.light_speed())
}

/// Largest relative distance between the measured state and `f_eq + (f0 - f_eq) e^{-rate t}`.
fn exact_solution_error(report: &RelaxationReport, grid: &MomentumGrid, model: SourceModel, params: &KineticParams) -> Result<f64, CliError> {
    let t = *report.times.last().expect("at least one sample");
    let f0 = &report.trajectory[0];
    let last = report.trajectory.last().expect("at least one sample");
    let mut worst = 0.0_f64;
    for (i, &p) in grid.centers.iter().enumerate() {
        let eq = equilibrium_f(model, p, params)?;
        let rate = relaxation_rate(model, p, params)?;
        let want = eq + (f0[i] - eq) * (-rate * t).exp();
        worst = worst.max((last[i] - want).abs() / want.abs().max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

/// Rate read off two samples of the distance, compared with the model's rate.
fn decay_rate_error(report: &RelaxationReport, grid: &MomentumGrid, model: SourceModel, params: &KineticParams) -> Result<f64, CliError> {
    let (t1, t2) = (report.times[1], report.times[2]);
    let mut worst = 0.0_f64;
    for (i, &p) in grid.centers.iter().enumerate() {
        let eq = equilibrium_f(model, p, params)?;
        let d1 = (report.trajectory[1][i] - eq).abs();
        let d2 = (report.trajectory[2][i] - eq).abs();
        if d1 == 0.0 || d2 < 1e-200 {
            continue;
        }
        let measured = (d1 / d2).ln() / (t2 - t1);
        let rate = relaxation_rate(model, p, params)?;
        worst = worst.max((measured - rate).abs() / rate);
    }
    Ok(worst)
}

/// Total photon number under damping only, against `N0 e^{-gamma t}`.
fn damping_only_error(grid: &MomentumGrid, params: &KineticParams) -> Result<f64, CliError> {
    let f0 = grid.centers.iter().map(|&p| planck_f(p, params)).collect::<Result<Vec<_>, _>>()?;
    let mut state = KineticState::homogeneous(grid.clone(), f0)?;
    let n0 = state.total_number();
    let dt = 0.25 / params.gamma;
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        state = kinetic_step(&state, params, Dynamics::DampingOnly, dt)?;
        let want = n0 * (-params.gamma * state.t).exp();
        worst = worst.max((state.total_number() - want).abs() / want);
    }
    Ok(worst)
}

fn bounds_hold(grid: &MomentumGrid, params: &KineticParams) -> Result<bool, CliError> {
    for &p in &grid.centers {
        let pl = planck_f(p, params)?;
        let rj = equilibrium_f(SourceModel::RayleighJeans, p, params)?;
        let wi = equilibrium_f(SourceModel::Wien, p, params)?;
        if !(wi <= pl && pl <= rj) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn run(b: &KineticsBlock, units: Units, fault: Option<Fault>) -> Result<Outcome, CliError> {
    let params = validate(b, units)?;
    let grid = MomentumGrid::log_spaced(&params, b.x_min, b.x_max, b.cells)?;
    let model = b.model;
    let f0 = grid
        .centers
        .iter()
        .map(|&p| Ok(b.initial_fill * equilibrium_f(model, p, &params)?))
        .collect::<Result<Vec<_>, CliError>>()?;
    let t_end = b.t_end_gamma / params.gamma;
    let run_params = match fault {
        Some(Fault::WrongDispersion) => KineticParams {
            medium: MediumParams {
                c: params.medium.c * Fault::DISPERSION_SCALE,
                ..params.medium
            },
            ..params
        },
        None => params,
    };
    let report = relax_to_equilibrium(&KineticState::homogeneous(grid.clone(), f0)?, &run_params, model, t_end, b.samples)?;
    let final_max = *report.max_distance.last().expect("samples");

    let residual = stationarity_residual(SourceModel::WienStimulated, &grid, &params)?;
    let peak = wien_peak(&params)?;
    let count = thermal_photon_count(&params)?;
    let closed = photon_count_closed_form(peak.lambda_m, &params);
    let oracle = product_oracle(&params);
    let exact_err = exact_solution_error(&report, &grid, model, &params)?;
    let rate_err = decay_rate_error(&report, &grid, model, &params)?;
    let damping_err = damping_only_error(&grid, &params)?;
    let bounds = bounds_hold(&grid, &params)?;

    let mut out = Outcome::default();
    let meta = [
        ("kind", "relaxation".to_string()),
        ("model", model.name().to_string()),
        ("gamma", fmt_f64(params.gamma)),
    ];
    let traj = report
        .times
        .iter()
        .zip(&report.trajectory)
        .flat_map(|(&t, f)| grid.centers.iter().zip(f).map(move |(&p, &v)| vec![t, p, v]));
    out.artifacts.text("relaxation.csv", csv_document(&meta, &["t", "p", "f"], traj));
    let dist = report.times.iter().zip(&report.max_distance).map(|(&t, &d)| vec![t, d]);
    out.artifacts.text("distance.csv", csv_document(&meta, &["t", "max_relative_distance"], dist));

    let eq_rows = grid
        .centers
        .iter()
        .zip(report.trajectory.last().expect("samples"))
        .map(|(&p, &f)| Ok(vec![p, params.x(p), f, equilibrium_f(model, p, &params)?, planck_f(p, &params)?]))
        .collect::<Result<Vec<_>, CliError>>()?;
    let meta = [
        ("kind", "distribution".to_string()),
        ("model", model.name().to_string()),
        ("t", fmt_f64(t_end)),
    ];
    out.artifacts.text(
        "distribution.csv",
        csv_document(&meta, &["p", "x", "f", "f_equilibrium", "f_planck"], eq_rows),
    );

    // wavelengths log-spaced from lambda_m / 10 to 20 lambda_m
    let (lo, hi) = ((peak.lambda_m / 10.0).ln(), (peak.lambda_m * 20.0).ln());
    let n = b.lambda_points;
    let spectrum = (0..n)
        .map(|i| {
            let l = (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp();
            Ok(vec![l, spectral_energy_density(l, &params)?])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let meta = [
        ("kind", "spectral-energy-density".to_string()),
        ("T", fmt_f64(params.temperature)),
        ("units", units.to_string()),
    ];
    out.artifacts.text("spectrum.csv", csv_document(&meta, &["lambda", "U_lambda"], spectrum));

    out.artifacts.json(
        "equilibrium.json",
        &EquilibriumReport {
            model,
            temperature: params.temperature,
            gamma: params.gamma,
            residual_norm: residual,
            lambda_m: peak.lambda_m,
            product: peak.product,
            n_m: count.n_m,
            units,
            product_oracle: oracle,
            x_peak: peak.x_peak,
            n_m_closed_form: closed,
            n_m_quadrature_error: count.quadrature_error,
            n_m_reference: N_M_REFERENCE,
            t_end,
            final_max_distance: final_max,
            monotone: report.monotone,
            exact_solution_error: exact_err,
            decay_rate_error: rate_err,
            damping_only_error: damping_err,
            bounds_hold: bounds,
        },
    );

    out.checks.push(Check::within(
        "thermal.wien_product",
        peak.product,
        PRODUCT_REFERENCE - PRODUCT_BAND,
        PRODUCT_REFERENCE + PRODUCT_BAND,
    ));
    out.checks.push(Check::at_most("thermal.wien_product_oracle", (peak.product - oracle).abs(), PRODUCT_ORACLE_TOL));
    out.checks.push(Check::within("thermal.photon_count", count.n_m, N_M_BAND[0], N_M_BAND[1]));
    out.checks.push(Check::at_most("thermal.photon_count_oracle", (count.n_m - closed).abs(), N_M_ORACLE_TOL));
    out.checks.push(Check::at_most("thermal.stationarity", residual, STATIONARITY_TOL));
    out.checks.push(Check::at_most("thermal.exact_relaxation", exact_err, EXACT_TOL));
    out.checks.push(Check::at_most("thermal.decay_rate", rate_err, RATE_TOL));
    out.checks.push(Check::holds("thermal.monotone_relaxation", report.monotone));
    out.checks.push(Check::at_most("thermal.damping_only", damping_err, DAMPING_TOL));
    out.checks.push(Check::holds("thermal.equilibrium_bounds", bounds));
    out.checks.push(Check::info("thermal.final_max_distance", final_max));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planck_scenario_passes_its_invariants() {
        let out = run(&KineticsBlock::default(), Units::Natural, None).unwrap();
        assert!(out.failed().is_empty(), "{:?}", out.checks);
        assert_eq!(
            out.artifacts.names(),
            ["relaxation.csv", "distance.csv", "distribution.csv", "spectrum.csv", "equilibrium.json"]
        );
    }

    #[test]
    fn report_has_the_interface_fields() {
        let b = KineticsBlock {
            cells: 32,
            temperature: Some(300.0),
            ..Default::default()
        };
        let out = run(&b, Units::MevPs, None).unwrap();
        let (_, body) = out.artifacts.files.iter().find(|(n, _)| n == "equilibrium.json").unwrap();
        let v: serde_json::Value = serde_json::from_slice(body).unwrap();
        for key in ["model", "T", "gamma", "residual_norm", "lambda_m", "product", "N_m"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["model"], "wien-stimulated");
        assert_eq!(v["T"], 300.0);
        assert!((v["product"].as_f64().unwrap() - 1.2655).abs() < 1e-4);
    }

    #[test]
    fn wrong_dispersion_is_caught() {
        let out = run(&KineticsBlock { cells: 64, ..Default::default() }, Units::Natural, Some(Fault::WrongDispersion)).unwrap();
        let failed = out.failed();
        assert!(failed.contains(&"thermal.exact_relaxation".to_string()), "{failed:?}");
        assert!(failed.contains(&"thermal.decay_rate".to_string()), "{failed:?}");
    }

    #[test]
    fn oracle_product() {
        let p = KineticParams::new(1.0, 1.0, 1.0, 1.0, Units::Natural).unwrap();
        assert!((product_oracle(&p) - 1.265_46).abs() < 1e-5);
    }
}
