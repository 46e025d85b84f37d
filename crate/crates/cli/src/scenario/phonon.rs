//! `phonon-sim`: leapfrog integration of the harmonic chain against its exact
//! mode evolution.

use crate::config::{Fault, InitialProfile, LatticeBlock};
use crate::error::{invalid, CliError};
use crate::report::{Check, Outcome};
use serde::Serialize;
use wavequanta::gridio::{csv_document, fmt_f64};
use wavequanta::lattice::*;
use wavequanta::wigner::wigner_1d;

pub const ENERGY_DRIFT_TOL: f64 = 1e-6;
pub const ETA_TOL: f64 = 1e-12;
pub const DISPERSION_TOL: f64 = 1e-2;
pub const QUANTA_TOL: f64 = 1e-8;

#[derive(Debug, Serialize)]
struct PhononReport {
    n_sites: usize,
    dt: f64,
    steps: usize,
    t_end: f64,
    omega_max: f64,
    energy_initial: f64,
    energy_max_relative_excursion: f64,
    energy_secular_drift: f64,
    eta_max_relative_change: f64,
    leapfrog_vs_exact: f64,
    action_area: f64,
    action_area_over_h: f64,
    wigner_total: f64,
    n_quanta: u32,
}

fn initial_state(b: &LatticeBlock, seed: u64) -> LatticeState {
    match b.initial {
        InitialProfile::GaussianBump => {
            let c = (b.n_sites / 2) as f64;
            let u = (0..b.n_sites)
                .map(|i| {
                    let d = i as f64 - c;
                    b.amplitude * (-d * d / (2.0 * b.width * b.width)).exp()
                })
                .collect();
            LatticeState {
                u,
                v: vec![0.0; b.n_sites],
                t: 0.0,
            }
        }
        InitialProfile::Random => LatticeState::random(b.n_sites, b.amplitude, seed),
    }
}

/// Same chain with every frequency multiplied by `s`.
fn with_scaled_dispersion(p: &LatticeParams, s: f64) -> LatticeParams {
    LatticeParams {
        omega0: p.omega0 * s,
        kappa: p.kappa * s * s,
        ..*p
    }
}

fn validate(b: &LatticeBlock) -> Result<LatticeParams, CliError> {
    if b.steps == 0 {
        return Err(invalid("lattice.steps", "need at least one step"));
    }
    if b.sample_every == 0 {
        return Err(invalid("lattice.sample_every", "must be at least 1"));
    }
    if !(b.dt_factor > 0.0 && b.dt_factor < 2.0) {
        return Err(invalid("lattice.dt_factor", format!("leapfrog needs 0 < dt omega_max < 2, got {}", b.dt_factor)));
    }
    if !(b.amplitude > 0.0 && b.amplitude.is_finite()) {
        return Err(invalid("lattice.amplitude", format!("must be positive, got {}", b.amplitude)));
    }
    if b.initial == InitialProfile::GaussianBump && !(b.width > 0.0) {
        return Err(invalid("lattice.width", format!("must be positive, got {}", b.width)));
    }
    if b.hbar.is_some_and(|h| !(h > 0.0)) {
        return Err(invalid("lattice.hbar", "must be positive"));
    }
    Ok(LatticeParams::new(b.mass, b.omega0, b.kappa, b.ell, b.n_sites)?)
}

pub fn run(b: &LatticeBlock, seed: u64, fault: Option<Fault>) -> Result<Outcome, CliError> {
    let p = validate(b)?;
    let hbar = b.hbar.unwrap_or(1.0);
    let s0 = initial_state(b, seed);
    let dt = b.dt_factor / p.omega_max();
    let h0 = hamiltonian_energy(&s0, &p);
    if !(h0 > 0.0) {
        return Err(CliError::Numeric("initial state carries no energy".into()));
    }

    let mut s = s0.clone();
    let mut series = Vec::with_capacity(b.steps);
    let mut rows = vec![vec![0.0, 0.0, h0, 0.0]];
    for step in 1..=b.steps {
        leapfrog(&mut s, &p, dt, 1)?;
        let h = hamiltonian_energy(&s, &p);
        series.push(h);
        if step % b.sample_every == 0 || step == b.steps {
            rows.push(vec![step as f64, s.t, h, (h - h0) / h0]);
        }
    }
    if series.iter().any(|h| !h.is_finite()) {
        return Err(CliError::Numeric("leapfrog produced a non-finite energy".into()));
    }
    let excursion = series.iter().fold(0.0_f64, |m, h| m.max((h - h0).abs() / h0));
    let window = (b.steps / 10).max(1);
    let mean = |w: &[f64]| w.iter().sum::<f64>() / w.len() as f64;
    let secular = (mean(&series[series.len() - window..]) - mean(&series[..window])).abs() / h0;

    let t_end = s.t;
    let spec0 = dft_to_modes(&s0, &p)?;
    let reference_params = match fault {
        Some(Fault::WrongDispersion) => with_scaled_dispersion(&p, Fault::DISPERSION_SCALE),
        None => p,
    };
    let reference = evolve_modes_exact(
        &ModeSpectrum {
            params: reference_params,
            ..spec0.clone()
        },
        t_end,
    );
    let exact_state = idft_from_modes(&reference);
    let scale = exact_state.u.iter().fold(0.0_f64, |m, u| m.max(u.abs()));
    let mismatch = s
        .u
        .iter()
        .zip(&exact_state.u)
        .fold(0.0_f64, |m, (a, e)| m.max((a - e).abs()))
        / scale.max(f64::MIN_POSITIVE);

    let psi0 = psi_from_modes(&spec0, hbar)?;
    let psi_exact = psi_from_modes(&evolve_modes_exact(&spec0, t_end), hbar)?;
    let psi_leap = psi_from_modes(&dft_to_modes(&s, &p)?, hbar)?;
    let (eta0, eta_exact, eta_leap) = (psi0.eta(), psi_exact.eta(), psi_leap.eta());
    let eta_scale = eta0.iter().cloned().fold(0.0_f64, f64::max);
    let eta_change = eta0
        .iter()
        .zip(&eta_exact)
        .fold(0.0_f64, |m, (a, e)| m.max((a - e).abs()))
        / eta_scale;

    let normed = normalize_action(&psi0, b.n_quanta)?;
    let area = action_area(&normed);
    let h = 2.0 * std::f64::consts::PI * hbar;
    let total = wigner_1d(&normed)?.integral();

    let mut out = Outcome::default();
    let meta = [
        ("kind", "lattice-energy".to_string()),
        ("dt", fmt_f64(dt)),
        ("energy_initial", fmt_f64(h0)),
    ];
    out.artifacts.text("energy.csv", csv_document(&meta, &["step", "t", "energy", "relative_deviation"], rows));
    let grid = p.grid();
    let mode_rows = (0..grid.n).map(|i| {
        let k = grid.k(i);
        vec![k, dispersion(k, &p), eta0[i], eta_exact[i], eta_leap[i]]
    });
    let meta = [("kind", "lattice-modes".to_string()), ("t", fmt_f64(t_end)), ("hbar", fmt_f64(hbar))];
    out.artifacts.text(
        "modes.csv",
        csv_document(&meta, &["k", "omega", "eta_initial", "eta_exact", "eta_leapfrog"], mode_rows),
    );
    out.artifacts.json(
        "phonon_report.json",
        &PhononReport {
            n_sites: p.n_sites,
            dt,
            steps: b.steps,
            t_end,
            omega_max: p.omega_max(),
            energy_initial: h0,
            energy_max_relative_excursion: excursion,
            energy_secular_drift: secular,
            eta_max_relative_change: eta_change,
            leapfrog_vs_exact: mismatch,
            action_area: area,
            action_area_over_h: area / h,
            wigner_total: total,
            n_quanta: b.n_quanta,
        },
    );

    // rough states oscillate at O((omega dt)^2); only smooth ones gate the excursion
    out.checks.push(match b.initial {
        InitialProfile::GaussianBump => Check::at_most("lattice.energy_excursion", excursion, ENERGY_DRIFT_TOL),
        InitialProfile::Random => Check::info("lattice.energy_excursion", excursion),
    });
    out.checks.push(Check::at_most("lattice.energy_secular_drift", secular, ENERGY_DRIFT_TOL));
    out.checks.push(Check::at_most("lattice.eta_invariance", eta_change, ETA_TOL));
    out.checks.push(Check::at_most("lattice.dispersion_consistency", mismatch, DISPERSION_TOL));
    let nq = f64::from(b.n_quanta);
    out.checks.push(Check::at_most("lattice.action_area_quanta", (area / h - nq).abs() / nq, 1e-12));
    out.checks.push(Check::at_most("lattice.wigner_total_quanta", (total - nq).abs(), QUANTA_TOL));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> LatticeBlock {
        LatticeBlock {
            n_sites: 64,
            steps: 2000,
            width: 4.0,
            ..Default::default()
        }
    }

    #[test]
    fn default_chain_passes() {
        let out = run(&small(), 1, None).unwrap();
        assert!(out.failed().is_empty(), "{:?}", out.checks);
        assert_eq!(out.artifacts.names(), ["energy.csv", "modes.csv", "phonon_report.json"]);
    }

    #[test]
    fn wrong_dispersion_is_caught() {
        let out = run(&small(), 1, Some(Fault::WrongDispersion)).unwrap();
        assert_eq!(out.failed(), ["lattice.dispersion_consistency"]);
    }

    #[test]
    fn scaled_dispersion_scales_every_frequency() {
        let p = LatticeParams::new(1.3, 0.4, 0.7, 1.0, 16).unwrap();
        let q = with_scaled_dispersion(&p, 1.05);
        for k in p.grid().ks() {
            assert!((dispersion(k, &q) - 1.05 * dispersion(k, &p)).abs() < 1e-14);
        }
    }

    #[test]
    fn unstable_step_is_a_validation_error() {
        let b = LatticeBlock { dt_factor: 2.5, ..small() };
        assert_eq!(run(&b, 1, None).unwrap_err().exit_code(), 3);
    }
}
