//! `helicity-check`: finite-difference residuals of the complex potential
//! equation for the cylindrical Beltrami solution, and the field evolution
//! law for plane helical modes.

use crate::config::{Fault, HelicityBlock};
use crate::error::{invalid, CliError};
use crate::report::{Check, Outcome};
use serde::Serialize;
use std::f64::consts::PI;
use wavequanta::em::{curl_evolution_residual, MediumParams};
use wavequanta::gridio::{csv_document, fmt_f64};
use wavequanta::helicity::*;
use wavequanta::spectral::{Grid3, VectorField};
use wavequanta::Vec3;

pub const MIN_ORDER: f64 = 1.9;
pub const FINE_TOL: f64 = 1e-5;
pub const PLANE_TOL: f64 = 1e-6;

#[derive(Debug, Serialize)]
struct PlaneResult {
    m: [i32; 3],
    sigma: i8,
    dt: f64,
    residual: f64,
}

#[derive(Debug, Serialize)]
struct Stencil {
    /// Points per finite-difference derivative.
    derivative_points: usize,
    /// Time levels in the evolution residual.
    time_levels: usize,
}

#[derive(Debug, Serialize)]
struct HelicityReport {
    k: f64,
    v: f64,
    sample_points: usize,
    stencil: Stencil,
    convergence: ConvergenceReport,
    fine_step: f64,
    fine_residual: PotentialResidual,
    plane_modes: Vec<PlaneResult>,
}

fn validate(b: &HelicityBlock) -> Result<(MediumParams, Grid3), CliError> {
    if !(b.k > 0.0 && b.k.is_finite()) {
        return Err(invalid("helicity.k", format!("must be positive, got {}", b.k)));
    }
    if !(b.v > 0.0 && b.v.is_finite()) {
        return Err(invalid("helicity.v", format!("must be positive, got {}", b.v)));
    }
    if b.points == 0 {
        return Err(invalid("helicity.points", "need at least one sample point"));
    }
    if b.levels < 2 {
        return Err(invalid("helicity.levels", "need at least two refinement levels"));
    }
    if !(b.dt_ratio > 0.0 && b.fine_step > 0.0 && b.h0.is_none_or(|h| h > 0.0)) {
        return Err(invalid("helicity.dt_ratio", "step sizes must be positive"));
    }
    if !(b.period_fraction > 0.0 && b.period_fraction < 1.0) {
        return Err(invalid("helicity.period_fraction", "must lie in (0, 1)"));
    }
    for pm in &b.plane_modes {
        if pm.m == [0, 0, 0] || pm.sigma.abs() != 1 {
            return Err(invalid("helicity.plane_modes", format!("need m != 0 and sigma = +-1, got {pm:?}")));
        }
        let n = b.grid_n as i32;
        if pm.m.iter().any(|&c| 2 * c.abs() >= n) {
            return Err(invalid("helicity.plane_modes", format!("{:?} does not fit a {n}-point grid", pm.m)));
        }
    }
    let medium = MediumParams::new(b.epsilon, b.mu, b.c.unwrap_or(1.0))?;
    Ok((medium, Grid3::new(b.grid_n, b.box_len)?))
}

pub fn run(b: &HelicityBlock, seed: u64, fault: Option<Fault>) -> Result<Outcome, CliError> {
    let (medium, grid) = validate(b)?;
    let speed = match fault {
        Some(Fault::WrongDispersion) => b.v * Fault::DISPERSION_SCALE,
        None => b.v,
    };
    let k = b.k;
    let u = |x: Vec3, t: f64| cylindrical_cartesian(k, x, t, b.v).expect("k checked positive");
    let points = sample_points(b.points, b.half_width, seed);
    let h0 = b.h0.unwrap_or(0.2 / k);
    let conv = convergence_study(&u, speed, &points, b.t, h0, b.dt_ratio * h0 / b.v, b.levels)?;
    let fine = potential_equation_residual(&u, speed, &points, b.t, b.fine_step, b.fine_step)?;

    let mut planes = Vec::new();
    let vm = medium.v();
    for pm in &b.plane_modes {
        let kv = Vec3::new(pm.m[0] as f64, pm.m[1] as f64, pm.m[2] as f64) * grid.dk();
        let wave = helical_plane_wave(kv, pm.sigma, vm * speed / b.v)?;
        let dt = b.period_fraction * 2.0 * PI / (vm * kv.norm());
        let series: Vec<VectorField> = (0..5)
            .map(|n| Ok(field_from_potential_grid(&sample_potential(grid, &wave, n as f64 * dt))?))
            .collect::<Result<_, CliError>>()?;
        planes.push(PlaneResult {
            m: pm.m,
            sigma: pm.sigma,
            dt,
            residual: curl_evolution_residual(&series, dt, &medium, None)?,
        });
    }

    let mut out = Outcome::default();
    let meta = [
        ("kind", "helicity-convergence".to_string()),
        ("k", fmt_f64(k)),
        ("v", fmt_f64(b.v)),
    ];
    let rows = conv.levels.iter().map(|l| vec![l.h, l.dt, l.evolution, l.divergence]);
    out.artifacts.text("convergence.csv", csv_document(&meta, &["h", "dt", "evolution", "divergence"], rows));

    let order = |o: Option<f64>| o.unwrap_or(f64::NAN);
    out.checks.push(Check::at_least("helicity.evolution_order", order(conv.evolution_order), MIN_ORDER));
    out.checks.push(Check::at_least("helicity.divergence_order", order(conv.divergence_order), MIN_ORDER));
    out.checks.push(Check::at_most("helicity.fine_evolution_residual", fine.evolution, FINE_TOL));
    out.checks.push(Check::at_most("helicity.fine_divergence_residual", fine.divergence, FINE_TOL));
    for p in &planes {
        let name = format!("helicity.plane_curl_law[{},{},{}]", p.m[0], p.m[1], p.m[2]);
        out.checks.push(Check::at_most(&name, p.residual, PLANE_TOL));
    }
    out.artifacts.json(
        "residuals.json",
        &HelicityReport {
            k,
            v: b.v,
            sample_points: points.len(),
            stencil: Stencil {
                derivative_points: 2,
                time_levels: 2,
            },
            convergence: conv,
            fine_step: b.fine_step,
            fine_residual: fine,
            plane_modes: planes,
        },
    );
    Ok(out)
}
