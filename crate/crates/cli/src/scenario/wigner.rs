//! `wigner`: Wigner distribution of a Gaussian action wave, compared with the
//! closed form while it moves under linear dispersion.

use crate::config::{Fault, WignerBlock};
use crate::error::{invalid, CliError};
use crate::report::{Check, Outcome};
use serde::Serialize;
use std::f64::consts::PI;
use wavequanta::gridio::{wigner_csv, BinaryGrid};
use wavequanta::lattice::{gaussian_action_wave, KGrid};
use wavequanta::wigner::{wigner_1d, wigner_gaussian_closed, GaussianEtaParams};

pub const ORACLE_TOL: f64 = 1e-6;
pub const PEAK_TOL: f64 = 1e-6;
pub const TOTAL_TOL: f64 = 1e-8;

#[derive(Debug, Serialize)]
struct Snapshot {
    t: f64,
    normalized_linf: f64,
    peak: f64,
    node_peak_oracle: f64,
    peak_relative_error: f64,
    total: f64,
    imag_residue: f64,
    csv: String,
}

#[derive(Debug, Serialize)]
struct WignerReport {
    n: usize,
    k0: f64,
    g: f64,
    n_quanta: u32,
    hbar: f64,
    group_velocity: f64,
    peak_oracle: f64,
    window: [f64; 2],
    snapshots: Vec<Snapshot>,
}

fn validate(b: &WignerBlock) -> Result<(), CliError> {
    if b.n < 4 || b.n % 2 != 0 {
        return Err(invalid("wigner.n", format!("need an even mode count >= 4, got {}", b.n)));
    }
    if b.times.is_empty() || b.times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(invalid("wigner.times", "need at least one finite non-negative time"));
    }
    if b.csv_stride == 0 {
        return Err(invalid("wigner.csv_stride", "must be at least 1"));
    }
    if b.n_quanta == 0 {
        return Err(invalid("wigner.n_quanta", "must be at least 1"));
    }
    if !b.group_velocity.is_finite() {
        return Err(invalid("wigner.group_velocity", "must be finite"));
    }
    let half = (b.n / 2) as f64;
    if !(b.k0_cells.abs() < half / 2.0) {
        return Err(invalid("wigner.k0_cells", format!("packet must sit inside half the zone, |k0_cells| < {}", half / 2.0)));
    }
    Ok(())
}

pub fn run(b: &WignerBlock, fault: Option<Fault>) -> Result<Outcome, CliError> {
    validate(b)?;
    let hbar = b.hbar.unwrap_or(1.0);
    let grid = KGrid { n: b.n, ell: b.ell };
    let k0 = b.k0_cells * grid.dk();
    let psi = gaussian_action_wave(grid, k0, b.g, f64::from(b.n_quanta), hbar)?;
    let closed = GaussianEtaParams {
        k0,
        g: b.g,
        n_quanta: b.n_quanta,
        v_g: b.group_velocity,
    };
    let moved_speed = match fault {
        Some(Fault::WrongDispersion) => b.group_velocity * Fault::DISPERSION_SCALE,
        None => b.group_velocity,
    };
    let peak_oracle = f64::from(b.n_quanta) / (PI * hbar);

    let mut out = Outcome::default();
    let mut snapshots = Vec::new();
    let mut window = [0.0, 0.0];
    for (i, &t) in b.times.iter().enumerate() {
        let w = wigner_1d(&psi.evolve(|k| moved_speed * k, t))?;
        let win = w.fundamental_window();
        window = [win.x0, win.x(win.nx - 1)];
        let linf = win.normalized_linf(|x, p| wigner_gaussian_closed(&closed, x, p, t, hbar));
        let peak = w.f.iter().cloned().fold(f64::MIN, f64::max);
        // largest closed-form value on the nodes; equals N / (pi hbar) when the centre is a node
        let node_peak = (0..win.np)
            .flat_map(|ip| (0..win.nx).map(move |ix| (ix, ip)))
            .map(|(ix, ip)| wigner_gaussian_closed(&closed, win.x(ix), win.p(ip), t, hbar))
            .fold(f64::MIN, f64::max);
        let total = w.integral();
        let name = format!("wigner_t{i}.csv");
        out.artifacts.text(&name, wigner_csv(&win.decimated(b.csv_stride)));
        if b.binary {
            out.artifacts.bytes(&format!("wigner_t{i}.wqg"), BinaryGrid::from(&w).to_bytes());
        }
        let peak_err = (peak - node_peak).abs() / node_peak;
        out.checks.push(Check::at_most(&format!("wigner.closed_form_t{i}"), linf, ORACLE_TOL));
        out.checks.push(Check::at_most(&format!("wigner.peak_t{i}"), peak_err, PEAK_TOL));
        out.checks.push(Check::at_most(
            &format!("wigner.total_t{i}"),
            (total - f64::from(b.n_quanta)).abs(),
            TOTAL_TOL,
        ));
        snapshots.push(Snapshot {
            t,
            normalized_linf: linf,
            peak,
            node_peak_oracle: node_peak,
            peak_relative_error: peak_err,
            total,
            imag_residue: w.imag_residue,
            csv: name,
        });
    }
    out.artifacts.json(
        "wigner_report.json",
        &WignerReport {
            n: b.n,
            k0,
            g: b.g,
            n_quanta: b.n_quanta,
            hbar,
            group_velocity: b.group_velocity,
            peak_oracle,
            window,
            snapshots,
        },
    );
    Ok(out)
}
