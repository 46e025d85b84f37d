//! Kinetics of a photon gas in an Ohmic, noisy medium.
//!
//! The distribution `f(x, p)` obeys
//!
//! ```text
//! df/dt + div(v_p f) = gamma (Q_T / (h^3 sigma_q eps_p) - f)
//! ```
//!
//! with `eps_p = v |p|` and `gamma = sigma_q / eps`. Every source model
//! makes the right-hand side affine in `f`, so each momentum cell relaxes
//! exactly as `f* + (f - f*) exp(-b t)`.

use crate::em::MediumParams;
use crate::error::{invalid, Error, Result};
use crate::units::Units;
use quadrature::double_exponential::integrate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceModel {
    RayleighJeans,
    Wien,
    WienStimulated,
}

impl SourceModel {
    pub fn name(self) -> &'static str {
        match self {
            SourceModel::RayleighJeans => "rayleigh-jeans",
            SourceModel::Wien => "wien",
            SourceModel::WienStimulated => "wien-stimulated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KineticParams {
    /// Temperature in kelvin (`mev-ps`) or energy units (`natural`).
    pub temperature: f64,
    /// Damping rate `sigma_q / eps`.
    pub gamma: f64,
    #[serde(default)]
    pub medium: MediumParams,
    #[serde(default)]
    pub units: Units,
}

impl KineticParams {
    /// Parameters with the medium's light speed taken from the unit preset.
    pub fn new(temperature: f64, gamma: f64, epsilon: f64, mu: f64, units: Units) -> Result<Self> {
        let p = KineticParams {
            temperature,
            gamma,
            medium: MediumParams::new(epsilon, mu, units.light_speed())?,
            units,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(invalid("temperature", format!("must be positive, got {}", self.temperature)));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(invalid("gamma", format!("must be positive, got {}", self.gamma)));
        }
        self.medium.validate()
    }

    pub fn h(&self) -> f64 {
        self.units.planck()
    }

    pub fn hbar(&self) -> f64 {
        self.units.hbar()
    }

    pub fn kt(&self) -> f64 {
        self.units.boltzmann() * self.temperature
    }

    pub fn sigma_q(&self) -> f64 {
        self.gamma * self.medium.epsilon
    }

    /// `eps_p = v p`.
    pub fn energy(&self, p: f64) -> f64 {
        self.medium.v() * p
    }

    /// `x = eps_p / k_B T`.
    pub fn x(&self, p: f64) -> f64 {
        self.energy(p) / self.kt()
    }

    /// Momentum with `eps_p / k_B T = x`.
    pub fn momentum_at(&self, x: f64) -> f64 {
        x * self.kt() / self.medium.v()
    }

    /// Thermal momentum `k_B T / c`.
    pub fn thermal_momentum(&self) -> f64 {
        self.kt() / self.medium.c
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(invalid("p", format!("momentum must be positive, got {p}")))
    }
}

fn planck_x(x: f64, h: f64) -> f64 {
    2.0 / (h * h * h) / x.exp_m1()
}

/// `f^T = (2/h^3) / (exp(eps_p / k_B T) - 1)`.
pub fn planck_f(p: f64, params: &KineticParams) -> Result<f64> {
    check_p(p)?;
    Ok(planck_x(params.x(p), params.h()))
}

/// Stationary distribution of a source model.
pub fn equilibrium_f(model: SourceModel, p: f64, params: &KineticParams) -> Result<f64> {
    check_p(p)?;
    let x = params.x(p);
    let c = 2.0 / params.h().powi(3);
    Ok(match model {
        SourceModel::RayleighJeans => c / x,
        SourceModel::Wien => c * (-x).exp(),
        SourceModel::WienStimulated => c / x.exp_m1(),
    })
}

/// Source strength `Q_T`.
pub fn source_q(model: SourceModel, p: f64, params: &KineticParams, f: f64) -> Result<f64> {
    check_p(p)?;
    let sq = params.sigma_q();
    let e = params.energy(p);
    let x = params.x(p);
    Ok(match model {
        SourceModel::RayleighJeans => 2.0 * sq * params.kt(),
        SourceModel::Wien => 2.0 * sq * e * (-x).exp(),
        SourceModel::WienStimulated => 2.0 * sq * e * (-x).exp() * (1.0 + params.h().powi(3) * f / 2.0),
    })
}

/// `gamma (Q_T / (h^3 sigma_q eps_p) - f)`.
pub fn relaxation_rhs(model: SourceModel, p: f64, params: &KineticParams, f: f64) -> Result<f64> {
    let q = source_q(model, p, params, f)?;
    Ok(params.gamma * (q / (params.h().powi(3) * params.sigma_q() * params.energy(p)) - f))
}

/// Coefficients of `df/dt = a - b f`.
fn affine(model: SourceModel, x: f64, params: &KineticParams) -> (f64, f64) {
    let c = 2.0 / params.h().powi(3);
    let g = params.gamma;
    match model {
        SourceModel::RayleighJeans => (g * c / x, g),
        SourceModel::Wien => (g * c * (-x).exp(), g),
        SourceModel::WienStimulated => (g * c * (-x).exp(), -g * (-x).exp_m1()),
    }
}

/// Relaxation rate of a cell: `gamma`, or `gamma (1 - exp(-x))` with stimulated emission.
pub fn relaxation_rate(model: SourceModel, p: f64, params: &KineticParams) -> Result<f64> {
    check_p(p)?;
    Ok(affine(model, params.x(p), params).1)
}

/// Logarithmic radial momentum grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumGrid {
    pub edges: Vec<f64>,
    pub centers: Vec<f64>,
    /// Shell volumes `4 pi (p_hi^3 - p_lo^3) / 3`.
    pub weights: Vec<f64>,
}

pub const DEFAULT_X_MIN: f64 = 1e-3;
pub const DEFAULT_X_MAX: f64 = 30.0;
pub const DEFAULT_CELLS: usize = 512;

impl MomentumGrid {
    pub fn log_spaced(params: &KineticParams, x_min: f64, x_max: f64, cells: usize) -> Result<Self> {
        if !(x_min > 0.0 && x_max > x_min) {
            return Err(invalid("x_min", format!("need 0 < x_min < x_max, got [{x_min}, {x_max}]")));
        }
        if cells == 0 {
            return Err(invalid("cells", "need at least one cell"));
        }
        let ratio = (x_max / x_min).ln() / cells as f64;
        let edges: Vec<f64> = (0..=cells)
            .map(|i| params.momentum_at(x_min * (ratio * i as f64).exp()))
            .collect();
        let centers = edges.windows(2).map(|w| (w[0] * w[1]).sqrt()).collect();
        let weights = edges
            .windows(2)
            .map(|w| 4.0 * PI * (w[1].powi(3) - w[0].powi(3)) / 3.0)
            .collect();
        Ok(MomentumGrid { edges, centers, weights })
    }

    pub fn default_for(params: &KineticParams) -> Result<Self> {
        Self::log_spaced(params, DEFAULT_X_MIN, DEFAULT_X_MAX, DEFAULT_CELLS)
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }
}

/// Periodic 1-D spatial grid; photons move along it with direction cosine `direction`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpatialGrid {
    pub nx: usize,
    pub dx: f64,
    pub direction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KineticState {
    pub p: MomentumGrid,
    pub space: Option<SpatialGrid>,
    /// `f[ix * np + ip]`; a single row when homogeneous.
    pub f: Vec<f64>,
    pub t: f64,
}

impl KineticState {
    pub fn homogeneous(p: MomentumGrid, f: Vec<f64>) -> Result<Self> {
        if f.len() != p.len() {
            return Err(Error::GridMismatch(format!("{} values for {} cells", f.len(), p.len())));
        }
        Ok(KineticState { p, space: None, f, t: 0.0 })
    }

    pub fn with_space(p: MomentumGrid, space: SpatialGrid, f: Vec<f64>) -> Result<Self> {
        if space.nx == 0 || !(space.dx > 0.0) || !(space.direction.abs() <= 1.0) {
            return Err(invalid("space", "need nx > 0, dx > 0 and |direction| <= 1"));
        }
        if f.len() != p.len() * space.nx {
            return Err(Error::GridMismatch(format!(
                "{} values for {} x {} cells",
                f.len(),
                space.nx,
                p.len()
            )));
        }
        Ok(KineticState {
            p,
            space: Some(space),
            f,
            t: 0.0,
        })
    }

    /// Homogeneous state filled with a model's equilibrium.
    pub fn equilibrium(p: MomentumGrid, model: SourceModel, params: &KineticParams) -> Result<Self> {
        let f = p.centers.iter().map(|&q| equilibrium_f(model, q, params)).collect::<Result<_>>()?;
        Self::homogeneous(p, f)
    }

    pub fn rows(&self) -> usize {
        self.space.map_or(1, |s| s.nx)
    }

    /// `int d^3p (dx) f` by the midpoint rule on the shells.
    pub fn total_number(&self) -> f64 {
        let np = self.p.len();
        let dx = self.space.map_or(1.0, |s| s.dx);
        self.f
            .chunks(np)
            .map(|row| row.iter().zip(&self.p.weights).map(|(f, w)| f * w).sum::<f64>())
            .sum::<f64>()
            * dx
    }

    /// `int d^3p (dx) f eps_p`.
    pub fn total_energy(&self, params: &KineticParams) -> f64 {
        let np = self.p.len();
        let dx = self.space.map_or(1.0, |s| s.dx);
        self.f
            .chunks(np)
            .map(|row| {
                row.iter()
                    .zip(&self.p.weights)
                    .zip(&self.p.centers)
                    .map(|((f, w), p)| f * w * params.energy(*p))
                    .sum::<f64>()
            })
            .sum::<f64>()
            * dx
    }
}

/// Which terms of the kinetic equation are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dynamics {
    TransportOnly,
    DampingOnly,
    Relaxation(SourceModel),
}

fn advect(state: &mut KineticState, params: &KineticParams, dt: f64) -> Result<()> {
    let Some(space) = state.space else {
        return Ok(());
    };
    let speed = params.medium.v() * space.direction;
    let nu = speed * dt / space.dx;
    if nu.abs() > 1.0 {
        return Err(Error::Unstable {
            dt,
            bound: space.dx / speed.abs(),
        });
    }
    if nu == 0.0 {
        return Ok(());
    }
    let np = state.p.len();
    let nx = space.nx;
    let old = state.f.clone();
    let a = nu.abs();
    for ix in 0..nx {
        let up = if nu > 0.0 { (ix + nx - 1) % nx } else { (ix + 1) % nx };
        for ip in 0..np {
            state.f[ix * np + ip] = (1.0 - a) * old[ix * np + ip] + a * old[up * np + ip];
        }
    }
    Ok(())
}

/// One operator-split step: upwind transport, then exact local damping or relaxation.
pub fn kinetic_step(state: &KineticState, params: &KineticParams, dynamics: Dynamics, dt: f64) -> Result<KineticState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid("dt", format!("must be positive, got {dt}")));
    }
    let mut out = state.clone();
    advect(&mut out, params, dt)?;
    let np = out.p.len();
    match dynamics {
        Dynamics::TransportOnly => {}
        Dynamics::DampingOnly => {
            let decay = (-params.gamma * dt).exp();
            out.f.iter_mut().for_each(|f| *f *= decay);
        }
        Dynamics::Relaxation(model) => {
            let coeffs: Vec<(f64, f64)> = out.p.centers.iter().map(|&p| affine(model, params.x(p), params)).collect();
            out.f.par_chunks_mut(np).for_each(|row| {
                for (f, &(a, b)) in row.iter_mut().zip(&coeffs) {
                    let fixed = a / b;
                    *f = fixed + (*f - fixed) * (-b * dt).exp();
                }
            });
        }
    }
    out.f.iter_mut().for_each(|f| *f = f.max(0.0));
    out.t += dt;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelaxationReport {
    pub model: SourceModel,
    pub times: Vec<f64>,
    /// Largest per-cell relative distance `|f - f_eq| / f_eq` at each time.
    pub max_distance: Vec<f64>,
    /// Per-cell relative distance at the final time.
    pub final_distance: Vec<f64>,
    /// Every cell's distance is non-increasing in time.
    pub monotone: bool,
    /// Distributions at the sample times.
    pub trajectory: Vec<Vec<f64>>,
}

/// Integrate a homogeneous state to `t_end`, sampling `samples` equal intervals.
pub fn relax_to_equilibrium(
    f0: &KineticState,
    params: &KineticParams,
    model: SourceModel,
    t_end: f64,
    samples: usize,
) -> Result<RelaxationReport> {
    if f0.space.is_some() {
        return Err(invalid("f0", "relaxation reports need a homogeneous state"));
    }
    if !(t_end > 0.0) || samples == 0 {
        return Err(invalid("t_end", "need t_end > 0 and at least one sample"));
    }
    let eq: Vec<f64> = f0
        .p
        .centers
        .iter()
        .map(|&p| equilibrium_f(model, p, params))
        .collect::<Result<_>>()?;
    let distance = |f: &[f64]| -> Vec<f64> { f.iter().zip(&eq).map(|(a, b)| (a - b).abs() / b).collect() };
    let dt = t_end / samples as f64;
    let mut state = f0.clone();
    let mut times = vec![state.t];
    let mut prev = distance(&state.f);
    let mut max_distance = vec![prev.iter().cloned().fold(0.0, f64::max)];
    let mut trajectory = vec![state.f.clone()];
    let mut monotone = true;
    for _ in 0..samples {
        state = kinetic_step(&state, params, Dynamics::Relaxation(model), dt)?;
        let d = distance(&state.f);
        monotone &= d.iter().zip(&prev).all(|(now, before)| *now <= *before * (1.0 + 1e-12) + 1e-300);
        max_distance.push(d.iter().cloned().fold(0.0, f64::max));
        times.push(state.t);
        trajectory.push(state.f.clone());
        prev = d;
    }
    Ok(RelaxationReport {
        model,
        times,
        max_distance,
        final_distance: prev,
        monotone,
        trajectory,
    })
}

/// Largest `|rhs(f^T)| / (gamma f^T)` over the cells: how far Planck is from stationarity.
pub fn stationarity_residual(model: SourceModel, grid: &MomentumGrid, params: &KineticParams) -> Result<f64> {
    grid.centers.iter().try_fold(0.0_f64, |worst, &p| {
        let f = planck_f(p, params)?;
        let r = relaxation_rhs(model, p, params, f)?;
        Ok(worst.max(r.abs() / (params.gamma * f)))
    })
}

/// Spectral energy density per unit wavelength, `U_lambda = 4 pi p^2 f^T eps_p |dp/dlambda|` at `p = h / lambda`.
pub fn spectral_energy_density(lambda: f64, params: &KineticParams) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(invalid("lambda", format!("wavelength must be positive, got {lambda}")));
    }
    let h = params.h();
    let p = h / lambda;
    Ok(4.0 * PI * p * p * planck_f(p, params)? * params.energy(p) * h / (lambda * lambda))
}

fn quad(f: impl Fn(f64) -> f64, breaks: &[f64], rel_tol: f64, scale: f64) -> f64 {
    breaks
        .windows(2)
        .map(|w| integrate(&f, w[0], w[1], rel_tol * scale).integral)
        .sum()
}

/// `int d^3p f^T eps_p` by adaptive quadrature over the radial momentum.
pub fn thermal_energy_density(params: &KineticParams) -> f64 {
    let pt = params.momentum_at(1.0);
    let scale = 4.0 * PI * pt.powi(3) * params.kt() * 2.0 / params.h().powi(3);
    let breaks: Vec<f64> = [0.0, 2.0, 10.0, 40.0, 80.0].iter().map(|x| x * pt).collect();
    quad(
        |p| if p > 0.0 { 4.0 * PI * p * p * planck_x(params.x(p), params.h()) * params.energy(p) } else { 0.0 },
        &breaks,
        1e-15,
        scale,
    )
}

/// `int U_lambda d lambda`, integrated in `ln lambda`.
pub fn integrated_spectral_density(params: &KineticParams) -> f64 {
    // x = h v / (lambda k_B T) from 200 down to 1e-5
    let lam = |x: f64| params.h() * params.medium.v() / (x * params.kt());
    let (lo, hi) = (lam(200.0).ln(), lam(1e-5).ln());
    let breaks: Vec<f64> = [lo, lam(20.0).ln(), lam(3.0).ln(), lam(0.5).ln(), lam(0.02).ln(), hi].to_vec();
    let scale = thermal_energy_density(params);
    quad(
        |s| {
            let l = s.exp();
            spectral_energy_density(l, params).map_or(0.0, |u| u * l)
        },
        &breaks,
        1e-15,
        scale,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WienPeak {
    pub lambda_m: f64,
    /// `lambda_m p_T / hbar` with `p_T = k_B T / c`.
    pub product: f64,
    /// Peak position in `x = h v / (lambda k_B T)`.
    pub x_peak: f64,
}

/// Golden-section maximisation of `ln U_lambda` in the scaled wavelength `y = lambda k_B T / (h v)`.
///
/// `U_lambda(T) = T^5 Phi(lambda T)`, so maximising the shape `Phi` locates the
/// peak for every temperature at once.
pub fn wien_peak(params: &KineticParams) -> Result<WienPeak> {
    params.validate()?;
    let shape = |y: f64| -5.0 * y.ln() - (1.0 / y).exp_m1().ln();
    let (mut a, mut b) = (0.05_f64, 2.0_f64);
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (shape(c), shape(d));
    while (b - a).abs() > 1e-13 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = shape(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = shape(d);
        }
    }
    let y = 0.5 * (a + b);
    let lambda_m = y * params.h() * params.medium.v() / params.kt();
    Ok(WienPeak {
        lambda_m,
        product: lambda_m * params.thermal_momentum() / params.hbar(),
        x_peak: 1.0 / y,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonCount {
    pub n_m: f64,
    pub lambda_m: f64,
    pub quadrature_error: f64,
}

/// `N_m = lambda_m^3 int d^3p f^T`.
pub fn thermal_photon_count(params: &KineticParams) -> Result<PhotonCount> {
    let peak = wien_peak(params)?;
    let pt = params.momentum_at(1.0);
    let integrand = |p: f64| if p > 0.0 { 4.0 * PI * p * p * planck_x(params.x(p), params.h()) } else { 0.0 };
    let scale = 4.0 * PI * pt.powi(3) * 2.0 / params.h().powi(3);
    let breaks: Vec<f64> = [0.0, 2.0, 10.0, 40.0, 80.0].iter().map(|x| x * pt).collect();
    let (mut total, mut err) = (0.0, 0.0);
    for w in breaks.windows(2) {
        let o = integrate(integrand, w[0], w[1], 1e-15 * scale);
        total += o.integral;
        err += o.error_estimate;
    }
    let l3 = peak.lambda_m.powi(3);
    Ok(PhotonCount {
        n_m: l3 * total,
        lambda_m: peak.lambda_m,
        quadrature_error: l3 * err,
    })
}

/// Positive root of `x = 5 (1 - exp(-x))` by Newton iteration.
pub fn wien_root() -> f64 {
    let mut x = 5.0_f64;
    for _ in 0..50 {
        let g = x - 5.0 * (-(-x).exp_m1());
        let dg = 1.0 - 5.0 * (-x).exp();
        let step = g / dg;
        x -= step;
        if step.abs() < 1e-16 * x {
            break;
        }
    }
    x
}

/// Riemann zeta(3) by its defining series with an integral tail correction.
pub fn zeta3() -> f64 {
    let n = 100_000u32;
    let head: f64 = (1..=n).rev().map(|k| 1.0 / f64::from(k).powi(3)).sum();
    let nf = f64::from(n);
    // Euler-Maclaurin tail of sum_{k>n} k^-3
    head + 1.0 / (2.0 * nf * nf) - 1.0 / (2.0 * nf.powi(3)) + 1.0 / (4.0 * nf.powi(4))
}

/// Closed-form photon count `16 pi zeta(3) (lambda_m k_B T / (h v))^3` for a peak at `lambda_m`.
pub fn photon_count_closed_form(lambda_m: f64, params: &KineticParams) -> f64 {
    let y = lambda_m * params.kt() / (params.h() * params.medium.v());
    16.0 * PI * zeta3() * y.powi(3)
}
