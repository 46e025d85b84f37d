//! Complex vector potential `U` in the gauge `U_0 = 0`.
//!
//! `U` obeys `i dU/dt = v curl U` with `div U = 0`. A plane mode
//! `U'_k exp(-i k.x)` precesses as `dU'_k/dt = -v k x U'_k`; helicity
//! eigenmodes satisfy `k x U'_k = -i sigma |k| U'_k` and only pick up the
//! phase `exp(i sigma omega_k t)`.

use crate::error::{invalid, Result};
use crate::spectral::{Grid3, VectorField};
use crate::{CVec3, Complex64, Vec3};
use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

type CMat3 = Matrix3<Complex64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexPotentialMode {
    pub k: [f64; 3],
    pub u: [Complex64; 3],
    #[serde(default)]
    pub sigma: Option<i8>,
}

impl ComplexPotentialMode {
    pub fn new(k: Vec3, u: CVec3, sigma: Option<i8>) -> Self {
        ComplexPotentialMode {
            k: [k.x, k.y, k.z],
            u: [u[0], u[1], u[2]],
            sigma,
        }
    }

    pub fn kvec(&self) -> Vec3 {
        Vec3::from(self.k)
    }

    pub fn uvec(&self) -> CVec3 {
        CVec3::new(self.u[0], self.u[1], self.u[2])
    }

    /// Canonical helical mode along `k`: `(e1 + i sigma e2)/sqrt(2)` times `amplitude`.
    pub fn helical(k: Vec3, sigma: i8, amplitude: Complex64) -> Result<Self> {
        check_sigma(sigma)?;
        let basis = crate::em::polarization_basis(k)?;
        let h = crate::em::modes::helical_vector(&basis, sigma) * amplitude;
        Ok(Self::new(k, h, Some(sigma)))
    }
}

fn check_sigma(sigma: i8) -> Result<()> {
    if sigma == 1 || sigma == -1 {
        Ok(())
    } else {
        Err(invalid("sigma", format!("helicity must be +1 or -1, got {sigma}")))
    }
}

fn cross_matrix(n: Vec3) -> Matrix3<f64> {
    Matrix3::new(0.0, -n.z, n.y, n.z, 0.0, -n.x, -n.y, n.x, 0.0)
}

/// `|k x U + i sigma |k| U| / (|k| |U|)` for a mode carrying a helicity label.
pub fn helicity_eigencheck(mode: &ComplexPotentialMode) -> Result<f64> {
    let sigma = mode.sigma.ok_or_else(|| invalid("sigma", "mode carries no helicity label"))?;
    check_sigma(sigma)?;
    let k = mode.kvec();
    let kn = k.norm();
    if !(kn > 0.0) {
        return Err(invalid("k", "helicity undefined for k = 0"));
    }
    let u = mode.uvec();
    let un = u.norm();
    if un == 0.0 {
        return Ok(0.0);
    }
    let r = k.map(Complex64::from).cross(&u) + u * Complex64::new(0.0, f64::from(sigma) * kn);
    Ok(r.norm() / (kn * un))
}

/// Projector onto helicity `sigma`, `(I - k k^T + i sigma [k]x) / 2` with unit `k`.
pub fn helical_projector(k: Vec3, sigma: i8) -> Result<CMat3> {
    check_sigma(sigma)?;
    let n = k.try_normalize(0.0).ok_or_else(|| invalid("k", "projector undefined for k = 0"))?;
    let trans = Matrix3::identity() - n * n.transpose();
    let rot = cross_matrix(n);
    Ok(CMat3::from_fn(|i, j| {
        Complex64::new(trans[(i, j)], f64::from(sigma) * rot[(i, j)]) * 0.5
    }))
}

/// Projector onto the longitudinal direction, `k k^T / |k|^2`.
pub fn longitudinal_projector(k: Vec3) -> Result<CMat3> {
    let n = k.try_normalize(0.0).ok_or_else(|| invalid("k", "projector undefined for k = 0"))?;
    Ok((n * n.transpose()).map(Complex64::from))
}

/// Exact precession `U'(t) = exp(-v t [k]x) U'(0)`: a rotation about `k` by `-omega t`.
pub fn precess_mode(mode: &ComplexPotentialMode, t: f64, v: f64) -> ComplexPotentialMode {
    let k = mode.kvec();
    let kn = k.norm();
    if kn == 0.0 {
        return mode.clone();
    }
    let n = k / kn;
    let theta = -v * kn * t;
    let (s, c) = theta.sin_cos();
    let u = mode.uvec();
    let nc = n.map(Complex64::from);
    let rotated = u * Complex64::from(c) + nc.cross(&u) * Complex64::from(s) + nc * (nc.dot(&u) * (1.0 - c));
    ComplexPotentialMode {
        u: [rotated[0], rotated[1], rotated[2]],
        ..mode.clone()
    }
}

/// `exp(ik(z - vt)) (rho e_p + i sqrt(2)/k e_z)` with `e_p = (e_rho + i e_phi)/sqrt(2)`.
pub fn cylindrical_solution(k: f64, rho: f64, phi: f64, z: f64, t: f64, v: f64) -> Result<CVec3> {
    if k == 0.0 || !k.is_finite() {
        return Err(invalid("k", format!("axial wavenumber must be nonzero, got {k}")));
    }
    let (sp, cp) = phi.sin_cos();
    let e_rho = Vec3::new(cp, sp, 0.0).map(Complex64::from);
    let e_phi = Vec3::new(-sp, cp, 0.0).map(Complex64::from);
    let e_p = (e_rho + e_phi * Complex64::i()) / Complex64::from(SQRT_2);
    let axial = Complex64::new(0.0, SQRT_2 / k);
    let u = e_p * Complex64::from(rho) + CVec3::new(Complex64::default(), Complex64::default(), axial);
    Ok(u * Complex64::from_polar(1.0, k * (z - v * t)))
}

/// [`cylindrical_solution`] at a Cartesian point.
pub fn cylindrical_cartesian(k: f64, x: Vec3, t: f64, v: f64) -> Result<CVec3> {
    cylindrical_solution(k, x.x.hypot(x.y), x.y.atan2(x.x), x.z, t, v)
}

/// Helical plane wave `h_sigma exp(-i k.x) exp(i sigma omega t)`.
pub fn helical_plane_wave(k: Vec3, sigma: i8, v: f64) -> Result<impl Fn(Vec3, f64) -> CVec3> {
    let mode = ComplexPotentialMode::helical(k, sigma, Complex64::from(1.0))?;
    let h = mode.uvec();
    let w = v * k.norm();
    let s = f64::from(sigma);
    Ok(move |x: Vec3, t: f64| h * Complex64::from_polar(1.0, -k.dot(&x) + s * w * t))
}

fn d_dx(u: &impl Fn(Vec3, f64) -> CVec3, x: Vec3, t: f64, axis: usize, h: f64) -> CVec3 {
    let mut e = Vec3::zeros();
    e[axis] = h;
    (u(x + e, t) - u(x - e, t)) / Complex64::from(2.0 * h)
}

/// Second-order centred curl.
pub fn fd_curl(u: &impl Fn(Vec3, f64) -> CVec3, x: Vec3, t: f64, h: f64) -> CVec3 {
    let d = [0, 1, 2].map(|a| d_dx(u, x, t, a, h));
    CVec3::new(d[1][2] - d[2][1], d[2][0] - d[0][2], d[0][1] - d[1][0])
}

/// Second-order centred divergence together with the sum of squared diagonal derivatives.
fn fd_divergence(u: &impl Fn(Vec3, f64) -> CVec3, x: Vec3, t: f64, h: f64) -> (Complex64, f64) {
    let d = [0, 1, 2].map(|a| d_dx(u, x, t, a, h)[a]);
    (d[0] + d[1] + d[2], d.iter().map(|z| z.norm_sqr()).sum())
}

/// `F = i curl U` by centred differences.
pub fn field_from_potential(u: &impl Fn(Vec3, f64) -> CVec3, x: Vec3, t: f64, h: f64) -> CVec3 {
    fd_curl(u, x, t, h) * Complex64::i()
}

/// `F = i curl U` by spectral differentiation of a gridded potential.
pub fn field_from_potential_grid(u: &VectorField) -> Result<VectorField> {
    let mut f = u.grid.curl(u)?;
    for c in &mut f.comps {
        c.iter_mut().for_each(|z| *z *= Complex64::i());
    }
    Ok(f)
}

/// Sample a potential on a grid at time `t`.
pub fn sample_potential(grid: Grid3, u: &impl Fn(Vec3, f64) -> CVec3, t: f64) -> VectorField {
    VectorField::from_fn(grid, |x| u(x, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialResidual {
    /// Relative residual of `i dU/dt = v curl U`.
    pub evolution: f64,
    /// Relative residual of `div U = 0`.
    pub divergence: f64,
}

/// Finite-difference residuals at the given points, time `t`, steps `h` and `dt`.
pub fn potential_equation_residual(
    u: &impl Fn(Vec3, f64) -> CVec3,
    v: f64,
    points: &[Vec3],
    t: f64,
    h: f64,
    dt: f64,
) -> Result<PotentialResidual> {
    if points.is_empty() {
        return Err(invalid("points", "no sample points"));
    }
    if !(h > 0.0 && dt > 0.0) {
        return Err(invalid("h", format!("stencil steps must be positive, got h = {h}, dt = {dt}")));
    }
    let (mut ev2, mut l2, mut r2, mut dv2, mut dd2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &x in points {
        let udot = (u(x, t + dt) - u(x, t - dt)) / Complex64::from(2.0 * dt);
        let lhs = udot * Complex64::i();
        let rhs = fd_curl(u, x, t, h) * Complex64::from(v);
        ev2 += (lhs - rhs).norm_squared();
        l2 += lhs.norm_squared();
        r2 += rhs.norm_squared();
        let (div, diag) = fd_divergence(u, x, t, h);
        dv2 += div.norm_sqr();
        dd2 += diag;
    }
    let rel = |num: f64, den: f64| if den == 0.0 { num.sqrt() } else { (num / den).sqrt() };
    Ok(PotentialResidual {
        evolution: rel(ev2, l2.max(r2)),
        divergence: rel(dv2, dd2),
    })
}

/// `n` deterministic points in the box `[-half, half]^3`.
pub fn sample_points(n: usize, half: f64, seed: u64) -> Vec<Vec3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Vec3::new(rng.gen_range(-half..half), rng.gen_range(-half..half), rng.gen_range(-half..half)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceLevel {
    pub h: f64,
    pub dt: f64,
    pub evolution: f64,
    pub divergence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub points: usize,
    pub levels: Vec<ConvergenceLevel>,
    /// Smallest observed order `log2(e(h) / e(h/2))`; `None` when the residual is at round-off.
    pub evolution_order: Option<f64>,
    pub divergence_order: Option<f64>,
    /// Smallest observed reduction factor per halving.
    pub evolution_ratio: Option<f64>,
    pub divergence_ratio: Option<f64>,
}

/// Residual floor below which no order is measured.
const ROUNDOFF_FLOOR: f64 = 1e-12;

fn worst_ratio(errors: &[f64]) -> Option<f64> {
    if errors.iter().any(|&e| e < ROUNDOFF_FLOOR) {
        return None;
    }
    errors.windows(2).map(|w| w[0] / w[1]).reduce(f64::min)
}

/// Residuals over `levels` successive halvings of `h0` and `dt0`.
pub fn convergence_study(
    u: &impl Fn(Vec3, f64) -> CVec3,
    v: f64,
    points: &[Vec3],
    t: f64,
    h0: f64,
    dt0: f64,
    levels: usize,
) -> Result<ConvergenceReport> {
    if levels < 2 {
        return Err(invalid("levels", "need at least two refinement levels"));
    }
    let levels: Vec<ConvergenceLevel> = (0..levels)
        .map(|i| {
            let s = 0.5_f64.powi(i as i32);
            let r = potential_equation_residual(u, v, points, t, h0 * s, dt0 * s)?;
            Ok(ConvergenceLevel {
                h: h0 * s,
                dt: dt0 * s,
                evolution: r.evolution,
                divergence: r.divergence,
            })
        })
        .collect::<Result<_>>()?;
    let ev: Vec<f64> = levels.iter().map(|l| l.evolution).collect();
    let dv: Vec<f64> = levels.iter().map(|l| l.divergence).collect();
    let evolution_ratio = worst_ratio(&ev);
    let divergence_ratio = worst_ratio(&dv);
    Ok(ConvergenceReport {
        points: points.len(),
        levels,
        evolution_order: evolution_ratio.map(f64::log2),
        divergence_order: divergence_ratio.map(f64::log2),
        evolution_ratio,
        divergence_ratio,
    })
}
