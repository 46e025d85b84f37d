//! Residuals of the field evolution and energy transport laws on sampled data,
//! plus analytic solutions used to exercise them.
//!
//! Time derivatives use the centred difference `(X[n+1] - X[n-1]) / 2dt`,
//! compared against the Simpson average `(g[n-1] + 4 g[n] + g[n+1]) / 6` of
//! the right-hand side. For smooth data the mismatch is `O(dt^4)`.

use super::MediumParams;
use crate::error::{invalid, Error, Result};
use crate::spectral::{Grid3, VectorField};
use crate::{CVec3, Complex64, Vec3};

fn check_series(len: usize, dt: f64) -> Result<()> {
    if len < 3 {
        return Err(Error::TooFewSamples { needed: 3, got: len });
    }
    if !(dt > 0.0) {
        return Err(invalid("dt", format!("must be positive, got {dt}")));
    }
    Ok(())
}

/// `sqrt(sum |lhs - rhs|^2) / max(sqrt(sum |lhs|^2), sqrt(sum |rhs|^2))`, or 0 when both vanish.
fn relative(diff2: f64, lhs2: f64, rhs2: f64) -> f64 {
    let scale = lhs2.max(rhs2).sqrt();
    if scale == 0.0 {
        0.0
    } else {
        diff2.sqrt() / scale
    }
}

/// Relative residual of `dF/dt = -i v curl F - j / sqrt(eps)`.
pub fn curl_evolution_residual(
    series: &[VectorField],
    dt: f64,
    medium: &MediumParams,
    current: Option<&[VectorField]>,
) -> Result<f64> {
    check_series(series.len(), dt)?;
    let grid = series[0].grid;
    if let Some(j) = current {
        if j.len() != series.len() {
            return Err(Error::GridMismatch(format!("{} current samples for {} field samples", j.len(), series.len())));
        }
    }
    let v = medium.v();
    let inv_se = 1.0 / medium.epsilon.sqrt();
    let rhs: Vec<VectorField> = series
        .iter()
        .enumerate()
        .map(|(n, f)| {
            let mut g = grid.curl(f)?;
            let miv = Complex64::new(0.0, -v);
            for d in 0..3 {
                for (idx, z) in g.comps[d].iter_mut().enumerate() {
                    *z *= miv;
                    if let Some(j) = current {
                        *z -= j[n].comps[d][idx] * inv_se;
                    }
                }
            }
            Ok(g)
        })
        .collect::<Result<_>>()?;
    let (mut diff2, mut lhs2, mut rhs2) = (0.0, 0.0, 0.0);
    for n in 1..series.len() - 1 {
        for d in 0..3 {
            for idx in 0..grid.cells() {
                let l = (series[n + 1].comps[d][idx] - series[n - 1].comps[d][idx]) / (2.0 * dt);
                let r = (rhs[n - 1].comps[d][idx] + rhs[n].comps[d][idx] * 4.0 + rhs[n + 1].comps[d][idx]) / 6.0;
                diff2 += (l - r).norm_sqr();
                lhs2 += l.norm_sqr();
                rhs2 += r.norm_sqr();
            }
        }
    }
    Ok(relative(diff2, lhs2, rhs2))
}

/// Relative residual of `dw/dt + div Y + E.j = 0`.
///
/// `dissipation` holds `E.j` per sample, or `None` for a source-free field.
pub fn energy_flow_residual(
    grid: Grid3,
    w: &[Vec<f64>],
    y: &[[Vec<f64>; 3]],
    dissipation: Option<&[Vec<f64>]>,
    dt: f64,
) -> Result<f64> {
    check_series(w.len(), dt)?;
    if y.len() != w.len() || dissipation.is_some_and(|d| d.len() != w.len()) {
        return Err(Error::GridMismatch("series lengths differ".into()));
    }
    let rhs: Vec<Vec<f64>> = y
        .iter()
        .enumerate()
        .map(|(n, yn)| {
            let mut div = grid.divergence_real(yn)?;
            for (idx, v) in div.iter_mut().enumerate() {
                *v = -*v - dissipation.map_or(0.0, |d| d[n][idx]);
            }
            Ok(div)
        })
        .collect::<Result<_>>()?;
    let (mut diff2, mut lhs2, mut rhs2) = (0.0, 0.0, 0.0);
    for n in 1..w.len() - 1 {
        for idx in 0..grid.cells() {
            let l = (w[n + 1][idx] - w[n - 1][idx]) / (2.0 * dt);
            let r = (rhs[n - 1][idx] + 4.0 * rhs[n][idx] + rhs[n + 1][idx]) / 6.0;
            diff2 += (l - r) * (l - r);
            lhs2 += l * l;
            rhs2 += r * r;
        }
    }
    Ok(relative(diff2, lhs2, rhs2))
}

/// Circularly polarised plane wave along `z` and its complex potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularWave {
    /// `A_perp (cos phi, sigma sin phi, 0)`, `phi = k (x3 - sigma v t)`.
    pub a: Vec3,
    /// `sqrt(2/mu) A_perp exp(-i phi) (1, i sigma, 0) / sqrt(2)`.
    pub u: CVec3,
}

pub fn circular_plane_wave(k: f64, a_perp: f64, sigma: i8, medium: &MediumParams, x3: f64, t: f64) -> Result<CircularWave> {
    if sigma != 1 && sigma != -1 {
        return Err(invalid("sigma", format!("helicity must be +1 or -1, got {sigma}")));
    }
    let s = f64::from(sigma);
    let phase = k * (x3 - s * medium.v() * t);
    let a = Vec3::new(a_perp * phase.cos(), s * a_perp * phase.sin(), 0.0);
    let amp = (2.0 / medium.mu).sqrt() * a_perp * std::f64::consts::FRAC_1_SQRT_2;
    let e = Complex64::from_polar(amp, -phase);
    let u = CVec3::new(e, e * Complex64::new(0.0, s), Complex64::default());
    Ok(CircularWave { a, u })
}

/// Standing wave in an Ohmic medium, `E = x e(t) cos(kz)`, `H = y h(t) sin(kz)`,
/// with `j = sigma_q E`. `m` is the integer wavenumber along `z` on the grid box.
pub fn damped_standing_wave(
    grid: Grid3,
    medium: &MediumParams,
    sigma_q: f64,
    e0: f64,
    m: i32,
    t: f64,
) -> Result<(VectorField, VectorField)> {
    if m == 0 {
        return Err(invalid("m", "standing wave needs k != 0"));
    }
    if !(sigma_q >= 0.0) {
        return Err(invalid("sigma_q", format!("must be non-negative, got {sigma_q}")));
    }
    let k = grid.dk() * f64::from(m);
    let w = medium.v() * k.abs();
    let gamma = sigma_q / medium.epsilon;
    let om2 = w * w - gamma * gamma / 4.0;
    if !(om2 > 0.0) {
        return Err(invalid("sigma_q", "overdamped: need omega > gamma / 2"));
    }
    let om = om2.sqrt();
    let decay = (-gamma * t / 2.0).exp();
    let (s, c) = (om * t).sin_cos();
    let e_t = e0 * decay * (c - gamma / (2.0 * om) * s);
    let h_t = medium.c * k * e0 * decay * s / (medium.mu * om);
    let e = VectorField::from_fn(grid, |p| CVec3::new((e_t * (k * p.z).cos()).into(), 0.0.into(), 0.0.into()));
    let h = VectorField::from_fn(grid, |p| CVec3::new(0.0.into(), (h_t * (k * p.z).sin()).into(), 0.0.into()));
    Ok((e, h))
}
