//! Wigner phase-space distributions of 1-D action waves.
//!
//! The transform is evaluated from the mode amplitudes,
//!
//! ```text
//! f(x, p) = 1 / (2 pi hbar^2) int dk exp(i k x) psi'_{p/hbar + k/2} psi'*_{p/hbar - k/2}
//! ```
//!
//! on a doubled momentum grid: every pair of modes `(a, b)` contributes to
//! the row `p = hbar (a + b) dk / 2`, so no interpolation to half-lattice
//! positions is needed. Rows are spaced by `hbar dk / 2`; the `k` step inside
//! one row is `2 dk`.
//!
//! Periodic data aliases: every row is periodic in `x` with period `L/2`
//! (odd rows flip sign). Spectra must occupy less than half the zone.

use crate::error::{invalid, Error, Result};
use crate::lattice::{dispersion, psi_from_modes, ActionWave, ModeSpectrum};
use crate::spectral::{bin_of, signed_bin, FftPair};
use crate::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Real distribution `f(x, p)` on a uniform grid, stored row-major with the
/// momentum index outermost.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub x0: f64,
    pub dx: f64,
    pub nx: usize,
    pub p0: f64,
    pub dp: f64,
    pub np: usize,
    pub f: Vec<f64>,
    pub hbar: f64,
    /// Largest discarded imaginary part relative to the largest `|f|`.
    pub imag_residue: f64,
}

impl WignerGrid {
    pub fn x(&self, ix: usize) -> f64 {
        self.x0 + ix as f64 * self.dx
    }

    pub fn p(&self, ip: usize) -> f64 {
        self.p0 + ip as f64 * self.dp
    }

    pub fn value(&self, ix: usize, ip: usize) -> f64 {
        self.f[ip * self.nx + ix]
    }

    pub fn row(&self, ip: usize) -> &[f64] {
        &self.f[ip * self.nx..(ip + 1) * self.nx]
    }

    pub fn max_abs(&self) -> f64 {
        self.f.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `int dx dp f`.
    pub fn integral(&self) -> f64 {
        self.f.iter().sum::<f64>() * self.dx * self.dp
    }

    /// `int dx dp f(x, p) weight(p)`.
    pub fn weighted_integral(&self, weight: impl Fn(f64) -> f64) -> f64 {
        (0..self.np)
            .map(|ip| weight(self.p(ip)) * self.row(ip).iter().sum::<f64>())
            .sum::<f64>()
            * self.dx
            * self.dp
    }

    /// `int dp f(x, p)` at every `x`.
    pub fn position_marginal(&self) -> Vec<f64> {
        (0..self.nx)
            .map(|ix| (0..self.np).map(|ip| self.value(ix, ip)).sum::<f64>() * self.dp)
            .collect()
    }

    /// `int dx f(x, p)` on every row.
    pub fn momentum_marginal(&self) -> Vec<f64> {
        (0..self.np)
            .map(|ip| self.row(ip).iter().sum::<f64>() * self.dx)
            .collect()
    }

    /// Momentum marginal averaged over mode cells of width `hbar dk`: the
    /// entry for mode `a` is the mean of rows `2a` and `2a + 1`. For a grid
    /// produced by [`wigner_1d`] this equals `|psi'_a|^2 / hbar^2`.
    pub fn momentum_marginal_mode_cells(&self) -> Vec<f64> {
        let rows = self.momentum_marginal();
        rows.chunks(2)
            .map(|pair| pair.iter().sum::<f64>() / 2.0)
            .collect()
    }

    /// `max |f - g| / max |g|` against a reference evaluated on the same nodes.
    pub fn normalized_linf(&self, reference: impl Fn(f64, f64) -> f64) -> f64 {
        let mut diff = 0.0_f64;
        let mut scale = 0.0_f64;
        for ip in 0..self.np {
            let p = self.p(ip);
            for ix in 0..self.nx {
                let g = reference(self.x(ix), p);
                diff = diff.max((self.value(ix, ip) - g).abs());
                scale = scale.max(g.abs());
            }
        }
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }

    /// Columns with `x` in `[-L/4, L/4)`, the half period free of the
    /// alias images at `x +- L/2`.
    pub fn fundamental_window(&self) -> WignerGrid {
        let quarter = self.nx / 4;
        let centre = self.nx / 2;
        let lo = centre - quarter;
        let hi = centre + quarter;
        let f = (0..self.np)
            .flat_map(|ip| self.row(ip)[lo..hi].to_vec())
            .collect();
        WignerGrid {
            x0: self.x(lo),
            nx: hi - lo,
            f,
            ..self.clone()
        }
    }

    /// Every `stride`-th node along both axes, starting from the first.
    pub fn decimated(&self, stride: usize) -> WignerGrid {
        let stride = stride.max(1);
        let nx = self.nx.div_ceil(stride);
        let np = self.np.div_ceil(stride);
        let f = (0..np)
            .flat_map(|jp| (0..nx).map(move |jx| (jx * stride, jp * stride)))
            .map(|(ix, ip)| self.value(ix, ip))
            .collect();
        WignerGrid {
            dx: self.dx * stride as f64,
            nx,
            dp: self.dp * stride as f64,
            np,
            f,
            ..self.clone()
        }
    }

    /// Scale every value by `factor`.
    pub fn scaled(mut self, factor: f64) -> Self {
        self.f.iter_mut().for_each(|v| *v *= factor);
        self
    }
}

/// Wigner transform of `psi / sqrt(hbar)` for a phonon action wave.
///
/// The `x` axis holds the sites `n = -N/2 .. N/2 - 1`; the `p` axis holds
/// `hbar s dk / 2` for `s = -N .. N - 2`.
pub fn wigner_1d(psi: &ActionWave) -> Result<WignerGrid> {
    if !(psi.hbar > 0.0) {
        return Err(invalid("hbar", format!("must be positive, got {}", psi.hbar)));
    }
    let g = psi.grid();
    let n = g.n;
    if n < 2 || n % 2 != 0 {
        return Err(invalid("n", format!("mode count must be even, got {n}")));
    }
    let half = (n / 2) as i64;
    let dk = g.dk();
    let hbar = psi.hbar;
    let pref = 2.0 * dk / (2.0 * PI * hbar * hbar);
    let plans = FftPair::new(n);
    let amp = |a: i64| psi.psik[(a + half) as usize];

    let rows: Vec<(Vec<f64>, f64, f64)> = (-(n as i64)..=(n as i64 - 2))
        .into_par_iter()
        .map(|s| {
            let mut buf = vec![Complex64::default(); n];
            let lo = (-half).max(s - (half - 1));
            let hi = (half - 1).min(s + half);
            for a in lo..=hi {
                let b = s - a;
                buf[bin_of(a - b, n)] += amp(a) * amp(b).conj();
            }
            plans.inverse.process(&mut buf);
            let mut row = Vec::with_capacity(n);
            let mut imag = 0.0_f64;
            let mut real = 0.0_f64;
            for ix in 0..n {
                let z = buf[bin_of(ix as i64 - half, n)] * pref;
                imag = imag.max(z.im.abs());
                real = real.max(z.re.abs());
                row.push(z.re);
            }
            (row, imag, real)
        })
        .collect();

    let max_re = rows.iter().fold(0.0_f64, |m, r| m.max(r.2));
    let max_im = rows.iter().fold(0.0_f64, |m, r| m.max(r.1));
    Ok(WignerGrid {
        x0: -(half as f64) * g.ell,
        dx: g.ell,
        nx: n,
        p0: -(n as f64) * hbar * dk / 2.0,
        dp: hbar * dk / 2.0,
        np: 2 * n - 1,
        f: rows.into_iter().flat_map(|r| r.0).collect(),
        hbar,
        imag_residue: if max_re > 0.0 { max_im / max_re } else { max_im },
    })
}

/// Wigner transform of site samples `psi(x_i)` on a uniform grid.
pub fn wigner_from_samples(x: &[f64], psi: &[Complex64], hbar: f64) -> Result<WignerGrid> {
    if x.len() != psi.len() {
        return Err(Error::GridMismatch(format!(
            "{} positions for {} samples",
            x.len(),
            psi.len()
        )));
    }
    if x.len() < 2 || x.len() % 2 != 0 {
        return Err(invalid("x", format!("need an even number of samples, got {}", x.len())));
    }
    let ell = x[1] - x[0];
    if !(ell > 0.0) {
        return Err(Error::NonUniformGrid(format!("spacing {ell} is not positive")));
    }
    for (i, w) in x.windows(2).enumerate() {
        let d = w[1] - w[0];
        if (d - ell).abs() > 1e-9 * ell {
            return Err(Error::NonUniformGrid(format!(
                "spacing {d} at index {i} differs from {ell}"
            )));
        }
    }
    let mut wave = ActionWave::from_site_amplitudes(psi, ell, hbar);
    let g = wave.grid();
    for (i, z) in wave.psik.iter_mut().enumerate() {
        *z *= Complex64::from_polar(1.0, -g.k(i) * x[0]);
    }
    wigner_1d(&wave)
}

/// Parameters of the Gaussian action density `eta_k = N hbar sqrt(g/pi) exp(-g (k-k0)^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianEtaParams {
    pub k0: f64,
    /// Width parameter, length^2.
    pub g: f64,
    pub n_quanta: u32,
    pub v_g: f64,
}

impl GaussianEtaParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.g > 0.0 && self.g.is_finite()) {
            return Err(invalid("g", format!("must be positive, got {}", self.g)));
        }
        if self.n_quanta < 1 {
            return Err(invalid("n_quanta", "must be >= 1"));
        }
        Ok(())
    }
}

/// Closed-form Wigner function of the Gaussian action wave.
pub fn wigner_gaussian_closed(params: &GaussianEtaParams, x: f64, p: f64, t: f64, hbar: f64) -> f64 {
    let dp = p - hbar * params.k0;
    let dx = x - params.v_g * t;
    params.n_quanta as f64 / (PI * hbar) * (-params.g * dp * dp / (hbar * hbar) - dx * dx / params.g).exp()
}

/// Translate every row by `v_g(p) t` in `x` with a spectral shift.
///
/// Exact for linear dispersion; otherwise the narrow-band approximation.
pub fn evolve_wigner_group_velocity(
    grid: &WignerGrid,
    t: f64,
    group_velocity: impl Fn(f64) -> f64 + Sync,
) -> WignerGrid {
    if t == 0.0 {
        return grid.clone();
    }
    let n = grid.nx;
    let plans = FftPair::new(n);
    let dk = 2.0 * PI / (n as f64 * grid.dx);
    let rows: Vec<Vec<f64>> = (0..grid.np)
        .into_par_iter()
        .map(|ip| {
            let shift = group_velocity(grid.p(ip)) * t;
            let mut buf: Vec<Complex64> = grid.row(ip).iter().map(|&v| v.into()).collect();
            plans.forward.process(&mut buf);
            for (bin, z) in buf.iter_mut().enumerate() {
                let d = signed_bin(bin, n);
                let phase = d as f64 * dk * shift;
                // bin d holds the exp(+i d dk x) component; unpaired Nyquist bin stays real
                if 2 * d.unsigned_abs() as usize == n {
                    *z *= phase.cos();
                } else {
                    *z *= Complex64::from_polar(1.0, -phase);
                }
            }
            plans.inverse.process(&mut buf);
            buf.iter().map(|z| z.re / n as f64).collect()
        })
        .collect();
    WignerGrid {
        f: rows.into_iter().flatten().collect(),
        ..grid.clone()
    }
}

/// Quasi-energy density: `hbar` times the Wigner transform of
/// `Phi'_k = sqrt(omega_k) psi'_k`. Returns the grid and `int dx dp f_E`.
pub fn quasi_energy_density(spec: &ModeSpectrum, hbar: f64) -> Result<(WignerGrid, f64)> {
    let psi = psi_from_modes(spec, hbar)?;
    let g = psi.grid();
    let phi = ActionWave {
        psik: psi
            .psik
            .iter()
            .enumerate()
            .map(|(i, z)| z * dispersion(g.k(i), &spec.params).sqrt())
            .collect(),
        ..psi
    };
    let grid = wigner_1d(&phi)?.scaled(hbar);
    let total = grid.integral();
    Ok((grid, total))
}
