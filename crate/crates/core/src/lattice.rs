//! Periodic chain of coupled harmonic oscillators.
//!
//! Sites `n = 0..N` sit at `x = n * ell`. Mode amplitudes live on the
//! centred wavenumber grid `k_j = j * dk`, `j = -N/2 .. N/2 - 1`,
//! `dk = 2 pi / (N ell)`, stored at index `j + N/2`. The transforms carry the
//! continuum normalisation of the infinite chain:
//!
//! ```text
//! u'_k = sqrt(ell / 2pi) sum_n exp(+i k ell n) u_n
//! v'_k = sqrt(ell / 2pi) sum_n exp(-i k ell n) v_n
//! ```
//!
//! so that every integral over `k` becomes a `dk`-weighted sum and the
//! lattice energy is `sum_k dk H'_k`.

use crate::error::{invalid, Error, Result};
use crate::spectral::{bin_of, FftPair};
use crate::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeParams {
    pub mass: f64,
    /// On-site angular frequency.
    pub omega0: f64,
    /// Nearest-neighbour coupling, 1/time^2.
    pub kappa: f64,
    /// Lattice constant.
    pub ell: f64,
    pub n_sites: usize,
}

impl LatticeParams {
    pub fn new(mass: f64, omega0: f64, kappa: f64, ell: f64, n_sites: usize) -> Result<Self> {
        let p = LatticeParams {
            mass,
            omega0,
            kappa,
            ell,
            n_sites,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(invalid("mass", format!("must be positive, got {}", self.mass)));
        }
        if !(self.omega0 >= 0.0 && self.omega0.is_finite()) {
            return Err(invalid("omega0", format!("must be >= 0, got {}", self.omega0)));
        }
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(invalid("kappa", format!("must be positive, got {}", self.kappa)));
        }
        if !(self.ell > 0.0 && self.ell.is_finite()) {
            return Err(invalid("ell", format!("must be positive, got {}", self.ell)));
        }
        if self.n_sites < 2 || self.n_sites % 2 != 0 {
            return Err(invalid(
                "n_sites",
                format!("must be even and >= 2, got {}", self.n_sites),
            ));
        }
        Ok(())
    }

    /// Highest mode frequency, reached at the zone edge.
    pub fn omega_max(&self) -> f64 {
        (self.omega0 * self.omega0 + 4.0 * self.kappa).sqrt()
    }

    /// Long-wavelength sound speed `ell * sqrt(kappa)`.
    pub fn sound_speed(&self) -> f64 {
        self.ell * self.kappa.sqrt()
    }

    pub fn grid(&self) -> KGrid {
        KGrid {
            n: self.n_sites,
            ell: self.ell,
        }
    }

    pub fn omegas(&self) -> Vec<f64> {
        self.grid().ks().map(|k| dispersion(k, self)).collect()
    }
}

/// Centred wavenumber grid of a periodic lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KGrid {
    pub n: usize,
    pub ell: f64,
}

impl KGrid {
    pub fn dk(&self) -> f64 {
        2.0 * PI / (self.n as f64 * self.ell)
    }

    /// Signed mode number of storage index `i`.
    pub fn mode_number(&self, i: usize) -> i64 {
        i as i64 - (self.n / 2) as i64
    }

    pub fn index_of(&self, j: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        (-half..half).contains(&j).then(|| (j + half) as usize)
    }

    pub fn k(&self, i: usize) -> f64 {
        self.mode_number(i) as f64 * self.dk()
    }

    pub fn ks(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.k(i))
    }

    /// Storage index of `-k`. The Nyquist cell maps to itself.
    pub fn neg(&self, i: usize) -> usize {
        (self.n - i) % self.n
    }

    pub fn is_nyquist(&self, i: usize) -> bool {
        i == 0
    }
}

/// Angular frequency `sqrt(omega0^2 + 4 kappa sin^2(k ell / 2))`.
pub fn dispersion(k: f64, params: &LatticeParams) -> f64 {
    let s = (0.5 * k * params.ell).sin();
    (params.omega0 * params.omega0 + 4.0 * params.kappa * s * s).sqrt()
}

/// `d omega / dk`. At the acoustic zero (`k = 0`, `omega0 = 0`) the limit
/// from above, `ell sqrt(kappa)`, is returned.
pub fn group_velocity(k: f64, params: &LatticeParams) -> f64 {
    let w = dispersion(k, params);
    if w == 0.0 {
        return params.sound_speed();
    }
    params.kappa * params.ell * (k * params.ell).sin() / w
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeState {
    /// Displacements.
    pub u: Vec<f64>,
    /// Momenta.
    pub v: Vec<f64>,
    pub t: f64,
}

impl LatticeState {
    pub fn zeros(n: usize) -> Self {
        LatticeState {
            u: vec![0.0; n],
            v: vec![0.0; n],
            t: 0.0,
        }
    }

    pub fn check(&self, params: &LatticeParams) -> Result<()> {
        if self.u.len() != params.n_sites || self.v.len() != params.n_sites {
            return Err(Error::GridMismatch(format!(
                "state has {}/{} sites, lattice has {}",
                self.u.len(),
                self.v.len(),
                params.n_sites
            )));
        }
        if self.u.iter().chain(&self.v).any(|x| !x.is_finite()) {
            return Err(Error::Numerical("non-finite lattice state".into()));
        }
        Ok(())
    }

    /// Uniform random displacements and momenta in `[-amplitude, amplitude)`.
    pub fn random(n: usize, amplitude: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |_| amplitude * (2.0 * rng.gen::<f64>() - 1.0);
        let u = (0..n).map(&mut draw).collect();
        let v = (0..n).map(&mut draw).collect();
        LatticeState { u, v, t: 0.0 }
    }
}

/// Total energy with periodic wrap.
pub fn hamiltonian_energy(state: &LatticeState, params: &LatticeParams) -> f64 {
    let n = state.u.len();
    let m = params.mass;
    let w2 = params.omega0 * params.omega0;
    (0..n)
        .map(|i| {
            let prev = state.u[(i + n - 1) % n];
            let du = state.u[i] - prev;
            state.v[i] * state.v[i] / (2.0 * m)
                + 0.5 * m * w2 * state.u[i] * state.u[i]
                + 0.5 * m * params.kappa * du * du
        })
        .sum()
}

fn force(u: &[f64], params: &LatticeParams, out: &mut [f64]) {
    let n = u.len();
    let m = params.mass;
    let w2 = params.omega0 * params.omega0;
    for i in 0..n {
        let lap = u[(i + 1) % n] + u[(i + n - 1) % n] - 2.0 * u[i];
        out[i] = m * (-w2 * u[i] + params.kappa * lap);
    }
}

/// One kick-drift-kick step.
pub fn leapfrog_step(state: &LatticeState, params: &LatticeParams, dt: f64) -> Result<LatticeState> {
    let mut next = state.clone();
    leapfrog(&mut next, params, dt, 1)?;
    Ok(next)
}

/// `steps` kick-drift-kick steps applied in place.
pub fn leapfrog(state: &mut LatticeState, params: &LatticeParams, dt: f64, steps: usize) -> Result<()> {
    state.check(params)?;
    let bound = 2.0 / params.omega_max();
    if !(dt > 0.0 && dt < bound) {
        return Err(Error::Unstable { dt, bound });
    }
    let n = state.u.len();
    let mut f = vec![0.0; n];
    force(&state.u, params, &mut f);
    for _ in 0..steps {
        for i in 0..n {
            state.v[i] += 0.5 * dt * f[i];
            state.u[i] += dt * state.v[i] / params.mass;
        }
        force(&state.u, params, &mut f);
        for i in 0..n {
            state.v[i] += 0.5 * dt * f[i];
        }
        state.t += dt;
    }
    Ok(())
}

/// Mode amplitudes `u'_k`, `v'_k` on the centred grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrum {
    pub uk: Vec<Complex64>,
    pub vk: Vec<Complex64>,
    pub params: LatticeParams,
    pub t: f64,
}

impl ModeSpectrum {
    pub fn zeros(params: LatticeParams) -> Self {
        ModeSpectrum {
            uk: vec![ZERO; params.n_sites],
            vk: vec![ZERO; params.n_sites],
            params,
            t: 0.0,
        }
    }

    pub fn grid(&self) -> KGrid {
        self.params.grid()
    }

    /// Largest `|u'_k* - u'_{-k}|`, `|v'_k* - v'_{-k}|` relative to the largest amplitude.
    pub fn reality_defect(&self) -> f64 {
        let g = self.grid();
        let scale = self
            .uk
            .iter()
            .chain(&self.vk)
            .fold(0.0_f64, |m, z| m.max(z.norm()));
        if scale == 0.0 {
            return 0.0;
        }
        let worst = (0..g.n)
            .map(|i| {
                let j = g.neg(i);
                (self.uk[i].conj() - self.uk[j])
                    .norm()
                    .max((self.vk[i].conj() - self.vk[j]).norm())
            })
            .fold(0.0_f64, f64::max);
        worst / scale
    }
}

fn scatter_centred(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let half = (n / 2) as i64;
    let mut buf = vec![ZERO; n];
    for (i, z) in values.iter().enumerate() {
        buf[bin_of(i as i64 - half, n)] = *z;
    }
    buf
}

fn gather_centred(buf: &[Complex64]) -> Vec<Complex64> {
    let n = buf.len();
    let half = (n / 2) as i64;
    (0..n).map(|i| buf[bin_of(i as i64 - half, n)]).collect()
}

pub fn dft_to_modes(state: &LatticeState, params: &LatticeParams) -> Result<ModeSpectrum> {
    state.check(params)?;
    let n = params.n_sites;
    let plans = FftPair::new(n);
    let scale = (params.ell / (2.0 * PI)).sqrt();

    let mut ub: Vec<Complex64> = state.u.iter().map(|&x| Complex64::from(x)).collect();
    plans.inverse.process(&mut ub);
    let mut vb: Vec<Complex64> = state.v.iter().map(|&x| Complex64::from(x)).collect();
    plans.forward.process(&mut vb);

    let mut uk = gather_centred(&ub);
    let mut vk = gather_centred(&vb);
    uk.iter_mut().chain(vk.iter_mut()).for_each(|z| *z *= scale);
    Ok(ModeSpectrum {
        uk,
        vk,
        params: *params,
        t: state.t,
    })
}

/// Inverse of [`dft_to_modes`]; imaginary residues are discarded.
pub fn idft_from_modes(spec: &ModeSpectrum) -> LatticeState {
    let p = &spec.params;
    let n = p.n_sites;
    let plans = FftPair::new(n);
    let scale = p.ell.sqrt() * p.grid().dk() / (2.0 * PI).sqrt();

    let mut ub = scatter_centred(&spec.uk);
    plans.forward.process(&mut ub);
    let mut vb = scatter_centred(&spec.vk);
    plans.inverse.process(&mut vb);
    LatticeState {
        u: ub.iter().map(|z| z.re * scale).collect(),
        v: vb.iter().map(|z| z.re * scale).collect(),
        t: spec.t,
    }
}

const REALITY_TOL: f64 = 1e-9;

/// Per-mode energies `H'_k`; the lattice energy is `dk * sum`.
pub fn mode_energy(spec: &ModeSpectrum) -> Result<Vec<f64>> {
    let defect = spec.reality_defect();
    if defect > REALITY_TOL {
        return Err(Error::RealityViolated { defect });
    }
    let g = spec.grid();
    let m = spec.params.mass;
    Ok((0..g.n)
        .map(|i| {
            let j = g.neg(i);
            let w = dispersion(g.k(i), &spec.params);
            let kin = (spec.vk[i] * spec.vk[j]).re / (2.0 * m);
            let pot = 0.5 * m * w * w * (spec.uk[i] * spec.uk[j]).re;
            kin + pot
        })
        .collect())
}

pub fn total_mode_energy(spec: &ModeSpectrum) -> Result<f64> {
    let dk = spec.grid().dk();
    Ok(mode_energy(spec)?.iter().sum::<f64>() * dk)
}

/// Exact harmonic rotation of every `(u'_k, v'_{-k})` pair over time `t`.
pub fn evolve_modes_exact(spec: &ModeSpectrum, t: f64) -> ModeSpectrum {
    let g = spec.grid();
    let m = spec.params.mass;
    let mut out = spec.clone();
    for i in 0..g.n {
        let j = g.neg(i);
        let w = dispersion(g.k(i), &spec.params);
        let (c, s_over_w, w_s) = if w == 0.0 {
            (1.0, t, 0.0)
        } else {
            let (s, c) = (w * t).sin_cos();
            (c, s / w, w * s)
        };
        out.uk[i] = spec.uk[i] * c + spec.vk[j] * (s_over_w / m);
        out.vk[i] = spec.vk[i] * c - spec.uk[j] * (m * w_s);
    }
    out.t = spec.t + t;
    out
}

/// Phonon action wave `psi'_k` on the centred mode grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionWave {
    pub ell: f64,
    pub psik: Vec<Complex64>,
    pub hbar: f64,
}

impl ActionWave {
    pub fn zeros(grid: KGrid, hbar: f64) -> Self {
        ActionWave {
            ell: grid.ell,
            psik: vec![ZERO; grid.n],
            hbar,
        }
    }

    pub fn grid(&self) -> KGrid {
        KGrid {
            n: self.psik.len(),
            ell: self.ell,
        }
    }

    /// Action density `eta_k = |psi'_k|^2`.
    pub fn eta(&self) -> Vec<f64> {
        self.psik.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Angle variable `phi_k = arg psi'_k`.
    pub fn phi(&self) -> Vec<f64> {
        self.psik.iter().map(|z| z.arg()).collect()
    }

    /// Site representation `psi_{n ell}` for `n = 0..N`.
    pub fn site_amplitudes(&self) -> Vec<Complex64> {
        let g = self.grid();
        let plans = FftPair::new(g.n);
        let mut buf = scatter_centred(&self.psik);
        plans.inverse.process(&mut buf);
        let scale = g.dk() / (2.0 * PI).sqrt();
        buf.iter_mut().for_each(|z| *z *= scale);
        buf
    }

    /// Inverse of [`ActionWave::site_amplitudes`].
    pub fn from_site_amplitudes(site: &[Complex64], ell: f64, hbar: f64) -> Self {
        let plans = FftPair::new(site.len());
        let mut buf = site.to_vec();
        plans.forward.process(&mut buf);
        let scale = ell / (2.0 * PI).sqrt();
        buf.iter_mut().for_each(|z| *z *= scale);
        ActionWave {
            ell,
            psik: gather_centred(&buf),
            hbar,
        }
    }

    /// `<psi|psi> = ell * sum_n |psi_{n ell}|^2`.
    pub fn norm_squared(&self) -> f64 {
        self.ell * self.site_amplitudes().iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// Free evolution `psi'_k(t) = exp(-i omega_k t) psi'_k`.
    pub fn evolve(&self, omega: impl Fn(f64) -> f64, t: f64) -> Self {
        let g = self.grid();
        let psik = self
            .psik
            .iter()
            .enumerate()
            .map(|(i, z)| z * Complex64::from_polar(1.0, -omega(g.k(i)) * t))
            .collect();
        ActionWave { psik, ..self.clone() }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ActionWave {
            psik: self.psik.iter().map(|z| z * factor).collect(),
            ..self.clone()
        }
    }
}

/// Gaussian action density `eta_k = N hbar sqrt(g/pi) exp(-g (k - k0)^2)` with zero phases.
pub fn gaussian_action_wave(grid: KGrid, k0: f64, g: f64, n_quanta: f64, hbar: f64) -> Result<ActionWave> {
    if !(g > 0.0) {
        return Err(invalid("g", format!("width must be positive, got {g}")));
    }
    if !(n_quanta >= 1.0 && n_quanta.fract() == 0.0) {
        return Err(invalid("n_quanta", format!("must be a positive integer, got {n_quanta}")));
    }
    let c_n = n_quanta * hbar;
    let psik = grid
        .ks()
        .map(|k| {
            let eta = c_n * (g / PI).sqrt() * (-g * (k - k0) * (k - k0)).exp();
            Complex64::from(eta.sqrt())
        })
        .collect();
    Ok(ActionWave {
        ell: grid.ell,
        psik,
        hbar,
    })
}

/// Relative energy below which a zero-frequency cell is treated as empty.
const ZERO_MODE_TOL: f64 = 1e-12;

pub fn psi_from_modes(spec: &ModeSpectrum, hbar: f64) -> Result<ActionWave> {
    if !(hbar > 0.0) {
        return Err(invalid("hbar", format!("must be positive, got {hbar}")));
    }
    let energies = mode_energy(spec)?;
    let g = spec.grid();
    let total: f64 = energies.iter().sum::<f64>() * g.dk();
    let m = spec.params.mass;
    let mut psik = vec![ZERO; g.n];
    for i in 0..g.n {
        let w = dispersion(g.k(i), &spec.params);
        if w == 0.0 {
            let e = energies[i] * g.dk();
            if e > ZERO_MODE_TOL * total.max(f64::MIN_POSITIVE) {
                return Err(Error::ZeroFrequencyMode { energy: e, total });
            }
            continue;
        }
        let i_unit = Complex64::new(0.0, 1.0);
        psik[i] = (0.5 * m * w).sqrt() * (spec.uk[i].conj() + i_unit * spec.vk[i] / (m * w));
    }
    Ok(ActionWave {
        ell: spec.params.ell,
        psik,
        hbar,
    })
}

pub fn modes_from_psi(psi: &ActionWave, params: &LatticeParams) -> Result<ModeSpectrum> {
    params.validate()?;
    if psi.psik.len() != params.n_sites || psi.ell != params.ell {
        return Err(Error::GridMismatch(format!(
            "action wave has {} modes at ell={}, lattice has {} at ell={}",
            psi.psik.len(),
            psi.ell,
            params.n_sites,
            params.ell
        )));
    }
    let g = params.grid();
    let m = params.mass;
    let scale = psi.psik.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
    let mut spec = ModeSpectrum::zeros(*params);
    for i in 0..g.n {
        let w = dispersion(g.k(i), params);
        let j = g.neg(i);
        if w == 0.0 {
            if psi.psik[i].norm() > ZERO_MODE_TOL * scale {
                return Err(Error::ZeroFrequencyMode {
                    energy: psi.psik[i].norm_sqr(),
                    total: scale * scale,
                });
            }
            continue;
        }
        let a = psi.psik[i];
        let b = psi.psik[j].conj();
        // u'_{-k} = (psi_k + psi_{-k}^*) / sqrt(2 m w)
        spec.uk[j] = (a + b) / (2.0 * m * w).sqrt();
        // v'_k = -i sqrt(m w / 2) (psi_k - psi_{-k}^*)
        spec.vk[i] = Complex64::new(0.0, -1.0) * (0.5 * m * w).sqrt() * (a - b);
    }
    Ok(spec)
}

/// Phase-space area `A_D = 2 pi * sum_k dk eta_k`.
pub fn action_area(psi: &ActionWave) -> f64 {
    2.0 * PI * psi.grid().dk() * psi.eta().iter().sum::<f64>()
}

/// Rescale so that `A_D = N h`.
pub fn normalize_action(psi: &ActionWave, n_quanta: u32) -> Result<ActionWave> {
    if n_quanta < 1 {
        return Err(invalid("n_quanta", "must be at least 1"));
    }
    let area = action_area(psi);
    if !(area > 0.0) {
        return Err(Error::ZeroWave);
    }
    let target = f64::from(n_quanta) * 2.0 * PI * psi.hbar;
    Ok(psi.scaled((target / area).sqrt()))
}

/// Initial state of a one-way travelling wave.
#[derive(Debug, Clone)]
pub struct TravelingWave {
    pub state: LatticeState,
    /// Fraction of the profile's spectral power in the mean and Nyquist cells,
    /// which cannot travel and are dropped.
    pub dropped_fraction: f64,
    /// Fraction of the retained spectral power above the configured band edge.
    pub out_of_band_fraction: f64,
}

/// Build a state whose modes all rotate in one sense, so that the exact
/// evolution transports the profile `u0` with speed `+-v` (up to dispersion).
///
/// `band_fraction` sets the edge `band_fraction * pi / ell` beyond which the
/// linear-dispersion picture is considered unreliable; spectral power beyond
/// it is reported, not removed.
pub fn traveling_wave_init(
    u0: &[f64],
    direction: i32,
    params: &LatticeParams,
    band_fraction: f64,
) -> Result<TravelingWave> {
    params.validate()?;
    if params.omega0 != 0.0 {
        return Err(invalid(
            "omega0",
            format!(
                "travelling waves need the massless branch (omega0 = 0), got {}",
                params.omega0
            ),
        ));
    }
    if direction != 1 && direction != -1 {
        return Err(invalid("direction", format!("must be +1 or -1, got {direction}")));
    }
    if !(band_fraction > 0.0 && band_fraction <= 1.0) {
        return Err(invalid("band_fraction", format!("must lie in (0, 1], got {band_fraction}")));
    }
    let profile = LatticeState {
        u: u0.to_vec(),
        v: vec![0.0; u0.len()],
        t: 0.0,
    };
    let spec = dft_to_modes(&profile, params)?;
    let g = params.grid();
    let m = params.mass;
    let power: f64 = spec.uk.iter().map(|z| z.norm_sqr()).sum();

    let mut psi = ActionWave::zeros(g, 1.0);
    let mut dropped = 0.0;
    let mut out_of_band = 0.0;
    let edge = band_fraction * PI / params.ell;
    for i in 0..g.n {
        let k = g.k(i);
        let p = spec.uk[i].norm_sqr();
        if k == 0.0 || g.is_nyquist(i) {
            dropped += p;
            continue;
        }
        if k.abs() > edge {
            out_of_band += p;
        }
        if (k > 0.0) == (direction > 0) {
            let w = dispersion(k, params);
            psi.psik[i] = (2.0 * m * w).sqrt() * spec.uk[i].conj();
        }
    }
    let spec = modes_from_psi(&psi, params)?;
    let frac = |x: f64| if power > 0.0 { x / power } else { 0.0 };
    Ok(TravelingWave {
        state: idft_from_modes(&spec),
        dropped_fraction: frac(dropped),
        out_of_band_fraction: frac(out_of_band),
    })
}

/// Cauchy data `u0(x)`, `du0(x)` for the 1-D wave equation.
pub trait CauchyData {
    fn displacement(&self, x: f64) -> f64;
    fn velocity(&self, x: f64) -> f64;

    /// `int_a^b du0(s) ds`; defaults to double-exponential quadrature.
    fn velocity_integral(&self, a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        quadrature::double_exponential::integrate(|s| self.velocity(s), a, b, 1e-14).integral
    }
}

/// Cauchy data given by two closures.
pub struct FnCauchy<U, V> {
    pub u0: U,
    pub du0: V,
}

impl<U: Fn(f64) -> f64, V: Fn(f64) -> f64> CauchyData for FnCauchy<U, V> {
    fn displacement(&self, x: f64) -> f64 {
        (self.u0)(x)
    }
    fn velocity(&self, x: f64) -> f64 {
        (self.du0)(x)
    }
}

/// d'Alembert's formula for `u_tt = v^2 u_xx`.
pub fn dalembert_solution(data: &impl CauchyData, x: f64, t: f64, v: f64) -> f64 {
    if v == 0.0 {
        return data.displacement(x) + t * data.velocity(x);
    }
    let (l, r) = (x - v * t, x + v * t);
    0.5 * (data.displacement(l) + data.displacement(r)) + data.velocity_integral(l, r) / (2.0 * v)
}
