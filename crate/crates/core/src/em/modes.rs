//! Transverse potential modes and the photon action field.
//!
//! A mode set lives on a periodic box of side `L`; mode `m` (integer
//! triple) has wavevector `k = 2 pi m / L` and cell `dk^3 = (2 pi / L)^3`.
//! The potential is
//!
//! ```text
//! A(x) = (2 pi)^(-3/2) sum_k dk^3 exp(-i k.x) A'_k
//! ```
//!
//! and the action field of a mode is
//! `psi'_k = sqrt(m_eff omega_k / 2) (A'_k* + i dA'_k*/dt / omega_k)` with
//! `m_eff = 1 / (mu v^2)`.

use super::{FieldSnapshot, MediumParams};
use crate::error::{invalid, Error, Result};
use crate::spectral::{Grid3, VectorField};
use crate::{CVec3, Complex64, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Transversality tolerance on `|k.A| / (|k| |A|)`.
pub const TRANSVERSE_TOL: f64 = 1e-12;

/// Two real unit vectors orthogonal to `k` and to each other.
///
/// `e1` is along `k x z`, or `k x x` when `k` is (nearly) parallel to `z`;
/// `e2 = k_hat x e1`.
pub fn polarization_basis(k: Vec3) -> Result<[Vec3; 2]> {
    let norm = k.norm();
    if !(norm > 0.0) {
        return Err(invalid("k", "polarization basis undefined for k = 0"));
    }
    let mut e1 = k.cross(&Vec3::z());
    if e1.norm() < 1e-9 * norm {
        e1 = k.cross(&Vec3::x());
    }
    let e1 = e1.normalize();
    let e2 = (k / norm).cross(&e1);
    Ok([e1, e2])
}

/// Helical unit vector `(e1 + i sigma e2)/sqrt(2)`.
pub fn helical_vector(basis: &[Vec3; 2], sigma: i8) -> CVec3 {
    let s = f64::from(sigma);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    CVec3::new(
        Complex64::new(basis[0].x * r, s * basis[1].x * r),
        Complex64::new(basis[0].y * r, s * basis[1].y * r),
        Complex64::new(basis[0].z * r, s * basis[1].z * r),
    )
}

fn to_c(v: Vec3) -> CVec3 {
    v.map(Complex64::from)
}

fn cvec(a: [Complex64; 3]) -> CVec3 {
    CVec3::new(a[0], a[1], a[2])
}

fn arr(v: CVec3) -> [Complex64; 3] {
    [v[0], v[1], v[2]]
}

fn neg(m: [i32; 3]) -> [i32; 3] {
    [-m[0], -m[1], -m[2]]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhotonMode {
    pub m: [i32; 3],
    pub k: [f64; 3],
    pub a: [Complex64; 3],
    pub adot: [Complex64; 3],
    pub basis: [[f64; 3]; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhotonModeSet {
    pub box_len: f64,
    pub medium: MediumParams,
    /// Require `A'_{-k} = A'_k*` (a real potential).
    pub real_field: bool,
    pub modes: Vec<PhotonMode>,
}

impl PhotonMode {
    pub fn new(m: [i32; 3], box_len: f64, a: CVec3, adot: CVec3) -> Result<Self> {
        let k = wavevector(m, box_len);
        let [e1, e2] = polarization_basis(k)?;
        Ok(PhotonMode {
            m,
            k: [k.x, k.y, k.z],
            a: arr(a),
            adot: arr(adot),
            basis: [[e1.x, e1.y, e1.z], [e2.x, e2.y, e2.z]],
        })
    }

    pub fn kvec(&self) -> Vec3 {
        Vec3::from(self.k)
    }

    pub fn amplitude(&self) -> CVec3 {
        cvec(self.a)
    }

    pub fn velocity(&self) -> CVec3 {
        cvec(self.adot)
    }

    pub fn basis_vectors(&self) -> [Vec3; 2] {
        [Vec3::from(self.basis[0]), Vec3::from(self.basis[1])]
    }
}

pub fn wavevector(m: [i32; 3], box_len: f64) -> Vec3 {
    let dk = 2.0 * PI / box_len;
    Vec3::new(m[0] as f64 * dk, m[1] as f64 * dk, m[2] as f64 * dk)
}

fn transverse_defect(k: Vec3, a: CVec3) -> f64 {
    let an = a.norm();
    if an == 0.0 {
        return 0.0;
    }
    to_c(k).dot(&a).norm() / (k.norm() * an)
}

impl PhotonModeSet {
    pub fn new(box_len: f64, medium: MediumParams, real_field: bool, modes: Vec<PhotonMode>) -> Result<Self> {
        let set = PhotonModeSet {
            box_len,
            medium,
            real_field,
            modes,
        };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.box_len > 0.0 && self.box_len.is_finite()) {
            return Err(invalid("box_len", format!("must be positive, got {}", self.box_len)));
        }
        self.medium.validate()?;
        let mut seen = BTreeMap::new();
        for (i, mode) in self.modes.iter().enumerate() {
            if mode.m == [0, 0, 0] {
                return Err(invalid("modes", "k = 0 mode present"));
            }
            if seen.insert(mode.m, i).is_some() {
                return Err(invalid("modes", format!("duplicate mode {:?}", mode.m)));
            }
            let k = wavevector(mode.m, self.box_len);
            if (k - mode.kvec()).norm() > 1e-12 * k.norm() {
                return Err(invalid("modes", format!("k of mode {:?} does not match the box", mode.m)));
            }
            let [e1, e2] = mode.basis_vectors();
            let gram = [e1.dot(&e1) - 1.0, e2.dot(&e2) - 1.0, e1.dot(&e2), e1.dot(&k) / k.norm(), e2.dot(&k) / k.norm()];
            if gram.iter().any(|g| g.abs() > 1e-12) {
                return Err(invalid("modes", format!("basis of mode {:?} is not orthonormal and transverse", mode.m)));
            }
            let defect = transverse_defect(k, mode.amplitude()).max(transverse_defect(k, mode.velocity()));
            if defect > TRANSVERSE_TOL {
                return Err(invalid("modes", format!("mode {:?} is not transverse (defect {defect:e})", mode.m)));
            }
        }
        if self.real_field {
            let defect = self.reality_defect();
            if defect > 1e-12 {
                return Err(Error::RealityViolated { defect });
            }
        }
        Ok(())
    }

    /// Largest `|A'_{-k} - A'_k*|` relative to the largest amplitude; a missing partner counts fully.
    pub fn reality_defect(&self) -> f64 {
        let index = self.index();
        let scale = self
            .modes
            .iter()
            .map(|m| m.amplitude().norm().max(m.velocity().norm()))
            .fold(0.0_f64, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0_f64;
        for mode in &self.modes {
            let (pa, pv) = match index.get(&neg(mode.m)) {
                Some(&j) => (self.modes[j].amplitude(), self.modes[j].velocity()),
                None => (CVec3::zeros(), CVec3::zeros()),
            };
            let da = (pa - mode.amplitude().map(|z| z.conj())).norm();
            let dv = (pv - mode.velocity().map(|z| z.conj())).norm();
            worst = worst.max(da).max(dv);
        }
        worst / scale
    }

    pub fn index(&self) -> BTreeMap<[i32; 3], usize> {
        self.modes.iter().enumerate().map(|(i, m)| (m.m, i)).collect()
    }

    pub fn dk3(&self) -> f64 {
        (2.0 * PI / self.box_len).powi(3)
    }

    pub fn omega(&self, mode: &PhotonMode) -> f64 {
        self.medium.v() * mode.kvec().norm()
    }

    pub fn max_transverse_defect(&self) -> f64 {
        self.modes
            .iter()
            .map(|m| transverse_defect(m.kvec(), m.amplitude()).max(transverse_defect(m.kvec(), m.velocity())))
            .fold(0.0, f64::max)
    }

    /// Exact harmonic evolution of every mode by `t`.
    pub fn evolve(&self, t: f64) -> Self {
        let mut out = self.clone();
        for mode in &mut out.modes {
            let w = self.omega(mode);
            let (s, c) = (w * t).sin_cos();
            let a = mode.amplitude();
            let ad = mode.velocity();
            mode.a = arr(a * Complex64::from(c) + ad * Complex64::from(s / w));
            mode.adot = arr(ad * Complex64::from(c) - a * Complex64::from(w * s));
        }
        out
    }

    /// `sum_k dk^3 m_eff (|dA'/dt|^2 + omega^2 |A'|^2) / 2`.
    pub fn energy_k_space(&self) -> f64 {
        let m = self.medium.mode_mass();
        let sum: f64 = self
            .modes
            .iter()
            .map(|mode| {
                let w = self.omega(mode);
                0.5 * m * (mode.velocity().norm_squared() + w * w * mode.amplitude().norm_squared())
            })
            .sum();
        sum * self.dk3()
    }

    fn synthesize(&self, grid: Grid3, pick: impl Fn(&PhotonMode) -> CVec3) -> Result<VectorField> {
        if (grid.len - self.box_len).abs() > 1e-12 * self.box_len {
            return Err(Error::GridMismatch(format!(
                "grid box {} differs from mode box {}",
                grid.len, self.box_len
            )));
        }
        let scale = self.dk3() / (2.0 * PI).powf(1.5);
        let mut coeffs = [
            vec![ZERO; grid.cells()],
            vec![ZERO; grid.cells()],
            vec![ZERO; grid.cells()],
        ];
        for mode in &self.modes {
            let idx = grid
                .coefficient_index(mode.m)
                .ok_or_else(|| Error::GridMismatch(format!("mode {:?} not resolved by an {}^3 grid", mode.m, grid.n)))?;
            let a = pick(mode);
            for d in 0..3 {
                coeffs[d][idx] += a[d] * scale;
            }
        }
        Ok(VectorField {
            grid,
            comps: coeffs.map(|c| grid.synthesize(&c)),
        })
    }

    /// Potential `A(x)` on a dense grid covering the box.
    pub fn potential_field(&self, grid: Grid3) -> Result<VectorField> {
        self.synthesize(grid, PhotonMode::amplitude)
    }

    /// `E = -(1/c) dA/dt`, `B = curl A`.
    pub fn snapshot(&self, grid: Grid3) -> Result<FieldSnapshot> {
        let adot = self.synthesize(grid, PhotonMode::velocity)?;
        let scale = -1.0 / self.medium.c;
        let e = VectorField {
            grid,
            comps: adot.comps.map(|c| c.into_iter().map(|z| z * scale).collect()),
        };
        let b = grid.curl(&self.potential_field(grid)?)?;
        FieldSnapshot::new(&e, &b, self.medium)
    }

    /// `int w d^3x` on a dense grid.
    pub fn energy_x_space(&self, grid: Grid3) -> Result<f64> {
        Ok(self.snapshot(grid)?.total_energy())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("mode sets serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let set: PhotonModeSet = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        set.validate()?;
        Ok(set)
    }
}

/// Photon action field: components along the two real polarization vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhotonPsi {
    pub m: [i32; 3],
    pub k: [f64; 3],
    pub psi: [Complex64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhotonActionWave {
    pub box_len: f64,
    pub hbar: f64,
    pub medium: MediumParams,
    pub modes: Vec<PhotonPsi>,
}

impl PhotonPsi {
    pub fn kvec(&self) -> Vec3 {
        Vec3::from(self.k)
    }

    pub fn basis(&self) -> [Vec3; 2] {
        polarization_basis(self.kvec()).expect("k != 0 in an action wave")
    }

    /// Cartesian vector `sum_tau psi_tau e_tau`.
    pub fn vector(&self) -> CVec3 {
        let [e1, e2] = self.basis();
        to_c(e1) * self.psi[0] + to_c(e2) * self.psi[1]
    }

    /// Components on the helical vectors, `[sigma = +1, sigma = -1]`.
    pub fn helical(&self) -> [Complex64; 2] {
        let b = self.basis();
        let v = self.vector();
        [1i8, -1].map(|s| helical_vector(&b, s).map(|z| z.conj()).dot(&v))
    }

    pub fn eta(&self) -> [f64; 2] {
        self.psi.map(|z| z.norm_sqr())
    }
}

impl PhotonActionWave {
    pub fn dk3(&self) -> f64 {
        (2.0 * PI / self.box_len).powi(3)
    }

    pub fn index(&self) -> BTreeMap<[i32; 3], usize> {
        self.modes.iter().enumerate().map(|(i, m)| (m.m, i)).collect()
    }

    pub fn omega(&self, mode: &PhotonPsi) -> f64 {
        self.medium.v() * mode.kvec().norm()
    }

    /// `E_W = sum_k dk^3 omega_k (eta_k1 + eta_k2)`.
    pub fn energy(&self) -> f64 {
        self.modes
            .iter()
            .map(|m| self.omega(m) * (m.eta()[0] + m.eta()[1]))
            .sum::<f64>()
            * self.dk3()
    }

    /// `psi'_k(t) = exp(-i omega_k t) psi'_k`.
    pub fn evolve(&self, t: f64) -> Self {
        let mut out = self.clone();
        for m in &mut out.modes {
            let ph = Complex64::from_polar(1.0, -self.omega(m) * t);
            m.psi = m.psi.map(|z| z * ph);
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for m in &mut out.modes {
            m.psi = m.psi.map(|z| z * factor);
        }
        out
    }

    /// Photon count `A_W / h`.
    pub fn photon_number(&self) -> f64 {
        action_area_3d(self) / (2.0 * PI * self.hbar)
    }
}

pub fn photon_action_wave(modes: &PhotonModeSet, hbar: f64) -> Result<PhotonActionWave> {
    if !(hbar > 0.0) {
        return Err(invalid("hbar", format!("must be positive, got {hbar}")));
    }
    modes.validate()?;
    let m_eff = modes.medium.mode_mass();
    let out = modes
        .modes
        .iter()
        .map(|mode| {
            let w = modes.omega(mode);
            let pref = (m_eff * w / 2.0).sqrt();
            let v = (mode.amplitude().map(|z| z.conj()) + mode.velocity().map(|z| z.conj()) * Complex64::new(0.0, 1.0 / w)) * Complex64::from(pref);
            let [e1, e2] = mode.basis_vectors();
            PhotonPsi {
                m: mode.m,
                k: mode.k,
                psi: [to_c(e1).dot(&v), to_c(e2).dot(&v)],
            }
        })
        .collect();
    Ok(PhotonActionWave {
        box_len: modes.box_len,
        hbar,
        medium: modes.medium,
        modes: out,
    })
}

/// Real potential modes reproducing `psi`; every `k` and `-k` of the wave is populated.
pub fn potential_from_psi(psi: &PhotonActionWave) -> Result<PhotonModeSet> {
    let index = psi.index();
    let mut keys: Vec<[i32; 3]> = index.keys().flat_map(|&m| [m, neg(m)]).collect();
    keys.sort_unstable();
    keys.dedup();
    let m_eff = psi.medium.mode_mass();
    let lookup = |m: [i32; 3]| index.get(&m).map(|&i| psi.modes[i].vector()).unwrap_or_else(CVec3::zeros);
    let modes = keys
        .into_iter()
        .map(|m| {
            let k = wavevector(m, psi.box_len);
            let w = psi.medium.v() * k.norm();
            let norm = 1.0 / (2.0 * m_eff * w).sqrt();
            let here = lookup(m).map(|z| z.conj());
            let there = lookup(neg(m));
            let a = (here + there) * Complex64::from(norm);
            let adot = (here - there) * Complex64::new(0.0, w * norm);
            PhotonMode::new(m, psi.box_len, a, adot)
        })
        .collect::<Result<Vec<_>>>()?;
    PhotonModeSet::new(psi.box_len, psi.medium, true, modes)
}

/// `A_W = 2 pi sum_k dk^3 (eta_k1 + eta_k2)`.
pub fn action_area_3d(psi: &PhotonActionWave) -> f64 {
    2.0 * PI * psi.dk3() * psi.modes.iter().map(|m| m.eta()[0] + m.eta()[1]).sum::<f64>()
}

/// Rescale so that `A_W = N h`.
pub fn normalize_photons(psi: &PhotonActionWave, n: u32) -> Result<PhotonActionWave> {
    if n < 1 {
        return Err(invalid("n", "photon number must be at least 1"));
    }
    let area = action_area_3d(psi);
    if !(area > 0.0) {
        return Err(Error::ZeroWave);
    }
    let target = f64::from(n) * 2.0 * PI * psi.hbar;
    Ok(psi.scaled((target / area).sqrt()))
}

fn random_transverse(rng: &mut ChaCha8Rng, k: Vec3, amplitude: f64) -> CVec3 {
    let [e1, e2] = polarization_basis(k).expect("k != 0");
    let mut c = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * amplitude;
    to_c(e1) * c() + to_c(e2) * c()
}

/// Real-field mode set with random transverse amplitudes on all `0 < max|m_i| <= m_max`.
pub fn random_transverse_modes(
    box_len: f64,
    m_max: i32,
    medium: MediumParams,
    amplitude: f64,
    seed: u64,
) -> Result<PhotonModeSet> {
    if m_max < 1 {
        return Err(invalid("m_max", "need at least one mode shell"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut half = BTreeMap::new();
    for i in -m_max..=m_max {
        for j in -m_max..=m_max {
            for l in -m_max..=m_max {
                let m = [i, j, l];
                if m > [0, 0, 0] {
                    let k = wavevector(m, box_len);
                    let w = medium.v() * k.norm();
                    let a = random_transverse(&mut rng, k, amplitude);
                    let ad = random_transverse(&mut rng, k, amplitude * w);
                    half.insert(m, (a, ad));
                }
            }
        }
    }
    let mut modes = Vec::with_capacity(2 * half.len());
    for (&m, &(a, ad)) in &half {
        modes.push(PhotonMode::new(m, box_len, a, ad)?);
        modes.push(PhotonMode::new(neg(m), box_len, a.map(|z| z.conj()), ad.map(|z| z.conj()))?);
    }
    modes.sort_by_key(|m| m.m);
    PhotonModeSet::new(box_len, medium, true, modes)
}
