//! Periodic FFT grids and spectral derivatives.
//!
//! Fields are synthesised with the kernel `exp(-i k.x)`, which is the sign
//! used for the Fourier amplitudes of the vector potential. A first
//! derivative therefore multiplies a coefficient by `-i k`.

use crate::error::{invalid, Result};
use crate::{CVec3, Complex64, Vec3};
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Signed frequency of FFT bin `bin` on an `n`-point grid, in `[-n/2, n/2)`.
pub fn signed_bin(bin: usize, n: usize) -> i64 {
    let b = bin as i64;
    let n = n as i64;
    if b >= n / 2 {
        b - n
    } else {
        b
    }
}

/// FFT bin holding signed frequency `m` on an `n`-point grid.
pub fn bin_of(m: i64, n: usize) -> usize {
    m.rem_euclid(n as i64) as usize
}

/// Forward (`exp(-i...)`) and inverse (`exp(+i...)`) unnormalised plans.
#[derive(Clone)]
pub struct FftPair {
    pub forward: Arc<dyn Fft<f64>>,
    pub inverse: Arc<dyn Fft<f64>>,
}

impl FftPair {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        FftPair {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }
}

/// Cubic periodic grid of `n^3` cells on a box of side `len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid3 {
    pub n: usize,
    pub len: f64,
}

/// Complex 3-vector field sampled on a [`Grid3`], one array per Cartesian component.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub grid: Grid3,
    pub comps: [Vec<Complex64>; 3],
}

impl Grid3 {
    pub fn new(n: usize, len: f64) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(invalid("n", format!("grid size must be even and >= 2, got {n}")));
        }
        if !(len > 0.0 && len.is_finite()) {
            return Err(invalid("len", format!("box length must be positive, got {len}")));
        }
        Ok(Grid3 { n, len })
    }

    pub fn cells(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn spacing(&self) -> f64 {
        self.len / self.n as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    /// Spacing of the reciprocal lattice, `2 pi / len`.
    pub fn dk(&self) -> f64 {
        2.0 * PI / self.len
    }

    /// Flat index; the last axis varies fastest.
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    pub fn unflatten(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx / (n * n), (idx / n) % n, idx % n]
    }

    pub fn point(&self, idx: usize) -> Vec3 {
        let [i, j, k] = self.unflatten(idx);
        let h = self.spacing();
        Vec3::new(i as f64 * h, j as f64 * h, k as f64 * h)
    }

    /// Wavevector of the coefficient stored at flat index `idx`.
    pub fn wavevector(&self, idx: usize) -> Vec3 {
        let b = self.unflatten(idx);
        let dk = self.dk();
        Vec3::new(
            signed_bin(b[0], self.n) as f64 * dk,
            signed_bin(b[1], self.n) as f64 * dk,
            signed_bin(b[2], self.n) as f64 * dk,
        )
    }

    /// True when any component of the bin is the unpaired Nyquist frequency.
    pub fn is_nyquist(&self, idx: usize) -> bool {
        self.unflatten(idx).iter().any(|&b| b == self.n / 2)
    }

    /// Flat index of the integer wavevector `m`, if it is resolved by the grid.
    pub fn coefficient_index(&self, m: [i32; 3]) -> Option<usize> {
        let half = (self.n / 2) as i32;
        if m.iter().any(|&c| c <= -half || c >= half) {
            return None;
        }
        Some(self.index(
            bin_of(m[0] as i64, self.n),
            bin_of(m[1] as i64, self.n),
            bin_of(m[2] as i64, self.n),
        ))
    }

    fn fft3(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for axis in 0..3 {
            let stride = match axis {
                0 => n * n,
                1 => n,
                _ => 1,
            };
            for a in 0..n {
                for b in 0..n {
                    let base = match axis {
                        0 => a * n + b,
                        1 => a * n * n + b,
                        _ => (a * n + b) * n,
                    };
                    for (t, slot) in line.iter_mut().enumerate() {
                        *slot = data[base + t * stride];
                    }
                    plan.process(&mut line);
                    for (t, value) in line.iter().enumerate() {
                        data[base + t * stride] = *value;
                    }
                }
            }
        }
    }

    /// `f(x) = sum_m c_m exp(-i k_m . x)`.
    pub fn synthesize(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let plans = FftPair::new(self.n);
        let mut out = coeffs.to_vec();
        self.fft3(&mut out, &plans.forward);
        out
    }

    /// Inverse of [`Grid3::synthesize`].
    pub fn analyze(&self, field: &[Complex64]) -> Vec<Complex64> {
        let plans = FftPair::new(self.n);
        let mut out = field.to_vec();
        self.fft3(&mut out, &plans.inverse);
        let scale = 1.0 / self.cells() as f64;
        out.iter_mut().for_each(|c| *c *= scale);
        out
    }

    /// Spectral curl. Nyquist bins are dropped from the derivative.
    pub fn curl(&self, field: &VectorField) -> Result<VectorField> {
        self.check(field)?;
        let spec: Vec<Vec<Complex64>> = field.comps.iter().map(|c| self.analyze(c)).collect();
        let mut out = [
            vec![Complex64::default(); self.cells()],
            vec![Complex64::default(); self.cells()],
            vec![Complex64::default(); self.cells()],
        ];
        let minus_i = Complex64::new(0.0, -1.0);
        for idx in 0..self.cells() {
            if self.is_nyquist(idx) {
                continue;
            }
            let k = self.wavevector(idx);
            let a = CVec3::new(spec[0][idx], spec[1][idx], spec[2][idx]);
            let c = k.map(Complex64::from).cross(&a) * minus_i;
            for d in 0..3 {
                out[d][idx] = c[d];
            }
        }
        Ok(VectorField {
            grid: *self,
            comps: out.map(|c| self.synthesize(&c)),
        })
    }

    /// Spectral divergence.
    pub fn divergence(&self, field: &VectorField) -> Result<Vec<Complex64>> {
        self.check(field)?;
        let spec: Vec<Vec<Complex64>> = field.comps.iter().map(|c| self.analyze(c)).collect();
        let mut out = vec![Complex64::default(); self.cells()];
        let minus_i = Complex64::new(0.0, -1.0);
        for (idx, slot) in out.iter_mut().enumerate() {
            if self.is_nyquist(idx) {
                continue;
            }
            let k = self.wavevector(idx);
            *slot = minus_i * (spec[0][idx] * k.x + spec[1][idx] * k.y + spec[2][idx] * k.z);
        }
        Ok(self.synthesize(&out))
    }

    /// Spectral divergence of a scalar-per-component real field given as three arrays.
    pub fn divergence_real(&self, comps: &[Vec<f64>; 3]) -> Result<Vec<f64>> {
        let field = VectorField {
            grid: *self,
            comps: comps
                .clone()
                .map(|c| c.into_iter().map(Complex64::from).collect()),
        };
        Ok(self.divergence(&field)?.into_iter().map(|c| c.re).collect())
    }

    fn check(&self, field: &VectorField) -> Result<()> {
        if field.grid != *self || field.comps.iter().any(|c| c.len() != self.cells()) {
            return Err(crate::Error::GridMismatch(format!(
                "field on {:?} does not match grid {:?}",
                field.grid, self
            )));
        }
        Ok(())
    }
}

impl VectorField {
    pub fn zeros(grid: Grid3) -> Self {
        let z = vec![Complex64::default(); grid.cells()];
        VectorField {
            grid,
            comps: [z.clone(), z.clone(), z],
        }
    }

    pub fn at(&self, idx: usize) -> CVec3 {
        CVec3::new(self.comps[0][idx], self.comps[1][idx], self.comps[2][idx])
    }

    pub fn set(&mut self, idx: usize, value: CVec3) {
        for d in 0..3 {
            self.comps[d][idx] = value[d];
        }
    }

    /// Build from a closure evaluated at every grid point.
    pub fn from_fn(grid: Grid3, f: impl Fn(Vec3) -> CVec3) -> Self {
        let mut out = VectorField::zeros(grid);
        for idx in 0..grid.cells() {
            out.set(idx, f(grid.point(idx)));
        }
        out
    }

    /// Root-mean-square of the pointwise Euclidean norm.
    pub fn rms(&self) -> f64 {
        let n = self.grid.cells();
        let sum: f64 = (0..n).map(|i| self.at(i).norm_squared()).sum();
        (sum / n as f64).sqrt()
    }

    pub fn max_imag(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0_f64, |m, z| m.max(z.im.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bins_round_trip() {
        for n in [4usize, 8, 16] {
            for b in 0..n {
                assert_eq!(bin_of(signed_bin(b, n), n), b);
            }
        }
        assert_eq!(signed_bin(4, 8), -4);
    }

    #[test]
    fn synthesize_analyze_inverse() {
        let g = Grid3::new(8, 3.0).unwrap();
        let data: Vec<Complex64> = (0..g.cells())
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let back = g.synthesize(&g.analyze(&data));
        for (a, b) in data.iter().zip(&back) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn curl_of_plane_wave() {
        // A = y_hat cos(k x) -> curl A = z_hat * (-k sin(k x))
        let g = Grid3::new(16, 2.0 * PI).unwrap();
        let k = 3.0;
        let a = VectorField::from_fn(g, |p| {
            CVec3::new(0.0.into(), Complex64::from((k * p.x).cos()), 0.0.into())
        });
        let c = g.curl(&a).unwrap();
        for idx in 0..g.cells() {
            let p = g.point(idx);
            let expect = -k * (k * p.x).sin();
            assert!((c.comps[2][idx].re - expect).abs() < 1e-12);
            assert!(c.comps[0][idx].norm() < 1e-12);
        }
        let div = g.divergence(&a).unwrap();
        assert!(div.iter().all(|d| d.norm() < 1e-12));
    }

    #[test]
    fn rejects_odd_grid() {
        assert!(Grid3::new(7, 1.0).is_err());
        assert!(Grid3::new(8, 0.0).is_err());
    }
}
