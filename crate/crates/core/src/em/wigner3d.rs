//! Photon quasi-density on `T*R^3` in factored form.
//!
//! For modes on a box lattice the Wigner transform only populates momenta
//! `p_s = hbar dk s / 2` with `s = a + b` a sum of two occupied mode indices,
//! and at each such momentum it is a finite trigonometric sum in `x`:
//!
//! ```text
//! f(x, p_s) = C sum_{a+b=s} exp(i (k_a - k_b).x) psi_a . psi_b*
//! C = (2 dk)^3 / ((2 pi)^3 hbar^4)
//! ```
//!
//! Each `p_s` therefore stores the list of `(a - b, coefficient)` pairs.

use super::modes::PhotonActionWave;
use crate::error::{invalid, Result};
use crate::{Complex64, Vec3};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct Wigner3d {
    pub box_len: f64,
    pub hbar: f64,
    /// `s -> [(a - b, coefficient)]`.
    pub columns: BTreeMap<[i32; 3], Vec<([i32; 3], Complex64)>>,
    /// Largest imaginary part of a diagonal (`a = b`) coefficient relative to the largest real one.
    pub imag_residue: f64,
}

impl Wigner3d {
    pub fn dk(&self) -> f64 {
        2.0 * PI / self.box_len
    }

    /// Momentum cell volume `(hbar dk / 2)^3`.
    pub fn dp3(&self) -> f64 {
        (self.hbar * self.dk() / 2.0).powi(3)
    }

    pub fn momentum(&self, s: [i32; 3]) -> Vec3 {
        let h = self.hbar * self.dk() / 2.0;
        Vec3::new(s[0] as f64 * h, s[1] as f64 * h, s[2] as f64 * h)
    }

    /// `f(x, p_s)`; zero for momenta without support.
    pub fn value(&self, x: Vec3, s: [i32; 3]) -> f64 {
        let dk = self.dk();
        self.columns.get(&s).map_or(0.0, |col| {
            col.iter()
                .map(|(d, c)| {
                    let arg = dk * (d[0] as f64 * x.x + d[1] as f64 * x.y + d[2] as f64 * x.z);
                    (c * Complex64::from_polar(1.0, arg)).re
                })
                .sum()
        })
    }

    /// `int d^3x f(x, p_s)` over the box.
    pub fn column_integral(&self, s: [i32; 3]) -> f64 {
        let vol = self.box_len.powi(3);
        self.columns.get(&s).map_or(0.0, |col| {
            col.iter().filter(|(d, _)| *d == [0, 0, 0]).map(|(_, c)| c.re * vol).sum()
        })
    }

    /// `int d^3x d^3p f(x, p) weight(p)`.
    pub fn weighted_total(&self, weight: impl Fn(Vec3) -> f64) -> f64 {
        self.columns
            .keys()
            .map(|&s| self.column_integral(s) * weight(self.momentum(s)))
            .sum::<f64>()
            * self.dp3()
    }

    pub fn total(&self) -> f64 {
        self.weighted_total(|_| 1.0)
    }

    /// `int d^3p f(x, p)` at a point.
    pub fn position_marginal(&self, x: Vec3) -> f64 {
        self.columns.keys().map(|&s| self.value(x, s)).sum::<f64>() * self.dp3()
    }
}

pub fn wigner_3d(psi: &PhotonActionWave) -> Result<Wigner3d> {
    if !(psi.hbar > 0.0) {
        return Err(invalid("hbar", format!("must be positive, got {}", psi.hbar)));
    }
    let dk = 2.0 * PI / psi.box_len;
    let pref = (2.0 * dk).powi(3) / ((2.0 * PI).powi(3) * psi.hbar.powi(4));
    let vecs: Vec<_> = psi.modes.iter().map(|m| (m.m, m.vector())).collect();
    let pairs: Vec<([i32; 3], [i32; 3], Complex64)> = vecs
        .par_iter()
        .flat_map_iter(|(a, va)| {
            vecs.iter().filter_map(move |(b, vb)| {
                let c = va.dot(&vb.map(|z| z.conj())) * pref;
                (c != Complex64::default()).then(|| {
                    (
                        [a[0] + b[0], a[1] + b[1], a[2] + b[2]],
                        [a[0] - b[0], a[1] - b[1], a[2] - b[2]],
                        c,
                    )
                })
            })
        })
        .collect();
    let mut columns: BTreeMap<[i32; 3], Vec<([i32; 3], Complex64)>> = BTreeMap::new();
    for (s, d, c) in pairs {
        columns.entry(s).or_default().push((d, c));
    }
    let (mut re, mut im) = (0.0_f64, 0.0_f64);
    for col in columns.values() {
        for (d, c) in col {
            if *d == [0, 0, 0] {
                re = re.max(c.re.abs());
                im = im.max(c.im.abs());
            }
        }
    }
    Ok(Wigner3d {
        box_len: psi.box_len,
        hbar: psi.hbar,
        columns,
        imag_residue: if re > 0.0 { im / re } else { im },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::em::MediumParams;

    #[test]
    fn empty_wave() {
        let psi = PhotonActionWave {
            box_len: 1.0,
            hbar: 1.0,
            medium: MediumParams::default(),
            modes: vec![],
        };
        let w = wigner_3d(&psi).unwrap();
        assert_eq!(w.total(), 0.0);
        assert_eq!(w.value(Vec3::zeros(), [0, 0, 0]), 0.0);
    }
}
