use approx::assert_relative_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use wavequanta::em::modes::helical_vector;
use wavequanta::em::*;
use wavequanta::spectral::{Grid3, VectorField};
use wavequanta::{CVec3, Complex64, Vec3};

fn medium() -> MediumParams {
    MediumParams::new(2.0, 1.5, 3.0).unwrap()
}

fn c(v: Vec3) -> CVec3 {
    v.map(Complex64::from)
}

/// Mode pair `+-m` carrying one circular polarization.
fn helical_pair(m: [i32; 3], box_len: f64, sigma: i8, medium: MediumParams) -> PhotonModeSet {
    let k = modes::wavevector(m, box_len);
    let basis = polarization_basis(k).unwrap();
    let w = medium.v() * k.norm();
    let a = helical_vector(&basis, sigma) * Complex64::new(0.7, 0.2);
    let adot = a * Complex64::new(0.0, w);
    let neg = [-m[0], -m[1], -m[2]];
    let conj = |v: CVec3| v.map(|z| z.conj());
    let modes = vec![
        PhotonMode::new(m, box_len, a, adot).unwrap(),
        PhotonMode::new(neg, box_len, conj(a), conj(adot)).unwrap(),
    ];
    PhotonModeSet::new(box_len, medium, true, modes).unwrap()
}

/// `psi(x) = (2 pi)^(-3/2) sum dk^3 exp(i k.x) psi_k`, summed directly.
fn psi_at(psi: &PhotonActionWave, x: Vec3) -> CVec3 {
    let mut acc = CVec3::zeros();
    for m in &psi.modes {
        acc += m.vector() * Complex64::from_polar(1.0, m.kvec().dot(&x));
    }
    acc * Complex64::from(psi.dk3() / (2.0 * PI).powf(1.5))
}

#[test]
fn three_routes_to_the_field_energy_agree() {
    for (seed, box_len, m_max) in [(1, 2.0 * PI, 1), (7, 3.0, 2), (11, 1.7, 2)] {
        let set = random_transverse_modes(box_len, m_max, medium(), 0.3, seed).unwrap();
        let grid = Grid3::new(4 * m_max as usize + 2, box_len).unwrap();
        let e_x = set.energy_x_space(grid).unwrap();
        let e_k = set.energy_k_space();
        let psi = photon_action_wave(&set, 0.8).unwrap();
        let e_w = psi.energy();
        let v = set.medium.v();
        let e_p = wigner_3d(&psi).unwrap().weighted_total(|p| v * p.norm());
        for (name, e) in [("k-space", e_k), ("action", e_w), ("phase-space", e_p)] {
            assert!((e - e_x).abs() / e_x < 1e-6, "seed {seed} {name}: {e} vs {e_x}");
        }
        assert!((e_k - e_x).abs() / e_x < 1e-12);
    }
}

#[test]
fn energy_is_conserved_under_exact_evolution() {
    let set = random_transverse_modes(2.5, 1, medium(), 0.5, 3).unwrap();
    let grid = Grid3::new(6, 2.5).unwrap();
    let e0 = set.energy_x_space(grid).unwrap();
    for t in [0.13, 1.7, 9.0] {
        let e = set.evolve(t).energy_x_space(grid).unwrap();
        assert_relative_eq!(e, e0, max_relative = 1e-12);
    }
}

#[test]
fn potential_round_trip_through_psi() {
    let set = random_transverse_modes(2.0, 2, medium(), 0.4, 5).unwrap();
    let psi = photon_action_wave(&set, 1.1).unwrap();
    let back = potential_from_psi(&psi).unwrap();
    assert_eq!(back.modes.len(), set.modes.len());
    for (a, b) in set.modes.iter().zip(&back.modes) {
        assert_eq!(a.m, b.m);
        assert!((a.amplitude() - b.amplitude()).norm() < 1e-12);
        assert!((a.velocity() - b.velocity()).norm() < 1e-12);
    }
    assert!(back.max_transverse_defect() < 1e-12);
}

#[test]
fn psi_evolution_commutes_with_potential_evolution() {
    let set = random_transverse_modes(2.0, 1, medium(), 0.4, 9).unwrap();
    let t = 0.77;
    let a = photon_action_wave(&set.evolve(t), 1.0).unwrap();
    let b = photon_action_wave(&set, 1.0).unwrap().evolve(t);
    for (x, y) in a.modes.iter().zip(&b.modes) {
        for s in 0..2 {
            assert!((x.psi[s] - y.psi[s]).norm() < 1e-12);
        }
        assert_relative_eq!(x.eta()[0] + x.eta()[1], y.eta()[0] + y.eta()[1], max_relative = 1e-12);
    }
}

#[test]
fn circular_mode_has_a_single_helicity() {
    for sigma in [1i8, -1] {
        let k = modes::wavevector([1, -2, 1], 2.0);
        let basis = polarization_basis(k).unwrap();
        let w = medium().v() * k.norm();
        // A' ~ e_sigma*, dA'/dt = i w A' gives psi ~ e_sigma
        let a = helical_vector(&basis, sigma).map(|z| z.conj());
        let mode = PhotonMode::new([1, -2, 1], 2.0, a, a * Complex64::new(0.0, w)).unwrap();
        let set = PhotonModeSet::new(2.0, medium(), false, vec![mode]).unwrap();
        let psi = photon_action_wave(&set, 1.0).unwrap();
        let h = psi.modes[0].helical();
        let (on, off) = if sigma == 1 { (h[0], h[1]) } else { (h[1], h[0]) };
        assert!(off.norm() < 1e-12 * on.norm());
        let eta: f64 = psi.modes[0].eta().iter().sum();
        assert_relative_eq!(on.norm_sqr(), eta, max_relative = 1e-12);
        // k x e_sigma = -i sigma |k| e_sigma
        let e = helical_vector(&basis, sigma);
        let lhs = c(k).cross(&e);
        let rhs = e * Complex64::new(0.0, -f64::from(sigma) * k.norm());
        assert!((lhs - rhs).norm() < 1e-12);
    }
}

#[test]
fn normalization_sets_photon_count() {
    let set = random_transverse_modes(2.0, 1, medium(), 0.4, 21).unwrap();
    let psi = photon_action_wave(&set, 0.6).unwrap();
    for n in [1, 5] {
        let normed = normalize_photons(&psi, n).unwrap();
        assert_relative_eq!(normed.photon_number(), f64::from(n), max_relative = 1e-12);
        assert_relative_eq!(action_area_3d(&normed), f64::from(n) * 2.0 * PI * 0.6, max_relative = 1e-12);
        let w = wigner_3d(&normed).unwrap();
        assert!((w.total() - f64::from(n)).abs() < 1e-8);
    }
}

#[test]
fn energy_is_additive_over_disjoint_modes() {
    let a = helical_pair([1, 0, 0], 2.0, 1, medium());
    let b = helical_pair([0, 1, 1], 2.0, -1, medium());
    let mut both = a.clone();
    both.modes.extend(b.modes.clone());
    both.modes.sort_by_key(|m| m.m);
    both.validate().unwrap();
    let grid = Grid3::new(6, 2.0).unwrap();
    let sum = a.energy_x_space(grid).unwrap() + b.energy_x_space(grid).unwrap();
    assert_relative_eq!(both.energy_x_space(grid).unwrap(), sum, max_relative = 1e-12);
}

#[test]
fn wigner_3d_marginal_is_position_density() {
    let set = random_transverse_modes(2.0, 1, medium(), 0.4, 4).unwrap();
    let hbar = 0.9;
    let psi = photon_action_wave(&set, hbar).unwrap();
    let w = wigner_3d(&psi).unwrap();
    assert!(w.imag_residue < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..5 {
        let x = Vec3::new(rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
        let oracle = psi_at(&psi, x).norm_squared() / hbar;
        assert_relative_eq!(w.position_marginal(x), oracle, max_relative = 1e-10);
    }
    assert_relative_eq!(w.total(), psi.photon_number(), max_relative = 1e-12);
}

#[test]
fn dual_energy_and_flux_expressions_agree() {
    let set = random_transverse_modes(2.2, 2, medium(), 0.3, 13).unwrap();
    let snap = set.snapshot(Grid3::new(10, 2.2).unwrap()).unwrap();
    let (w, y) = energy_and_poynting(&snap.f, &snap.medium);
    let wd = snap.energy_density_direct();
    let yd = snap.poynting_direct();
    let wmax = wd.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let ymax = yd.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
    for i in 0..w.len() {
        assert!((w[i] - wd[i]).abs() < 1e-12 * wmax);
        for d in 0..3 {
            assert!((y[d][i] - yd[d][i]).abs() < 1e-12 * ymax);
        }
    }
}

#[test]
fn plane_wave_flux_is_energy_times_speed() {
    let set = helical_pair([0, 0, 1], 2.0, 1, medium());
    let snap = set.snapshot(Grid3::new(4, 2.0).unwrap()).unwrap();
    let (w, y) = energy_and_poynting(&snap.f, &snap.medium);
    let v = medium().v();
    for i in 0..w.len() {
        let yn = (y[0][i].powi(2) + y[1][i].powi(2) + y[2][i].powi(2)).sqrt();
        assert_relative_eq!(yn, v * w[i], max_relative = 1e-12);
    }
}

#[test]
fn circular_potential_is_real_part_of_u() {
    let m = medium();
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..100 {
        let sigma = if rng.gen::<bool>() { 1 } else { -1 };
        let x3 = rng.gen_range(-5.0..5.0);
        let t = rng.gen_range(0.0..10.0);
        let k = rng.gen_range(0.1..4.0);
        let w = circular_plane_wave(k, 0.8, sigma, &m, x3, t).unwrap();
        let rebuilt = (w.u + w.u.map(|z| z.conj())).map(|z| z.re) * (m.mu.sqrt() / 2.0);
        assert!((rebuilt - w.a).norm() < 1e-12);
        assert!(w.u.map(|z| z.im).norm() + w.u.map(|z| z.re).norm() > 0.0);
    }
}

fn f_series(set: &PhotonModeSet, grid: Grid3, dt: f64, samples: usize) -> Vec<VectorField> {
    (0..samples)
        .map(|n| set.evolve(n as f64 * dt).snapshot(grid).unwrap().f)
        .collect()
}

#[test]
fn helical_plane_waves_obey_the_curl_law() {
    let grid = Grid3::new(8, 2.0).unwrap();
    for (m, sigma) in [([0, 0, 1], 1), ([1, 2, 0], -1), ([1, 1, 1], 1)] {
        let set = helical_pair(m, 2.0, sigma, medium());
        let period = 2.0 * PI / set.omega(&set.modes[0]);
        let dt = 1e-3 * period;
        let series = f_series(&set, grid, dt, 5);
        let r = curl_evolution_residual(&series, dt, &medium(), None).unwrap();
        assert!(r < 1e-6, "{m:?}: {r}");
    }
}

#[test]
fn wrong_frequency_breaks_the_curl_law() {
    let grid = Grid3::new(8, 2.0).unwrap();
    let set = helical_pair([1, 0, 1], 2.0, 1, medium());
    let fast = PhotonModeSet {
        medium: MediumParams::new(2.0, 1.5, 3.3).unwrap(),
        ..set.clone()
    };
    let dt = 1e-3 * 2.0 * PI / set.omega(&set.modes[0]);
    let series = f_series(&fast, grid, dt, 5);
    let r = curl_evolution_residual(&series, dt, &medium(), None).unwrap();
    assert!(r > 0.05, "{r}");
}

#[test]
fn random_fields_obey_curl_and_energy_laws() {
    let grid = Grid3::new(10, 2.0).unwrap();
    let set = random_transverse_modes(2.0, 2, medium(), 0.3, 31).unwrap();
    let wmax = set.modes.iter().map(|m| set.omega(m)).fold(0.0, f64::max);
    let dt = 1e-3 * 2.0 * PI / wmax;
    let series = f_series(&set, grid, dt, 5);
    assert!(curl_evolution_residual(&series, dt, &medium(), None).unwrap() < 1e-6);
    let (w, y): (Vec<_>, Vec<_>) = series.iter().map(|f| energy_and_poynting(f, &medium())).unzip();
    assert!(energy_flow_residual(grid, &w, &y, None, dt).unwrap() < 1e-6);
}

fn ohmic_series(grid: Grid3, sigma_q: f64, dt: f64, samples: usize) -> (Vec<VectorField>, Vec<VectorField>) {
    let m = medium();
    (0..samples)
        .map(|n| {
            let (e, h) = damped_standing_wave(grid, &m, sigma_q, 1.3, 2, n as f64 * dt).unwrap();
            let f = riemann_silberstein(&e, &h, &m).unwrap();
            let j = VectorField {
                grid,
                comps: e.comps.clone().map(|c| c.into_iter().map(|z| z * sigma_q).collect()),
            };
            (f, j)
        })
        .unzip()
}

#[test]
fn ohmic_standing_wave_obeys_the_damped_laws() {
    // w and Y carry wavenumber 2k, which must stay below the Nyquist bin
    let grid = Grid3::new(16, 2.0).unwrap();
    let m = medium();
    let sigma_q = 0.9;
    let w0 = m.v() * 2.0 * grid.dk();
    let dt = 1e-3 * 2.0 * PI / w0;
    let (f, j) = ohmic_series(grid, sigma_q, dt, 7);
    assert!(curl_evolution_residual(&f, dt, &m, Some(&j)).unwrap() < 1e-6);
    assert!(curl_evolution_residual(&f, dt, &m, None).unwrap() > 1e-3);

    let (w, y): (Vec<_>, Vec<_>) = f.iter().map(|fv| energy_and_poynting(fv, &m)).unzip();
    let diss: Vec<Vec<f64>> = f
        .iter()
        .map(|fv| (0..grid.cells()).map(|i| sigma_q * fv.at(i).map(|z| z.re).norm_squared() / m.epsilon).collect())
        .collect();
    assert!(energy_flow_residual(grid, &w, &y, Some(&diss), dt).unwrap() < 1e-6);
    assert!(energy_flow_residual(grid, &w, &y, None, dt).unwrap() > 1e-3);
}

#[test]
fn ohmic_energy_decays_at_gamma_on_average() {
    let grid = Grid3::new(8, 2.0).unwrap();
    let m = medium();
    let sigma_q = 0.05;
    let gamma = sigma_q / m.epsilon;
    let energy = |t: f64| {
        let (e, h) = damped_standing_wave(grid, &m, sigma_q, 1.0, 1, t).unwrap();
        let f = riemann_silberstein(&e, &h, &m).unwrap();
        energy_and_poynting(&f, &m).0.iter().sum::<f64>()
    };
    // sample at full periods of the damped oscillation, where the exchange term vanishes
    let w0 = m.v() * grid.dk();
    let om = (w0 * w0 - gamma * gamma / 4.0).sqrt();
    let period = PI / om;
    let e0 = energy(0.0);
    let e1 = energy(20.0 * period);
    let rate = -(e1 / e0).ln() / (20.0 * period);
    assert!((rate - gamma).abs() / gamma < 1e-2, "{rate} vs {gamma}");
}

#[test]
fn mode_set_json_round_trip() {
    let set = random_transverse_modes(2.0, 1, medium(), 0.4, 2).unwrap();
    let back = PhotonModeSet::from_json(&set.to_json()).unwrap();
    assert_eq!(back, set);
    let mut bad = set.clone();
    bad.modes[0].a[0] += Complex64::new(1.0, 0.0);
    assert!(PhotonModeSet::from_json(&bad.to_json()).is_err());
    assert!(PhotonModeSet::from_json("{\"box_len\": 1.0}").is_err());
}
