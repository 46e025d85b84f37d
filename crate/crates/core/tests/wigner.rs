use approx::assert_relative_eq;
use std::f64::consts::PI;
use std::time::Instant;
use wavequanta::gridio::BinaryGrid;
use wavequanta::lattice::*;
use wavequanta::wigner::*;
use wavequanta::Complex64;

fn gaussian_setup(n: usize, hbar: f64, n_quanta: u32) -> (ActionWave, GaussianEtaParams) {
    let grid = KGrid { n, ell: 1.0 };
    let k0 = 100.0 * grid.dk();
    let g = 400.0;
    let psi = gaussian_action_wave(grid, k0, g, f64::from(n_quanta), hbar).unwrap();
    let p = GaussianEtaParams {
        k0,
        g,
        n_quanta,
        v_g: 0.0,
    };
    (psi, p)
}

/// Direct O(N^2) double sum over mode pairs, no FFT.
fn wigner_direct(psi: &ActionWave, x: f64, s: i64) -> f64 {
    let g = psi.grid();
    let n = g.n as i64;
    let half = n / 2;
    let dk = g.dk();
    let mut acc = Complex64::default();
    for a in -half..half {
        let b = s - a;
        if b < -half || b >= half {
            continue;
        }
        let z = psi.psik[(a + half) as usize] * psi.psik[(b + half) as usize].conj();
        acc += z * Complex64::from_polar(1.0, (a - b) as f64 * dk * x);
    }
    (acc * 2.0 * dk / (2.0 * PI * psi.hbar * psi.hbar)).re
}

#[test]
fn gaussian_matches_closed_form_at_t0() {
    let start = Instant::now();
    let hbar = 1.0;
    let (psi, p) = gaussian_setup(1024, hbar, 1);
    let w = wigner_1d(&psi).unwrap();
    let err = w
        .fundamental_window()
        .normalized_linf(|x, pp| wigner_gaussian_closed(&p, x, pp, 0.0, hbar));
    assert!(err < 1e-6, "normalized L_inf {err}");
    assert!(w.imag_residue < 1e-10);
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn gaussian_peak_value() {
    for (hbar, nq) in [(1.0, 1), (0.5, 3)] {
        let (psi, p) = gaussian_setup(1024, hbar, nq);
        let w = wigner_1d(&psi).unwrap();
        let peak = w.f.iter().cloned().fold(f64::MIN, f64::max);
        let oracle = f64::from(nq) / (PI * hbar);
        assert!((peak - oracle).abs() / oracle < 1e-6, "peak {peak} vs {oracle}");
        // the maximum sits at x = 0, p = hbar k0
        let ix = w.nx / 2;
        let ip = ((hbar * p.k0 - w.p0) / w.dp).round() as usize;
        assert_relative_eq!(w.value(ix, ip), peak, max_relative = 1e-12);
    }
}

#[test]
fn gaussian_moves_with_linear_dispersion() {
    let hbar = 1.0;
    let (psi, mut p) = gaussian_setup(1024, hbar, 2);
    let v = 1.3;
    p.v_g = v;
    for t in [25.0, 100.0] {
        let moved = psi.evolve(|k| v * k, t);
        let w = wigner_1d(&moved).unwrap();
        let err = w.fundamental_window().normalized_linf(|x, pp| wigner_gaussian_closed(&p, x, pp, t, hbar));
        assert!(err < 1e-6, "t = {t}: {err}");
        let shifted = evolve_wigner_group_velocity(&wigner_1d(&psi).unwrap(), t, |_| v);
        let err2 = shifted.fundamental_window().normalized_linf(|x, pp| wigner_gaussian_closed(&p, x, pp, t, hbar));
        assert!(err2 < 1e-6, "t = {t}: {err2}");
    }
}

#[test]
fn alias_image_sits_half_a_period_away() {
    let (psi, _) = gaussian_setup(256, 1.0, 1);
    let w = wigner_1d(&psi).unwrap();
    let ip = ((psi.hbar * 100.0 * psi.grid().dk() * 0.25 - w.p0) / w.dp).round() as usize;
    let row = w.row(ip);
    // x = 0 sits at column n/2, its image at x = -L/2 in column 0
    assert_relative_eq!(row[0], row[128], max_relative = 1e-12);
    let win = w.fundamental_window();
    assert_eq!(win.nx, 128);
    assert_eq!(win.x0, -64.0);
}

#[test]
fn fft_rows_match_direct_sum() {
    let grid = KGrid { n: 32, ell: 0.5 };
    let mut psi = gaussian_action_wave(grid, 3.0, 0.3, 2.0, 0.8).unwrap();
    for (i, z) in psi.psik.iter_mut().enumerate() {
        *z *= Complex64::from_polar(1.0, 0.37 * i as f64 * i as f64);
    }
    let w = wigner_1d(&psi).unwrap();
    for ip in [0, 7, 31, 40, 62] {
        let s = ip as i64 - 32;
        for ix in [0, 5, 16, 31] {
            let direct = wigner_direct(&psi, w.x(ix), s);
            assert!((w.value(ix, ip) - direct).abs() < 1e-12, "ip {ip} ix {ix}");
        }
    }
}

#[test]
fn marginals_recover_densities() {
    let grid = KGrid { n: 128, ell: 1.0 };
    let hbar = 0.6;
    let mut psi = gaussian_action_wave(grid, 0.4, 30.0, 2.0, hbar).unwrap();
    for (i, z) in psi.psik.iter_mut().enumerate() {
        *z *= Complex64::from_polar(1.0, 0.05 * (i as f64 - 64.0).powi(2));
    }
    let w = wigner_1d(&psi).unwrap();

    let sites = psi.site_amplitudes();
    let half = grid.n / 2;
    let pos = w.position_marginal();
    for ix in 0..grid.n {
        let site = (ix + half) % grid.n;
        let oracle = sites[site].norm_sqr() / hbar;
        assert!((pos[ix] - oracle).abs() < 1e-10, "x index {ix}: {} vs {oracle}", pos[ix]);
    }

    let cells = w.momentum_marginal_mode_cells();
    for (a, z) in psi.psik.iter().enumerate() {
        let oracle = z.norm_sqr() / (hbar * hbar);
        assert!((cells[a] - oracle).abs() < 1e-10, "mode {a}");
    }
}

#[test]
fn total_is_action_area_over_h() {
    let grid = KGrid { n: 256, ell: 1.0 };
    let hbar = 1.3;
    let psi = gaussian_action_wave(grid, 0.2, 50.0, 3.0, hbar).unwrap();
    let w = wigner_1d(&psi).unwrap();
    assert_relative_eq!(w.integral(), action_area(&psi) / (2.0 * PI * hbar), max_relative = 1e-10);
}

#[test]
fn normalized_wave_integrates_to_quanta() {
    let p = LatticeParams::new(1.0, 0.3, 1.0, 1.0, 256).unwrap();
    let state = LatticeState::random(256, 0.1, 17);
    let spec = dft_to_modes(&state, &p).unwrap();
    let psi = psi_from_modes(&spec, 0.9).unwrap();
    for n in [1, 4] {
        let normed = normalize_action(&psi, n).unwrap();
        assert_relative_eq!(action_area(&normed), f64::from(n) * 2.0 * PI * 0.9, max_relative = 1e-12);
        let total = wigner_1d(&normed).unwrap().integral();
        assert!((total - f64::from(n)).abs() < 1e-8, "{total}");
    }
}

#[test]
fn plane_wave_is_flat_in_x() {
    let grid = KGrid { n: 64, ell: 1.0 };
    let mut psi = ActionWave::zeros(grid, 1.0);
    psi.psik[40] = Complex64::new(0.3, 0.4);
    let w = wigner_1d(&psi).unwrap();
    let ip = 2 * 40;
    let row = w.row(ip);
    let expected = 2.0 * grid.dk() * 0.25 / (2.0 * PI);
    for v in row {
        assert_relative_eq!(*v, expected, max_relative = 1e-12);
    }
    for jp in (0..w.np).filter(|&j| j != ip) {
        assert!(w.row(jp).iter().all(|v| v.abs() < 1e-15));
    }
}

#[test]
fn two_plane_waves_interfere_midway() {
    let grid = KGrid { n: 64, ell: 1.0 };
    let mut psi = ActionWave::zeros(grid, 1.0);
    psi.psik[30] = Complex64::new(1.0, 0.0);
    psi.psik[36] = Complex64::new(1.0, 0.0);
    let w = wigner_1d(&psi).unwrap();
    let dk = grid.dk();
    let row = w.row(66);
    for ix in 0..w.nx {
        let oracle = 2.0 * dk / (2.0 * PI) * 2.0 * (6.0 * dk * w.x(ix)).cos();
        assert!((row[ix] - oracle).abs() < 1e-12);
    }
}

#[test]
fn quasi_energy_total_is_lattice_energy() {
    let p = LatticeParams::new(1.0, 0.5, 1.0, 1.0, 128).unwrap();
    for seed in [1, 2, 3] {
        let state = LatticeState::random(128, 0.2, seed);
        let h = hamiltonian_energy(&state, &p);
        let spec = dft_to_modes(&state, &p).unwrap();
        let (_, total) = quasi_energy_density(&spec, 0.7).unwrap();
        assert!((total - h).abs() / h < 1e-8, "seed {seed}: {total} vs {h}");
    }
}

#[test]
fn samples_route_matches_mode_route() {
    let grid = KGrid { n: 64, ell: 0.5 };
    let psi = gaussian_action_wave(grid, 1.0, 2.0, 1.0, 1.0).unwrap();
    let sites = psi.site_amplitudes();
    let half = grid.n / 2;
    let x: Vec<f64> = (0..grid.n).map(|i| (i as f64 - half as f64) * grid.ell).collect();
    let samples: Vec<Complex64> = (0..grid.n).map(|i| sites[(i + half) % grid.n]).collect();
    let a = wigner_1d(&psi).unwrap();
    let b = wigner_from_samples(&x, &samples, 1.0).unwrap();
    let scale = a.max_abs();
    for (u, v) in a.f.iter().zip(&b.f) {
        assert!((u - v).abs() < 1e-12 * scale);
    }
}

#[test]
fn binary_round_trip_is_exact() {
    let (psi, _) = gaussian_setup(64, 1.0, 1);
    let w = wigner_1d(&psi).unwrap();
    let bytes = BinaryGrid::from(&w).to_bytes();
    let back = BinaryGrid::from_bytes(&bytes).unwrap().to_wigner().unwrap();
    assert_eq!(back.f, w.f);
    assert_eq!((back.x0, back.dx, back.p0, back.dp), (w.x0, w.dx, w.p0, w.dp));
    assert!(BinaryGrid::from_bytes(&bytes[..bytes.len() - 3]).is_err());
}
