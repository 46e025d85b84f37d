use approx::assert_relative_eq;
use std::f64::consts::PI;
use std::time::Instant;
use wavequanta::thermal::*;
use wavequanta::Units;

const ZETA3: f64 = 1.202_056_903_159_594_2;

fn natural(t: f64, gamma: f64) -> KineticParams {
    KineticParams::new(t, gamma, 1.0, 1.0, Units::Natural).unwrap()
}

fn lab(t: f64) -> KineticParams {
    KineticParams::new(t, 0.5, 1.0, 1.0, Units::MevPs).unwrap()
}

/// Root of `x = 5 (1 - exp(-x))` by bisection.
fn wien_x_bisect() -> f64 {
    let g = |x: f64| x - 5.0 * (1.0 - (-x).exp());
    let (mut a, mut b) = (1.0_f64, 10.0_f64);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if g(a) * g(m) <= 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

#[test]
fn classical_and_wien_laws_bound_planck() {
    let p = natural(1.3, 1.0);
    for x in [1e-4, 1e-2, 0.3, 1.0, 3.0, 10.0, 40.0] {
        let q = p.momentum_at(x);
        let rj = equilibrium_f(SourceModel::RayleighJeans, q, &p).unwrap();
        let w = equilibrium_f(SourceModel::Wien, q, &p).unwrap();
        let pl = planck_f(q, &p).unwrap();
        assert!(w < pl && pl < rj, "x = {x}");
        assert_eq!(equilibrium_f(SourceModel::WienStimulated, q, &p).unwrap(), pl);
    }
    let q = p.momentum_at(1e-6);
    assert_relative_eq!(planck_f(q, &p).unwrap() / equilibrium_f(SourceModel::RayleighJeans, q, &p).unwrap(), 1.0, max_relative = 1e-6);
    let q = p.momentum_at(40.0);
    assert_relative_eq!(planck_f(q, &p).unwrap() / equilibrium_f(SourceModel::Wien, q, &p).unwrap(), 1.0, max_relative = 1e-16);
}

#[test]
fn decay_rates_match_gamma_and_stimulated_factor() {
    let gamma = 0.8;
    let p = natural(2.0, gamma);
    let grid = MomentumGrid::log_spaced(&p, 0.01, 20.0, 64).unwrap();
    let t = 1.7;
    for model in [SourceModel::RayleighJeans, SourceModel::Wien, SourceModel::WienStimulated] {
        let f0 = KineticState::homogeneous(grid.clone(), vec![0.0; grid.len()]).unwrap();
        let f1 = kinetic_step(&f0, &p, Dynamics::Relaxation(model), t).unwrap();
        for (i, &q) in grid.centers.iter().enumerate() {
            let x = p.x(q);
            let want = match model {
                SourceModel::WienStimulated => gamma * (1.0 - (-x).exp()),
                _ => gamma,
            };
            let feq = equilibrium_f(model, q, &p).unwrap();
            let measured = -((feq - f1.f[i]) / feq).ln() / t;
            assert!((measured - want).abs() / want < 1e-8, "{model:?} x = {x}: {measured} vs {want}");
            let rate = relaxation_rate(model, q, &p).unwrap();
            assert!((rate - want).abs() / want < 1e-12);
            // the right-hand side is affine with slope -rate
            let d = 1e-3 * feq;
            let slope = (relaxation_rhs(model, q, &p, feq + d).unwrap() - relaxation_rhs(model, q, &p, feq - d).unwrap()) / (2.0 * d);
            assert!((slope + want).abs() / want < 1e-6);
        }
    }
}

#[test]
fn rayleigh_jeans_relaxation_follows_the_exact_curve() {
    let gamma = 1.3;
    let p = natural(1.0, gamma);
    let grid = MomentumGrid::log_spaced(&p, 0.05, 10.0, 32).unwrap();
    let mut s = KineticState::homogeneous(grid.clone(), vec![0.0; grid.len()]).unwrap();
    let dt = 0.05;
    for n in 1..=40 {
        s = kinetic_step(&s, &p, Dynamics::Relaxation(SourceModel::RayleighJeans), dt).unwrap();
        let t = n as f64 * dt;
        for (i, &q) in grid.centers.iter().enumerate() {
            let x = p.x(q);
            let exact = 2.0 / p.h().powi(3) / x * (1.0 - (-gamma * t).exp());
            assert!((s.f[i] - exact).abs() <= 1e-12 * exact);
        }
    }
}

#[test]
fn damping_only_loses_photons_exponentially() {
    let gamma = 0.6;
    let p = natural(1.0, gamma);
    let grid = MomentumGrid::default_for(&p).unwrap();
    let mut s = KineticState::equilibrium(grid, SourceModel::WienStimulated, &p).unwrap();
    let n0 = s.total_number();
    let dt = 0.01;
    for step in 1..=500 {
        s = kinetic_step(&s, &p, Dynamics::DampingOnly, dt).unwrap();
        if step % 100 == 0 {
            let want = n0 * (-gamma * step as f64 * dt).exp();
            assert!((s.total_number() - want).abs() / want < 1e-10);
        }
    }
}

#[test]
fn transport_conserves_photons_and_positivity() {
    let p = natural(1.0, 1.0);
    let grid = MomentumGrid::log_spaced(&p, 0.1, 10.0, 16).unwrap();
    let space = SpatialGrid { nx: 50, dx: 0.2, direction: -0.7 };
    let f: Vec<f64> = (0..50)
        .flat_map(|ix| {
            let bump = (-((ix as f64 - 20.0) / 4.0).powi(2)).exp();
            grid.centers.iter().map(move |q| bump / (1.0 + q)).collect::<Vec<_>>()
        })
        .collect();
    let mut s = KineticState::with_space(grid, space, f).unwrap();
    let n0 = s.total_number();
    for _ in 0..100 {
        s = kinetic_step(&s, &p, Dynamics::TransportOnly, 0.1).unwrap();
        assert!(s.f.iter().all(|&v| v >= 0.0));
    }
    assert_relative_eq!(s.total_number(), n0, max_relative = 1e-12);
    // the bump moves by v * direction * t = -7 length units = -35 cells
    let np = s.p.len();
    let col = |ix: usize| s.f[ix * np];
    let best = (0..50).max_by(|&a, &b| col(a).partial_cmp(&col(b)).unwrap()).unwrap();
    let peak_col = (20 + 50 - 35) % 50;
    assert!((best as i64 - peak_col as i64).abs() <= 1, "{best} vs {peak_col}");
}

#[test]
fn relaxation_keeps_distributions_non_negative() {
    let p = natural(1.0, 2.0);
    let grid = MomentumGrid::default_for(&p).unwrap();
    let f0: Vec<f64> = grid.centers.iter().map(|&q| 3.0 * planck_f(q, &p).unwrap()).collect();
    let s = KineticState::homogeneous(grid, f0).unwrap();
    for model in [SourceModel::RayleighJeans, SourceModel::Wien, SourceModel::WienStimulated] {
        let rep = relax_to_equilibrium(&s, &p, model, 5.0, 50).unwrap();
        assert!(rep.trajectory.iter().flatten().all(|&v| v >= 0.0));
        assert!(rep.monotone);
    }
}

#[test]
fn planck_is_stationary_only_with_stimulated_emission() {
    for p in [natural(1.0, 1.0), natural(0.3, 7.0), lab(300.0)] {
        let grid = MomentumGrid::default_for(&p).unwrap();
        let r = stationarity_residual(SourceModel::WienStimulated, &grid, &p).unwrap();
        assert!(r < 1e-13, "{r}");
        assert!(stationarity_residual(SourceModel::Wien, &grid, &p).unwrap() > 0.1);
        assert!(stationarity_residual(SourceModel::RayleighJeans, &grid, &p).unwrap() > 0.1);
    }
}

#[test]
fn stimulated_relaxation_from_empty_state() {
    let gamma = 1.0;
    let p = natural(1.0, gamma);
    let grid = MomentumGrid::default_for(&p).unwrap();
    assert_eq!(grid.len(), 512);
    let f0 = KineticState::homogeneous(grid.clone(), vec![0.0; 512]).unwrap();
    let rep = relax_to_equilibrium(&f0, &p, SourceModel::WienStimulated, 30.0 / gamma, 30).unwrap();
    // every cell follows exp(-gamma (1 - exp(-x)) t)
    for (d, &q) in rep.final_distance.iter().zip(&grid.centers) {
        let want = (-gamma * (1.0 - (-p.x(q)).exp()) * 30.0).exp();
        assert!((d - want).abs() <= 1e-9 * want + 1e-15, "{d} vs {want}");
    }
    assert!(rep.monotone);
    // high cells are converged, the soft end is not
    assert!(*rep.final_distance.last().unwrap() < 1e-10);
    assert!(rep.final_distance[0] > 0.9);
}

#[test]
fn wien_displacement_product() {
    let start = Instant::now();
    let oracle = 2.0 * PI / wien_x_bisect();
    for p in [natural(1.0, 1.0), natural(37.0, 1.0), lab(300.0), lab(5800.0)] {
        let peak = wien_peak(&p).unwrap();
        assert!((peak.product - 1.26).abs() <= 0.01, "{}", peak.product);
        assert!((peak.product - oracle).abs() < 1e-4);
        assert!((peak.product - 1.2655).abs() < 1e-4);
        // a golden-section maximum is located to about sqrt(machine epsilon)
        assert_relative_eq!(peak.x_peak, wien_x_bisect(), max_relative = 1e-7);
        // U_lambda is maximal at lambda_m
        let u = |l: f64| spectral_energy_density(l, &p).unwrap();
        let l = peak.lambda_m;
        assert!(u(l) > u(l * 1.001) && u(l) > u(l * 0.999));
    }
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn wien_product_matches_library_root() {
    assert_relative_eq!(wien_root(), wien_x_bisect(), max_relative = 1e-14);
}

#[test]
fn thermal_photon_count_band() {
    let start = Instant::now();
    for p in [natural(1.0, 1.0), natural(0.01, 1.0), lab(300.0), lab(3000.0)] {
        let c = thermal_photon_count(&p).unwrap();
        assert!((0.47..=0.50).contains(&c.n_m), "{}", c.n_m);
        let y = 1.0 / wien_x_bisect();
        let oracle = 16.0 * PI * ZETA3 * y.powi(3);
        assert!((c.n_m - oracle).abs() < 1e-6, "{} vs {oracle}", c.n_m);
        assert!((photon_count_closed_form(c.lambda_m, &p) - oracle).abs() < 1e-7);
    }
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn spectral_density_collapses_under_temperature_scaling() {
    let a = lab(300.0);
    let b = lab(1200.0);
    for lt in [500.0, 2898.0, 10000.0] {
        let ua = spectral_energy_density(lt / 300.0, &a).unwrap();
        let ub = spectral_energy_density(lt / 1200.0, &b).unwrap();
        assert_relative_eq!(ub / ua, 4f64.powi(5), max_relative = 1e-12);
    }
}

#[test]
fn energy_density_two_ways_and_closed_form() {
    for p in [natural(1.0, 1.0), lab(300.0), KineticParams::new(2.0, 1.0, 2.5, 1.2, Units::Natural).unwrap()] {
        let direct = thermal_energy_density(&p);
        let via_lambda = integrated_spectral_density(&p);
        // int d^3p eps f = 8 pi / h^3 (k_B T)^4 / v^3 * pi^4 / 15
        let v = p.medium.v();
        let closed = 8.0 * PI / p.h().powi(3) * p.kt().powi(4) / v.powi(3) * PI.powi(4) / 15.0;
        assert_relative_eq!(direct, closed, max_relative = 1e-10);
        assert!((via_lambda - direct).abs() / direct < 1e-8, "{via_lambda} vs {direct}");
    }
}

#[test]
fn photon_count_density_closed_form() {
    // int d^3p f^T = 16 pi zeta(3) (k_B T / (h v))^3
    let p = natural(1.7, 1.0);
    let grid = MomentumGrid::log_spaced(&p, 1e-6, 60.0, 20000).unwrap();
    let s = KineticState::equilibrium(grid, SourceModel::WienStimulated, &p).unwrap();
    let closed = 16.0 * PI * ZETA3 * (p.kt() / (p.h() * p.medium.v())).powi(3);
    assert_relative_eq!(s.total_number(), closed, max_relative = 1e-5);
}

#[test]
fn kinetic_params_json() {
    let p = lab(300.0);
    let text = serde_json::to_string(&p).unwrap();
    assert_eq!(serde_json::from_str::<KineticParams>(&text).unwrap(), p);
    let bad = text.replacen('{', "{\"bogus\":true,", 1);
    assert!(serde_json::from_str::<KineticParams>(&bad).is_err());
}
