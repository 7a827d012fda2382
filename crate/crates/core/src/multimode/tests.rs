use std::f64::consts::PI;

use super::*;
use crate::wigner::{mean, trajectory_rng, variance_with_error, ComplexAmplitude};

/// Small box with a tight trap so the packets separate within 30 ms.
fn small_config() -> MultimodeConfig {
    MultimodeConfig {
        n_points: 2048,
        length: 0.5e-3,
        x_min: -0.1e-3,
        x0: 0.0875e-3,
        k0: 8.0e6,
        trap_omega_x: 2.0 * PI * 40.0,
        t_separation: 30e-3,
        imaginary_time: ImaginaryTimeOptions { dtau: vec![1e-5], tolerance: 1e-9, ..Default::default() },
        ..Default::default()
    }
}

fn gaussian(grid: &Grid1D, center: f64, sigma: f64, k: f64) -> Vec<ComplexAmplitude> {
    let norm = (2.0 * PI * sigma * sigma).powf(-0.25);
    (0..grid.n_points)
        .map(|j| {
            let x = grid.x(j) - center;
            ComplexAmplitude::from_polar(norm * (-x * x / (4.0 * sigma * sigma)).exp(), k * grid.x(j))
        })
        .collect()
}

fn centre_and_width(grid: &Grid1D, psi: &[ComplexAmplitude]) -> (f64, f64) {
    let w: Vec<f64> = psi.iter().map(|z| z.norm_sqr() * grid.dx).collect();
    let total: f64 = w.iter().sum();
    let m1: f64 = w.iter().enumerate().map(|(j, w)| w * grid.x(j)).sum::<f64>() / total;
    let m2: f64 = w.iter().enumerate().map(|(j, w)| w * (grid.x(j) - m1).powi(2)).sum::<f64>() / total;
    (m1, m2.sqrt())
}

#[test]
fn noise_free_unit_seed_has_unit_norm() {
    let grid = Grid1D::new(1024, 100e-6, -50e-6).unwrap();
    let psi0 = harmonic_ground_state(&grid, RB87_MASS, 2.0 * PI * 40.0, 0.0);
    let seeds = Seeds { n_al: 1.0, n_ar: 0.0, n_bl: 0.0, n_br: 0.0, ..Default::default() };
    let f = mean_fields(&psi0, &grid, 8e6, &seeds);
    let n: f64 = f.psi_a.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dx;
    assert!((n - 1.0).abs() < 1e-12);
    assert!(f.psi_b.iter().all(|z| z.norm() == 0.0));
}

#[test]
fn sampled_population_and_noise_statistics() {
    let grid = Grid1D::new(256, 60e-6, -30e-6).unwrap();
    let psi0 = harmonic_ground_state(&grid, RB87_MASS, 2.0 * PI * 40.0, 0.0);
    let seeds = Seeds::default();
    let n = 4000;
    let mut na = Vec::with_capacity(n);
    let (mut c01, mut c0) = (ComplexAmplitude::new(0.0, 0.0), 0.0);
    let vacuum = Seeds { n_al: 0.0, n_ar: 0.0, n_bl: 0.0, n_br: 0.0, ..seeds };
    for i in 0..n {
        let mut rng = trajectory_rng(17, i as u64);
        let f = sample_initial_fields(&psi0, &grid, 8e6, &seeds, 1, &mut rng);
        na.push(f.psi_a.iter().map(|z| z.norm_sqr() - 0.5 / grid.dx).sum::<f64>() * grid.dx);
        let v = sample_initial_fields(&psi0, &grid, 8e6, &vacuum, 1, &mut rng);
        let (e0, e1) = (v.psi_a[10] * grid.dx.sqrt(), v.psi_a[11] * grid.dx.sqrt());
        c01 += e0.conj() * e1;
        c0 += e0.norm_sqr();
    }
    let est = variance_with_error(&na);
    let se = (est.value / n as f64).sqrt();
    assert!((mean(&na) - 1.01e5).abs() < 3.0 * se, "{} +- {se}", mean(&na));
    // <|eta|^2> = 1/2 per site and no correlation between sites.
    let (c01, c0) = (c01 / n as f64, c0 / n as f64);
    assert!((c0 - 0.5).abs() < 4.0 * 0.5 / (n as f64).sqrt());
    assert!(c01.norm() < 4.0 * 0.5 / (n as f64).sqrt(), "{c01}");
}

#[test]
fn free_gaussian_spreads_like_the_analytic_packet() {
    let grid = Grid1D::new(4096, 1.0e-3, -0.5e-3).unwrap();
    let spectral = Spectral::new(grid);
    let sigma = 5e-6;
    let t = 20e-3;
    let mut f = FieldPair { psi_a: gaussian(&grid, 0.0, sigma, 0.0), psi_b: gaussian(&grid, 0.0, sigma, 0.0) };
    let stepper = SplitStep { spectral: spectral.clone(), mass: RB87_MASS, u_1d: 0.0, dt: 1e-4, nonlinearity_on: true };
    let mut ws = spectral.workspace();
    stepper.evolve(&mut f, t, &mut ws).unwrap();
    let (_, width) = centre_and_width(&grid, &f.psi_a);
    let tau = HBAR * t / (2.0 * RB87_MASS * sigma * sigma);
    let expected = sigma * (1.0 + tau * tau).sqrt();
    assert!((width / expected - 1.0).abs() < 1e-6, "{width} vs {expected}");
}

#[test]
fn boosted_packet_moves_at_the_recoil_velocity() {
    let grid = Grid1D::new(16384, 2.0e-3, -0.59e-3).unwrap();
    let spectral = Spectral::new(grid);
    let k0 = RB87_RAMAN_K0;
    let t = 70e-3;
    let sigma = 30e-6;
    let mut rest = FieldPair { psi_a: gaussian(&grid, 0.0, sigma, 0.0), psi_b: gaussian(&grid, 0.0, sigma, k0) };
    let mut ws = spectral.workspace();
    spectral.free_propagate(&mut rest, RB87_MASS, t, &mut ws).unwrap();
    let (xa, _) = centre_and_width(&grid, &rest.psi_a);
    let (xb, _) = centre_and_width(&grid, &rest.psi_b);
    let expected = HBAR * k0 * t / RB87_MASS;
    assert!(((xb - xa) / expected - 1.0).abs() < 1e-6, "{} vs {expected}", xb - xa);
    assert!((expected - 0.824e-3).abs() < 1e-5);
}

#[test]
fn free_propagation_composes_and_has_identity() {
    let grid = Grid1D::new(1024, 0.4e-3, -0.2e-3).unwrap();
    let spectral = Spectral::new(grid);
    let mut ws = spectral.workspace();
    let f0 = FieldPair { psi_a: gaussian(&grid, 0.0, 8e-6, 2e6), psi_b: gaussian(&grid, 1e-5, 6e-6, -1e6) };
    let mut same = f0.clone();
    spectral.free_propagate(&mut same, RB87_MASS, 0.0, &mut ws).unwrap();
    assert_eq!(same, f0);
    let mut once = f0.clone();
    spectral.free_propagate(&mut once, RB87_MASS, 4e-3, &mut ws).unwrap();
    let mut twice = f0.clone();
    spectral.free_propagate(&mut twice, RB87_MASS, 2e-3, &mut ws).unwrap();
    spectral.free_propagate(&mut twice, RB87_MASS, 2e-3, &mut ws).unwrap();
    let peak = once.psi_a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for (x, y) in once.psi_a.iter().chain(&once.psi_b).zip(twice.psi_a.iter().chain(&twice.psi_b)) {
        assert!((x - y).norm() < 1e-12 * peak);
    }
}

#[test]
fn aliasing_guard_rejects_near_nyquist_atoms() {
    let grid = Grid1D::new(1024, 0.2e-3, -0.1e-3).unwrap();
    let spectral = Spectral::new(grid);
    let mut ws = spectral.workspace();
    let k = 0.95 * grid.k_nyquist();
    let mut f = FieldPair {
        psi_a: gaussian(&grid, 0.0, 10e-6, k).iter().map(|z| z * 300.0).collect(),
        psi_b: vec![ComplexAmplitude::new(0.0, 0.0); grid.n_points],
    };
    let err = spectral.free_propagate(&mut f, RB87_MASS, 1e-3, &mut ws).unwrap_err();
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn nonlinear_step_precondition_is_enforced() {
    let grid = Grid1D::new(256, 50e-6, -25e-6).unwrap();
    let spectral = Spectral::new(grid);
    let mut ws = spectral.workspace();
    let mut f = FieldPair { psi_a: gaussian(&grid, 0.0, 3e-6, 0.0), psi_b: gaussian(&grid, 0.0, 3e-6, 0.0) };
    for z in f.psi_a.iter_mut() {
        *z *= 1e3;
    }
    let s = SplitStep { spectral, mass: RB87_MASS, u_1d: 1e-36, dt: 1e-3, nonlinearity_on: true };
    assert!(s.nonlinear_phase(&f, 1e-3) > MAX_NONLINEAR_PHASE);
    assert!(s.evolve(&mut f, 1e-3, &mut ws).is_err());
}

#[test]
fn calibrated_model_has_requested_clock() {
    let m = MultimodeModel::new(small_config()).unwrap();
    assert!((m.nt_chi() / DEFAULT_NT_CHI - 1.0).abs() < 1e-6, "{}", m.nt_chi());
    let norm: f64 = m.psi0.iter().map(|p| p * p).sum::<f64>() * m.grid.dx;
    assert!((norm - 1.0).abs() < 1e-12);
}

#[test]
fn harmonic_and_physical_paths() {
    let harmonic = MultimodeModel::new(MultimodeConfig { ground_state: GroundStateKind::Harmonic, ..small_config() }).unwrap();
    assert!((harmonic.nt_chi() / DEFAULT_NT_CHI - 1.0).abs() < 1e-12);
    let cfg = MultimodeConfig {
        interaction: InteractionModel::ScatteringLength { a_s: DEFAULT_SCATTERING_LENGTH },
        ..small_config()
    };
    let u = cfg.u_1d_from_scattering_length(DEFAULT_SCATTERING_LENGTH);
    assert!((u / HBAR - 5.1e-5).abs() < 0.1e-5, "{}", u / HBAR);
}

#[test]
fn pipeline_conserves_norm_and_partitions_exactly() {
    let m = MultimodeModel::new(small_config()).unwrap();
    let mut rng = trajectory_rng(5, 0);
    let mut f = m.sample(&mut rng);
    let n0 = f.wigner_norm(m.grid.dx);
    let mut ws = m.spectral.workspace();
    m.stepper(true).evolve(&mut f, 1.2e-4, &mut ws).unwrap();
    m.spectral.free_propagate(&mut f, m.config.mass, m.config.t_separation - 1.2e-4, &mut ws).unwrap();
    let n1 = f.wigner_norm(m.grid.dx);
    assert!(((n1 - n0) / n0).abs() < 1e-8, "{n0} -> {n1}");
    let pops = f.region_populations(&m.grid, m.config.x0).unwrap();
    let total = f.atom_number(m.grid.dx);
    assert!((pops.iter().sum::<f64>() - total).abs() < 1e-9 * total);
}

#[test]
fn single_step_norm_drift_is_at_rounding_level() {
    let m = MultimodeModel::new(small_config()).unwrap();
    let mut rng = trajectory_rng(5, 1);
    let mut f = m.sample(&mut rng);
    let n0 = f.wigner_norm(m.grid.dx);
    let mut ws = m.spectral.workspace();
    m.stepper(true).evolve(&mut f, m.config.dt, &mut ws).unwrap();
    assert!(((f.wigner_norm(m.grid.dx) - n0) / n0).abs() < 1e-12);
}

#[test]
fn vacuum_fields_carry_no_atoms() {
    let m = MultimodeModel::new(small_config()).unwrap();
    let vacuum = Seeds { n_al: 0.0, n_ar: 0.0, n_bl: 0.0, n_br: 0.0, ..Default::default() };
    let n = 400;
    let mut per_mode: Vec<Vec<f64>> = vec![Vec::new(); 4];
    for i in 0..n {
        let mut rng = trajectory_rng(8, i as u64);
        let f = sample_initial_fields(&m.psi0, &m.grid, m.config.k0, &vacuum, 1, &mut rng);
        for (k, p) in f.region_populations(&m.grid, m.config.x0).unwrap().iter().enumerate() {
            per_mode[k].push(*p);
        }
    }
    for col in per_mode {
        let se = (variance_with_error(&col).value / n as f64).sqrt();
        assert!(mean(&col).abs() < 4.0 * se, "{} +- {se}", mean(&col));
    }
}

#[test]
fn linear_flight_sorts_momentum_classes() {
    let m = MultimodeModel::new(small_config()).unwrap();
    let s = &m.config.seeds;
    let n = 200;
    let mut pops = vec![[0.0; 4]; n];
    let mut ws = m.spectral.workspace();
    for (i, p) in pops.iter_mut().enumerate() {
        let mut rng = trajectory_rng(12, i as u64);
        let mut f = m.sample(&mut rng);
        m.spectral.free_propagate(&mut f, m.config.mass, m.config.t_separation, &mut ws).unwrap();
        *p = f.region_populations(&m.grid, m.config.x0).unwrap();
    }
    for (k, expected) in [s.n_al, s.n_bl, s.n_ar, s.n_br].iter().enumerate() {
        let col: Vec<f64> = pops.iter().map(|p| p[k]).collect();
        let se = (variance_with_error(&col).value / n as f64).sqrt();
        assert!((mean(&col) - expected).abs() < 4.0 * se + 1e-6 * expected, "mode {k}: {} vs {expected}", mean(&col));
    }
}

#[test]
fn scan_is_coherent_at_zero_mixing_time() {
    let m = MultimodeModel::new(small_config()).unwrap();
    let scan = m.scan(&[0.0, 1.0 / DEFAULT_NT_CHI], 300, 3, true).unwrap();
    for v in scan.points[0].pair_variances {
        assert!(v.sigmas_from(1.0) < 4.0, "{v:?}");
    }
    assert!(scan.points[1].populations.n_bl > 1.3 * m.config.seeds.n_bl);
    assert!(scan.boundary_fraction.iter().all(|f| f.abs() < 1e-4), "{:?}", scan.boundary_fraction);
    let d = scan.densities.as_ref().unwrap();
    assert!((d[0].total(m.grid.dx) / m.n_total - 1.0).abs() < 0.01);
}

#[test]
fn mean_field_packets_are_separated_at_the_partition_point() {
    let m = MultimodeModel::new(small_config()).unwrap();
    for t in [0.0, 1.2e-4] {
        let overlap = m.packet_overlap(t).unwrap();
        assert!((0.0..crate::interferometer::MAX_BOUNDARY_FRACTION).contains(&overlap), "{t}: {overlap:e}");
    }
    assert!(m.packet_overlap(-1.0).is_err());
    let early = MultimodeModel::new(MultimodeConfig { t_separation: 1e-3, x0: 3e-6, ..small_config() }).unwrap();
    assert!(early.packet_overlap(0.0).unwrap() > crate::interferometer::MAX_BOUNDARY_FRACTION);
}

#[test]
fn band_limiting_a_smooth_field_only_resamples_it() {
    let fine = Grid1D::new(2048, 0.4e-3, -0.2e-3).unwrap();
    let coarse = fine.coarsened(2).unwrap();
    let (sf, sc) = (Spectral::new(fine), Spectral::new(coarse));
    let psi = gaussian(&fine, 1e-5, 8e-6, 2e6);
    let out = sf.band_limit(&psi, &sc, &mut sf.workspace()).unwrap();
    let direct = gaussian(&coarse, 1e-5, 8e-6, 2e6);
    let peak = direct.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for (x, y) in out.iter().zip(&direct) {
        assert!((x - y).norm() < 1e-10 * peak);
    }
    let same = sf.band_limit(&psi, &sf, &mut sf.workspace()).unwrap();
    assert!(same.iter().zip(&psi).all(|(x, y)| (x - y).norm() < 1e-12 * peak));
    assert!(sc.band_limit(&direct, &sf, &mut sc.workspace()).is_err());
}
