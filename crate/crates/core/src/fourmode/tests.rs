use proptest::prelude::*;

use super::*;
use crate::wigner::{mean, trajectory_rng, AL, BL};

fn model() -> FourModeModel {
    FourModeModel::paper_defaults()
}

fn state_strategy() -> impl Strategy<Value = FourModeState> {
    let amp = (0.0f64..400.0, -3.2f64..3.2).prop_map(|(r, p)| ComplexAmplitude::from_polar(r, p));
    (amp.clone(), amp.clone(), amp.clone(), amp).prop_map(|(a, b, c, d)| FourModeState::from_array([a, b, c, d]))
}

fn rel_change(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(1.0)
}

#[test]
fn linear_limit_is_a_pure_phase() {
    let m = model();
    let s = m.seeds.means();
    let p = m.params.linear();
    let t = 1e-4;
    let out = evolve_four_mode_tw(s, &p, 1e-7, t).unwrap();
    for (z0, z1, w) in [
        (s.alpha0, out.alpha0, p.omega0),
        (s.alpha_k, out.alpha_k, p.omega_k),
        (s.beta0, out.beta0, p.omega0),
        (s.beta_k, out.beta_k, p.omega_k),
    ] {
        let expected = z0 * ComplexAmplitude::from_polar(1.0, -w * t);
        assert!((z1 - expected).norm() < 1e-9 * z0.norm().max(1.0), "{z1} vs {expected}");
    }
}

#[test]
fn bilinears_conserved_over_ten_thousand_steps() {
    let m = model();
    let mut rng = trajectory_rng(3, 0);
    let s = m.seeds.sample(&mut rng);
    let out = evolve_four_mode_tw(s, &m.params, m.dt, 1e4 * m.dt).unwrap();
    for (a, b) in s.invariants().iter().zip(out.invariants()) {
        assert!(rel_change(*a, b) < 1e-8, "{a} -> {b}");
    }
    assert!(rel_change(s.total_number(), out.total_number()) < 1e-8);
}

#[test]
fn mirrored_initial_state_gives_mirrored_result_exactly() {
    let m = model();
    let p = m.params.degenerate();
    let mut rng = trajectory_rng(11, 5);
    let s = m.seeds.sample(&mut rng);
    let t = 2e-4;
    let direct = evolve_four_mode_tw(s, &p, m.dt, t).unwrap();
    let mirrored = evolve_four_mode_tw(s.mirrored(), &p, m.dt, t).unwrap();
    assert_eq!(direct.mirrored(), mirrored);
}

#[test]
fn oversized_step_is_rejected() {
    let m = model();
    let s = m.seeds.means();
    let err = evolve_four_mode_tw(s, &m.params, 1e-7, 1e-4).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn non_finite_state_is_rejected() {
    let m = model();
    let mut s = m.seeds.means();
    s.beta0 = ComplexAmplitude::new(f64::NAN, 0.0);
    assert!(evolve_four_mode_tw(s, &m.params, m.dt, 1e-5).is_err());
}

#[test]
fn scan_starts_coherent_and_keeps_seeded_modes_equal() {
    let m = model();
    let grid = [0.0, 0.5 / DEFAULT_NT_CHI, 3.0 / DEFAULT_NT_CHI];
    let points = m.scan(&grid, 400, 21).unwrap();
    for v in points[0].pair_variances {
        assert!(v.sigmas_from(1.0) < 4.0, "{v:?}");
    }
    let end = &points[2];
    let gap = |p: &ScanPoint| p.populations.n_ar - p.populations.n_bl;
    assert!(end.populations.n_ar > 5.0 * m.seeds.n_ar);
    assert!((gap(end) - gap(&points[0])).abs() < 1e-6 * end.populations.n_ar, "{end:?}");
    assert!(end.squeezed().value < 0.2);
    for name in ["v_aL_bL", "v_aR_bR", "v_aL_aR", "v_bL_bR"] {
        assert!(end.pair(name).unwrap().value > 1.0, "{name}");
    }
}

#[test]
fn short_time_population_follows_undepleted_formula() {
    let m = model();
    let tau = 0.5;
    let t = tau / DEFAULT_NT_CHI;
    let ens = m.prepare(t, 2000, 8).unwrap();
    let bl: Vec<f64> = ens.trajectories.iter().map(|s| s.populations()[BL]).collect();
    let est = crate::wigner::variance_with_error(&bl);
    let se = (est.value / bl.len() as f64).sqrt();
    let r = squeeze_parameter(m.params.chi, m.seeds.n_al, m.seeds.n_br, t);
    let expected = undepleted_population(m.seeds.n_bl, r);
    assert!((mean(&bl) - expected).abs() < 3.0 * se, "{} vs {expected} (se {se})", mean(&bl));
    let al: Vec<f64> = ens.trajectories.iter().map(|s| s.populations()[AL]).collect();
    assert!(mean(&al) < m.seeds.n_al);
}

#[test]
fn halving_the_step_changes_v_by_under_one_percent() {
    let m = model();
    let grid = [6.0 / DEFAULT_NT_CHI];
    let coarse = m.scan(&grid, 200, 2).unwrap()[0].squeezed().value;
    let fine = FourModeModel { dt: m.dt / 2.0, ..m }.scan(&grid, 200, 2).unwrap()[0].squeezed().value;
    assert!(rel_change(coarse, fine) < 0.01, "{coarse} vs {fine}");
}

#[test]
fn non_monotone_grid_is_rejected() {
    assert!(validate_grid(&[]).is_err());
    assert!(validate_grid(&[1e-5, 0.0]).is_err());
    assert!(validate_grid(&[-1e-5]).is_err());
    assert!(validate_grid(&[0.0, 0.0, 1e-5]).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn invariants_hold_for_arbitrary_states(s in state_strategy()) {
        let p = FourModeParams::calibrated(DEFAULT_NT_CHI, 2.02e5).unwrap();
        let n = s.total_number().max(1.0);
        let dt = (0.99 * max_stable_dt(&p, n)).min(2e-8);
        let out = evolve_four_mode_tw(s, &p, dt, 2000.0 * dt).unwrap();
        for (a, b) in s.invariants().iter().zip(out.invariants()) {
            prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0));
        }
    }

    #[test]
    fn global_phase_leaves_populations_unchanged(s in state_strategy(), theta in -3.2f64..3.2) {
        let p = FourModeParams::calibrated(DEFAULT_NT_CHI, 2.02e5).unwrap();
        let dt = (0.99 * max_stable_dt(&p, s.total_number().max(1.0))).min(2e-8);
        let a = evolve_four_mode_tw(s, &p, dt, 2000.0 * dt).unwrap().populations();
        let b = evolve_four_mode_tw(s.with_global_phase(theta), &p, dt, 2000.0 * dt).unwrap().populations();
        for (x, y) in a.iter().zip(b) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "{} vs {}", x, y);
        }
    }
}

