use std::f64::consts::PI;

use super::*;
use crate::constants::DEFAULT_NT_CHI;
use crate::fourmode::FourModeModel;
use crate::wigner::{run_ensemble, ComplexAmplitude};

fn coherent_states(n_traj: usize, seed: u64) -> Vec<SplitState> {
    let m = FourModeModel::paper_defaults();
    run_ensemble(n_traj, seed, |rng| m.seeds.sample(rng), |s| Ok(s.split())).unwrap().trajectories
}

fn fwm_states(tau: f64, n_traj: usize, seed: u64) -> Vec<SplitState> {
    let m = FourModeModel::paper_defaults();
    m.prepare(tau / DEFAULT_NT_CHI, n_traj, seed).unwrap().trajectories.iter().map(|s| s.split()).collect()
}

#[test]
fn uncorrelated_coherent_input_sits_at_the_standard_quantum_limit() {
    let states = coherent_states(10_000, 4);
    let sweep = balanced_sweep(&states, &PulseSequence::default(), 128).unwrap();
    assert!((0.9..=1.1).contains(&sweep.min_delta_phi_sqrt_nt), "{}", sweep.min_delta_phi_sqrt_nt);
    for v in &sweep.var_s {
        let z = (v.value / sweep.n_t - 1.0) / (v.std_err / sweep.n_t);
        assert!(z.abs() < 5.0, "{v:?}");
    }
}

#[test]
fn fourmode_preparation_beats_the_standard_quantum_limit() {
    let states = fwm_states(3.2, 1200, 9);
    let sweep = balanced_sweep(&states, &PulseSequence::default(), DEFAULT_PHI2_POINTS).unwrap();
    assert!(sweep.min_delta_phi_sqrt_nt < 0.6, "{}", sweep.min_delta_phi_sqrt_nt);
    assert!(sweep.grid_min_delta_phi_sqrt_nt() >= sweep.min_delta_phi_sqrt_nt * (1.0 - 1e-9));
    assert!((sweep.visibility - sweep.moments.visibility()).abs() < 1e-3);
}

#[test]
fn pulse_chain_conserves_each_trajectory_number() {
    let seq = PulseSequence { phi0_l: 0.2, phi0_r: 1.4, phi1_l: -2.0, phi1_r: 0.9, phi2: 0.33, ..Default::default() };
    for s in fwm_states(2.0, 20, 5) {
        let out = run_sequence(&s, &seq);
        let after: f64 = out.populations.iter().sum();
        assert!((after - s.total()).abs() < 1e-10 * s.total());
    }
}

#[test]
fn phase_origin_shift_moves_the_fringe() {
    let states = fwm_states(2.0, 200, 6);
    let (seq, _) = auto_balance(&states, &PulseSequence::default()).unwrap();
    let c = 0.37;
    for k in 0..10 {
        let phi = 0.6 * k as f64;
        let a: Vec<f64> = states.iter().map(|s| run_sequence(s, &seq.with_phi2(phi + c)).signal).collect();
        let b: Vec<f64> = states
            .iter()
            .map(|s| {
                let l = run_side(&s.left, (seq.phi0_l, seq.phi1_l, phi + c));
                let r = run_side(&s.right, (seq.phi0_r, seq.phi1_r, phi + c + PI));
                (l.a - l.b) + (r.a - r.b)
            })
            .collect();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9 * x.abs().max(1.0));
        }
    }
}

#[test]
fn differential_mode_rejects_common_phase() {
    let states = fwm_states(3.2, 400, 7);
    let (seq, _) = auto_balance(&states, &PulseSequence::default()).unwrap();
    let common = FringeMoments::from_states(&states, &seq.differential_mode()).unwrap();
    let offset = FringeMoments::from_states(&states, &seq).unwrap();
    assert!(common.visibility() < 1e-2 * offset.visibility(), "{} vs {}", common.visibility(), offset.visibility());

    // A differential phase delta enters as +delta/2 on the left and
    // -delta/2 on the right, which the differential device turns into a
    // full fringe.
    let diff = seq.differential_mode();
    let signal = |delta: f64| {
        let m = mean_state(&states);
        let l = run_side(&m.left, (diff.phi0_l, diff.phi1_l, 0.5 * delta));
        let r = run_side(&m.right, (diff.phi0_r, diff.phi1_r, -0.5 * delta));
        (l.a - l.b) + (r.a - r.b)
    };
    let samples: Vec<f64> = (0..64).map(|k| signal(2.0 * PI * k as f64 / 64.0)).collect();
    let span = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - samples.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(span > 0.5 * offset.visibility() * offset.n_t, "{span}");
}

#[test]
fn mean_field_fringe_reaches_full_contrast() {
    let m = FourModeModel::paper_defaults();
    let s = m.seeds.means().split();
    let noisefree = vec![s, s];
    let (seq, _) = auto_balance(&noisefree, &PulseSequence::default()).unwrap();
    let f = FringeMoments::from_coefficients(&[fringe_coefficients(&s, &seq), fringe_coefficients(&s, &seq)], 0.0, s.total() + 2.0).unwrap();
    assert!((f.visibility() - 1.0).abs() < 1e-6, "{}", f.visibility());
}

#[test]
fn separation_check() {
    assert!(check_separated(1e-6).is_ok());
    assert_eq!(check_separated(1e-3).unwrap_err().exit_code(), 2);
}

#[test]
fn sweep_rejects_coarse_grids() {
    let states = coherent_states(10, 1);
    assert!(sensitivity_sweep(&states, &PulseSequence::default(), &phi2_grid(16)).is_err());
    let mut g = phi2_grid(64);
    g[3] += 0.01;
    assert!(sensitivity_sweep(&states, &PulseSequence::default(), &g).is_err());
}

#[test]
fn four_mode_split_uses_momentum_classes() {
    let s = crate::fourmode::FourModeState::from_array([
        ComplexAmplitude::new(1.0, 0.0),
        ComplexAmplitude::new(2.0, 0.0),
        ComplexAmplitude::new(3.0, 0.0),
        ComplexAmplitude::new(4.0, 0.0),
    ]);
    let sp = s.split();
    assert_eq!((sp.left.a, sp.left.b, sp.right.a, sp.right.b), (1.0, 9.0, 4.0, 16.0));
    assert_eq!(sp.populations(), s.populations());
}
