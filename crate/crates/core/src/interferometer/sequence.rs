use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::coherency::{SideCoherency, SplitState};

/// Phases of the three-pulse sequence on both sides, rad.
///
/// The sequence on each side is: phase 0, pulse, phase 1, pulse, phase 2,
/// pulse, measure. The right side's interrogation phase is
/// `phi2 + phi2_offset_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSequence {
    pub phi0_l: f64,
    pub phi0_r: f64,
    pub phi1_l: f64,
    pub phi1_r: f64,
    pub phi2: f64,
    pub phi2_offset_r: f64,
}

impl Default for PulseSequence {
    fn default() -> Self {
        PulseSequence { phi0_l: 0.0, phi0_r: 0.0, phi1_l: 0.0, phi1_r: 0.0, phi2: 0.0, phi2_offset_r: PI }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

fn reduce(phi: f64) -> f64 {
    phi.rem_euclid(TAU)
}

impl PulseSequence {
    pub fn with_phi2(&self, phi2: f64) -> Self {
        PulseSequence { phi2, ..*self }
    }

    /// Drop the right side's pi offset so the device responds to the
    /// difference of the two interrogation phases.
    pub fn differential_mode(&self) -> Self {
        PulseSequence { phi2_offset_r: 0.0, ..*self }
    }

    /// Switch between the common-mode (pi) and differential (0) offsets.
    pub fn toggled_mode(&self) -> Self {
        let offset = if reduce(self.phi2_offset_r) == 0.0 { PI } else { 0.0 };
        PulseSequence { phi2_offset_r: offset, ..*self }
    }

    /// All phases in `[0, 2 pi)`, for reporting.
    pub fn reduced(&self) -> Self {
        PulseSequence {
            phi0_l: reduce(self.phi0_l),
            phi0_r: reduce(self.phi0_r),
            phi1_l: reduce(self.phi1_l),
            phi1_r: reduce(self.phi1_r),
            phi2: reduce(self.phi2),
            phi2_offset_r: reduce(self.phi2_offset_r),
        }
    }

    /// `(phi0, phi1, phi2)` applied on one side.
    pub fn side_phases(&self, side: Side) -> (f64, f64, f64) {
        match side {
            Side::Left => (self.phi0_l, self.phi1_l, self.phi2),
            Side::Right => (self.phi0_r, self.phi1_r, self.phi2 + self.phi2_offset_r),
        }
    }
}

/// Phase 0 and the first pulse.
pub fn first_stage(s: &SideCoherency, phi0: f64) -> SideCoherency {
    s.phase_shift(phi0).beam_splitter()
}

/// Phases 0 and 1 with the first two pulses.
pub fn second_stage(s: &SideCoherency, phi0: f64, phi1: f64) -> SideCoherency {
    first_stage(s, phi0).phase_shift(phi1).beam_splitter()
}

/// Full sequence on one side.
pub fn run_side(s: &SideCoherency, (phi0, phi1, phi2): (f64, f64, f64)) -> SideCoherency {
    second_stage(s, phi0, phi1).phase_shift(phi2).beam_splitter()
}

/// Measured populations and signal of one trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceOutcome {
    /// `[aL, bL, aR, bR]`, Wigner corrected.
    pub populations: [f64; 4],
    /// `S = (N_aL - N_bL) - (N_bR - N_aR)`.
    pub signal: f64,
}

pub fn run_sequence(state: &SplitState, seq: &PulseSequence) -> SequenceOutcome {
    let out = SplitState {
        left: run_side(&state.left, seq.side_phases(Side::Left)),
        right: run_side(&state.right, seq.side_phases(Side::Right)),
    };
    let p = out.populations();
    SequenceOutcome { populations: p, signal: (p[0] - p[1]) - (p[3] - p[2]) }
}

/// `S(phi2) = P cos phi2 + Q sin phi2` holds exactly per trajectory;
/// returns `(P, Q)`.
pub fn fringe_coefficients(state: &SplitState, seq: &PulseSequence) -> (f64, f64) {
    (run_sequence(state, &seq.with_phi2(0.0)).signal, run_sequence(state, &seq.with_phi2(0.5 * PI)).signal)
}

/// Ensemble-mean coherencies; the pulse maps are linear in them.
pub fn mean_state(states: &[SplitState]) -> SplitState {
    let n = states.len() as f64;
    let mean_side = |f: &dyn Fn(&SplitState) -> SideCoherency| {
        let mut m = SideCoherency { a: 0.0, b: 0.0, c_re: 0.0, c_im: 0.0, modes: 0.0 };
        for s in states {
            let x = f(s);
            m.a += x.a;
            m.b += x.b;
            m.c_re += x.c_re;
            m.c_im += x.c_im;
            m.modes = x.modes;
        }
        SideCoherency { a: m.a / n, b: m.b / n, c_re: m.c_re / n, c_im: m.c_im / n, modes: m.modes }
    };
    SplitState { left: mean_side(&|s| s.left), right: mean_side(&|s| s.right) }
}
