//! Three-pulse interferometer acting on separated four-mode or multimode
//! ensembles.
//!
//! Each side is reduced per trajectory to a [`SideCoherency`]; pulses and
//! phase shifts map it exactly, so one prepared ensemble serves the whole
//! interrogation-phase sweep.

mod balance;
mod coherency;
mod pulses;
mod sequence;
mod sweep;

pub use balance::{auto_balance, balance_phase, balanced_populations, Balance, Branch};
pub use coherency::{SideCoherency, SplitState};
pub use pulses::{beam_splitter, phase_shift};
pub use sequence::{
    first_stage, fringe_coefficients, mean_state, run_sequence, run_side, second_stage, PulseSequence,
    SequenceOutcome, Side,
};
pub use sweep::{
    phi2_grid, sensitivity_sweep, signal_vacuum_correction, FringeMoments, SweepResult, MIN_SLOPE,
};

use crate::fourmode::FourModeState;
use crate::{Error, Result};

/// Default number of interrogation phases per sweep.
pub const DEFAULT_PHI2_POINTS: usize = 256;

/// Largest atom fraction allowed near the partition point before phase
/// shifts are applied to the two sides independently.
pub const MAX_BOUNDARY_FRACTION: f64 = 1e-4;

impl FourModeState {
    /// Zero-momentum modes on the left, k0 modes on the right.
    pub fn split(&self) -> SplitState {
        SplitState {
            left: SideCoherency::from_amplitudes(self.alpha0, self.beta0),
            right: SideCoherency::from_amplitudes(self.alpha_k, self.beta_k),
        }
    }
}

/// Reject side-resolved phase shifts when the packets still overlap at the
/// partition point.
pub fn check_separated(boundary_fraction: f64) -> Result<()> {
    if boundary_fraction.abs() > MAX_BOUNDARY_FRACTION {
        return Err(Error::config(format!(
            "packets not separated: {boundary_fraction:.2e} of the atoms sit at the partition point"
        )));
    }
    Ok(())
}

/// Balance both sides and sweep the interrogation phase.
pub fn balanced_sweep(states: &[SplitState], base: &PulseSequence, n_phi: usize) -> Result<SweepResult> {
    let (seq, branch) = auto_balance(states, base)?;
    log::debug!("balanced sequence {:?} with branch {:?}", seq.reduced(), branch);
    sensitivity_sweep(states, &seq, &phi2_grid(n_phi))
}

#[cfg(test)]
mod tests;
