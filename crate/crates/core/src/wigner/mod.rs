//! Shared truncated-Wigner machinery.
//!
//! A trajectory's noise is drawn from its own ChaCha stream keyed by
//! `(seed, trajectory index)`, so the sampled ensemble is a pure function of
//! the seed regardless of how trajectories are scheduled. Moduli of Wigner
//! amplitudes estimate symmetrically ordered moments; the estimators here
//! carry the corrections back to normally ordered populations and variances.

mod ensemble;
mod estimators;
mod pairs;
mod sampling;

pub use ensemble::{fold_ensemble, run_ensemble, Ensemble, FOLD_CHUNK};
pub use estimators::{
    corrected_variance, mean, number_difference_variance, sample_variance,
    symmetric_to_normal_population, variance_with_error, Estimate, ModePopulations,
};
pub use pairs::{ScanPoint, AL, AR, BL, BR, PAIRS};
pub use sampling::{sample_coherent, trajectory_rng, vacuum_noise, TrajectoryRng};

/// A single complex Wigner amplitude.
pub type ComplexAmplitude = num_complex::Complex64;

/// Returns an error naming the offending quantity when `z` is not finite.
pub fn ensure_finite(z: ComplexAmplitude, what: &str) -> crate::Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(crate::Error::numerical(format!("{what} became non-finite")))
    }
}
