//! Sensitivity against shot-to-shot changes of the total atom number with
//! every phase and pulse frozen at its nominal optimum.

use serde::{Deserialize, Serialize};

use super::{oat_moments, OatNoise, OatOptimum};
use crate::fourmode::FourModeModel;
use crate::interferometer::{auto_balance, FringeMoments, PulseSequence, SplitState};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessPoint {
    pub scheme: String,
    pub epsilon: f64,
    /// Detected atom number at this perturbation.
    pub n_t: f64,
    /// Best `Delta phi sqrt N_t` with the interrogation phase re-optimised.
    pub min_delta_phi_sqrt_nt: f64,
    /// `Delta phi sqrt N_t` at the nominal working point.
    pub frozen_delta_phi_sqrt_nt: f64,
    /// `V(S) / N_t` at the nominal working point.
    pub frozen_variance_over_nt: f64,
}

fn point(scheme: &str, epsilon: f64, m: &FringeMoments, phi: f64) -> RobustnessPoint {
    RobustnessPoint {
        scheme: scheme.to_string(),
        epsilon,
        n_t: m.n_t,
        min_delta_phi_sqrt_nt: m.min_delta_phi_sqrt_nt().value,
        frozen_delta_phi_sqrt_nt: m.delta_phi(phi) * m.n_t.sqrt(),
        frozen_variance_over_nt: m.variance(phi) / m.n_t,
    }
}

/// One-axis twisting at mean atom number `N (1 + epsilon)` with shear time,
/// rotation and working point frozen at `optimum`.
pub fn oat_robustness(noise: &OatNoise, optimum: &OatOptimum, epsilons: &[f64]) -> Result<Vec<RobustnessPoint>> {
    let p = optimum.params;
    epsilons
        .iter()
        .map(|&eps| {
            let states = noise.sheared(p.n_t * (1.0 + eps), p.kerr(), p.t_shear);
            Ok(point("oat", eps, &oat_moments(&states, p.theta)?, p.phi))
        })
        .collect()
}

/// Four-mode mixing with every seed scaled by `1 + epsilon`, keeping the
/// coupling, mixing time, all six balancing phases and the working point
/// found for the nominal ensemble.
pub fn fwm_robustness(
    model: &FourModeModel,
    t_fwm: f64,
    n_traj: usize,
    seed: u64,
    epsilons: &[f64],
) -> Result<Vec<RobustnessPoint>> {
    let split = |m: &FourModeModel| -> Result<Vec<SplitState>> {
        Ok(m.prepare(t_fwm, n_traj, seed)?.trajectories.iter().map(|s| s.split()).collect())
    };
    let nominal = split(model)?;
    let (seq, _) = auto_balance(&nominal, &PulseSequence::default())?;
    let phi2 = FringeMoments::from_states(&nominal, &seq)?.min_delta_phi_sqrt_nt().x;
    epsilons
        .iter()
        .map(|&eps| {
            let perturbed = FourModeModel { seeds: model.seeds.scaled(1.0 + eps), ..*model };
            let m = FringeMoments::from_states(&split(&perturbed)?, &seq)?;
            Ok(point("fwm", eps, &m, phi2))
        })
        .collect()
}

/// Smallest perturbation at which the sensitivity reaches the standard
/// quantum limit, interpolated linearly between scan points; `None` if it
/// stays below 1. Points must be sorted by increasing `|epsilon|`.
pub fn sub_sql_crossing(points: &[RobustnessPoint], frozen: bool) -> Option<f64> {
    let value = |p: &RobustnessPoint| {
        let v = if frozen { p.frozen_delta_phi_sqrt_nt } else { p.min_delta_phi_sqrt_nt };
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut prev: Option<(f64, f64)> = None;
    for p in points {
        let (e, v) = (p.epsilon.abs(), value(p));
        if v >= 1.0 {
            return Some(match prev {
                Some((e0, v0)) if v.is_finite() => e0 + (1.0 - v0) * (e - e0) / (v - v0),
                _ => e,
            });
        }
        prev = Some((e, v));
    }
    None
}
