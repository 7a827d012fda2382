//! One-axis-twisting comparison scheme.
//!
//! All atoms start coherently in mode `a`; a pulse splits them, the Kerr
//! nonlinearity shears the relative phase for `t_shear`, and a phase `theta`
//! with a second pulse rotates the squeezed quadrature before an ordinary
//! Ramsey readout at interrogation phase `phi`. The signal is `N_a - N_b`.
//!
//! The two modes may have different self-interaction rates,
//! `chi_a = chi (1 + kappa/2)` and `chi_b = chi (1 - kappa/2)`; `kappa`
//! produces the mean relative phase proportional to the atom number.

mod exact;
mod robustness;

pub use exact::{exact_fringe_moments, ExactTwoMode};
pub use robustness::{fwm_robustness, oat_robustness, sub_sql_crossing, RobustnessPoint};

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::constants::{DEFAULT_NT_CHI, RB87_A11, RB87_A22};
use crate::interferometer::{first_stage, FringeMoments, SideCoherency};
use crate::optimize::{golden_section, scan_then_refine};
use crate::wigner::{mean, trajectory_rng, vacuum_noise, variance_with_error, ComplexAmplitude, Estimate};
use crate::{Error, Result};

/// Default Kerr rate: the four-wave-mixing clock shared over 2e5 atoms.
pub const DEFAULT_CHI_OAT: f64 = DEFAULT_NT_CHI / 2.0e5;

/// Relative self-interaction asymmetry of the 87Rb clock pair.
pub const RB87_KAPPA: f64 = 2.0 * (RB87_A11 - RB87_A22) / (RB87_A11 + RB87_A22);

/// Trajectories used by the optimiser and the robustness scans.
pub const DEFAULT_OAT_TRAJECTORIES: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeState {
    pub alpha: ComplexAmplitude,
    pub beta: ComplexAmplitude,
}

impl TwoModeState {
    /// Wigner sample of a coherent state with `n_mean` atoms in `a`.
    pub fn sample_coherent_a(n_mean: f64, eta_a: ComplexAmplitude, eta_b: ComplexAmplitude) -> Self {
        TwoModeState { alpha: ComplexAmplitude::new(n_mean.sqrt(), 0.0) + eta_a, beta: eta_b }
    }

    pub fn moduli_sq(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }

    pub fn coherency(&self) -> SideCoherency {
        SideCoherency::from_amplitudes(self.alpha, self.beta)
    }

    pub fn beam_splitter(&self) -> Self {
        let (alpha, beta) = crate::interferometer::beam_splitter(self.alpha, self.beta);
        TwoModeState { alpha, beta }
    }
}

/// Kerr rates of the two modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kerr {
    pub chi_a: f64,
    pub chi_b: f64,
}

impl Kerr {
    pub fn symmetric(chi: f64) -> Self {
        Kerr { chi_a: chi, chi_b: chi }
    }

    pub fn asymmetric(chi: f64, kappa: f64) -> Self {
        Kerr { chi_a: chi * (1.0 + 0.5 * kappa), chi_b: chi * (1.0 - 0.5 * kappa) }
    }
}

/// `z -> z exp(-i chi (|z|^2 - 1) t)`.
fn kerr_phase(z: ComplexAmplitude, chi: f64, t: f64) -> ComplexAmplitude {
    z * ComplexAmplitude::from_polar(1.0, -chi * (z.norm_sqr() - 1.0) * t)
}

/// Exact Wigner Kerr evolution of one trajectory; moduli are unchanged.
pub fn evolve_oat_tw(state: TwoModeState, kerr: Kerr, t: f64) -> TwoModeState {
    TwoModeState { alpha: kerr_phase(state.alpha, kerr.chi_a, t), beta: kerr_phase(state.beta, kerr.chi_b, t) }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OatParams {
    /// Mean Kerr rate in rad/s.
    pub chi_oat: f64,
    pub kappa: f64,
    pub t_shear: f64,
    /// Quadrature rotation phase.
    pub theta: f64,
    /// Interrogation working point.
    pub phi: f64,
    pub n_t: f64,
}

impl OatParams {
    pub fn kerr(&self) -> Kerr {
        Kerr::asymmetric(self.chi_oat, self.kappa)
    }

    /// Dimensionless shear `chi t_shear N_t`.
    pub fn shear(&self) -> f64 {
        self.chi_oat * self.t_shear * self.n_t
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.chi_oat, self.kappa, self.t_shear, self.theta, self.phi, self.n_t].iter().all(|x| x.is_finite());
        if !finite || self.n_t <= 0.0 || self.t_shear < 0.0 || self.chi_oat < 0.0 || !self.shear().is_finite() {
            return Err(Error::invalid(format!("invalid one-axis-twisting parameters {self:?}")));
        }
        Ok(())
    }
}

/// Frozen vacuum noise of an OAT ensemble. Reusing it across atom numbers
/// and parameters keeps every comparison on common random numbers.
#[derive(Debug, Clone)]
pub struct OatNoise {
    eta: Vec<(ComplexAmplitude, ComplexAmplitude)>,
    pub seed: u64,
}

impl OatNoise {
    pub fn new(n_traj: usize, seed: u64) -> Result<Self> {
        if n_traj < 2 {
            return Err(Error::invalid("an OAT ensemble needs at least two trajectories"));
        }
        let eta = (0..n_traj)
            .map(|i| {
                let mut rng = trajectory_rng(seed, i as u64);
                (vacuum_noise(&mut rng), vacuum_noise(&mut rng))
            })
            .collect();
        Ok(OatNoise { eta, seed })
    }

    pub fn len(&self) -> usize {
        self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta.is_empty()
    }

    /// Split and sheared states for `n_mean` atoms.
    pub fn sheared(&self, n_mean: f64, kerr: Kerr, t_shear: f64) -> Vec<SideCoherency> {
        self.eta
            .iter()
            .map(|&(ea, eb)| {
                let s = TwoModeState::sample_coherent_a(n_mean, ea, eb).beam_splitter();
                evolve_oat_tw(s, kerr, t_shear).coherency()
            })
            .collect()
    }
}

/// Per-trajectory `(P, Q)` with `N_a - N_b = P cos phi + Q sin phi`.
fn oat_coefficients(s: &SideCoherency, theta: f64) -> (f64, f64) {
    let r = first_stage(s, theta);
    let signal = |phi: f64| {
        let out = first_stage(&r, phi);
        out.a - out.b
    };
    (signal(0.0), signal(0.5 * PI))
}

/// Fringe moments of the readout after the quadrature rotation `theta`.
pub fn oat_moments(sheared: &[SideCoherency], theta: f64) -> Result<FringeMoments> {
    if sheared.is_empty() {
        return Err(Error::invalid("empty ensemble"));
    }
    let pq: Vec<(f64, f64)> = sheared.iter().map(|s| oat_coefficients(s, theta)).collect();
    let n_t = sheared.iter().map(|s| s.total()).sum::<f64>() / sheared.len() as f64;
    // N_a - N_b sums two unit-weight modes per site.
    FringeMoments::from_coefficients(&pq, 0.5 * sheared[0].modes, n_t)
}

/// Curves of one OAT interrogation-phase sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OatSweep {
    pub phi_values: Vec<f64>,
    pub mean_s: Vec<f64>,
    pub var_s: Vec<Estimate>,
    pub delta_phi_sqrt_nt: Vec<f64>,
    pub n_t: f64,
    pub min_delta_phi_sqrt_nt: f64,
    pub phi_at_min: f64,
    pub params: OatParams,
}

/// Prepare, shear, rotate and sweep the interrogation phase.
pub fn oat_full_sequence(noise: &OatNoise, params: &OatParams, phi: &[f64]) -> Result<OatSweep> {
    params.validate()?;
    let states = noise.sheared(params.n_t, params.kerr(), params.t_shear);
    let moments = oat_moments(&states, params.theta)?;
    let pq: Vec<(f64, f64)> = states.iter().map(|s| oat_coefficients(s, params.theta)).collect();
    let mut mean_s = Vec::with_capacity(phi.len());
    let mut var_s = Vec::with_capacity(phi.len());
    for &p in phi {
        let (sn, cs) = p.sin_cos();
        let signal: Vec<f64> = pq.iter().map(|(a, b)| a * cs + b * sn).collect();
        let v = variance_with_error(&signal);
        mean_s.push(mean(&signal));
        var_s.push(Estimate { value: v.value - moments.vacuum_correction, std_err: v.std_err });
    }
    let root_n = moments.n_t.sqrt();
    let delta_phi_sqrt_nt = phi.iter().map(|&p| moments.delta_phi(p) * root_n).collect();
    let best = moments.min_delta_phi_sqrt_nt();
    Ok(OatSweep {
        phi_values: phi.to_vec(),
        mean_s,
        var_s,
        delta_phi_sqrt_nt,
        n_t: moments.n_t,
        min_delta_phi_sqrt_nt: best.value,
        phi_at_min: best.x,
        params: *params,
    })
}

/// Best quadrature rotation for one sheared ensemble:
/// `(theta, phi, min Delta phi sqrt N_t)`.
fn best_rotation(states: &[SideCoherency], n_theta: usize) -> (f64, f64, f64) {
    let objective = |theta: f64| match oat_moments(states, theta) {
        Ok(m) => m.min_delta_phi_sqrt_nt().value,
        Err(_) => f64::INFINITY,
    };
    let m = scan_then_refine(objective, 0.0, TAU, n_theta, 1e-7);
    let theta = m.x.rem_euclid(TAU);
    let phi = oat_moments(states, theta).map(|f| f.min_delta_phi_sqrt_nt().x).unwrap_or(0.0);
    (theta, phi, m.value)
}

/// Result of [`optimize_oat`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OatOptimum {
    pub params: OatParams,
    pub objective: f64,
    pub target: f64,
    /// Whether `objective <= target`.
    pub reached: bool,
}

/// Nested search over the shear and the quadrature rotation minimising the
/// best `Delta phi sqrt N_t` over the interrogation phase.
///
/// The shear scan is logarithmic in `chi t N_t` from 0.1 to `10 N_t^(1/3)`,
/// followed by golden-section refinement in `ln(chi t N_t)`; the rotation is
/// re-optimised at every shear.
pub fn optimize_oat(noise: &OatNoise, n_t: f64, chi_oat: f64, kappa: f64, target: f64) -> Result<OatOptimum> {
    if !(n_t > 0.0) || !(chi_oat > 0.0) {
        return Err(Error::invalid("optimisation needs a positive atom number and Kerr rate"));
    }
    let kerr = Kerr::asymmetric(chi_oat, kappa);
    let at_shear = |ln_g: f64| {
        let t = ln_g.exp() / (chi_oat * n_t);
        best_rotation(&noise.sheared(n_t, kerr, t), 128)
    };
    let (lo, hi) = (0.1f64.ln(), (10.0 * n_t.cbrt()).max(1.0).ln());
    let n_scan = 40;
    let h = (hi - lo) / (n_scan - 1) as f64;
    let mut best = (lo, f64::INFINITY);
    for i in 0..n_scan {
        let x = lo + h * i as f64;
        let v = at_shear(x).2;
        if v < best.1 {
            best = (x, v);
        }
    }
    let refined = golden_section(|x| at_shear(x).2, (best.0 - h).max(lo - h), best.0 + h, 1e-3);
    let ln_g = if refined.value < best.1 { refined.x } else { best.0 };
    let (theta, phi, objective) = at_shear(ln_g);
    let params = OatParams { chi_oat, kappa, t_shear: ln_g.exp() / (chi_oat * n_t), theta, phi, n_t };
    if objective > target {
        log::warn!("one-axis twisting reached {objective:.3} against a target of {target:.3}");
    }
    Ok(OatOptimum { params, objective, target, reached: objective <= target })
}
