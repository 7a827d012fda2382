//! Four-mode model of collinear four-wave mixing.
//!
//! Modes are |a,0>, |a,k0>, |b,0>, |b,k0>; after separation the zero-momentum
//! pair forms the left interferometer and the k0 pair the right one, hence
//! the aL/aR/bL/bR labels. Quantum noise enters only through the initial
//! Wigner samples; the amplitudes then follow deterministic equations.

mod analytic;
mod integrator;

pub use analytic::{chi_from_calibration, squeeze_parameter, undepleted_population, undepleted_variance};
pub use integrator::{evolve_four_mode_tw, max_stable_dt, STABILITY_LIMIT};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{
    DEFAULT_NT_CHI, HBAR, RB87_MASS, RB87_RAMAN_K0, DEFAULT_N_AL, DEFAULT_N_AR, DEFAULT_N_BL, DEFAULT_N_BR,
};
use crate::wigner::{
    run_ensemble, sample_coherent, ComplexAmplitude, Ensemble, ScanPoint, TrajectoryRng,
};
use crate::{Error, Result};

/// Wigner amplitudes of one four-mode trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourModeState {
    pub alpha0: ComplexAmplitude,
    pub alpha_k: ComplexAmplitude,
    pub beta0: ComplexAmplitude,
    pub beta_k: ComplexAmplitude,
}

impl FourModeState {
    pub fn as_array(&self) -> [ComplexAmplitude; 4] {
        [self.alpha0, self.alpha_k, self.beta0, self.beta_k]
    }

    pub fn from_array([alpha0, alpha_k, beta0, beta_k]: [ComplexAmplitude; 4]) -> Self {
        FourModeState { alpha0, alpha_k, beta0, beta_k }
    }

    /// Per-trajectory populations `[aL, bL, aR, bR]` with the vacuum half
    /// removed from each mode.
    pub fn populations(&self) -> [f64; 4] {
        [
            self.alpha0.norm_sqr() - 0.5,
            self.beta0.norm_sqr() - 0.5,
            self.alpha_k.norm_sqr() - 0.5,
            self.beta_k.norm_sqr() - 0.5,
        ]
    }

    /// Total number estimator `sum |amplitude|^2 - 2`.
    pub fn total_number(&self) -> f64 {
        self.as_array().iter().map(|z| z.norm_sqr()).sum::<f64>() - 2.0
    }

    /// The three bilinears conserved by mixing: species a, species b and the
    /// k0 momentum class.
    pub fn invariants(&self) -> [f64; 3] {
        [
            self.alpha0.norm_sqr() + self.alpha_k.norm_sqr(),
            self.beta0.norm_sqr() + self.beta_k.norm_sqr(),
            self.alpha_k.norm_sqr() + self.beta_k.norm_sqr(),
        ]
    }

    /// Relabel a <-> b together with 0 <-> k0.
    pub fn mirrored(&self) -> Self {
        FourModeState {
            alpha0: self.beta_k,
            alpha_k: self.beta0,
            beta0: self.alpha_k,
            beta_k: self.alpha0,
        }
    }

    pub fn with_global_phase(&self, theta: f64) -> Self {
        let p = ComplexAmplitude::from_polar(1.0, theta);
        FourModeState::from_array(self.as_array().map(|z| z * p))
    }

    pub fn ensure_finite(&self) -> Result<()> {
        if self.as_array().iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::numerical("four-mode amplitude became non-finite"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourModeParams {
    /// Four-wave-mixing rate, rad/s.
    pub chi: f64,
    /// Ground-state eigenfrequency, rad/s.
    pub omega0: f64,
    /// Eigenfrequency of the k0 wavepacket, rad/s.
    pub omega_k: f64,
    /// Nominal total atom number the rate was calibrated against.
    pub n_t: f64,
}

impl FourModeParams {
    pub fn new(chi: f64, omega0: f64, omega_k: f64, n_t: f64) -> Result<Self> {
        if !(chi > 0.0) || !chi.is_finite() {
            return Err(Error::invalid(format!("chi must be positive, got {chi}")));
        }
        if !(omega_k >= omega0) {
            return Err(Error::invalid("omega_k must not be below omega0"));
        }
        if !(n_t > 0.0) {
            return Err(Error::invalid(format!("N_t must be positive, got {n_t}")));
        }
        Ok(FourModeParams { chi, omega0, omega_k, n_t })
    }

    /// Rate calibrated so that `n_total * chi = nt_chi`, with the 87Rb recoil
    /// splitting above a trap frequency of 1 kHz.
    ///
    /// The mode frequencies only rotate phases common to each
    /// interferometer side, so no population or variance depends on them.
    pub fn calibrated(nt_chi: f64, n_total: f64) -> Result<Self> {
        let omega0 = 2.0 * PI * 1.0e3;
        let recoil = HBAR * RB87_RAMAN_K0 * RB87_RAMAN_K0 / (2.0 * RB87_MASS);
        FourModeParams::new(chi_from_calibration(nt_chi, n_total)?, omega0, omega0 + recoil, n_total)
    }

    /// The same parameters with the interaction switched off.
    ///
    /// Only useful as a control; `chi = 0` is outside the validated range.
    pub fn linear(&self) -> Self {
        FourModeParams { chi: 0.0, ..*self }
    }

    /// The same parameters with degenerate mode frequencies.
    pub fn degenerate(&self) -> Self {
        FourModeParams { omega_k: self.omega0, ..*self }
    }
}

/// Mean initial mode populations and seed phases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Seeds {
    pub n_al: f64,
    pub n_ar: f64,
    pub n_bl: f64,
    pub n_br: f64,
    /// Phases of the `|a,k0>` and `|b,0>` seeds relative to the pumps, rad.
    pub phase_ar: f64,
    pub phase_bl: f64,
}

impl Default for Seeds {
    fn default() -> Self {
        Seeds {
            n_al: DEFAULT_N_AL,
            n_ar: DEFAULT_N_AR,
            n_bl: DEFAULT_N_BL,
            n_br: DEFAULT_N_BR,
            phase_ar: 0.0,
            phase_bl: 0.0,
        }
    }
}

impl Seeds {
    pub fn total(&self) -> f64 {
        self.n_al + self.n_ar + self.n_bl + self.n_br
    }

    /// All mean populations multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Seeds {
            n_al: self.n_al * factor,
            n_ar: self.n_ar * factor,
            n_bl: self.n_bl * factor,
            n_br: self.n_br * factor,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        for n in [self.n_al, self.n_ar, self.n_bl, self.n_br] {
            if !(n >= 0.0) || !n.is_finite() {
                return Err(Error::invalid(format!("seed population {n} must be non-negative")));
            }
        }
        Ok(())
    }

    /// Coherent-state means of the four modes.
    pub fn means(&self) -> FourModeState {
        FourModeState {
            alpha0: ComplexAmplitude::new(self.n_al.sqrt(), 0.0),
            alpha_k: ComplexAmplitude::from_polar(self.n_ar.sqrt(), self.phase_ar),
            beta0: ComplexAmplitude::from_polar(self.n_bl.sqrt(), self.phase_bl),
            beta_k: ComplexAmplitude::new(self.n_br.sqrt(), 0.0),
        }
    }

    /// Independent Glauber coherent Wigner sample of all four modes.
    pub fn sample(&self, rng: &mut TrajectoryRng) -> FourModeState {
        let m = self.means();
        FourModeState::from_array(m.as_array().map(|z| sample_coherent(z, rng)))
    }
}

/// Run configuration of the four-mode model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourModeModel {
    pub params: FourModeParams,
    pub seeds: Seeds,
    /// Largest RK4 step, s.
    pub dt: f64,
}

impl FourModeModel {
    pub fn paper_defaults() -> Self {
        let seeds = Seeds::default();
        FourModeModel {
            params: FourModeParams::calibrated(DEFAULT_NT_CHI, seeds.total()).expect("valid defaults"),
            seeds,
            dt: 2e-8,
        }
    }

    /// `N_t chi t` for the nominal total number.
    pub fn dimensionless_time(&self, t: f64) -> f64 {
        self.seeds.total() * self.params.chi * t
    }

    /// Wigner ensemble mixed for `t_fwm`.
    pub fn prepare(&self, t_fwm: f64, n_traj: usize, seed: u64) -> Result<Ensemble<FourModeState>> {
        self.seeds.validate()?;
        run_ensemble(n_traj, seed, |rng| self.seeds.sample(rng), |s| {
            evolve_four_mode_tw(s, &self.params, self.dt, t_fwm)
        })
    }

    /// Populations and pair variances at each time of a monotone grid.
    ///
    /// Each trajectory is integrated once through the whole grid.
    pub fn scan(&self, t_grid: &[f64], n_traj: usize, seed: u64) -> Result<Vec<ScanPoint>> {
        validate_grid(t_grid)?;
        self.seeds.validate()?;
        let ensemble = run_ensemble(n_traj, seed, |rng| self.seeds.sample(rng), |mut s| {
            let mut t = 0.0;
            let mut out = Vec::with_capacity(t_grid.len());
            for &tg in t_grid {
                s = evolve_four_mode_tw(s, &self.params, self.dt, tg - t)?;
                t = tg;
                out.push(s.populations());
            }
            Ok(out)
        })?;
        t_grid
            .iter()
            .enumerate()
            .map(|(k, &t)| {
                let pops: Vec<[f64; 4]> = ensemble.trajectories.iter().map(|tr| tr[k]).collect();
                ScanPoint::from_trajectories(t, &pops, [1.0; 4])
            })
            .collect()
    }
}

/// Mixing-time grids must start at or after zero and be non-decreasing.
pub fn validate_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::invalid("empty t_fwm grid"));
    }
    if t_grid[0] < 0.0 || t_grid.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::invalid("t_fwm grid must be non-negative and monotone"));
    }
    Ok(())
}

#[cfg(test)]
mod tests;
