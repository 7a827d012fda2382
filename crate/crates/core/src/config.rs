//! Experiment configuration file.
//!
//! TOML with every physical quantity written as a string carrying its unit.
//! Counts, seeds and dimensionless ratios are plain numbers.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::constants::{
    BOHR_RADIUS, DEFAULT_NT_CHI, DEFAULT_N_AL, DEFAULT_N_AR, DEFAULT_N_BL, DEFAULT_N_BR, DEFAULT_TRAJECTORIES,
    RB87_MASS, RB87_RAMAN_K0,
};
use crate::fourmode::{FourModeModel, FourModeParams, Seeds};
use crate::interferometer::DEFAULT_PHI2_POINTS;
use crate::multimode::{GroundStateKind, ImaginaryTimeOptions, InteractionModel, MultimodeConfig};
use crate::oat::{DEFAULT_CHI_OAT, DEFAULT_OAT_TRAJECTORIES, RB87_KAPPA};
use crate::units::{Angle, Frequency, InteractionStrength, Length, Mass, Quantity, Rate, Time, Wavenumber};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Registered preparation model, see [`crate::registry`].
    pub model: String,
    pub rng_seed: u64,
    pub n_traj: usize,
    pub fwm: FwmSection,
    pub seeds: SeedSection,
    pub multimode: MultimodeSection,
    pub interferometer: InterferometerSection,
    pub oat: OatSection,
    pub robustness: RobustnessSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FwmSection {
    pub t_fwm: Quantity<Time>,
    /// `N_t chi` the four-wave-mixing rate is calibrated to.
    pub nt_chi: Quantity<Rate>,
    /// Four-mode RK4 step.
    pub dt: Quantity<Time>,
    /// Mixing-time grid of `scan-fwm`: `scan_points` times from 0 to `scan_stop`.
    pub scan_stop: Quantity<Time>,
    pub scan_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedSection {
    pub n_al: f64,
    pub n_ar: f64,
    pub n_bl: f64,
    pub n_br: f64,
    pub phase_ar: Quantity<Angle>,
    pub phase_bl: Quantity<Angle>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InteractionKind {
    Calibrated,
    ScatteringLength,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultimodeSection {
    pub n_points: usize,
    pub length: Quantity<Length>,
    pub x_min: Quantity<Length>,
    pub x_condensate: Quantity<Length>,
    pub x0: Quantity<Length>,
    pub k0: Quantity<Wavenumber>,
    pub mass: Quantity<Mass>,
    pub trap_frequency: Quantity<Frequency>,
    pub r0: Quantity<Length>,
    pub dt: Quantity<Time>,
    pub t_separation: Quantity<Time>,
    pub ground_state: GroundStateKind,
    pub interaction: InteractionKind,
    /// Used when `interaction = "scattering_length"`.
    pub a_s: Quantity<Length>,
    /// Overrides the coupling directly when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_1d: Option<Quantity<InteractionStrength>>,
    pub imaginary_dtau: Vec<Quantity<Time>>,
    pub imaginary_tolerance: f64,
    pub imaginary_max_steps: usize,
    pub noise_refinement: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferometerSection {
    pub phi2_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OatSection {
    pub chi: Quantity<Rate>,
    /// Relative Kerr asymmetry `(chi_a - chi_b) / chi`.
    pub kappa: f64,
    pub n_large: f64,
    pub n_small: f64,
    pub n_traj: usize,
    /// Sensitivity the shear optimiser aims for.
    pub target: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobustnessSection {
    /// Relative atom-number changes, sorted by magnitude.
    pub epsilons: Vec<f64>,
    /// Scheme names, see [`crate::registry`].
    pub schemes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let mm = MultimodeConfig::default();
        ExperimentConfig {
            model: "fourmode".into(),
            rng_seed: 1,
            n_traj: DEFAULT_TRAJECTORIES,
            fwm: FwmSection {
                t_fwm: Quantity::si(0.12e-3),
                nt_chi: Quantity::si(DEFAULT_NT_CHI),
                dt: Quantity::si(2e-8),
                scan_stop: Quantity::si(0.45e-3),
                scan_points: 31,
            },
            seeds: SeedSection {
                n_al: DEFAULT_N_AL,
                n_ar: DEFAULT_N_AR,
                n_bl: DEFAULT_N_BL,
                n_br: DEFAULT_N_BR,
                phase_ar: Quantity::si(0.0),
                phase_bl: Quantity::si(0.0),
            },
            multimode: MultimodeSection {
                n_points: mm.n_points,
                length: Quantity::si(mm.length),
                x_min: Quantity::si(mm.x_min),
                x_condensate: Quantity::si(mm.x_condensate),
                x0: Quantity::si(mm.x0),
                k0: Quantity::si(RB87_RAMAN_K0),
                mass: Quantity::si(RB87_MASS),
                trap_frequency: Quantity::si(mm.trap_omega_x / (2.0 * PI)),
                r0: Quantity::si(mm.r0),
                dt: Quantity::si(mm.dt),
                t_separation: Quantity::si(mm.t_separation),
                ground_state: mm.ground_state,
                interaction: InteractionKind::Calibrated,
                a_s: Quantity::si(100.0 * BOHR_RADIUS),
                u_1d: None,
                imaginary_dtau: mm.imaginary_time.dtau.iter().map(|&t| Quantity::si(t)).collect(),
                imaginary_tolerance: mm.imaginary_time.tolerance,
                imaginary_max_steps: mm.imaginary_time.max_steps,
                noise_refinement: mm.noise_refinement,
            },
            interferometer: InterferometerSection { phi2_points: DEFAULT_PHI2_POINTS },
            oat: OatSection {
                chi: Quantity::si(DEFAULT_CHI_OAT),
                kappa: RB87_KAPPA,
                n_large: 2.0e5,
                n_small: 1.0e3,
                n_traj: DEFAULT_OAT_TRAJECTORIES,
                target: 0.4,
            },
            robustness: RobustnessSection {
                epsilons: vec![0.0, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5],
                schemes: vec!["oat".into(), "fwm".into()],
            },
            output: OutputSection { dir: PathBuf::from("out") },
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// SHA-256 of the canonical serialisation.
    pub fn hash(&self) -> [u8; 32] {
        let text = self.to_toml().expect("configuration serialises");
        Sha256::digest(text.as_bytes()).into()
    }

    pub fn hash_hex(&self) -> String {
        hex(&self.hash())
    }

    /// SHA-256 over what determines a prepared ensemble: model, seed,
    /// trajectory count, mixing and seed parameters and the multimode grid.
    pub fn preparation_hash(&self) -> [u8; 32] {
        #[derive(Serialize)]
        struct Preparation<'a> {
            model: &'a str,
            rng_seed: u64,
            n_traj: usize,
            fwm: &'a FwmSection,
            seeds: &'a SeedSection,
            multimode: &'a MultimodeSection,
        }
        let p = Preparation {
            model: &self.model,
            rng_seed: self.rng_seed,
            n_traj: self.n_traj,
            fwm: &self.fwm,
            seeds: &self.seeds,
            multimode: &self.multimode,
        };
        Sha256::digest(toml::to_string(&p).expect("configuration serialises").as_bytes()).into()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_traj < 2 {
            return Err(Error::config("n_traj must be at least 2"));
        }
        if !(self.fwm.t_fwm.value() >= 0.0) {
            return Err(Error::config("t_fwm must be non-negative"));
        }
        if !(self.fwm.nt_chi.value() > 0.0) {
            return Err(Error::config("nt_chi must be positive"));
        }
        if !(self.fwm.dt.value() > 0.0) {
            return Err(Error::config("fwm.dt must be positive"));
        }
        if self.fwm.scan_points < 1 || !(self.fwm.scan_stop.value() >= 0.0) {
            return Err(Error::config("scan needs at least one point and a non-negative stop time"));
        }
        if self.interferometer.phi2_points < 64 {
            return Err(Error::config("phi2_points must be at least 64"));
        }
        if self.robustness.epsilons.windows(2).any(|w| w[1].abs() < w[0].abs()) {
            return Err(Error::config("robustness epsilons must be sorted by magnitude"));
        }
        if self.robustness.epsilons.iter().any(|e| !(*e > -1.0)) {
            return Err(Error::config("robustness epsilons must exceed -1"));
        }
        if !(self.oat.n_large > 0.0 && self.oat.n_small > 0.0) || self.oat.n_traj < 2 {
            return Err(Error::config("OAT atom numbers and trajectory count must be positive"));
        }
        if self.multimode.imaginary_dtau.is_empty() {
            return Err(Error::config("imaginary_dtau needs at least one stage"));
        }
        self.seeds().validate().map_err(|e| Error::config(e.to_string()))
    }

    pub fn seeds(&self) -> Seeds {
        let s = &self.seeds;
        Seeds {
            n_al: s.n_al,
            n_ar: s.n_ar,
            n_bl: s.n_bl,
            n_br: s.n_br,
            phase_ar: s.phase_ar.value(),
            phase_bl: s.phase_bl.value(),
        }
    }

    /// Mixing times of `scan-fwm`.
    pub fn scan_grid(&self) -> Vec<f64> {
        let n = self.fwm.scan_points;
        let stop = self.fwm.scan_stop.value();
        if n == 1 {
            return vec![stop];
        }
        (0..n).map(|i| stop * i as f64 / (n - 1) as f64).collect()
    }

    pub fn four_mode_model(&self) -> Result<FourModeModel> {
        let seeds = self.seeds();
        Ok(FourModeModel {
            params: FourModeParams::calibrated(self.fwm.nt_chi.value(), seeds.total())?,
            seeds,
            dt: self.fwm.dt.value(),
        })
    }

    pub fn multimode_config(&self) -> MultimodeConfig {
        let m = &self.multimode;
        let interaction = match (m.u_1d, m.interaction) {
            (Some(u), _) => InteractionModel::Direct { u_1d: u.value() },
            (None, InteractionKind::Calibrated) => InteractionModel::Calibrated { nt_chi: self.fwm.nt_chi.value() },
            (None, InteractionKind::ScatteringLength) => InteractionModel::ScatteringLength { a_s: m.a_s.value() },
        };
        MultimodeConfig {
            n_points: m.n_points,
            length: m.length.value(),
            x_min: m.x_min.value(),
            x_condensate: m.x_condensate.value(),
            x0: m.x0.value(),
            k0: m.k0.value(),
            mass: m.mass.value(),
            trap_omega_x: 2.0 * PI * m.trap_frequency.value(),
            r0: m.r0.value(),
            dt: m.dt.value(),
            t_separation: m.t_separation.value(),
            ground_state: m.ground_state,
            interaction,
            seeds: self.seeds(),
            imaginary_time: ImaginaryTimeOptions {
                dtau: m.imaginary_dtau.iter().map(|t| t.value()).collect(),
                tolerance: m.imaginary_tolerance,
                max_steps: m.imaginary_max_steps,
                ..ImaginaryTimeOptions::default()
            },
            noise_refinement: m.noise_refinement,
        }
    }
}

/// Lower-case hexadecimal digest.
pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
