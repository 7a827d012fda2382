//! One-dimensional multimode Wigner model.
//!
//! Both components are complex lattice fields seeded with half a vacuum
//! particle per site. The pipeline per trajectory is: sample the seeded
//! condensate, evolve with interactions for `t_fwm`, switch interactions off
//! and propagate freely until `t_separation`, then count atoms on either
//! side of `x0`.

mod fields;
mod grid;
mod ground_state;
mod spectral;

pub use fields::{mean_fields, sample_initial_fields, DensityAccumulator, DensityProfiles, FieldPair};
pub use grid::Grid1D;
pub use ground_state::{
    energy, ground_state_1d, harmonic_ground_state, quartic_overlap, relax, thomas_fermi, thomas_fermi_profile,
    GroundState, GroundStateKind, ImaginaryTimeOptions, TrapProblem,
};
pub use spectral::{
    SplitStep, Spectral, Workspace, ALIAS_BAND, ALIAS_FRACTION, MAX_NONLINEAR_PHASE, VACUUM_ALLOWANCE,
};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{BOHR_RADIUS, DEFAULT_NT_CHI, HBAR, RB87_MASS, RB87_RAMAN_K0};
use crate::fourmode::{validate_grid, Seeds};
use crate::interferometer::SplitState;
use crate::wigner::{fold_ensemble, ScanPoint, TrajectoryRng};
use crate::{Error, Result};

/// How the 1D interaction strength is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InteractionModel {
    /// Choose `U_1d` so that `N_t chi` equals `nt_chi` (1/s), with
    /// `chi = U_1d integral |Psi0|^4 dx / hbar`.
    Calibrated { nt_chi: f64 },
    /// `U_1d = 4 pi hbar^2 a_s / (m pi r0^2)` from the scattering length.
    ScatteringLength { a_s: f64 },
    /// `U_1d` in J m as given.
    Direct { u_1d: f64 },
}

/// Inputs of the multimode model, SI units throughout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultimodeConfig {
    pub n_points: usize,
    pub length: f64,
    pub x_min: f64,
    /// Trap centre, m.
    pub x_condensate: f64,
    /// Partition point between the two interferometer sides, m.
    pub x0: f64,
    pub k0: f64,
    pub mass: f64,
    pub trap_omega_x: f64,
    /// Transverse radius used to reduce the 3D interaction, m.
    pub r0: f64,
    /// Step of the interacting phase, s.
    pub dt: f64,
    /// Time from the start of mixing to the measurement, s.
    pub t_separation: f64,
    pub ground_state: GroundStateKind,
    pub interaction: InteractionModel,
    pub seeds: Seeds,
    pub imaginary_time: ImaginaryTimeOptions,
    /// Each site's initial noise is the block sum of this many draws.
    pub noise_refinement: usize,
}

impl Default for MultimodeConfig {
    fn default() -> Self {
        MultimodeConfig {
            n_points: 16384,
            length: 2.0e-3,
            x_min: -0.59e-3,
            x_condensate: 0.0,
            x0: 0.4e-3,
            k0: RB87_RAMAN_K0,
            mass: RB87_MASS,
            trap_omega_x: 2.0 * PI * 5.0,
            r0: 0.55e-6,
            dt: 2e-7,
            t_separation: 70e-3,
            ground_state: GroundStateKind::Interacting,
            interaction: InteractionModel::Calibrated { nt_chi: DEFAULT_NT_CHI },
            seeds: Seeds::default(),
            imaginary_time: ImaginaryTimeOptions::default(),
            noise_refinement: 1,
        }
    }
}

impl MultimodeConfig {
    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::new(self.n_points, self.length, self.x_min)
    }

    pub fn validate(&self) -> Result<()> {
        let grid = self.grid()?;
        grid.check_resolves(self.k0, 0.5)?;
        grid.split_index(self.x0)?;
        self.seeds.validate()?;
        if !(self.x_condensate > grid.x_min && self.x_condensate < self.x0) {
            return Err(Error::config("condensate must sit inside the grid, left of x0"));
        }
        for (v, name) in [
            (self.mass, "mass"),
            (self.trap_omega_x, "trap_omega_x"),
            (self.r0, "r0"),
            (self.dt, "dt"),
            (self.t_separation, "t_separation"),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// 1D coupling from a 3D scattering length.
    pub fn u_1d_from_scattering_length(&self, a_s: f64) -> f64 {
        4.0 * PI * HBAR * HBAR * a_s / self.mass / (PI * self.r0 * self.r0)
    }
}

/// Default 87Rb scattering length for the physical coupling path, m.
pub const DEFAULT_SCATTERING_LENGTH: f64 = 100.0 * BOHR_RADIUS;

/// A configured model with its ground state and interaction strength.
#[derive(Debug, Clone)]
pub struct MultimodeModel {
    pub config: MultimodeConfig,
    pub grid: Grid1D,
    pub spectral: Spectral,
    /// Normalised condensate profile.
    pub psi0: Vec<f64>,
    pub u_1d: f64,
    /// Four-wave-mixing rate `U_1d integral |Psi0|^4 dx / hbar`, rad/s.
    pub chi: f64,
    pub n_total: f64,
}

/// Per-trajectory record at one mixing time, after free flight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snapshot {
    pub split: SplitState,
    /// Corrected atom number within [`BOUNDARY_BAND`] of `x0`.
    pub boundary_number: f64,
}

/// Half width of the band around `x0` the separation check looks at, m.
pub const BOUNDARY_BAND: f64 = 20e-6;

/// Ensemble results of a multimode scan.
#[derive(Debug, Clone)]
pub struct MultimodeScan {
    pub t_grid: Vec<f64>,
    pub points: Vec<ScanPoint>,
    /// `states[t][trajectory]`.
    pub states: Vec<Vec<SplitState>>,
    /// Mean fraction of atoms within [`BOUNDARY_BAND`] of `x0`, scattered
    /// atoms included.
    pub boundary_fraction: Vec<f64>,
    pub densities: Option<Vec<DensityProfiles>>,
    pub nt_chi: f64,
    pub seed: u64,
}

struct ScanAccumulator {
    states: Vec<Vec<SplitState>>,
    boundary: Vec<f64>,
    density: Option<Vec<DensityAccumulator>>,
}

impl MultimodeModel {
    /// Build the grid, the ground state and the interaction strength.
    pub fn new(config: MultimodeConfig) -> Result<Self> {
        config.validate()?;
        let grid = config.grid()?;
        let spectral = Spectral::new(grid);
        let n_total = config.seeds.total();
        let trap = |u: f64| TrapProblem {
            mass: config.mass,
            omega: config.trap_omega_x,
            center: config.x_condensate,
            g_n: n_total * u,
        };
        let relaxed = |u: f64, start: Option<Vec<f64>>| -> Result<Vec<f64>> {
            let p = trap(u);
            Ok(match start {
                Some(s) => relax(&spectral, &p, s, &config.imaginary_time)?.psi,
                None => ground_state_1d(&spectral, &p, &config.imaginary_time)?.psi,
            })
        };
        let fixed = match config.interaction {
            InteractionModel::ScatteringLength { a_s } => Some(config.u_1d_from_scattering_length(a_s)),
            InteractionModel::Direct { u_1d } => Some(u_1d),
            InteractionModel::Calibrated { .. } => None,
        };
        let (psi0, u_1d) = match (config.ground_state, config.interaction) {
            (GroundStateKind::Harmonic, InteractionModel::Calibrated { nt_chi }) => {
                let psi = harmonic_ground_state(&grid, config.mass, config.trap_omega_x, config.x_condensate);
                let u = nt_chi * HBAR / (n_total * quartic_overlap(&psi, grid.dx));
                (psi, u)
            }
            (GroundStateKind::Interacting, InteractionModel::Calibrated { nt_chi }) => {
                calibrate(&grid, nt_chi, n_total, trap, relaxed)?
            }
            (GroundStateKind::Harmonic, _) => (
                harmonic_ground_state(&grid, config.mass, config.trap_omega_x, config.x_condensate),
                fixed.expect("fixed coupling"),
            ),
            (GroundStateKind::Interacting, _) => {
                let u = fixed.expect("fixed coupling");
                (relaxed(u, None)?, u)
            }
        };
        let chi = u_1d * quartic_overlap(&psi0, grid.dx) / HBAR;
        log::info!(
            "multimode model: U_1d = {u_1d:.4e} J m, N_t chi = {:.1} 1/s, {} points",
            chi * n_total,
            grid.n_points
        );
        Ok(MultimodeModel { config, grid, spectral, psi0, u_1d, chi, n_total })
    }

    pub fn nt_chi(&self) -> f64 {
        self.n_total * self.chi
    }

    pub fn stepper(&self, nonlinearity_on: bool) -> SplitStep {
        SplitStep {
            spectral: self.spectral.clone(),
            mass: self.config.mass,
            u_1d: self.u_1d,
            dt: self.config.dt,
            nonlinearity_on,
        }
    }

    pub fn sample(&self, rng: &mut TrajectoryRng) -> FieldPair {
        sample_initial_fields(&self.psi0, &self.grid, self.config.k0, &self.config.seeds, self.config.noise_refinement, rng)
    }

    /// Split-side reduction of free-flown fields.
    pub fn measure(&self, fields: &FieldPair) -> Result<Snapshot> {
        Ok(Snapshot {
            split: fields.split(&self.grid, self.config.x0)?,
            boundary_number: fields.band_number(&self.grid, self.config.x0, BOUNDARY_BAND),
        })
    }

    /// Evolve one trajectory through the mixing-time grid, branching off a
    /// free-flown copy at each grid time. `on_flown` sees every copy.
    pub fn run_trajectory<F: FnMut(usize, &FieldPair)>(
        &self,
        rng: &mut TrajectoryRng,
        t_grid: &[f64],
        mut on_flown: F,
    ) -> Result<Vec<Snapshot>> {
        let stepper = self.stepper(true);
        let mut ws = self.spectral.workspace();
        let mut fields = self.sample(rng);
        let mut t = 0.0;
        let mut out = Vec::with_capacity(t_grid.len());
        for (k, &tg) in t_grid.iter().enumerate() {
            stepper.evolve(&mut fields, tg - t, &mut ws)?;
            t = tg;
            let mut flown = fields.clone();
            self.spectral.free_propagate(&mut flown, self.config.mass, self.config.t_separation - tg, &mut ws)?;
            out.push(self.measure(&flown)?);
            on_flown(k, &flown);
        }
        Ok(out)
    }

    /// Atom fraction within [`BOUNDARY_BAND`] of `x0` when the noise-free
    /// mean fields are mixed for `t_fwm` and flown to `t_separation`. The
    /// noisy ensemble's band also holds spontaneously scattered atoms,
    /// which do not belong to either packet.
    pub fn packet_overlap(&self, t_fwm: f64) -> Result<f64> {
        if !(0.0..=self.config.t_separation).contains(&t_fwm) {
            return Err(Error::config("t_fwm must lie between 0 and t_separation"));
        }
        let mut ws = self.spectral.workspace();
        let mut f = mean_fields(&self.psi0, &self.grid, self.config.k0, &self.config.seeds);
        self.stepper(true).evolve(&mut f, t_fwm, &mut ws)?;
        self.spectral.free_propagate(&mut f, self.config.mass, self.config.t_separation - t_fwm, &mut ws)?;
        let dx = self.grid.dx;
        let band: f64 = (0..f.len())
            .filter(|&j| (self.grid.x(j) - self.config.x0).abs() < BOUNDARY_BAND)
            .map(|j| (f.psi_a[j].norm_sqr() + f.psi_b[j].norm_sqr()) * dx)
            .sum();
        Ok(band / f.wigner_norm(dx))
    }

    /// Populations, pair variances and split states at each mixing time.
    pub fn scan(&self, t_grid: &[f64], n_traj: usize, seed: u64, with_density: bool) -> Result<MultimodeScan> {
        validate_grid(t_grid)?;
        if t_grid.iter().any(|&t| t > self.config.t_separation) {
            return Err(Error::config("mixing times must not exceed t_separation"));
        }
        let nt = t_grid.len();
        let n_points = self.grid.n_points;
        let identity = || ScanAccumulator {
            states: vec![Vec::new(); nt],
            boundary: vec![0.0; nt],
            density: with_density.then(|| vec![DensityAccumulator::new(n_points); nt]),
        };
        let acc = fold_ensemble(
            n_traj,
            seed,
            |_, rng| {
                let mut dens = with_density.then(|| vec![DensityAccumulator::new(n_points); nt]);
                let snaps = self.run_trajectory(rng, t_grid, |k, f| {
                    if let Some(d) = dens.as_mut() {
                        d[k].add(f);
                    }
                })?;
                Ok((snaps, dens))
            },
            identity,
            |acc, _, (snaps, dens): (Vec<Snapshot>, Option<Vec<DensityAccumulator>>)| {
                for (k, s) in snaps.iter().enumerate() {
                    acc.states[k].push(s.split);
                    acc.boundary[k] += s.boundary_number;
                }
                if let (Some(a), Some(d)) = (acc.density.as_mut(), dens) {
                    for (x, y) in a.iter_mut().zip(&d) {
                        x.merge(y);
                    }
                }
            },
            |acc, other| {
                for (k, mut s) in other.states.into_iter().enumerate() {
                    acc.states[k].append(&mut s);
                    acc.boundary[k] += other.boundary[k];
                }
                if let (Some(a), Some(d)) = (acc.density.as_mut(), other.density) {
                    for (x, y) in a.iter_mut().zip(&d) {
                        x.merge(y);
                    }
                }
            },
        )?;
        let mut points = Vec::with_capacity(nt);
        let mut boundary_fraction = Vec::with_capacity(nt);
        for (k, &t) in t_grid.iter().enumerate() {
            let states = &acc.states[k];
            let pops: Vec<[f64; 4]> = states.iter().map(|s| s.populations()).collect();
            points.push(ScanPoint::from_trajectories(t, &pops, states[0].mode_counts())?);
            let total: f64 = states.iter().map(|s| s.total()).sum();
            boundary_fraction.push(acc.boundary[k] / total);
        }
        let densities = match acc.density {
            Some(d) => Some(d.iter().map(|a| a.profiles(&self.grid)).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        Ok(MultimodeScan {
            t_grid: t_grid.to_vec(),
            points,
            states: acc.states,
            boundary_fraction,
            densities,
            nt_chi: self.nt_chi(),
            seed,
        })
    }
}

/// Fixed point of `U -> U (target / (N chi(U)))^(3/2)`, the exponent that
/// makes the update exact in the Thomas-Fermi regime.
fn calibrate<T, R>(grid: &Grid1D, nt_chi: f64, n_total: f64, trap: T, relaxed: R) -> Result<(Vec<f64>, f64)>
where
    T: Fn(f64) -> TrapProblem,
    R: Fn(f64, Option<Vec<f64>>) -> Result<Vec<f64>>,
{
    if !(nt_chi > 0.0) {
        return Err(Error::config(format!("N_t chi must be positive, got {nt_chi}")));
    }
    let target = nt_chi * HBAR / n_total;
    let p1 = trap(1.0);
    // Thomas-Fermi: integral |Psi0|^4 = 0.6 / R and R grows as U^(1/3).
    let r1 = thomas_fermi(&p1).1;
    let mut u = (target * r1 / 0.6).powf(1.5);
    let mut psi = None;
    for _ in 0..30 {
        let p = relaxed(u, psi.take())?;
        let got = u * quartic_overlap(&p, grid.dx);
        let ratio = target / got;
        psi = Some(p);
        if (ratio - 1.0).abs() < 1e-9 {
            return Ok((psi.unwrap(), u));
        }
        u *= ratio.powf(1.5);
    }
    Err(Error::numerical("interaction calibration did not converge"))
}

#[cfg(test)]
mod tests;
