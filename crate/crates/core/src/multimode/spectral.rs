//! FFT plumbing and the split-step propagators.

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use super::fields::FieldPair;
use super::grid::Grid1D;
use crate::constants::HBAR;
use crate::wigner::ComplexAmplitude;
use crate::{Error, Result};

/// Largest admissible nonlinear phase per step.
pub const MAX_NONLINEAR_PHASE: f64 = 0.1;

/// Occupations are compared against this fraction of the spectral peak.
pub const ALIAS_FRACTION: f64 = 1e-6;

/// Wigner vacuum occupation of one plane-wave mode.
pub const VACUUM_OCCUPATION: f64 = 0.5;

/// Band-averaged occupation above vacuum tolerated per mode.
pub const VACUUM_ALLOWANCE: f64 = 0.5;

/// Wavenumbers above this fraction of Nyquist count as the aliasing band.
pub const ALIAS_BAND: f64 = 0.9;

/// Forward and inverse transforms of one grid, shareable across threads.
#[derive(Clone)]
pub struct Spectral {
    pub grid: Grid1D,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    k_values: Vec<f64>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("grid", &self.grid).finish()
    }
}

/// Scratch buffer sized for one grid's transforms.
pub struct Workspace {
    scratch: Vec<ComplexAmplitude>,
}

impl Spectral {
    pub fn new(grid: Grid1D) -> Self {
        let mut planner = FftPlanner::new();
        Spectral {
            forward: planner.plan_fft_forward(grid.n_points),
            inverse: planner.plan_fft_inverse(grid.n_points),
            k_values: grid.k_values(),
            grid,
        }
    }

    pub fn workspace(&self) -> Workspace {
        let len = self.forward.get_inplace_scratch_len().max(self.inverse.get_inplace_scratch_len());
        Workspace { scratch: vec![ComplexAmplitude::new(0.0, 0.0); len] }
    }

    pub fn k_values(&self) -> &[f64] {
        &self.k_values
    }

    /// Unnormalised forward transform in place.
    pub fn forward(&self, buf: &mut [ComplexAmplitude], ws: &mut Workspace) {
        self.forward.process_with_scratch(buf, &mut ws.scratch);
    }

    /// Unnormalised inverse transform in place.
    pub fn inverse(&self, buf: &mut [ComplexAmplitude], ws: &mut Workspace) {
        self.inverse.process_with_scratch(buf, &mut ws.scratch);
    }

    /// Keep only the plane waves `target` represents and sample the result
    /// on its lattice. `target` must cover the same box with a point count
    /// dividing this grid's.
    pub fn band_limit(&self, psi: &[ComplexAmplitude], target: &Spectral, ws: &mut Workspace) -> Result<Vec<ComplexAmplitude>> {
        let (ns, nt) = (self.grid.n_points, target.grid.n_points);
        let same_box = (self.grid.length - target.grid.length).abs() <= 1e-12 * self.grid.length
            && (self.grid.x_min - target.grid.x_min).abs() <= 1e-12 * self.grid.length;
        if !same_box || nt > ns || ns % nt != 0 || psi.len() != ns {
            return Err(Error::invalid(format!("cannot band-limit a {ns}-point field onto {nt} points of another box")));
        }
        let mut buf = psi.to_vec();
        self.forward(&mut buf, ws);
        let scale = 1.0 / ns as f64;
        let mut out: Vec<ComplexAmplitude> =
            (0..nt).map(|m| buf[if m < nt / 2 { m } else { ns - nt + m }] * scale).collect();
        target.inverse(&mut out, &mut target.workspace());
        Ok(out)
    }

    /// `exp(-i hbar k^2 t / 2m) / n` in FFT order.
    pub fn kinetic_factors(&self, mass: f64, t: f64) -> Vec<ComplexAmplitude> {
        let scale = 1.0 / self.grid.n_points as f64;
        let c = HBAR * t / (2.0 * mass);
        self.k_values
            .iter()
            .map(|k| ComplexAmplitude::from_polar(scale, -c * k * k))
            .collect()
    }

    fn apply_in_k(&self, psi: &mut [ComplexAmplitude], factors: &[ComplexAmplitude], ws: &mut Workspace) {
        self.forward(psi, ws);
        for (z, f) in psi.iter_mut().zip(factors) {
            *z *= f;
        }
        self.inverse(psi, ws);
    }

    /// Mode occupations `|FFT psi|^2 dx / n`, including the Wigner half.
    pub fn occupations(&self, spectrum: &[ComplexAmplitude]) -> Vec<f64> {
        let s = self.grid.dx / self.grid.n_points as f64;
        spectrum.iter().map(|z| z.norm_sqr() * s).collect()
    }

    /// Fail if the outer Nyquist band holds atoms beyond vacuum; such atoms
    /// would wrap around the periodic box. The band average above the
    /// vacuum level is compared, since single noisy modes fluctuate
    /// exponentially about it.
    pub fn check_aliasing(&self, spectrum: &[ComplexAmplitude], what: &str) -> Result<()> {
        let occ = self.occupations(spectrum);
        let peak = occ.iter().cloned().fold(0.0, f64::max);
        let threshold = ALIAS_FRACTION * peak + VACUUM_ALLOWANCE;
        let edge = ALIAS_BAND * self.grid.k_nyquist();
        let (mut sum, mut count, mut k_max, mut n_max) = (0.0, 0usize, 0.0, 0.0);
        for (k, n) in self.k_values.iter().zip(&occ) {
            if k.abs() >= edge {
                sum += n;
                count += 1;
                if *n > n_max {
                    (k_max, n_max) = (*k, *n);
                }
            }
        }
        if count == 0 {
            return Ok(());
        }
        let excess = sum / count as f64 - VACUUM_OCCUPATION;
        if excess > threshold {
            return Err(Error::numerical(format!(
                "{what}: {excess:.3e} atoms per mode above vacuum within 10% of Nyquist (largest {n_max:.3e} at k = {k_max:.4e} rad/m); enlarge n_points"
            )));
        }
        Ok(())
    }

    /// Exact interaction-free propagation of both fields for a time `t`.
    pub fn free_propagate(&self, fields: &mut FieldPair, mass: f64, t: f64, ws: &mut Workspace) -> Result<()> {
        if t == 0.0 {
            return Ok(());
        }
        let factors = self.kinetic_factors(mass, t);
        for (psi, name) in [(&mut fields.psi_a, "psi_a"), (&mut fields.psi_b, "psi_b")] {
            self.forward(psi, ws);
            self.check_aliasing(psi, name)?;
            for (z, f) in psi.iter_mut().zip(&factors) {
                *z *= f;
            }
            self.inverse(psi, ws);
        }
        fields.ensure_finite()
    }
}

/// Strang-split integrator of the coupled field equations with the
/// vacuum-subtracted total density in the mean-field term.
#[derive(Debug, Clone)]
pub struct SplitStep {
    pub spectral: Spectral,
    pub mass: f64,
    /// 1D interaction strength, J m.
    pub u_1d: f64,
    /// Maximum step, s.
    pub dt: f64,
    pub nonlinearity_on: bool,
}

impl SplitStep {
    /// Largest nonlinear phase `dt |U n_t| / hbar` over the lattice.
    pub fn nonlinear_phase(&self, fields: &FieldPair, dt: f64) -> f64 {
        let vac = 1.0 / self.spectral.grid.dx;
        let g = self.u_1d * dt / HBAR;
        fields
            .psi_a
            .iter()
            .zip(&fields.psi_b)
            .map(|(a, b)| (g * (a.norm_sqr() + b.norm_sqr() - vac)).abs())
            .fold(0.0, f64::max)
    }

    /// Advance both fields by `duration` with steps no longer than `dt`.
    ///
    /// Adjacent kinetic half steps are merged, so each step costs one
    /// forward and one inverse transform per field.
    pub fn evolve(&self, fields: &mut FieldPair, duration: f64, ws: &mut Workspace) -> Result<()> {
        if !(duration >= 0.0) || !(self.dt > 0.0) {
            return Err(Error::invalid(format!("bad evolution time {duration} or step {}", self.dt)));
        }
        if duration == 0.0 {
            return Ok(());
        }
        if !self.nonlinearity_on {
            return self.spectral.free_propagate(fields, self.mass, duration, ws);
        }
        let steps = (duration / self.dt).ceil().max(1.0) as usize;
        let h = duration / steps as f64;
        let phase = self.nonlinear_phase(fields, h);
        if phase > MAX_NONLINEAR_PHASE {
            return Err(Error::invalid(format!(
                "nonlinear phase per step {phase:.3e} exceeds {MAX_NONLINEAR_PHASE}; reduce dt"
            )));
        }
        let half = self.spectral.kinetic_factors(self.mass, 0.5 * h);
        let full = self.spectral.kinetic_factors(self.mass, h);
        let g = self.u_1d * h / HBAR;
        let vac = 1.0 / self.spectral.grid.dx;

        self.spectral.apply_in_k(&mut fields.psi_a, &half, ws);
        self.spectral.apply_in_k(&mut fields.psi_b, &half, ws);
        for step in 0..steps {
            for (a, b) in fields.psi_a.iter_mut().zip(fields.psi_b.iter_mut()) {
                let n_t = a.norm_sqr() + b.norm_sqr() - vac;
                let (s, c) = (g * n_t).sin_cos();
                let rot = ComplexAmplitude::new(c, -s);
                *a *= rot;
                *b *= rot;
            }
            let k = if step + 1 == steps { &half } else { &full };
            self.spectral.apply_in_k(&mut fields.psi_a, k, ws);
            self.spectral.apply_in_k(&mut fields.psi_b, k, ws);
            if step % 64 == 63 {
                fields.ensure_finite()?;
            }
        }
        fields.ensure_finite()
    }
}
