//! Ground state of the longitudinal trap by imaginary-time propagation.

use serde::{Deserialize, Serialize};

use super::grid::Grid1D;
use super::spectral::Spectral;
use crate::constants::HBAR;
use crate::wigner::ComplexAmplitude;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroundStateKind {
    /// Interacting (Gross-Pitaevskii) ground state.
    Interacting,
    /// Non-interacting harmonic-oscillator Gaussian.
    Harmonic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImaginaryTimeOptions {
    /// Successive imaginary-time steps, s; each stage runs to convergence.
    pub dtau: Vec<f64>,
    /// Converged when the energy changes by less than this relative amount
    /// per step.
    pub tolerance: f64,
    pub max_steps: usize,
    pub check_every: usize,
}

impl Default for ImaginaryTimeOptions {
    fn default() -> Self {
        ImaginaryTimeOptions { dtau: vec![1e-5, 2e-6], tolerance: 1e-10, max_steps: 400_000, check_every: 20 }
    }
}

/// Longitudinal trap and interaction for the ground-state problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapProblem {
    pub mass: f64,
    pub omega: f64,
    pub center: f64,
    /// `N * U_1d`, J m.
    pub g_n: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    /// Real, normalised profile `integral psi^2 dx = 1`, m^-1/2.
    pub psi: Vec<f64>,
    /// Energy per particle, J.
    pub energy: f64,
    /// Chemical potential, J.
    pub mu: f64,
    pub steps: usize,
}

fn normalize(psi: &mut [f64], dx: f64) {
    let n = (psi.iter().map(|p| p * p).sum::<f64>() * dx).sqrt();
    for p in psi.iter_mut() {
        *p /= n;
    }
}

/// `integral psi^4 dx`.
pub fn quartic_overlap(psi: &[f64], dx: f64) -> f64 {
    psi.iter().map(|p| p.powi(4)).sum::<f64>() * dx
}

/// Normalised Gaussian of width `sqrt(hbar / m omega)` sampled on the grid.
pub fn harmonic_ground_state(grid: &Grid1D, mass: f64, omega: f64, center: f64) -> Vec<f64> {
    let l2 = HBAR / (mass * omega);
    let mut psi: Vec<f64> = (0..grid.n_points).map(|j| (-(grid.x(j) - center).powi(2) / (2.0 * l2)).exp()).collect();
    normalize(&mut psi, grid.dx);
    psi
}

/// Thomas-Fermi chemical potential and radius for `N U_1d = g_n`.
pub fn thomas_fermi(p: &TrapProblem) -> (f64, f64) {
    let mu = (9.0 * p.g_n * p.g_n * p.mass * p.omega * p.omega / 32.0).powf(1.0 / 3.0);
    let radius = (2.0 * mu / (p.mass * p.omega * p.omega)).sqrt();
    (mu, radius)
}

/// Normalised Thomas-Fermi profile `sqrt(max(0, mu - V) / g_n)`.
pub fn thomas_fermi_profile(grid: &Grid1D, p: &TrapProblem) -> Vec<f64> {
    let (mu, _) = thomas_fermi(p);
    let mut psi: Vec<f64> = (0..grid.n_points)
        .map(|j| {
            let v = 0.5 * p.mass * p.omega * p.omega * (grid.x(j) - p.center).powi(2);
            ((mu - v).max(0.0) / p.g_n).sqrt()
        })
        .collect();
    normalize(&mut psi, grid.dx);
    psi
}

fn potential(grid: &Grid1D, p: &TrapProblem) -> Vec<f64> {
    (0..grid.n_points)
        .map(|j| 0.5 * p.mass * p.omega * p.omega * (grid.x(j) - p.center).powi(2))
        .collect()
}

/// Energy per particle and chemical potential of a normalised profile.
pub fn energy(spectral: &Spectral, p: &TrapProblem, psi: &[f64]) -> (f64, f64) {
    let grid = &spectral.grid;
    let mut buf: Vec<ComplexAmplitude> = psi.iter().map(|&x| ComplexAmplitude::new(x, 0.0)).collect();
    let mut ws = spectral.workspace();
    spectral.forward(&mut buf, &mut ws);
    let kin_scale = HBAR * HBAR / (2.0 * p.mass) * grid.dx / grid.n_points as f64;
    let kinetic: f64 = buf.iter().zip(spectral.k_values()).map(|(z, k)| z.norm_sqr() * k * k).sum::<f64>() * kin_scale;
    let v = potential(grid, p);
    let pot: f64 = psi.iter().zip(&v).map(|(x, v)| v * x * x).sum::<f64>() * grid.dx;
    let int = p.g_n * quartic_overlap(psi, grid.dx);
    (kinetic + pot + 0.5 * int, kinetic + pot + int)
}

/// Imaginary-time split-step relaxation from `initial`.
pub fn relax(spectral: &Spectral, p: &TrapProblem, initial: Vec<f64>, opts: &ImaginaryTimeOptions) -> Result<GroundState> {
    if !(p.omega > 0.0) {
        return Err(Error::invalid(format!("trap frequency must be positive, got {}", p.omega)));
    }
    let grid = &spectral.grid;
    let v = potential(grid, p);
    let mut psi = initial;
    normalize(&mut psi, grid.dx);
    let mut ws = spectral.workspace();
    let mut buf = vec![ComplexAmplitude::new(0.0, 0.0); grid.n_points];
    let mut total_steps = 0;
    for &dtau in &opts.dtau {
        let kin: Vec<f64> = spectral
            .k_values()
            .iter()
            .map(|k| (-HBAR * k * k * dtau / (2.0 * p.mass)).exp() / grid.n_points as f64)
            .collect();
        let half = 0.5 * dtau / HBAR;
        let (mut e_prev, _) = energy(spectral, p, &psi);
        let mut converged = false;
        let mut steps = 0;
        while steps < opts.max_steps {
            for _ in 0..opts.check_every {
                for (j, z) in buf.iter_mut().enumerate() {
                    let x = psi[j];
                    *z = ComplexAmplitude::new(x * (-(v[j] + p.g_n * x * x) * half).exp(), 0.0);
                }
                spectral.forward(&mut buf, &mut ws);
                for (z, f) in buf.iter_mut().zip(&kin) {
                    *z *= f;
                }
                spectral.inverse(&mut buf, &mut ws);
                for (j, z) in buf.iter().enumerate() {
                    let x = z.re;
                    psi[j] = x * (-(v[j] + p.g_n * x * x) * half).exp();
                }
                normalize(&mut psi, grid.dx);
            }
            steps += opts.check_every;
            let (e, _) = energy(spectral, p, &psi);
            if !e.is_finite() {
                return Err(Error::numerical("ground-state energy became non-finite"));
            }
            if (e - e_prev).abs() / e.abs() / (opts.check_every as f64) < opts.tolerance {
                converged = true;
                break;
            }
            e_prev = e;
        }
        total_steps += steps;
        if !converged {
            return Err(Error::numerical(format!(
                "imaginary-time relaxation with dtau = {dtau:e} s did not converge in {} steps",
                opts.max_steps
            )));
        }
    }
    let (e, mu) = energy(spectral, p, &psi);
    Ok(GroundState { psi, energy: e, mu, steps: total_steps })
}

/// Normalised ground state of the trap with interaction `g_n`.
///
/// Starts from the Thomas-Fermi profile when it spans several lattice
/// points, and from the oscillator Gaussian otherwise.
pub fn ground_state_1d(spectral: &Spectral, p: &TrapProblem, opts: &ImaginaryTimeOptions) -> Result<GroundState> {
    let grid = &spectral.grid;
    let start = if p.g_n > 0.0 && thomas_fermi(p).1 > 10.0 * grid.dx {
        thomas_fermi_profile(grid, p)
    } else {
        harmonic_ground_state(grid, p.mass, p.omega, p.center)
    };
    relax(spectral, p, start, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::RB87_MASS;
    use std::f64::consts::PI;

    fn problem(g_n: f64) -> TrapProblem {
        TrapProblem { mass: RB87_MASS, omega: 2.0 * PI * 5.0, center: 0.0, g_n }
    }

    #[test]
    fn non_interacting_limit_is_the_oscillator_gaussian() {
        let grid = Grid1D::new(1024, 100e-6, -50e-6).unwrap();
        let spectral = Spectral::new(grid);
        let p = problem(0.0);
        let opts = ImaginaryTimeOptions { dtau: vec![1e-3, 1e-4, 1e-5], ..Default::default() };
        let gs = ground_state_1d(&spectral, &p, &opts).unwrap();
        let exact = harmonic_ground_state(&grid, p.mass, p.omega, 0.0);
        let err = gs.psi.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let peak = exact.iter().cloned().fold(0.0, f64::max);
        assert!(err < 1e-3 * peak, "{err} vs {peak}");
        assert!((gs.energy / (0.5 * HBAR * p.omega) - 1.0).abs() < 1e-6, "{}", gs.energy);
        let norm: f64 = gs.psi.iter().map(|x| x * x).sum::<f64>() * grid.dx;
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn strong_interaction_approaches_thomas_fermi() {
        let grid = Grid1D::new(4096, 0.8e-3, -0.4e-3).unwrap();
        let spectral = Spectral::new(grid);
        let p = problem(2.0e5 * 5.1e-39);
        let gs = ground_state_1d(&spectral, &p, &ImaginaryTimeOptions::default()).unwrap();
        let (mu_tf, _) = thomas_fermi(&p);
        let peak = gs.psi.iter().map(|x| x * x).fold(0.0, f64::max);
        let peak_tf = mu_tf / p.g_n;
        assert!((peak / peak_tf - 1.0).abs() < 0.02, "{peak} vs {peak_tf}");
        assert!((gs.mu / mu_tf - 1.0).abs() < 0.02);
    }
}
