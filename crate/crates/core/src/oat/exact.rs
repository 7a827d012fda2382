//! Exact two-mode evolution in the number basis for small atom numbers.
//!
//! A coherent input is a Poissonian mixture of fixed-`N` sectors for every
//! number-conserving observable, so each sector is evolved separately as a
//! state vector over `n_a = 0..=N` and the moments are summed with Poisson
//! weights.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::Kerr;
use crate::interferometer::FringeMoments;
use crate::wigner::ComplexAmplitude;
use crate::{Error, Result};

/// Sectors further than this many standard deviations from the mean are
/// dropped.
const POISSON_SIGMAS: f64 = 10.0;

/// Largest mean atom number handled.
pub const MAX_EXACT_ATOMS: f64 = 400.0;

#[derive(Debug, Clone)]
struct Sector {
    n: usize,
    weight: f64,
    /// `exp(-i pi/2 J_x)`, the pi/2 pulse.
    pulse: DMatrix<ComplexAmplitude>,
}

/// Number-basis model of a coherent state with `n_mean` atoms in mode `a`.
#[derive(Debug, Clone)]
pub struct ExactTwoMode {
    pub n_mean: f64,
    sectors: Vec<Sector>,
}

fn pulse_matrix(n: usize) -> DMatrix<ComplexAmplitude> {
    let dim = n + 1;
    let mut jx = DMatrix::<f64>::zeros(dim, dim);
    for k in 0..n {
        let v = 0.5 * (((k + 1) * (n - k)) as f64).sqrt();
        jx[(k + 1, k)] = v;
        jx[(k, k + 1)] = v;
    }
    let eig = SymmetricEigen::new(jx);
    let vecs = eig.eigenvectors.map(|x| ComplexAmplitude::new(x, 0.0));
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| ComplexAmplitude::from_polar(1.0, -0.5 * PI * l)));
    &vecs * phases * vecs.transpose()
}

fn ln_poisson(n: usize, mean: f64) -> f64 {
    let ln_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
    n as f64 * mean.ln() - mean - ln_fact
}

impl ExactTwoMode {
    pub fn new(n_mean: f64) -> Result<Self> {
        if !(n_mean > 0.0) || n_mean > MAX_EXACT_ATOMS {
            return Err(Error::invalid(format!("exact model needs 0 < N <= {MAX_EXACT_ATOMS}, got {n_mean}")));
        }
        let spread = POISSON_SIGMAS * n_mean.sqrt() + POISSON_SIGMAS;
        let lo = (n_mean - spread).floor().max(0.0) as usize;
        let hi = (n_mean + spread).ceil() as usize;
        let mut sectors: Vec<Sector> = (lo..=hi)
            .map(|n| Sector { n, weight: ln_poisson(n, n_mean).exp(), pulse: pulse_matrix(n) })
            .collect();
        let total: f64 = sectors.iter().map(|s| s.weight).sum();
        for s in &mut sectors {
            s.weight /= total;
        }
        Ok(ExactTwoMode { n_mean, sectors })
    }

    /// Mean atom number of the retained sectors.
    pub fn n_t(&self) -> f64 {
        self.sectors.iter().map(|s| s.weight * s.n as f64).sum()
    }

    /// Fringe moments of `N_a - N_b` after pulse, shear for `t`, rotation
    /// `theta` and the readout.
    pub fn fringe_moments(&self, kerr: Kerr, t: f64, theta: f64) -> FringeMoments {
        // <S>, <S^2> at phi = 0, pi/2, pi/4.
        let (mut m0, mut m1) = (0.0, 0.0);
        let mut sq = [0.0; 3];
        for sec in &self.sectors {
            let n = sec.n;
            let mut psi = DVector::<ComplexAmplitude>::zeros(n + 1);
            psi[n] = ComplexAmplitude::new(1.0, 0.0);
            let mut psi = &sec.pulse * psi;
            for k in 0..=n {
                let nb = (n - k) as f64;
                let ka = k as f64;
                let phase = -0.5 * t * (kerr.chi_a * ka * (ka - 1.0) + kerr.chi_b * nb * (nb - 1.0));
                psi[k] *= ComplexAmplitude::from_polar(1.0, phase);
            }
            let rotated = &sec.pulse * phase_on_b(&psi, n, theta);
            for (slot, phi) in [0.0, 0.5 * PI, 0.25 * PI].iter().enumerate() {
                let out = &sec.pulse * phase_on_b(&rotated, n, *phi);
                let (mut s1, mut s2) = (0.0, 0.0);
                for k in 0..=n {
                    let p = out[k].norm_sqr();
                    let s = 2.0 * k as f64 - n as f64;
                    s1 += p * s;
                    s2 += p * s * s;
                }
                match slot {
                    0 => m0 += sec.weight * s1,
                    1 => m1 += sec.weight * s1,
                    _ => {}
                }
                sq[slot] += sec.weight * s2;
            }
        }
        let z = sq[2] - 0.5 * (sq[0] + sq[1]);
        FringeMoments {
            mean_p: m0,
            mean_q: m1,
            var_p: sq[0] - m0 * m0,
            var_q: sq[1] - m1 * m1,
            cov_pq: z - m0 * m1,
            vacuum_correction: 0.0,
            n_t: self.n_t(),
        }
    }
}

fn phase_on_b(psi: &DVector<ComplexAmplitude>, n: usize, phi: f64) -> DVector<ComplexAmplitude> {
    DVector::from_iterator(n + 1, (0..=n).map(|k| psi[k] * ComplexAmplitude::from_polar(1.0, phi * (n - k) as f64)))
}

/// One-shot convenience wrapper around [`ExactTwoMode`].
pub fn exact_fringe_moments(n_mean: f64, kerr: Kerr, t: f64, theta: f64) -> Result<FringeMoments> {
    Ok(ExactTwoMode::new(n_mean)?.fringe_moments(kerr, t, theta))
}
