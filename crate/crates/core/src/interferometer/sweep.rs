use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::coherency::SplitState;
use super::sequence::{fringe_coefficients, run_sequence, PulseSequence};
use crate::optimize::{scan_then_refine, Minimum};
use crate::wigner::{mean, variance_with_error, Estimate, ModePopulations};
use crate::{Error, Result};

/// Slopes below this fraction of `N_t` leave the sensitivity undefined.
pub const MIN_SLOPE: f64 = 1e-12;

/// Ensemble moments of the per-trajectory fringe coefficients.
///
/// The signal of every trajectory is `P cos phi + Q sin phi`, so the mean,
/// variance and slope of the signal at any phase follow from the first and
/// second moments of `(P, Q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeMoments {
    pub mean_p: f64,
    pub mean_q: f64,
    pub var_p: f64,
    pub var_q: f64,
    pub cov_pq: f64,
    /// Symmetric-ordering offset subtracted from every variance.
    pub vacuum_correction: f64,
    /// Ensemble-mean detected atom number.
    pub n_t: f64,
}

impl FringeMoments {
    pub fn from_coefficients(pq: &[(f64, f64)], vacuum_correction: f64, n_t: f64) -> Result<Self> {
        if pq.len() < 2 {
            return Err(Error::invalid("fringe moments need at least two trajectories"));
        }
        let n = pq.len() as f64;
        let mp = pq.iter().map(|x| x.0).sum::<f64>() / n;
        let mq = pq.iter().map(|x| x.1).sum::<f64>() / n;
        let (mut vp, mut vq, mut c) = (0.0, 0.0, 0.0);
        for &(p, q) in pq {
            vp += (p - mp) * (p - mp);
            vq += (q - mq) * (q - mq);
            c += (p - mp) * (q - mq);
        }
        let d = n - 1.0;
        Ok(FringeMoments { mean_p: mp, mean_q: mq, var_p: vp / d, var_q: vq / d, cov_pq: c / d, vacuum_correction, n_t })
    }

    pub fn from_states(states: &[SplitState], seq: &PulseSequence) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::invalid("empty ensemble"));
        }
        let pq: Vec<(f64, f64)> = states.iter().map(|s| fringe_coefficients(s, seq)).collect();
        let n_t = states.iter().map(|s| s.total()).sum::<f64>() / states.len() as f64;
        FringeMoments::from_coefficients(&pq, signal_vacuum_correction(&states[0]), n_t)
    }

    pub fn mean_signal(&self, phi: f64) -> f64 {
        self.mean_p * phi.cos() + self.mean_q * phi.sin()
    }

    pub fn slope(&self, phi: f64) -> f64 {
        -self.mean_p * phi.sin() + self.mean_q * phi.cos()
    }

    pub fn variance(&self, phi: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        self.var_p * c * c + self.var_q * s * s + 2.0 * self.cov_pq * s * c - self.vacuum_correction
    }

    /// `sqrt(V) / |d<S>/dphi|`; NaN where undefined.
    pub fn delta_phi(&self, phi: f64) -> f64 {
        let slope = self.slope(phi).abs();
        let v = self.variance(phi);
        if slope < MIN_SLOPE * self.n_t || v < 0.0 {
            return f64::NAN;
        }
        v.sqrt() / slope
    }

    /// Smallest `Delta phi sqrt(N_t)` over the interrogation phase.
    ///
    /// `Delta phi` has period pi, so the search covers `[0, pi)`.
    pub fn min_delta_phi_sqrt_nt(&self) -> Minimum {
        let root_n = self.n_t.sqrt();
        let objective = |phi: f64| {
            let d = self.delta_phi(phi) * root_n;
            if d.is_nan() {
                f64::INFINITY
            } else {
                d
            }
        };
        scan_then_refine(objective, 0.0, PI, 4096, 1e-10)
    }

    /// `(max <S> - min <S>) / (2 <N_t>)`.
    pub fn visibility(&self) -> f64 {
        self.mean_p.hypot(self.mean_q) / self.n_t
    }
}

/// Half a particle's variance for every mode the signal sums over:
/// `(2 M_L + 2 M_R) / 4`.
pub fn signal_vacuum_correction(state: &SplitState) -> f64 {
    0.5 * (state.left.modes + state.right.modes)
}

/// Curves of one interrogation-phase sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub phi2_values: Vec<f64>,
    pub mean_s: Vec<f64>,
    pub var_s: Vec<Estimate>,
    /// From central differences of `mean_s`; NaN where undefined.
    pub delta_phi: Vec<f64>,
    pub populations: Vec<ModePopulations>,
    pub n_t: f64,
    /// `(max <S> - min <S>) / (2 <N_t>)` on the grid.
    pub visibility: f64,
    /// `(max - min) / (max + min)` of `<N_aL>` on the grid.
    pub visibility_n_al: f64,
    /// Continuous minimum of `Delta phi sqrt(N_t)` and where it sits.
    pub min_delta_phi_sqrt_nt: f64,
    pub phi2_at_min: f64,
    pub moments: FringeMoments,
    pub sequence: PulseSequence,
}

impl SweepResult {
    /// Smallest `Delta phi sqrt(N_t)` among the grid points.
    pub fn grid_min_delta_phi_sqrt_nt(&self) -> f64 {
        self.delta_phi
            .iter()
            .filter(|d| d.is_finite())
            .fold(f64::INFINITY, |m, d| m.min(*d))
            * self.n_t.sqrt()
    }
}

/// Uniform interrogation-phase grid of `n` points over one fringe.
pub fn phi2_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| TAU * i as f64 / n as f64).collect()
}

/// Evaluate the sequence over a uniform `phi2` grid reusing one ensemble.
pub fn sensitivity_sweep(states: &[SplitState], seq: &PulseSequence, phi2: &[f64]) -> Result<SweepResult> {
    let n = phi2.len();
    if n < 64 {
        return Err(Error::invalid(format!("phi2 grid needs at least 64 points per fringe, got {n}")));
    }
    let h = phi2[1] - phi2[0];
    let uniform = phi2.windows(2).all(|w| ((w[1] - w[0]) - h).abs() < 1e-9 * h.abs().max(1e-300));
    if !uniform || ((h * n as f64) - TAU).abs() > 1e-9 || h <= 0.0 {
        return Err(Error::invalid("phi2 grid must be uniform and span one period"));
    }
    let moments = FringeMoments::from_states(states, seq)?;
    let correction = moments.vacuum_correction;
    let mut mean_s = Vec::with_capacity(n);
    let mut var_s = Vec::with_capacity(n);
    let mut populations = Vec::with_capacity(n);
    for &phi in phi2 {
        let outcomes: Vec<_> = states.iter().map(|s| run_sequence(s, &seq.with_phi2(phi))).collect();
        let signal: Vec<f64> = outcomes.iter().map(|o| o.signal).collect();
        let v = variance_with_error(&signal);
        mean_s.push(mean(&signal));
        var_s.push(Estimate { value: v.value - correction, std_err: v.std_err });
        let col = |m: usize| mean(&outcomes.iter().map(|o| o.populations[m]).collect::<Vec<_>>());
        populations.push(ModePopulations { n_al: col(0), n_bl: col(1), n_ar: col(2), n_br: col(3) });
    }
    let n_t = moments.n_t;
    let delta_phi = (0..n)
        .map(|i| {
            let d = (mean_s[(i + 1) % n] - mean_s[(i + n - 1) % n]) / (2.0 * h);
            if d.abs() < MIN_SLOPE * n_t || var_s[i].value < 0.0 {
                f64::NAN
            } else {
                var_s[i].value.sqrt() / d.abs()
            }
        })
        .collect();
    let (smax, smin) = extremes(&mean_s);
    let n_al: Vec<f64> = populations.iter().map(|p| p.n_al).collect();
    let (amax, amin) = extremes(&n_al);
    if populations.iter().any(|p| !p.n_al.is_finite()) {
        return Err(Error::numerical("non-finite populations in sweep"));
    }
    let best = moments.min_delta_phi_sqrt_nt();
    Ok(SweepResult {
        phi2_values: phi2.to_vec(),
        mean_s,
        var_s,
        delta_phi,
        populations,
        n_t,
        visibility: (smax - smin) / (2.0 * n_t),
        visibility_n_al: (amax - amin) / (amax + amin),
        min_delta_phi_sqrt_nt: best.value,
        phi2_at_min: best.x,
        moments,
        sequence: *seq,
    })
}

fn extremes(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), &x| (hi.max(x), lo.min(x)))
}
