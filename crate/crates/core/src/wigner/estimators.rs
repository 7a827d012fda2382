use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A statistical estimate with its one-sigma standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_err: f64,
}

impl Estimate {
    /// Number of standard errors separating this estimate from `x`.
    pub fn sigmas_from(&self, x: f64) -> f64 {
        (self.value - x).abs() / self.std_err
    }
}

/// Normally ordered population `<a^dagger a>` from the symmetric moment
/// `<|alpha|^2>` of a single mode.
pub fn symmetric_to_normal_population(mean_abs_sq: f64) -> f64 {
    mean_abs_sq - 0.5
}

pub fn mean(xs: &[f64]) -> f64 {
    // Plain left-to-right sum: deterministic for a fixed trajectory order.
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Unbiased sample variance and its standard error from the fourth central
/// moment.
pub fn variance_with_error(xs: &[f64]) -> Estimate {
    let n = xs.len() as f64;
    let m = mean(xs);
    let (m2, m4) = xs.iter().fold((0.0, 0.0), |(s2, s4), x| {
        let d2 = (x - m) * (x - m);
        (s2 + d2, s4 + d2 * d2)
    });
    let m2 = m2 / n;
    let m4 = m4 / n;
    let var = m2 * n / (n - 1.0);
    // Var(s^2) = (mu4 - (n-3)/(n-1) sigma^4) / n
    let var_of_var = ((m4 - (n - 3.0) / (n - 1.0) * var * var) / n).max(0.0);
    Estimate { value: var, std_err: var_of_var.sqrt() }
}

/// Variance of a Wigner-sampled linear combination of mode populations,
/// corrected to normal ordering.
///
/// For `X = sum_k c_k |alpha_k|^2` over independent single-particle modes the
/// symmetric-ordered variance exceeds the quantum one by `sum_k c_k^2 / 4`;
/// `sum_sq_coeffs` is that sum (the number of modes when all `|c_k| = 1`).
pub fn corrected_variance(values: &[f64], sum_sq_coeffs: f64) -> Result<Estimate> {
    if values.len() < 2 {
        return Err(Error::invalid("a variance needs at least two trajectories"));
    }
    let mut v = variance_with_error(values);
    v.value -= 0.25 * sum_sq_coeffs;
    Ok(v)
}

/// Normalised number-difference variance
/// `v_ij = [<(N_i - N_j)^2> - <N_i - N_j>^2] / <N_i + N_j>`.
///
/// `ni`, `nj` are per-trajectory populations (already shifted by the vacuum
/// half per mode). `vacuum_modes` is the number of single-particle modes the
/// two populations sum over together; the variance of the difference is
/// reduced by a quarter per mode, which makes two independent coherent
/// states give exactly one. For the four-mode model this is 2.
pub fn number_difference_variance(ni: &[f64], nj: &[f64], vacuum_modes: f64) -> Result<Estimate> {
    if ni.len() != nj.len() {
        return Err(Error::invalid("population lists differ in length"));
    }
    if ni.len() < 2 {
        return Err(Error::invalid("v_ij needs at least two trajectories"));
    }
    let diff: Vec<f64> = ni.iter().zip(nj).map(|(a, b)| a - b).collect();
    let sum: Vec<f64> = ni.iter().zip(nj).map(|(a, b)| a + b).collect();
    let denom = mean(&sum);
    if denom <= 0.0 {
        return Err(Error::numerical(format!(
            "v_ij undefined: mean population sum {denom} is not positive"
        )));
    }
    let num = corrected_variance(&diff, vacuum_modes)?;
    let denom_se = (sample_variance(&sum) / sum.len() as f64).sqrt();
    let value = num.value / denom;
    let std_err = ((num.std_err / denom).powi(2) + (value * denom_se / denom).powi(2)).sqrt();
    Ok(Estimate { value, std_err })
}

/// Ensemble-mean mode populations after the Wigner correction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModePopulations {
    pub n_al: f64,
    pub n_bl: f64,
    pub n_ar: f64,
    pub n_br: f64,
}

impl ModePopulations {
    /// Corrected populations can dip slightly below zero near vacuum; below
    /// -1/2 something is wrong.
    pub fn validated(self) -> Result<Self> {
        for (name, v) in self.named() {
            if !(v >= -0.5) {
                return Err(Error::numerical(format!("population {name} = {v} below -1/2")));
            }
        }
        Ok(self)
    }

    pub fn total(&self) -> f64 {
        self.n_al + self.n_bl + self.n_ar + self.n_br
    }

    pub fn named(&self) -> [(&'static str, f64); 4] {
        [("N_aL", self.n_al), ("N_bL", self.n_bl), ("N_aR", self.n_ar), ("N_bR", self.n_br)]
    }

    /// Populations clamped at zero for reporting.
    pub fn clamped(&self) -> Self {
        ModePopulations {
            n_al: self.n_al.max(0.0),
            n_bl: self.n_bl.max(0.0),
            n_ar: self.n_ar.max(0.0),
            n_br: self.n_br.max(0.0),
        }
    }
}
