//! Undepleted-pump solution for the two seed modes.

use crate::{Error, Result};

/// Squeezing parameter `r = chi * alpha0 * beta_k0 * t` with pump amplitudes
/// given as mean populations.
pub fn squeeze_parameter(chi: f64, n_pump_a: f64, n_pump_b: f64, t: f64) -> f64 {
    chi * (n_pump_a * n_pump_b).sqrt() * t
}

/// `<N_aR(t)> = <N_bL(t)> = (N0 + 1/2) cosh 2r - 1/2`.
pub fn undepleted_population(n0: f64, r: f64) -> f64 {
    (n0 + 0.5) * (2.0 * r).cosh() - 0.5
}

/// `v_{aR,bL} = 2 N0 / [(2 N0 + 1) cosh 2r - 1]`.
///
/// The vacuum limit `N0 = r = 0` is 0/0 and is defined as 1, the coherent
/// value it approaches.
pub fn undepleted_variance(n0: f64, r: f64) -> f64 {
    let denom = (2.0 * n0 + 1.0) * (2.0 * r).cosh() - 1.0;
    if n0 == 0.0 && denom == 0.0 {
        return 1.0;
    }
    2.0 * n0 / denom
}

/// Four-wave-mixing rate from the product `N_t * chi`.
pub fn chi_from_calibration(nt_chi: f64, n_total: f64) -> Result<f64> {
    if !(n_total > 0.0) {
        return Err(Error::invalid(format!("total atom number must be positive, got {n_total}")));
    }
    Ok(nt_chi / n_total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::DEFAULT_NT_CHI;

    #[test]
    fn zero_time_limits() {
        assert_eq!(undepleted_population(1e3, 0.0), 1e3);
        assert_eq!(undepleted_population(0.0, 0.0), 0.0);
        assert_eq!(undepleted_variance(1e3, 0.0), 1.0);
        assert_eq!(undepleted_variance(0.0, 0.0), 1.0);
    }

    #[test]
    fn unit_squeezing_values() {
        let cosh2 = 2f64.cosh();
        let n = undepleted_population(1e3, 1.0);
        assert!((n - (1000.5 * cosh2 - 0.5)).abs() < 1e-9);
        assert!((n - 3763.58).abs() < 0.01, "{n}");
        let v = undepleted_variance(1e3, 1.0);
        assert!((v - 2000.0 / (2001.0 * cosh2 - 1.0)).abs() < 1e-15);
        assert!((v - 0.266).abs() < 5e-4, "{v}");
    }

    #[test]
    fn variance_decreases_with_r() {
        let mut last = f64::INFINITY;
        for i in 0..50 {
            let v = undepleted_variance(1e3, 0.1 * i as f64);
            assert!(v < last);
            last = v;
        }
    }

    #[test]
    fn chi_calibration() {
        let chi = chi_from_calibration(DEFAULT_NT_CHI, 2e5).unwrap();
        assert!((chi - 0.134).abs() < 1e-12, "{chi}");
        assert_eq!(chi_from_calibration(3.5, 1.0).unwrap(), 3.5);
        // The second quoted operating point is consistent with the first.
        assert!((1.8e-4 * DEFAULT_NT_CHI - 4.82).abs() < 0.01);
        assert!(chi_from_calibration(1.0, 0.0).is_err());
    }
}
