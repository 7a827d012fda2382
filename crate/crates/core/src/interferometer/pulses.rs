use std::f64::consts::FRAC_1_SQRT_2;

use crate::wigner::ComplexAmplitude;

const I: ComplexAmplitude = ComplexAmplitude::new(0.0, 1.0);

/// Resonant pi/2 coupling `a' = (a - i b)/sqrt 2`, `b' = (b - i a)/sqrt 2`.
pub fn beam_splitter(a: ComplexAmplitude, b: ComplexAmplitude) -> (ComplexAmplitude, ComplexAmplitude) {
    ((a - I * b) * FRAC_1_SQRT_2, (b - I * a) * FRAC_1_SQRT_2)
}

/// Phase `phi` on the b component.
pub fn phase_shift(a: ComplexAmplitude, b: ComplexAmplitude, phi: f64) -> (ComplexAmplitude, ComplexAmplitude) {
    (a, b * ComplexAmplitude::from_polar(1.0, phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> ComplexAmplitude {
        ComplexAmplitude::new(re, im)
    }

    #[test]
    fn splits_a_single_mode_evenly() {
        let (a, b) = beam_splitter(c(1.0, 0.0), c(0.0, 0.0));
        assert!((a - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((b - c(0.0, -FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn two_pulses_swap_the_modes() {
        let (a0, b0) = (c(0.3, -1.2), c(2.0, 0.5));
        let (a1, b1) = beam_splitter(a0, b0);
        let (a2, b2) = beam_splitter(a1, b1);
        assert!((a2 + I * b0).norm() < 1e-14);
        assert!((b2 + I * a0).norm() < 1e-14);
    }

    #[test]
    fn phase_identities() {
        let (a, b) = (c(0.3, -1.2), c(2.0, 0.5));
        assert_eq!(phase_shift(a, b, 0.0), (a, b));
        let (_, b2) = phase_shift(a, b, 2.0 * std::f64::consts::PI);
        assert!((b2 - b).norm() < 1e-14);
    }

    proptest! {
        #[test]
        fn pulse_chain_is_unitary(re in proptest::array::uniform4(-50.0f64..50.0), phis in proptest::array::uniform3(-7.0f64..7.0)) {
            let (mut a, mut b) = (c(re[0], re[1]), c(re[2], re[3]));
            let n0 = a.norm_sqr() + b.norm_sqr();
            for phi in phis {
                (a, b) = phase_shift(a, b, phi);
                (a, b) = beam_splitter(a, b);
            }
            prop_assert!((a.norm_sqr() + b.norm_sqr() - n0).abs() <= 1e-12 * n0.max(1.0));
        }
    }
}
