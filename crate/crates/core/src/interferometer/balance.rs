use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::coherency::{SideCoherency, SplitState};
use super::sequence::{first_stage, mean_state, second_stage, PulseSequence};
use super::sweep::FringeMoments;
use crate::optimize::scan_then_refine;
use crate::Result;

/// Objective scans below this relative variation count as flat.
const FLAT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Balance {
    /// Balancing phase in `[0, pi)`; the root at `phi + pi` is equivalent
    /// for the populations.
    pub phi: f64,
    /// True when the imbalance does not depend on the phase.
    pub flat: bool,
}

/// Phase minimising `|<N_a> - <N_b>|` after a phase shift and a pulse,
/// from the ensemble-mean coherency `mean`.
pub fn balance_phase(mean: &SideCoherency) -> Balance {
    let imbalance = |phi: f64| {
        let s = first_stage(mean, phi);
        (s.a - s.b).abs()
    };
    let samples: Vec<f64> = (0..256).map(|i| imbalance(TAU * i as f64 / 256.0)).collect();
    let (hi, lo) = samples.iter().fold((f64::NEG_INFINITY, f64::INFINITY), |(h, l), &x| (h.max(x), l.min(x)));
    let scale = (mean.a + mean.b).abs().max(f64::MIN_POSITIVE);
    if hi - lo <= FLAT * scale {
        log::warn!("balancing objective is flat; using phase 0");
        return Balance { phi: 0.0, flat: true };
    }
    let m = scan_then_refine(imbalance, 0.0, TAU, 256, 1e-6);
    Balance { phi: m.x.rem_euclid(PI), flat: false }
}

/// Which root of each balancing condition the sequence uses on the left,
/// relative to the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub flip0: bool,
    pub flip1: bool,
}

/// Balance both pulse stages on both sides from ensemble means.
///
/// Each stage has two roots a half turn apart. The right side uses the
/// principal roots; on the left all four root combinations are tried and
/// the one with the lowest minimum `Delta phi` over the interrogation phase
/// is kept, since the combinations differ in which number difference the
/// final pulse reads out.
pub fn auto_balance(states: &[SplitState], base: &PulseSequence) -> Result<(PulseSequence, Branch)> {
    let m = mean_state(states);
    let phi0_r = balance_phase(&m.right).phi;
    let phi1_r = balance_phase(&first_stage(&m.right, phi0_r)).phi;
    let mut best: Option<(f64, PulseSequence, Branch)> = None;
    for flip0 in [false, true] {
        let phi0_l = balance_phase(&m.left).phi + if flip0 { PI } else { 0.0 };
        let phi1_base = balance_phase(&first_stage(&m.left, phi0_l)).phi;
        for flip1 in [false, true] {
            let phi1_l = phi1_base + if flip1 { PI } else { 0.0 };
            let seq = PulseSequence { phi0_l, phi0_r, phi1_l, phi1_r, ..*base };
            let score = FringeMoments::from_states(states, &seq)?.min_delta_phi_sqrt_nt().value;
            if best.as_ref().is_none_or(|(b, _, _)| score < *b) {
                best = Some((score, seq, Branch { flip0, flip1 }));
            }
        }
    }
    let (_, seq, branch) = best.expect("four candidates evaluated");
    Ok((seq, branch))
}

/// Mean populations `(N_a, N_b)` on one side after the first two stages.
pub fn balanced_populations(mean: &SideCoherency, phi0: f64, phi1: f64) -> [(f64, f64); 2] {
    [first_stage(mean, phi0).populations(), second_stage(mean, phi0, phi1).populations()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wigner::ComplexAmplitude;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn zeroes_equal_moduli_imbalance(theta in -3.1f64..3.1, r in 0.5f64..30.0) {
            let s = SideCoherency::from_amplitudes(ComplexAmplitude::new(r, 0.0), ComplexAmplitude::from_polar(r, theta));
            let b = balance_phase(&s);
            prop_assert!(!b.flat);
            let expected = (-theta).rem_euclid(PI);
            let d = (b.phi - expected).rem_euclid(PI);
            prop_assert!(d.min(PI - d) < 1e-5, "{} vs {}", b.phi, expected);
            let after = first_stage(&s, b.phi);
            prop_assert!((after.a - after.b).abs() < 1e-4 * r * r);
        }

        #[test]
        fn rebalancing_is_idempotent(theta in -3.1f64..3.1, ra in 1.0f64..30.0, rb in 0.1f64..30.0) {
            let s = SideCoherency::from_amplitudes(ComplexAmplitude::new(ra, 0.0), ComplexAmplitude::from_polar(rb, theta));
            let phi = balance_phase(&s).phi;
            let again = balance_phase(&s.phase_shift(phi)).phi;
            prop_assert!(again.min(PI - again) < 1e-4, "{}", again);
        }
    }

    #[test]
    fn vacuum_partner_is_flat() {
        let s = SideCoherency::from_amplitudes(ComplexAmplitude::new(10.0, 0.0), ComplexAmplitude::new(0.0, 0.0));
        assert_eq!(balance_phase(&s), Balance { phi: 0.0, flat: true });
    }
}
