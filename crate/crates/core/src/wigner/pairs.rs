use serde::{Deserialize, Serialize};

use super::estimators::{mean, number_difference_variance, Estimate, ModePopulations};
use crate::{Error, Result};

/// Index of each mode in per-trajectory population arrays.
pub const AL: usize = 0;
pub const BL: usize = 1;
pub const AR: usize = 2;
pub const BR: usize = 3;

/// The six unordered mode pairs, in output column order.
pub const PAIRS: [(usize, usize, &str); 6] = [
    (AR, BL, "v_aR_bL"),
    (AL, BR, "v_aL_bR"),
    (AL, BL, "v_aL_bL"),
    (AR, BR, "v_aR_bR"),
    (AL, AR, "v_aL_aR"),
    (BL, BR, "v_bL_bR"),
];

/// Ensemble statistics of the four modes at one mixing time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub t_fwm: f64,
    pub populations: ModePopulations,
    /// Number-difference variances in [`PAIRS`] order.
    pub pair_variances: [Estimate; 6],
}

impl ScanPoint {
    /// Build the statistics from per-trajectory populations ordered
    /// `[aL, bL, aR, bR]`, where `modes[m]` is the number of single-particle
    /// modes population `m` sums over.
    pub fn from_trajectories(t_fwm: f64, pops: &[[f64; 4]], modes: [f64; 4]) -> Result<Self> {
        if pops.len() < 2 {
            return Err(Error::invalid("mode statistics need at least two trajectories"));
        }
        let columns: Vec<Vec<f64>> = (0..4).map(|m| pops.iter().map(|p| p[m]).collect()).collect();
        let populations = ModePopulations {
            n_al: mean(&columns[AL]),
            n_bl: mean(&columns[BL]),
            n_ar: mean(&columns[AR]),
            n_br: mean(&columns[BR]),
        }
        .validated()?;
        let mut pair_variances = [Estimate { value: 0.0, std_err: 0.0 }; 6];
        for (slot, &(i, j, _)) in pair_variances.iter_mut().zip(PAIRS.iter()) {
            *slot = number_difference_variance(&columns[i], &columns[j], modes[i] + modes[j])?;
        }
        Ok(ScanPoint { t_fwm, populations, pair_variances })
    }

    pub fn pair(&self, name: &str) -> Option<Estimate> {
        PAIRS
            .iter()
            .position(|(_, _, n)| *n == name)
            .map(|k| self.pair_variances[k])
    }

    /// The seeded, squeezed pair (|a,k0>, |b,0>).
    pub fn squeezed(&self) -> Estimate {
        self.pair_variances[0]
    }
}
