use rand::Rng;
use serde::{Deserialize, Serialize};

use super::grid::Grid1D;
use crate::fourmode::Seeds;
use crate::interferometer::{SideCoherency, SplitState};
use crate::wigner::{vacuum_noise, ComplexAmplitude};
use crate::{Error, Result};

/// Wigner fields of both components on the lattice, in units of m^-1/2.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldPair {
    pub psi_a: Vec<ComplexAmplitude>,
    pub psi_b: Vec<ComplexAmplitude>,
}

fn norm(psi: &[ComplexAmplitude], dx: f64) -> f64 {
    psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * dx
}

impl FieldPair {
    pub fn len(&self) -> usize {
        self.psi_a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi_a.is_empty()
    }

    /// `sum (|psi_a|^2 + |psi_b|^2) dx`, vacuum included.
    pub fn wigner_norm(&self, dx: f64) -> f64 {
        norm(&self.psi_a, dx) + norm(&self.psi_b, dx)
    }

    /// Total atom number estimator: the Wigner norm less half a particle
    /// for each of the `2 n_points` modes.
    pub fn atom_number(&self, dx: f64) -> f64 {
        self.wigner_norm(dx) - self.len() as f64
    }

    pub fn ensure_finite(&self) -> Result<()> {
        let ok = self.psi_a.iter().chain(&self.psi_b).all(|z| z.re.is_finite() && z.im.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::numerical("field became non-finite"))
        }
    }

    /// Reduce to the two sides `x < x_split` and `x >= x_split`.
    pub fn split(&self, grid: &Grid1D, x_split: f64) -> Result<SplitState> {
        let j = grid.split_index(x_split)?;
        Ok(SplitState {
            left: SideCoherency::from_fields(&self.psi_a[..j], &self.psi_b[..j], grid.dx),
            right: SideCoherency::from_fields(&self.psi_a[j..], &self.psi_b[j..], grid.dx),
        })
    }

    /// Wigner-corrected `[aL, bL, aR, bR]` counted on either side of `x0`.
    pub fn region_populations(&self, grid: &Grid1D, x0: f64) -> Result<[f64; 4]> {
        Ok(self.split(grid, x0)?.populations())
    }

    /// Lattice points with `|x - x0| < half_width` and the corrected atom
    /// number they hold.
    pub fn band_number(&self, grid: &Grid1D, x0: f64, half_width: f64) -> f64 {
        let vac = 1.0 / grid.dx;
        (0..self.len())
            .filter(|&j| (grid.x(j) - x0).abs() < half_width)
            .map(|j| (self.psi_a[j].norm_sqr() + self.psi_b[j].norm_sqr() - vac) * grid.dx)
            .sum()
    }
}

/// Mean initial fields: each component is a superposition of the
/// condensate profile at rest and boosted by `k0`.
pub fn mean_fields(psi0: &[f64], grid: &Grid1D, k0: f64, seeds: &Seeds) -> FieldPair {
    let boost: Vec<ComplexAmplitude> =
        (0..grid.n_points).map(|j| ComplexAmplitude::from_polar(1.0, k0 * grid.x(j))).collect();
    let build = |rest: ComplexAmplitude, moving: ComplexAmplitude| -> Vec<ComplexAmplitude> {
        psi0.iter().zip(&boost).map(|(&p, &e)| (rest + moving * e) * p).collect()
    };
    let m = seeds.means();
    FieldPair { psi_a: build(m.alpha0, m.alpha_k), psi_b: build(m.beta0, m.beta_k) }
}

/// Wigner sample of the seeded initial state: mean fields plus white
/// vacuum noise `eta / sqrt(dx)` with `<|eta|^2> = 1/2` per site.
///
/// With `noise_refinement = r > 1` every site's noise is the normalised sum
/// of `r` consecutive draws, which is the block average of the noise a grid
/// `r` times finer would draw from the same stream.
pub fn sample_initial_fields<R: Rng + ?Sized>(
    psi0: &[f64],
    grid: &Grid1D,
    k0: f64,
    seeds: &Seeds,
    noise_refinement: usize,
    rng: &mut R,
) -> FieldPair {
    let mut f = mean_fields(psi0, grid, k0, seeds);
    let r = noise_refinement.max(1);
    let scale = 1.0 / (grid.dx * r as f64).sqrt();
    for psi in [&mut f.psi_a, &mut f.psi_b] {
        for z in psi.iter_mut() {
            let mut eta = ComplexAmplitude::new(0.0, 0.0);
            for _ in 0..r {
                eta += vacuum_noise(rng);
            }
            *z += eta * scale;
        }
    }
    f
}

/// Running sums for the ensemble-mean densities of both components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityAccumulator {
    pub sum_a: Vec<f64>,
    pub sum_b: Vec<f64>,
    pub count: usize,
}

/// Ensemble-mean corrected densities `<|psi_j|^2> - 1/(2 dx)`, m^-1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfiles {
    pub x: Vec<f64>,
    pub density_a: Vec<f64>,
    pub density_b: Vec<f64>,
}

impl DensityAccumulator {
    pub fn new(n_points: usize) -> Self {
        DensityAccumulator { sum_a: vec![0.0; n_points], sum_b: vec![0.0; n_points], count: 0 }
    }

    pub fn add(&mut self, f: &FieldPair) {
        for (s, z) in self.sum_a.iter_mut().zip(&f.psi_a) {
            *s += z.norm_sqr();
        }
        for (s, z) in self.sum_b.iter_mut().zip(&f.psi_b) {
            *s += z.norm_sqr();
        }
        self.count += 1;
    }

    pub fn merge(&mut self, other: &DensityAccumulator) {
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        for (s, o) in self.sum_a.iter_mut().zip(&other.sum_a) {
            *s += o;
        }
        for (s, o) in self.sum_b.iter_mut().zip(&other.sum_b) {
            *s += o;
        }
        self.count += other.count;
    }

    pub fn profiles(&self, grid: &Grid1D) -> Result<DensityProfiles> {
        if self.count == 0 {
            return Err(Error::invalid("density of an empty ensemble"));
        }
        let n = self.count as f64;
        let vac = 0.5 / grid.dx;
        Ok(DensityProfiles {
            x: grid.positions(),
            density_a: self.sum_a.iter().map(|s| s / n - vac).collect(),
            density_b: self.sum_b.iter().map(|s| s / n - vac).collect(),
        })
    }
}

impl DensityProfiles {
    pub fn total(&self, dx: f64) -> f64 {
        self.density_a.iter().chain(&self.density_b).sum::<f64>() * dx
    }

    /// Fraction of the atoms within `half_width` of `x0`.
    pub fn band_fraction(&self, dx: f64, x0: f64, half_width: f64) -> f64 {
        let band: f64 = self
            .x
            .iter()
            .zip(self.density_a.iter().zip(&self.density_b))
            .filter(|(x, _)| (**x - x0).abs() < half_width)
            .map(|(_, (a, b))| a + b)
            .sum::<f64>()
            * dx;
        band / self.total(dx)
    }
}
