use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Uniform periodic lattice `x_j = x_min + j dx`, `j = 0..n_points`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub n_points: usize,
    pub length: f64,
    pub x_min: f64,
    pub dx: f64,
}

impl Grid1D {
    pub fn new(n_points: usize, length: f64, x_min: f64) -> Result<Self> {
        if n_points < 2 || !n_points.is_power_of_two() {
            return Err(Error::invalid(format!("n_points must be a power of two, got {n_points}")));
        }
        if !(length > 0.0) || !length.is_finite() || !x_min.is_finite() {
            return Err(Error::invalid(format!("bad grid extent {length} from {x_min}")));
        }
        Ok(Grid1D { n_points, length, x_min, dx: length / n_points as f64 })
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx
    }

    pub fn x_max(&self) -> f64 {
        self.x_min + self.length
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.x(j)).collect()
    }

    pub fn dk(&self) -> f64 {
        2.0 * PI / self.length
    }

    pub fn k_nyquist(&self) -> f64 {
        PI / self.dx
    }

    /// Wavenumbers in FFT order: `0, dk, .., -dk`.
    pub fn k_values(&self) -> Vec<f64> {
        let n = self.n_points as isize;
        (0..n)
            .map(|j| if j < n / 2 { j } else { j - n })
            .map(|j| j as f64 * self.dk())
            .collect()
    }

    /// Index of the first lattice point at or to the right of `x0`.
    pub fn split_index(&self, x0: f64) -> Result<usize> {
        if !(x0 > self.x_min && x0 < self.x_max()) {
            return Err(Error::invalid(format!(
                "partition point {x0} m lies outside the grid [{}, {}) m",
                self.x_min,
                self.x_max()
            )));
        }
        Ok(((x0 - self.x_min) / self.dx).ceil() as usize)
    }

    /// Require `dx <= pi / (k0 (1 + margin))` with `margin >= 0.5`.
    pub fn check_resolves(&self, k0: f64, margin: f64) -> Result<()> {
        let margin = margin.max(0.5);
        let limit = PI / (k0 * (1.0 + margin));
        if self.dx > limit {
            return Err(Error::config(format!(
                "grid spacing {:.4e} m does not resolve k0 = {k0:.4e} rad/m (need dx <= {limit:.4e} m)",
                self.dx
            )));
        }
        Ok(())
    }

    /// Coarser grid over the same box with every `factor` points merged.
    pub fn coarsened(&self, factor: usize) -> Result<Self> {
        if factor == 0 || !self.n_points.is_multiple_of(factor) {
            return Err(Error::invalid(format!("cannot coarsen {} points by {factor}", self.n_points)));
        }
        Grid1D::new(self.n_points / factor, self.length, self.x_min)
    }
}
