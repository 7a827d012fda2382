//! Physical constants and the default experimental numbers.

use std::f64::consts::PI;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Bohr radius, m.
pub const BOHR_RADIUS: f64 = 5.291_772_109e-11;

/// Mass of a rubidium-87 atom, kg.
pub const RB87_MASS: f64 = 1.443_160_9e-25;

/// Two-photon Raman recoil momentum for 780 nm light, rad/m.
pub const RB87_RAMAN_K0: f64 = 4.0 * PI / 780e-9;

/// Product of total atom number and four-wave-mixing rate, 1/s.
///
/// Recovered from the two quoted operating points, 0.1 ms at a dimensionless
/// time of 2.68 and 0.18 ms at 4.82, which agree to 0.1%.
pub const DEFAULT_NT_CHI: f64 = 2.68 / 1.0e-4;

/// Mean populations of |a,0>, |a,k0>, |b,0>, |b,k0> before mixing.
pub const DEFAULT_N_AL: f64 = 1.0e5;
pub const DEFAULT_N_AR: f64 = 1.0e3;
pub const DEFAULT_N_BL: f64 = 1.0e3;
pub const DEFAULT_N_BR: f64 = 1.0e5;

/// Ensemble size used for the density figures; default everywhere.
pub const DEFAULT_TRAJECTORIES: usize = 1200;

/// s-wave scattering lengths of the 87Rb clock pair |F=1,mF=-1>, |F=2,mF=1>
/// in Bohr radii, used for the one-axis-twisting asymmetry.
pub const RB87_A11: f64 = 100.40;
pub const RB87_A22: f64 = 95.44;
