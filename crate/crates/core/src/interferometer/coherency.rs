//! Second-moment summary of one interferometer side.
//!
//! Pulses and phase shifts act identically on every mode of a side, so a
//! trajectory's side is fully described for the measurement by
//! `A = sum |a|^2`, `B = sum |b|^2` and `C = sum conj(a) b` together with the
//! number of modes summed over. The maps below transform these exactly.

use serde::{Deserialize, Serialize};

use crate::wigner::ComplexAmplitude;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideCoherency {
    pub a: f64,
    pub b: f64,
    pub c_re: f64,
    pub c_im: f64,
    /// Number of single-particle modes each of `a` and `b` sums over.
    pub modes: f64,
}

impl SideCoherency {
    pub fn from_amplitudes(a: ComplexAmplitude, b: ComplexAmplitude) -> Self {
        let c = a.conj() * b;
        SideCoherency { a: a.norm_sqr(), b: b.norm_sqr(), c_re: c.re, c_im: c.im, modes: 1.0 }
    }

    /// Sum over lattice sites with weight `dx`; each site is one mode.
    pub fn from_fields(psi_a: &[ComplexAmplitude], psi_b: &[ComplexAmplitude], dx: f64) -> Self {
        let (mut a, mut b, mut c) = (0.0, 0.0, ComplexAmplitude::new(0.0, 0.0));
        for (x, y) in psi_a.iter().zip(psi_b) {
            a += x.norm_sqr();
            b += y.norm_sqr();
            c += x.conj() * y;
        }
        SideCoherency { a: a * dx, b: b * dx, c_re: c.re * dx, c_im: c.im * dx, modes: psi_a.len() as f64 }
    }

    /// Wigner-corrected `(N_a, N_b)`.
    pub fn populations(&self) -> (f64, f64) {
        (self.a - 0.5 * self.modes, self.b - 0.5 * self.modes)
    }

    /// Corrected side atom number.
    pub fn total(&self) -> f64 {
        self.a + self.b - self.modes
    }

    /// `(J_x, J_y, J_z)` with `J_x + i J_y = conj(a) b` and
    /// `J_z = (|a|^2 - |b|^2) / 2`, symmetric ordered.
    pub fn spin(&self) -> [f64; 3] {
        [self.c_re, self.c_im, 0.5 * (self.a - self.b)]
    }

    /// `a -> (a - i b)/sqrt 2`, `b -> (b - i a)/sqrt 2` on every mode.
    pub fn beam_splitter(&self) -> Self {
        let mean = 0.5 * (self.a + self.b);
        SideCoherency {
            a: mean + self.c_im,
            b: mean - self.c_im,
            c_re: self.c_re,
            c_im: 0.5 * (self.b - self.a),
            modes: self.modes,
        }
    }

    /// `b -> b exp(i phi)` on every mode.
    pub fn phase_shift(&self, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        SideCoherency {
            c_re: c * self.c_re - s * self.c_im,
            c_im: s * self.c_re + c * self.c_im,
            ..*self
        }
    }
}

/// Left and right sides of one trajectory after separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitState {
    pub left: SideCoherency,
    pub right: SideCoherency,
}

impl SplitState {
    /// Per-trajectory `[aL, bL, aR, bR]`.
    pub fn populations(&self) -> [f64; 4] {
        let (al, bl) = self.left.populations();
        let (ar, br) = self.right.populations();
        [al, bl, ar, br]
    }

    pub fn total(&self) -> f64 {
        self.left.total() + self.right.total()
    }

    /// Mode counts in `[aL, bL, aR, bR]` order.
    pub fn mode_counts(&self) -> [f64; 4] {
        [self.left.modes, self.left.modes, self.right.modes, self.right.modes]
    }
}
