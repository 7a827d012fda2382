//! Fixed-step RK4 for the four-mode Wigner equations.
//!
//! In the rotating frame `a = a~ exp(-i(omega t + chi * int N_t dt))` the
//! self-phase terms drop out and the mixing terms are autonomous:
//!
//! ```text
//! i da~0/dt = chi conj(b~k) b~0 a~k      i db~0/dt = chi conj(a~k) a~0 b~k
//! i da~k/dt = chi conj(b~0) b~k a~0      i db~k/dt = chi conj(a~0) a~k b~0
//! ```

use super::{FourModeParams, FourModeState};
use crate::wigner::ComplexAmplitude;
use crate::{Error, Result};

/// Largest admissible `chi * N_t * dt`.
pub const STABILITY_LIMIT: f64 = 1e-3;

/// Largest step satisfying [`STABILITY_LIMIT`] for a total number `n_total`.
pub fn max_stable_dt(params: &FourModeParams, n_total: f64) -> f64 {
    STABILITY_LIMIT / (params.chi * n_total)
}

type Amps = [ComplexAmplitude; 4];

const I: ComplexAmplitude = ComplexAmplitude::new(0.0, 1.0);

#[inline]
fn rhs(chi: f64, [a0, ak, b0, bk]: Amps) -> Amps {
    let m = -I * chi;
    [
        m * (bk.conj() * b0 * ak),
        m * (b0.conj() * bk * a0),
        m * (ak.conj() * a0 * bk),
        m * (a0.conj() * ak * b0),
    ]
}

#[inline]
fn axpy(y: &Amps, h: f64, k: &Amps) -> Amps {
    [y[0] + k[0] * h, y[1] + k[1] * h, y[2] + k[2] * h, y[3] + k[3] * h]
}

fn rk4_step(chi: f64, y: &Amps, h: f64) -> Amps {
    let k1 = rhs(chi, *y);
    let k2 = rhs(chi, axpy(y, 0.5 * h, &k1));
    let k3 = rhs(chi, axpy(y, 0.5 * h, &k2));
    let k4 = rhs(chi, axpy(y, h, &k3));
    let mut out = *y;
    for m in 0..4 {
        out[m] += (k1[m] + (k2[m] + k3[m]) * 2.0 + k4[m]) * (h / 6.0);
    }
    out
}

// Grouped so that the a<->b, 0<->k0 relabelling leaves the sum bitwise equal.
fn total_number(y: &Amps) -> f64 {
    (y[0].norm_sqr() + y[3].norm_sqr()) + (y[1].norm_sqr() + y[2].norm_sqr()) - 2.0
}

/// Integrate one Wigner trajectory for a duration `t_end` with steps no
/// longer than `dt`.
///
/// Fails if `chi * N_t * dt` exceeds [`STABILITY_LIMIT`] or if an amplitude
/// becomes non-finite.
pub fn evolve_four_mode_tw(
    state: FourModeState,
    params: &FourModeParams,
    dt: f64,
    t_end: f64,
) -> Result<FourModeState> {
    if !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(Error::invalid(format!("need dt > 0 and t_end >= 0, got {dt}, {t_end}")));
    }
    state.ensure_finite()?;
    let mut y = state.as_array();
    let n0 = total_number(&y);
    if params.chi * n0.abs() * dt > STABILITY_LIMIT {
        return Err(Error::invalid(format!(
            "step {dt} s too long: chi N_t dt = {:.3e} exceeds {STABILITY_LIMIT}",
            params.chi * n0 * dt
        )));
    }
    if t_end == 0.0 {
        return Ok(state);
    }
    let steps = (t_end / dt).ceil().max(1.0) as usize;
    let h = t_end / steps as f64;
    let mut nt_integral = 0.0;
    for step in 0..steps {
        let before = total_number(&y);
        y = rk4_step(params.chi, &y, h);
        nt_integral += 0.5 * (before + total_number(&y)) * h;
        if step % 256 == 0 && !y.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::numerical(format!("four-mode amplitudes diverged at step {step}")));
        }
    }
    let common = params.chi * nt_integral;
    let rot = |omega: f64| ComplexAmplitude::from_polar(1.0, -(omega * t_end + common));
    let (r0, rk) = (rot(params.omega0), rot(params.omega_k));
    let out = FourModeState {
        alpha0: y[0] * r0,
        alpha_k: y[1] * rk,
        beta0: y[2] * r0,
        beta_k: y[3] * rk,
    };
    out.ensure_finite()?;
    Ok(out)
}
