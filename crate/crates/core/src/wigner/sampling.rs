use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::ComplexAmplitude;

pub type TrajectoryRng = ChaCha8Rng;

/// The noise stream of trajectory `index` under `seed`.
///
/// ChaCha streams are disjoint, so trajectories never share random numbers
/// and each stream depends on nothing but `(seed, index)`.
pub fn trajectory_rng(seed: u64, index: u64) -> TrajectoryRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Complex vacuum noise with independent Gaussian quadratures of standard
/// deviation 1/2, so that `<|eta|^2> = 1/2`.
pub fn vacuum_noise<R: Rng + ?Sized>(rng: &mut R) -> ComplexAmplitude {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    ComplexAmplitude::new(0.5 * re, 0.5 * im)
}

/// Draw a Wigner sample of the Glauber coherent state with amplitude `mean`.
pub fn sample_coherent<R: Rng + ?Sized>(mean: ComplexAmplitude, rng: &mut R) -> ComplexAmplitude {
    mean + vacuum_noise(rng)
}
