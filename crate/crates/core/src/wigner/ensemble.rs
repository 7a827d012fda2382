use rayon::prelude::*;

use super::sampling::{trajectory_rng, TrajectoryRng};
use crate::{Error, Result};

/// Independent trajectories in index order together with the seed that
/// generated them.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble<T> {
    pub trajectories: Vec<T>,
    pub seed: u64,
}

impl<T> Ensemble<T> {
    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    /// Per-trajectory values of some scalar, in trajectory order.
    pub fn map<F: Fn(&T) -> f64>(&self, f: F) -> Vec<f64> {
        self.trajectories.iter().map(f).collect()
    }
}

/// Sample and evolve `n_traj` trajectories, possibly in parallel.
///
/// Trajectory `i` draws its initial state from stream `(seed, i)` and the
/// results come back in index order, so every downstream reduction is
/// independent of the thread count. The first failing trajectory (lowest
/// index) is reported.
pub fn run_ensemble<S, T, Sample, Evolve>(
    n_traj: usize,
    seed: u64,
    sample: Sample,
    evolve: Evolve,
) -> Result<Ensemble<T>>
where
    T: Send,
    Sample: Fn(&mut TrajectoryRng) -> S + Sync,
    Evolve: Fn(S) -> Result<T> + Sync,
{
    if n_traj == 0 {
        return Err(Error::invalid("an ensemble needs at least one trajectory"));
    }
    let results: Vec<Result<T>> = (0..n_traj)
        .into_par_iter()
        .map(|i| {
            let mut rng = trajectory_rng(seed, i as u64);
            evolve(sample(&mut rng)).map_err(|e| e.in_trajectory(i))
        })
        .collect();
    let trajectories = results.into_iter().collect::<Result<Vec<T>>>()?;
    Ok(Ensemble { trajectories, seed })
}

/// Trajectories folded per chunk; chunk boundaries never depend on the
/// thread count.
pub const FOLD_CHUNK: usize = 16;

/// Run trajectories and fold them into an accumulator without keeping them.
///
/// Trajectories are grouped into fixed chunks of [`FOLD_CHUNK`]; each chunk
/// is folded sequentially from `identity()` and the chunk accumulators are
/// then combined in chunk order. Floating-point results are therefore
/// bit-identical for any degree of parallelism.
pub fn fold_ensemble<T, A, Run, Id, Fold, Combine>(
    n_traj: usize,
    seed: u64,
    run: Run,
    identity: Id,
    fold: Fold,
    combine: Combine,
) -> Result<A>
where
    A: Send,
    Run: Fn(usize, &mut TrajectoryRng) -> Result<T> + Sync,
    Id: Fn() -> A + Sync,
    Fold: Fn(&mut A, usize, T) + Sync,
    Combine: Fn(&mut A, A),
{
    if n_traj == 0 {
        return Err(Error::invalid("an ensemble needs at least one trajectory"));
    }
    let n_chunks = n_traj.div_ceil(FOLD_CHUNK);
    let chunks: Vec<Result<A>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = identity();
            for i in c * FOLD_CHUNK..((c + 1) * FOLD_CHUNK).min(n_traj) {
                let mut rng = trajectory_rng(seed, i as u64);
                let t = run(i, &mut rng).map_err(|e| e.in_trajectory(i))?;
                fold(&mut acc, i, t);
            }
            Ok(acc)
        })
        .collect();
    let mut total = identity();
    for chunk in chunks {
        combine(&mut total, chunk?);
    }
    Ok(total)
}
