//! Parallel replica execution with flag-and-resample.

use rayon::prelude::*;

use crate::error::{BandError, Result};
use crate::rng::{attempt_seed, mix, replica_seed, rng_from_seed, ReplicaRng};

use super::record::Exclusions;

/// Resamples tried before a replica is excluded.
pub const MAX_ATTEMPTS: u32 = 16;

/// Largest tolerated fraction of flagged replicas at `M >= 4`.
pub const MAX_FLAG_RATE: f64 = 1e-3;

/// Outcome of one replica.
#[derive(Clone, Debug)]
pub struct Replica<T> {
    pub index: u64,
    /// Replica seed (attempt 0).
    pub seed: u64,
    /// Number of near-singular resamples.
    pub flags: u64,
    /// `None` when every attempt was near-singular.
    pub value: Option<T>,
}

pub struct Runner {
    pool: rayon::ThreadPool,
}

impl Runner {
    /// `workers = 0` lets rayon pick the thread count.
    pub fn new(workers: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| BandError::Config(format!("cannot start worker pool: {e}")))?;
        Ok(Self { pool })
    }

    /// Runs `replicas` independent replicas of `f` on the stream
    /// `(kind_tag, m, n)`. Each replica gets its own generator; on
    /// `NearSingular` the replica is redrawn from the next attempt seed.
    /// Results come back in replica order whatever the thread count.
    pub fn run<T, F>(
        &self,
        master_seed: u64,
        kind_tag: u64,
        m: usize,
        n: usize,
        replicas: u64,
        f: F,
    ) -> Result<(Vec<Replica<T>>, Exclusions)>
    where
        T: Send,
        F: Fn(&mut ReplicaRng) -> Result<T> + Sync,
    {
        let stream = cell_stream(kind_tag, m, n);
        let out: Vec<Result<Replica<T>>> = self.pool.install(|| {
            (0..replicas)
                .into_par_iter()
                .map(|index| {
                    let seed = replica_seed(master_seed, stream, index);
                    for attempt in 0..MAX_ATTEMPTS {
                        let mut rng = rng_from_seed(attempt_seed(seed, attempt));
                        match f(&mut rng) {
                            Ok(v) => {
                                return Ok(Replica {
                                    index,
                                    seed,
                                    flags: attempt as u64,
                                    value: Some(v),
                                })
                            }
                            Err(BandError::NearSingular { .. }) => continue,
                            Err(e) => return Err(e),
                        }
                    }
                    Ok(Replica {
                        index,
                        seed,
                        flags: MAX_ATTEMPTS as u64,
                        value: None,
                    })
                })
                .collect()
        });
        let out = out.into_iter().collect::<Result<Vec<_>>>()?;
        let flagged = out.iter().filter(|r| r.flags > 0).count() as u64;
        let excluded = out.iter().filter(|r| r.value.is_none()).count() as u64;
        let exclusions = Exclusions {
            m,
            n,
            replicas,
            flagged,
            excluded,
        };
        if m >= 4 && flagged as f64 > MAX_FLAG_RATE * replicas as f64 {
            return Err(BandError::ExclusionRate {
                m,
                flags: flagged,
                replicas,
            });
        }
        Ok((out, exclusions))
    }

    /// Runs an arbitrary closure on the pool.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }
}

/// Stream id of an experiment cell.
pub fn cell_stream(kind_tag: u64, m: usize, n: usize) -> u64 {
    mix(kind_tag, ((m as u64) << 32) | n as u64)
}
