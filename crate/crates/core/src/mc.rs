//! Replica driver: replica `r` always runs on stream `(seed, r)`, so the
//! output does not depend on how replicas are spread over workers.

use rayon::prelude::*;
use serde::Serialize;

use crate::ensembles::{sample_hermite, sample_laguerre, scale_hermite, scale_laguerre};
use crate::error::{Error, Result};
use crate::lpp::{LppConfig, LppModel};
use crate::operator::{sample_tw, OperatorGrid};
use crate::rng::RngStream;
use crate::stats::EmpiricalDistribution;

/// Scalar samplers addressable by the driver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "sampler", rename_all = "snake_case")]
pub enum Sampler {
    /// Normalized Hermite `lambda1`.
    HermiteLambda1 {
        n: usize,
        beta: f64,
    },
    /// `H_{n, beta}`.
    HermiteEdge {
        n: usize,
        beta: f64,
    },
    /// Normalized Laguerre `lambda1`.
    LaguerreLambda1 {
        n: usize,
        kappa: f64,
        beta: f64,
    },
    /// `L_{n, kappa, beta}`.
    LaguerreEdge {
        n: usize,
        kappa: f64,
        beta: f64,
    },
    /// `TW_{beta, k}` from the discretised operator.
    TracyWidom {
        k: u32,
        beta: f64,
        length: f64,
        step: f64,
    },
    LastPassage {
        model: LppModel,
        n: usize,
    },
}

impl Sampler {
    pub fn draw(&self, stream: &mut RngStream) -> Result<f64> {
        match *self {
            Sampler::HermiteLambda1 { n, beta } => sample_hermite(n, beta, stream)?.lambda1(),
            Sampler::HermiteEdge { n, beta } => scale_hermite(sample_hermite(n, beta, stream)?.lambda1()?, n),
            Sampler::LaguerreLambda1 { n, kappa, beta } => sample_laguerre(n, kappa, beta, stream)?.lambda1(),
            Sampler::LaguerreEdge { n, kappa, beta } => {
                scale_laguerre(sample_laguerre(n, kappa, beta, stream)?.lambda1()?, n, kappa)
            }
            Sampler::TracyWidom { k, beta, length, step } => {
                let grid = OperatorGrid::new(k, length, step)?;
                sample_tw(&grid, beta, stream)
            }
            Sampler::LastPassage { model, n } => Ok(LppConfig::new(model, n)?.sample(stream)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McTask {
    pub sampler: Sampler,
    pub reps: u64,
    pub seed: u64,
    pub workers: usize,
}

/// Runs `f` once per replica on its own stream and returns the results in
/// replica order. Errors carry the failing replica index.
pub fn mc_collect<T, F>(reps: u64, seed: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut RngStream) -> Result<T> + Sync,
{
    if reps == 0 {
        return Err(Error::param("Monte Carlo run needs reps >= 1"));
    }
    let run = |r: u64| {
        f(&mut RngStream::new(seed, r)).map_err(|e| Error::Replica {
            replica: r,
            source: Box::new(e),
        })
    };
    if workers <= 1 {
        return (0..reps).map(run).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::numerical("mc_collect", format!("thread pool: {e}")))?;
    pool.install(|| (0..reps).into_par_iter().map(run).collect())
}

pub fn mc_run(task: &McTask) -> Result<EmpiricalDistribution> {
    let values = mc_collect(task.reps, task.seed, task.workers, |s| task.sampler.draw(s))?;
    EmpiricalDistribution::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_replica_matches_direct_call() {
        let sampler = Sampler::HermiteLambda1 { n: 5, beta: 2.0 };
        let task = McTask {
            sampler,
            reps: 1,
            seed: 99,
            workers: 1,
        };
        let dist = mc_run(&task).unwrap();
        let direct = sampler.draw(&mut RngStream::new(99, 0)).unwrap();
        assert_eq!(dist.samples(), &[direct]);
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let sampler = Sampler::LaguerreLambda1 {
            n: 6,
            kappa: 7.5,
            beta: 0.7,
        };
        let run = |workers| {
            mc_run(&McTask {
                sampler,
                reps: 500,
                seed: 4,
                workers,
            })
            .unwrap()
        };
        let one = run(1);
        assert_eq!(one, run(4));
        assert_eq!(one, run(8));
    }

    #[test]
    fn errors_name_the_replica() {
        let err = mc_collect(10, 0, 2, |s| {
            if s.stream_id() == 7 {
                Err(Error::param("boom"))
            } else {
                Ok(0.0)
            }
        })
        .unwrap_err();
        assert!(matches!(err, Error::Replica { replica: 7, .. }));
        assert!(err.is_parameter());
        assert!(mc_collect(0, 0, 1, |_| Ok(0.0)).is_err());
    }
}
