//! Monte Carlo simulation of the subdivision process.
//!
//! Instead of summing expected-population terms, this walks the random tree
//! the cost model describes: every region at a subdividing level draws an
//! independent Bernoulli with probability `P`, pays its boundary test plus
//! either the subdivision overhead or the wholesale resolution, and
//! subdividing regions spawn `r^2` children for the next level. Regions
//! reaching the deepest level pay full per-element work. The sample mean
//! over many trials estimates the same quantity as
//! [`ssd_work`](crate::cost_model::ssd_work), which makes the two
//! implementations checks on each other.
//!
//! Trials use one counter-based RNG stream each, so a given seed produces
//! the same statistics regardless of how trials are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cost_model::depth_tau;
use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Sample statistics of simulated total work.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimStats {
    /// Sample mean over all trials.
    pub mean: f64,
    /// Sample standard error of the mean; 0 for zero-variance runs.
    pub stderr: f64,
    pub trials: u32,
}

/// Simulates total subdivision work over `trials` independent runs.
///
/// Work terms match the specialized cost model: boundary test
/// `Q_i = 4*n*A / (g*r^i)`, subdivision overhead `lambda * A`, wholesale
/// resolution `n^2 / (G*R^i)`, and per-element work `A` at the deepest
/// level. Deterministic for a fixed seed: trial `t` always consumes stream
/// `t` of the seeded generator, so thread scheduling cannot change the
/// result.
pub fn simulate_subdivision_work(params: &ModelParams, trials: u32, seed: u64) -> Result<SimStats> {
    if trials == 0 {
        return Err(Error::TooSmall {
            name: "trials",
            min: 1,
            value: 0,
        });
    }
    let tau = depth_tau(params);
    let mut totals = vec![0.0f64; trials as usize];
    totals
        .par_iter_mut()
        .enumerate()
        .for_each(|(trial, slot)| *slot = one_trial(params, tau, seed, trial as u64));

    let mean = totals.iter().sum::<f64>() / trials as f64;
    let stderr = if trials > 1 {
        let var =
            totals.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (trials as f64 - 1.0);
        (var / trials as f64).sqrt()
    } else {
        0.0
    };
    Ok(SimStats {
        mean,
        stderr,
        trials,
    })
}

fn one_trial(params: &ModelParams, tau: u32, seed: u64, trial: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);

    let n = params.n as f64;
    let a = params.a;
    let overhead = params.lambda * a;
    let r2 = params.r * params.r;

    let mut total = 0.0;
    let mut alive = params.g * params.g;
    let mut side_div = params.g as f64; // g * r^i
    for _ in 0..tau - 1 {
        let boundary = 4.0 * n * a / side_div;
        let wholesale = (n / side_div) * (n / side_div);
        let mut subdividing = 0u64;
        for _ in 0..alive {
            if rng.gen_bool(params.p) {
                subdividing += 1;
            }
        }
        total += alive as f64 * boundary
            + subdividing as f64 * overhead
            + (alive - subdividing) as f64 * wholesale;
        alive = subdividing * r2;
        side_div *= params.r as f64;
    }
    let elements = (n / side_div) * (n / side_div);
    total + alive as f64 * elements * a
}
