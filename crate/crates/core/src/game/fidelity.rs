//! The input-averaged fidelity `<A_n T_n>` of an answer function.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::input::{InputSequence, Sign};
use super::task::{enumerate_promise, sample_input, task_function};
use crate::dyadic::Dyadic;
use crate::error::{invalid, Error, Result};

/// Largest `n` for which [`fidelity_average`] enumerates exactly.
pub const EXACT_FIDELITY_MAX_N: usize = 14;

/// Monte-Carlo samples drawn from one independent generator stream.
pub const MC_BLOCK: u64 = 4096;

/// Exact fidelity of `answer` over all inputs of length `n`.
///
/// Inputs outside the promise have weight zero and are never passed to
/// `answer`; every promise-support input is (`2^(2n-1)` calls).
pub fn fidelity_average<F>(answer: F, n: usize) -> Result<Dyadic>
where
    F: Fn(&InputSequence) -> Sign + Sync,
{
    if n == 0 {
        return Err(invalid("fidelity needs n >= 1"));
    }
    if n > EXACT_FIDELITY_MAX_N {
        return Err(Error::Capacity {
            what: "exact fidelity enumeration",
            n,
            max: EXACT_FIDELITY_MAX_N,
        });
    }
    let ensemble = enumerate_promise(n)?;
    let ys = 1u64 << n;
    // Integer partial sums; the reduction is exact so worker order is irrelevant.
    let total: i64 = ensemble
        .masks()
        .par_iter()
        .map(|&xmask| {
            let mut seq = InputSequence::from_masks(n, xmask as u64, 0);
            let mut acc = 0i64;
            for ymask in 0..ys {
                seq.overwrite_masks(xmask as u64, ymask);
                let t = task_function(&seq).value() as i64;
                acc += t * answer(&seq).value() as i64;
            }
            acc
        })
        .sum();
    // Each term carries 2^(1-n) from the promise and 2^(-n) from the y average.
    Ok(Dyadic::new(total, (2 * n - 1) as u32))
}

/// A Monte-Carlo fidelity estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Samples `samples` inputs from the promise and averages `answer · T_n`.
///
/// Samples are drawn in blocks of [`MC_BLOCK`]; block `b` uses ChaCha8
/// seeded with `seed` on stream `b`, so the estimate does not depend on the
/// number of worker threads.
pub fn fidelity_monte_carlo<F>(answer: F, n: usize, samples: u64, seed: u64) -> Result<MonteCarloEstimate>
where
    F: Fn(&InputSequence) -> Sign + Sync,
{
    if n == 0 {
        return Err(invalid("fidelity needs n >= 1"));
    }
    if samples == 0 {
        return Err(invalid("Monte-Carlo estimate needs at least one sample"));
    }
    let blocks = samples.div_ceil(MC_BLOCK);
    let sums: Vec<i64> = (0..blocks)
        .into_par_iter()
        .map(|b| -> Result<i64> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let count = MC_BLOCK.min(samples - b * MC_BLOCK);
            let mut acc = 0i64;
            for _ in 0..count {
                let seq = sample_input(n, &mut rng)?;
                acc += task_function(&seq).value() as i64 * answer(&seq).value() as i64;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let total: i64 = sums.iter().sum();
    let mean = total as f64 / samples as f64;
    let var = (1.0 - mean * mean).max(0.0);
    Ok(MonteCarloEstimate {
        mean,
        std_error: (var / samples as f64).sqrt(),
        samples,
    })
}
