//! Exhaustive search over every two-state machine obeying the memory
//! constraint, evaluated bit-parallel over all `4^n` inputs at once.
//!
//! Inputs are indexed as in [`InputSequence::from_index`]. A machine's
//! behaviour on every input is one bit mask (bit set = answer `-1`), built one
//! step at a time from the previous step's mask. For the last step the eight
//! table cells act on disjoint input sets, so all 256 final tables of a
//! prefix are scored from eight cell sums by a subset-sum sweep.

use std::fs;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::strategy::{general_space_size, GeneralStrategy};
use super::{Best, SearchResult, SearchSpace};
use crate::dyadic::Dyadic;
use crate::error::{invalid, Error, Result};
use crate::game::{task_function, InputSequence};

/// Largest `n` searched by default.
pub const BRUTE_FORCE_MAX_N: usize = 3;
/// Largest `n` searched at all (`2 · 256^4 ≈ 8.6·10^9` machines).
pub const BRUTE_FORCE_LONG_MAX_N: usize = 4;

/// Per-input weights in `{-1, 0, +1}`, as two disjoint masks over the `4^n`
/// input indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryWeights {
    pub plus: Vec<u64>,
    pub minus: Vec<u64>,
}

impl TernaryWeights {
    pub fn from_fn(n: usize, weight: impl Fn(&InputSequence) -> i8) -> Self {
        let inputs = 1usize << (2 * n);
        let words = inputs.div_ceil(64);
        let mut plus = vec![0u64; words];
        let mut minus = vec![0u64; words];
        for idx in 0..inputs {
            match weight(&InputSequence::from_index_unchecked(n, idx as u64)) {
                1 => plus[idx / 64] |= 1 << (idx % 64),
                -1 => minus[idx / 64] |= 1 << (idx % 64),
                _ => {}
            }
        }
        TernaryWeights { plus, minus }
    }

    /// Weights `T_n(input)`; the weighted sum of a machine's answers is its
    /// fidelity times `2^(2n-1)`.
    pub fn task(n: usize) -> Self {
        Self::from_fn(n, |s| task_function(s).value())
    }
}

/// Resumable progress of a long scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: usize,
    pub next_task: u64,
    pub tasks: u64,
    pub best_value: i64,
    pub best_encoding: u64,
    pub elapsed_ms: u64,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Option<Self>> {
        match fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text)
                .map(Some)
                .map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display()))),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::Checkpoint(format!("{}: {e}", path.display()))),
        }
    }

    pub fn store(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        let text = serde_json::to_string_pretty(self).expect("checkpoint serializes");
        fs::write(&tmp, text)
            .and_then(|_| fs::rename(&tmp, path))
            .map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))
    }
}

struct Layout<const W: usize> {
    n: usize,
    // code_masks[k][X]: inputs whose step-k code is X.
    code_masks: Vec<[[u64; W]; 4]>,
    all: [u64; W],
}

impl<const W: usize> Layout<W> {
    fn new(n: usize) -> Self {
        let inputs = 1usize << (2 * n);
        assert!(inputs <= 64 * W, "layout too small for n = {n}");
        let mut code_masks = vec![[[0u64; W]; 4]; n];
        let mut all = [0u64; W];
        for idx in 0..inputs {
            all[idx / 64] |= 1 << (idx % 64);
            for (k, masks) in code_masks.iter_mut().enumerate() {
                masks[(idx >> (2 * k)) & 3][idx / 64] |= 1 << (idx % 64);
            }
        }
        Layout { n, code_masks, all }
    }

    fn initial(&self, a0_bit: u64) -> [u64; W] {
        if a0_bit == 1 {
            self.all
        } else {
            [0; W]
        }
    }

    fn step(&self, k: usize, table: u8, prev: &[u64; W]) -> [u64; W] {
        let mut out = [0u64; W];
        for code in 0..4 {
            let m = &self.code_masks[k][code];
            let from_plus = (table >> (2 * code)) & 1 == 1;
            let from_minus = (table >> (2 * code + 1)) & 1 == 1;
            for w in 0..W {
                let mut bits = 0;
                if from_plus {
                    bits |= m[w] & !prev[w];
                }
                if from_minus {
                    bits |= m[w] & prev[w];
                }
                out[w] |= bits;
            }
        }
        out
    }

    // Inputs falling in each last-step table cell `2X + bit(a_prev)`.
    fn cells(&self, prev: &[u64; W]) -> [[u64; W]; 8] {
        let mut cells = [[0u64; W]; 8];
        let last = &self.code_masks[self.n - 1];
        for code in 0..4 {
            for w in 0..W {
                cells[2 * code][w] = last[code][w] & !prev[w];
                cells[2 * code + 1][w] = last[code][w] & prev[w];
            }
        }
        cells
    }
}

fn weighted_count<const W: usize>(mask: &[u64; W], weights: &([u64; W], [u64; W])) -> i64 {
    mask.iter()
        .zip(weights.0.iter().zip(&weights.1))
        .map(|(m, (plus, minus))| (m & plus).count_ones() as i64 - (m & minus).count_ones() as i64)
        .sum()
}

// Best final table given the eight cell sums: returns (value, table), lowest
// table on ties.
fn best_last_table(cell_sums: &[i64; 8]) -> (i64, u8) {
    let mut values = [0i64; 256];
    values[0] = cell_sums.iter().sum();
    let mut best = (values[0], 0u8);
    for t in 1..256usize {
        let low = t.trailing_zeros() as usize;
        values[t] = values[t & (t - 1)] - 2 * cell_sums[low];
        if values[t] > best.0 {
            best = (values[t], t as u8);
        }
    }
    best
}

struct Scan<'a, const W: usize> {
    layout: &'a Layout<W>,
    weights: Vec<([u64; W], [u64; W])>,
}

impl<const W: usize> Scan<'_, W> {
    fn tasks(&self) -> u64 {
        if self.layout.n == 1 {
            2
        } else {
            512
        }
    }

    // Task `t` fixes the initial state and, for n >= 2, the first table.
    fn run_task(&self, task: u64) -> Vec<Best> {
        let n = self.layout.n;
        let mut best = vec![Best::NONE; self.weights.len()];
        if n == 1 {
            self.finish(&self.layout.initial(task), task << 8, &mut best);
        } else {
            let a0 = task >> 8;
            let t0 = (task & 0xff) as u8;
            let state = self.layout.step(0, t0, &self.layout.initial(a0));
            self.descend(1, &state, (a0 << (8 * n)) | t0 as u64, &mut best);
        }
        best
    }

    fn descend(&self, k: usize, state: &[u64; W], encoding: u64, best: &mut [Best]) {
        if k + 1 == self.layout.n {
            self.finish(state, encoding, best);
            return;
        }
        for t in 0..=255u8 {
            let next = self.layout.step(k, t, state);
            self.descend(k + 1, &next, encoding | (t as u64) << (8 * k), best);
        }
    }

    fn finish(&self, state: &[u64; W], encoding: u64, best: &mut [Best]) {
        let cells = self.layout.cells(state);
        let shift = 8 * (self.layout.n - 1);
        for (weights, best) in self.weights.iter().zip(best.iter_mut()) {
            let mut sums = [0i64; 8];
            for (s, cell) in sums.iter_mut().zip(&cells) {
                *s = weighted_count(cell, weights);
            }
            let (value, table) = best_last_table(&sums);
            best.offer(value, encoding | (table as u64) << shift);
        }
    }
}

fn merge_all(a: Vec<Best>, b: Vec<Best>) -> Vec<Best> {
    a.into_iter().zip(b).map(|(x, y)| Best::merge(x, y)).collect()
}

fn scan_with<const W: usize>(n: usize, weights: &[TernaryWeights]) -> Vec<Best> {
    let layout = Layout::<W>::new(n);
    let scan = Scan {
        layout: &layout,
        weights: weights.iter().map(to_fixed::<W>).collect(),
    };
    (0..scan.tasks())
        .into_par_iter()
        .map(|t| scan.run_task(t))
        .reduce(|| vec![Best::NONE; weights.len()], merge_all)
}

fn to_fixed<const W: usize>(w: &TernaryWeights) -> ([u64; W], [u64; W]) {
    let mut plus = [0u64; W];
    let mut minus = [0u64; W];
    plus[..w.plus.len()].copy_from_slice(&w.plus);
    minus[..w.minus.len()].copy_from_slice(&w.minus);
    (plus, minus)
}

fn check_n(n: usize, max: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("brute-force search needs n >= 1"));
    }
    if n > max {
        return Err(Error::Capacity {
            what: "general strategy brute force",
            n,
            max,
        });
    }
    Ok(())
}

fn check_weights(n: usize, weights: &[TernaryWeights]) -> Result<()> {
    let words = (1usize << (2 * n)).div_ceil(64);
    if weights.iter().any(|w| w.plus.len() != words || w.minus.len() != words) {
        return Err(invalid(format!("weight masks must have {words} words for n = {n}")));
    }
    Ok(())
}

/// Maximizes `Σ_inputs weight · answer` over every general strategy, once
/// per weight vector. Returns the best value and lowest maximizing encoding
/// for each.
pub fn max_weighted_general(n: usize, weights: &[TernaryWeights]) -> Result<Vec<(i64, u64)>> {
    check_n(n, BRUTE_FORCE_LONG_MAX_N)?;
    check_weights(n, weights)?;
    let best = if n <= 3 {
        scan_with::<1>(n, weights)
    } else {
        scan_with::<4>(n, weights)
    };
    Ok(best.into_iter().map(|b| (b.value, b.encoding)).collect())
}

/// `Σ_inputs weight · answer` of one strategy, through the same mask
/// machinery as the search.
pub fn weighted_value(strategy: &GeneralStrategy, weights: &TernaryWeights) -> Result<i64> {
    let n = strategy.len();
    check_n(n, BRUTE_FORCE_LONG_MAX_N)?;
    check_weights(n, std::slice::from_ref(weights))?;
    fn eval<const W: usize>(s: &GeneralStrategy, weights: &TernaryWeights) -> i64 {
        let layout = Layout::<W>::new(s.len());
        let mut state = layout.initial(s.initial().bit() as u64);
        for (k, t) in s.tables().iter().enumerate() {
            state = layout.step(k, t.bits(), &state);
        }
        let w = to_fixed::<W>(weights);
        // Answer +1 on clear bits, -1 on set bits.
        weighted_count(&layout.all, &w) - 2 * weighted_count(&state, &w)
    }
    Ok(if n <= 3 {
        eval::<1>(strategy, weights)
    } else {
        eval::<4>(strategy, weights)
    })
}

fn fidelity_result(n: usize, best: Best, start: Instant, prior_ms: u64) -> SearchResult {
    SearchResult {
        n,
        space: SearchSpace::General,
        max_fidelity: Dyadic::new(best.value, (2 * n - 1) as u32),
        argmax_encoding: best.encoding,
        strategies_scanned: general_space_size(n),
        elapsed_ms: prior_ms + start.elapsed().as_millis() as u64,
    }
}

/// Exact maximum fidelity over all `2 · 256^n` general strategies, `n <= 3`.
pub fn brute_force_search(n: usize) -> Result<SearchResult> {
    check_n(n, BRUTE_FORCE_MAX_N)?;
    let start = Instant::now();
    let best = scan_with::<1>(n, &[TernaryWeights::task(n)]);
    Ok(fidelity_result(n, best[0], start, 0))
}

/// Like [`brute_force_search`] but also accepts `n = 4`, saving progress to
/// `checkpoint` after every batch of tasks and resuming from it when present.
pub fn brute_force_search_resumable(n: usize, checkpoint: Option<&Path>) -> Result<SearchResult> {
    check_n(n, BRUTE_FORCE_LONG_MAX_N)?;
    let start = Instant::now();
    let weights = [TernaryWeights::task(n)];
    let Some(path) = checkpoint else {
        let best = if n <= 3 {
            scan_with::<1>(n, &weights)
        } else {
            scan_with::<4>(n, &weights)
        };
        return Ok(fidelity_result(n, best[0], start, 0));
    };
    if n <= 3 {
        resumable::<1>(n, &weights, path, start)
    } else {
        resumable::<4>(n, &weights, path, start)
    }
}

fn resumable<const W: usize>(
    n: usize,
    weights: &[TernaryWeights],
    path: &Path,
    start: Instant,
) -> Result<SearchResult> {
    let layout = Layout::<W>::new(n);
    let scan = Scan {
        layout: &layout,
        weights: weights.iter().map(to_fixed::<W>).collect(),
    };
    let tasks = scan.tasks();
    let mut cp = match Checkpoint::load(path)? {
        Some(cp) if cp.n == n && cp.tasks == tasks => cp,
        Some(cp) => {
            return Err(Error::Checkpoint(format!(
                "{} belongs to n = {} ({} tasks), not n = {n}",
                path.display(),
                cp.n,
                cp.tasks
            )))
        }
        None => Checkpoint {
            n,
            next_task: 0,
            tasks,
            best_value: Best::NONE.value,
            best_encoding: Best::NONE.encoding,
            elapsed_ms: 0,
        },
    };
    let prior_ms = cp.elapsed_ms;
    let batch = (rayon::current_num_threads() as u64 * 4).max(8);
    while cp.next_task < tasks {
        let end = (cp.next_task + batch).min(tasks);
        let found = (cp.next_task..end)
            .into_par_iter()
            .map(|t| scan.run_task(t)[0])
            .reduce(|| Best::NONE, Best::merge);
        let mut best = Best {
            value: cp.best_value,
            encoding: cp.best_encoding,
        };
        best.offer(found.value, found.encoding);
        cp.best_value = best.value;
        cp.best_encoding = best.encoding;
        cp.next_task = end;
        cp.elapsed_ms = prior_ms + start.elapsed().as_millis() as u64;
        cp.store(path)?;
    }
    Ok(fidelity_result(
        n,
        Best {
            value: cp.best_value,
            encoding: cp.best_encoding,
        },
        start,
        prior_ms,
    ))
}
