use std::time::Instant;

use rayon::prelude::*;

use super::strategy::{reduced_space_size, ReducedStrategy};
use super::{Best, SearchResult, SearchSpace};
use crate::dyadic::Dyadic;
use crate::error::{invalid, Error, Result};
use crate::game::{cos_half_pi, enumerate_promise};

/// Largest `n` accepted by [`reduced_search`].
pub const REDUCED_SEARCH_MAX_N: usize = 16;

/// Exact fidelity of a reduced strategy.
///
/// The `y` average is saturated for these strategies, leaving
/// `s0 · Σ_{even x} 2^(1-n) cos(π/2 Σx) ∏ c_k(x_k)`.
pub fn reduced_fidelity(strategy: &ReducedStrategy) -> Result<Dyadic> {
    let n = strategy.len();
    let ensemble = enumerate_promise(n)?;
    let c = strategy.signs();
    let total: i64 = ensemble
        .masks()
        .iter()
        .map(|&m| {
            let sign = (0..n).fold(strategy.s0(), |acc, k| acc * c[k][((m >> k) & 1) as usize]);
            cos_half_pi(m.count_ones() as u64) as i64 * sign.value() as i64
        })
        .sum();
    Ok(Dyadic::new(total, (n - 1) as u32))
}

/// The macrorealist bound `2^(1 - ⌈n/2⌉)`.
pub fn classical_bound(n: usize) -> Result<Dyadic> {
    if n == 0 {
        return Err(invalid("classical bound needs n >= 1"));
    }
    Ok(Dyadic::pow2(1 - n.div_ceil(2) as i32))
}

// Gaussian integer `re + i·im`.
type Gauss = (i64, i64);

fn gauss_mul(a: Gauss, b: Gauss) -> Gauss {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

// `c(0) + i c(1)` for the 2-bit choice (bit set means -1).
fn choice_factor(choice: u64) -> Gauss {
    let s = |bit: u64| if bit & 1 == 0 { 1 } else { -1 };
    (s(choice), s(choice >> 1))
}

/// Exhaustive maximum of [`reduced_fidelity`] over all `2 · 4^n` reduced
/// strategies.
///
/// Summing `i^{Σx} ∏ c_k(x_k)` over all x-strings factorizes into
/// `∏_k (c_k(0) + i c_k(1))`, whose real part is the even-parity sum. The
/// scan walks the strategy tree depth-first, one Gaussian product per node.
pub fn reduced_search(n: usize) -> Result<SearchResult> {
    if n == 0 {
        return Err(invalid("reduced search needs n >= 1"));
    }
    if n > REDUCED_SEARCH_MAX_N {
        return Err(Error::Capacity {
            what: "reduced strategy search",
            n,
            max: REDUCED_SEARCH_MAX_N,
        });
    }
    let start = Instant::now();
    // Split on the first `split` steps; workers own disjoint subtrees.
    let split = n.min(4);
    let best = (0..1u64 << (2 * split))
        .into_par_iter()
        .map(|prefix| {
            let mut p: Gauss = (1, 0);
            for k in 0..split {
                p = gauss_mul(p, choice_factor(prefix >> (2 * k)));
            }
            let mut best = Best::NONE;
            descend(n, split, p, prefix << 1, &mut best);
            best
        })
        .reduce(|| Best::NONE, Best::merge);
    Ok(SearchResult {
        n,
        space: SearchSpace::Reduced,
        max_fidelity: Dyadic::new(best.value, (n - 1) as u32),
        argmax_encoding: best.encoding,
        strategies_scanned: reduced_space_size(n),
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

fn descend(n: usize, depth: usize, p: Gauss, encoding: u64, best: &mut Best) {
    if depth == n {
        best.offer(p.0, encoding);
        best.offer(-p.0, encoding | 1);
        return;
    }
    for choice in 0..4u64 {
        descend(
            n,
            depth + 1,
            gauss_mul(p, choice_factor(choice)),
            encoding | choice << (1 + 2 * depth),
            best,
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Sign;

    #[test]
    fn reduced_fidelity_examples() {
        let one = ReducedStrategy::new(Sign::Plus, vec![[Sign::Plus; 2]]).unwrap();
        assert_eq!(reduced_fidelity(&one).unwrap(), Dyadic::ONE);
        let all_plus = ReducedStrategy::new(Sign::Plus, vec![[Sign::Plus; 2]; 3]).unwrap();
        assert_eq!(reduced_fidelity(&all_plus).unwrap(), Dyadic::new(-1, 1));
    }

    #[test]
    fn bound_examples() {
        assert_eq!(classical_bound(1).unwrap(), Dyadic::ONE);
        assert_eq!(classical_bound(3).unwrap(), Dyadic::new(1, 1));
        assert_eq!(classical_bound(4).unwrap(), Dyadic::new(1, 1));
        assert_eq!(classical_bound(5).unwrap(), Dyadic::new(1, 2));
        assert!(classical_bound(0).is_err());
    }

    // Naive scan over every encoding using the definition directly.
    fn naive_search(n: usize) -> (Dyadic, u64) {
        let mut best = (Dyadic::from_int(-2), 0);
        for enc in 0..reduced_space_size(n) {
            let f = reduced_fidelity(&ReducedStrategy::from_encoding(n, enc).unwrap()).unwrap();
            if f > best.0 {
                best = (f, enc);
            }
        }
        best
    }

    #[test]
    fn search_matches_naive_scan() {
        for n in 1..=5 {
            let fast = reduced_search(n).unwrap();
            let (max, argmax) = naive_search(n);
            assert_eq!(fast.max_fidelity, max, "n = {n}");
            assert_eq!(fast.argmax_encoding, argmax, "n = {n}");
            assert_eq!(fast.strategies_scanned, 2 << (2 * n));
        }
    }

    #[test]
    fn search_examples() {
        assert_eq!(reduced_search(2).unwrap().max_fidelity, Dyadic::ONE);
        assert_eq!(reduced_search(3).unwrap().max_fidelity, Dyadic::new(1, 1));
        assert_eq!(reduced_search(5).unwrap().max_fidelity, Dyadic::new(1, 2));
        assert!(matches!(reduced_search(17), Err(Error::Capacity { .. })));
    }

    #[test]
    fn sign_absorption_symmetry() {
        // Flipping s0 together with both values of one c_k leaves the fidelity unchanged.
        let n = 4;
        for enc in 0..reduced_space_size(n) {
            let f = reduced_fidelity(&ReducedStrategy::from_encoding(n, enc).unwrap()).unwrap();
            for k in 0..n {
                let flipped = enc ^ 1 ^ (0b11 << (1 + 2 * k));
                let g = reduced_fidelity(&ReducedStrategy::from_encoding(n, flipped).unwrap()).unwrap();
                assert_eq!(f, g);
            }
        }
    }
}
