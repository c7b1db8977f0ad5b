//! The unnormalized odd-`n` inequality family
//! `Σ_{x,y} ∏y_l · cos(π/2 Σx) · ∏c_k(x_k) · A(X) <= 2^((n-1)/2) · 2^n`.
//!
//! Each sign choice `c` indexes one member of the family; its classical
//! bound is the maximum over macrorealist answers `A`.

use rayon::prelude::*;

use super::report::{InequalityKind, InequalityReport, Witness};
use crate::classical::{classical_bound, max_weighted_general, TernaryWeights, BRUTE_FORCE_LONG_MAX_N};
use crate::dyadic::Dyadic;
use crate::error::{invalid, Error, Result};
use crate::game::{enumerate_promise, task_function, InputSequence, Sign, EXACT_FIDELITY_MAX_N};
use crate::quantum::quantum_fidelity_exact;

/// Per-step sign functions `c_k : {0,1} -> ±1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignChoice {
    c: Vec<[Sign; 2]>,
}

impl SignChoice {
    pub fn new(c: Vec<[Sign; 2]>) -> Result<Self> {
        if c.is_empty() {
            return Err(invalid("sign choice needs at least one step"));
        }
        Ok(SignChoice { c })
    }

    pub fn all_plus(n: usize) -> Self {
        SignChoice {
            c: vec![[Sign::Plus; 2]; n.max(1)],
        }
    }

    /// Bits `2k` and `2k + 1` are `c_k(0)` and `c_k(1)`.
    pub fn from_encoding(n: usize, encoding: u64) -> Result<Self> {
        if n == 0 || n > 31 || encoding >> (2 * n) != 0 {
            return Err(invalid(format!("sign encoding {encoding:#x} out of range for n = {n}")));
        }
        Ok(SignChoice {
            c: (0..n)
                .map(|k| {
                    [
                        Sign::from_bit((encoding >> (2 * k)) as u8),
                        Sign::from_bit((encoding >> (2 * k + 1)) as u8),
                    ]
                })
                .collect(),
        })
    }

    pub fn encoding(&self) -> u64 {
        self.c
            .iter()
            .enumerate()
            .map(|(k, [c0, c1])| ((c0.bit() | c1.bit() << 1) as u64) << (2 * k))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn signs(&self) -> &[[Sign; 2]] {
        &self.c
    }

    /// `∏ c_k(x_k)`.
    pub fn value(&self, seq: &InputSequence) -> Sign {
        self.c
            .iter()
            .zip(seq.symbols())
            .fold(Sign::Plus, |acc, (c, s)| acc * c[s.x() as usize])
    }
}

fn check_odd(n: usize) -> Result<()> {
    if n.is_multiple_of(2) {
        return Err(invalid(format!("the inequality is stated for odd n, got {n}")));
    }
    Ok(())
}

/// Right-hand side `2^((n-1)/2) · 2^n` for odd `n`.
pub fn general_bound(n: usize) -> Result<i64> {
    check_odd(n)?;
    if n > 31 {
        return Err(invalid(format!("n = {n} too large")));
    }
    Ok(1i64 << ((n - 1) / 2 + n))
}

/// Left-hand side for one answer function and sign choice, summed exactly
/// over all `4^n` inputs (odd-parity inputs contribute zero and are skipped).
pub fn general_lhs<F>(answer: F, signs: &SignChoice, n: usize) -> Result<i64>
where
    F: Fn(&InputSequence) -> Sign + Sync,
{
    check_odd(n)?;
    if n > EXACT_FIDELITY_MAX_N {
        return Err(Error::Capacity {
            what: "exact inequality evaluation",
            n,
            max: EXACT_FIDELITY_MAX_N,
        });
    }
    if signs.len() != n {
        return Err(invalid(format!("sign choice has {} steps, expected {n}", signs.len())));
    }
    let ensemble = enumerate_promise(n)?;
    Ok(ensemble
        .masks()
        .par_iter()
        .map(|&xmask| {
            let mut seq = InputSequence::from_masks(n, xmask as u64, 0);
            let mut acc = 0i64;
            for ymask in 0..1u64 << n {
                seq.overwrite_masks(xmask as u64, ymask);
                let w = task_function(&seq).value() * signs.value(&seq).value() * answer(&seq).value();
                acc += w as i64;
            }
            acc
        })
        .sum())
}

/// How the sign choices are quantified when checking the bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundMode {
    /// One inequality per sign choice, each maximized over answers.
    Family,
    /// A single maximum over answers and sign choices together.
    Joint,
}

/// Exhaustive bound check over every general strategy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralBoundCheck {
    pub n: usize,
    pub mode: BoundMode,
    pub bound: i64,
    /// Maximum for each sign encoding (family mode only).
    pub per_sign_max: Vec<i64>,
    pub max_lhs: i64,
    pub argmax_strategy: u64,
    pub argmax_signs: u64,
}

impl GeneralBoundCheck {
    pub fn holds(&self) -> bool {
        self.max_lhs <= self.bound && self.per_sign_max.iter().all(|&m| m <= self.bound)
    }

    pub fn report(&self) -> InequalityReport {
        InequalityReport::new(
            InequalityKind::General,
            Some(self.n),
            self.max_lhs as f64,
            self.bound as f64,
            Witness::General {
                strategy: format!("{:x}", self.argmax_strategy),
                signs: format!("{:x}", self.argmax_signs),
            },
        )
    }
}

/// Maximizes the left-hand side over all `2 · 256^n` general strategies
/// for every one of the `4^n` sign choices.
pub fn general_bound_search(n: usize, mode: BoundMode) -> Result<GeneralBoundCheck> {
    check_odd(n)?;
    if n > BRUTE_FORCE_LONG_MAX_N {
        return Err(Error::Capacity {
            what: "general strategy brute force",
            n,
            max: BRUTE_FORCE_LONG_MAX_N,
        });
    }
    let choices: Vec<SignChoice> = (0..1u64 << (2 * n))
        .map(|e| SignChoice::from_encoding(n, e))
        .collect::<Result<_>>()?;
    let weights: Vec<TernaryWeights> = choices
        .iter()
        .map(|c| TernaryWeights::from_fn(n, |s| task_function(s).value() * c.value(s).value()))
        .collect();
    let maxima = max_weighted_general(n, &weights)?;
    // First (lowest sign encoding) maximum wins ties.
    let (argmax_signs, &(max_lhs, argmax_strategy)) = maxima
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, &(i64, u64))>, (i, m)| match best {
            Some((_, b)) if b.0 >= m.0 => best,
            _ => Some((i, m)),
        })
        .expect("at least one sign choice");
    let per_sign_max = match mode {
        BoundMode::Family => maxima.iter().map(|m| m.0).collect(),
        BoundMode::Joint => Vec::new(),
    };
    Ok(GeneralBoundCheck {
        n,
        mode,
        bound: general_bound(n)?,
        per_sign_max,
        max_lhs,
        argmax_strategy,
        argmax_signs: argmax_signs as u64,
    })
}

/// Quantum fidelity over the classical bound, exactly.
pub fn violation_ratio(n: usize) -> Result<Dyadic> {
    let bound = classical_bound(n)?;
    let q = quantum_fidelity_exact(n)?;
    Ok(q.checked_div(bound).expect("the bound is a power of two"))
}
