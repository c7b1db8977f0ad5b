//! Macrorealist machines: two-state systems whose next state depends only on
//! the current state and the current input, and exhaustive searches over
//! them.

mod brute;
mod reduced;
mod strategy;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub use brute::{
    brute_force_search, brute_force_search_resumable, max_weighted_general, weighted_value, Checkpoint, TernaryWeights,
    BRUTE_FORCE_LONG_MAX_N, BRUTE_FORCE_MAX_N,
};
pub use reduced::{classical_bound, reduced_fidelity, reduced_search, REDUCED_SEARCH_MAX_N};
pub use strategy::{general_space_size, reduced_space_size, GeneralStrategy, ReducedStrategy, TransitionTable};

use crate::dyadic::Dyadic;

/// Which strategy family a search covered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchSpace {
    General,
    Reduced,
}

impl SearchSpace {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchSpace::General => "general",
            SearchSpace::Reduced => "reduced",
        }
    }
}

/// Outcome of an exhaustive strategy search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub n: usize,
    pub space: SearchSpace,
    pub max_fidelity: Dyadic,
    /// Lowest encoding attaining the maximum.
    pub argmax_encoding: u64,
    pub strategies_scanned: u64,
    pub elapsed_ms: u64,
}

impl SearchResult {
    pub fn argmax_hex(&self) -> String {
        format!("{:x}", self.argmax_encoding)
    }

    /// The maximizing reduced strategy, for reduced-space results.
    pub fn reduced_argmax(&self) -> Option<ReducedStrategy> {
        match self.space {
            SearchSpace::Reduced => ReducedStrategy::from_encoding(self.n, self.argmax_encoding).ok(),
            SearchSpace::General => None,
        }
    }

    /// The maximizing machine; reduced results are embedded.
    pub fn general_argmax(&self) -> GeneralStrategy {
        match self.space {
            SearchSpace::General => {
                GeneralStrategy::from_encoding(self.n, self.argmax_encoding).expect("search produced a valid encoding")
            }
            SearchSpace::Reduced => self
                .reduced_argmax()
                .expect("search produced a valid encoding")
                .to_general(),
        }
    }
}

impl Serialize for SearchResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SearchResult", 7)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("space", self.space.as_str())?;
        st.serialize_field("max_fidelity_num", &self.max_fidelity.numerator())?;
        st.serialize_field("max_fidelity_log2_den", &self.max_fidelity.log2_denominator())?;
        st.serialize_field("argmax_encoding", &self.argmax_hex())?;
        st.serialize_field("scanned", &self.strategies_scanned)?;
        st.serialize_field("elapsed_ms", &self.elapsed_ms)?;
        st.end()
    }
}

/// Running maximum with lowest-encoding tie-break; merging is associative
/// and commutative, so parallel reductions are schedule-independent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Best {
    pub value: i64,
    pub encoding: u64,
}

impl Best {
    pub const NONE: Best = Best {
        value: i64::MIN,
        encoding: u64::MAX,
    };

    pub fn offer(&mut self, value: i64, encoding: u64) {
        if value > self.value || (value == self.value && encoding < self.encoding) {
            *self = Best { value, encoding };
        }
    }

    pub fn merge(mut a: Best, b: Best) -> Best {
        a.offer(b.value, b.encoding);
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn search_result_json_schema() {
        let r = reduced_search(3).unwrap();
        let mut json = serde_json::to_value(&r).unwrap();
        json["elapsed_ms"] = 0.into();
        assert_eq!(
            json,
            serde_json::json!({
                "n": 3,
                "space": "reduced",
                "max_fidelity_num": 1,
                "max_fidelity_log2_den": 1,
                "argmax_encoding": r.argmax_hex(),
                "scanned": 128,
                "elapsed_ms": 0
            })
        );
    }

    #[test]
    fn best_merge_is_order_independent() {
        let items = [
            Best { value: 3, encoding: 9 },
            Best { value: 3, encoding: 2 },
            Best { value: 1, encoding: 0 },
        ];
        let fwd = items.iter().copied().fold(Best::NONE, Best::merge);
        let rev = items.iter().rev().copied().fold(Best::NONE, Best::merge);
        assert_eq!(fwd, rev);
        assert_eq!(fwd, Best { value: 3, encoding: 2 });
    }
}
