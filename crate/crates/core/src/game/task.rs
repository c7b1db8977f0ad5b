use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::input::{InputSequence, InputSymbol, Sign};
use crate::dyadic::Dyadic;
use crate::error::{invalid, Result};

/// Largest game length [`enumerate_promise`] will materialize.
pub const PROMISE_MAX_N: usize = 30;

/// `cos(π m / 2)` by lookup on `m mod 4`.
pub fn cos_half_pi(m: u64) -> i8 {
    match m % 4 {
        0 => 1,
        2 => -1,
        _ => 0,
    }
}

/// Value of the task function: `±1` on promise support, `0` off it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TaskValue(i8);

impl TaskValue {
    pub fn value(self) -> i8 {
        self.0
    }

    pub fn as_sign(self) -> Option<Sign> {
        Sign::try_from(self.0).ok()
    }
}

/// `T_n = ∏ y_l · cos(π/2 · Σ x_k)`, evaluated in integers.
pub fn task_function(seq: &InputSequence) -> TaskValue {
    TaskValue(seq.y_product().value() * cos_half_pi(seq.xsum()))
}

/// Promise probability of an x-string: `2^(1-n)` on even parity, else 0.
pub fn promise_weight(xs: &[u8]) -> Result<Dyadic> {
    if xs.is_empty() {
        return Err(invalid("x-string must be non-empty"));
    }
    if let Some(b) = xs.iter().find(|&&b| b > 1) {
        return Err(invalid(format!("x-string entries must be 0 or 1, got {b}")));
    }
    let n = xs.len();
    if n > 63 {
        return Err(invalid(format!("x-string too long ({n})")));
    }
    let sum: u64 = xs.iter().map(|&b| b as u64).sum();
    Ok(if sum.is_multiple_of(2) {
        Dyadic::new(1, (n - 1) as u32)
    } else {
        Dyadic::ZERO
    })
}

/// The even-parity promise distribution over x-strings of length `n`.
///
/// All support strings carry the same weight `2^(1-n)`, so only the support
/// is stored (as bit masks, bit `k` = `x_{k+1}`), in lexicographic order of
/// the x-string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PromiseEnsemble {
    n: usize,
    support: Vec<u32>,
}

/// One support string of a [`PromiseEnsemble`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PromiseEntry {
    pub x: Vec<u8>,
    pub weight: Dyadic,
}

impl PromiseEnsemble {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Weight shared by every support string.
    pub fn weight(&self) -> Dyadic {
        Dyadic::new(1, (self.n - 1) as u32)
    }

    pub fn masks(&self) -> &[u32] {
        &self.support
    }

    pub fn entries(&self) -> impl Iterator<Item = PromiseEntry> + '_ {
        let weight = self.weight();
        self.support.iter().map(move |&m| PromiseEntry {
            x: (0..self.n).map(|k| ((m >> k) & 1) as u8).collect(),
            weight,
        })
    }

    pub fn total_weight(&self) -> Dyadic {
        self.entries().map(|e| e.weight).sum()
    }
}

fn x_string(n: usize, mask: u32) -> String {
    (0..n).map(|k| if (mask >> k) & 1 == 1 { '1' } else { '0' }).collect()
}

impl Serialize for PromiseEnsemble {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            x: String,
            weight_num: i64,
            weight_log2_den: u32,
        }
        let w = self.weight();
        let entries: Vec<Entry> = self
            .support
            .iter()
            .map(|&m| Entry {
                x: x_string(self.n, m),
                weight_num: w.numerator(),
                weight_log2_den: w.log2_denominator(),
            })
            .collect();
        let mut st = serializer.serialize_struct("PromiseEnsemble", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for PromiseEnsemble {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;

        #[derive(Deserialize)]
        struct Entry {
            x: String,
            weight_num: i64,
            weight_log2_den: u32,
        }
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            entries: Vec<Entry>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let expected = enumerate_promise(raw.n).map_err(D::Error::custom)?;
        let got: Vec<(String, Dyadic)> = raw
            .entries
            .iter()
            .map(|e| (e.x.clone(), Dyadic::new(e.weight_num, e.weight_log2_den)))
            .collect();
        let want: Vec<(String, Dyadic)> = expected
            .support
            .iter()
            .map(|&m| (x_string(raw.n, m), expected.weight()))
            .collect();
        if got != want {
            return Err(D::Error::custom("entries are not the even-parity promise ensemble"));
        }
        Ok(expected)
    }
}

/// All even-parity x-strings of length `n` with their weights.
pub fn enumerate_promise(n: usize) -> Result<PromiseEnsemble> {
    if !(1..=PROMISE_MAX_N).contains(&n) {
        return Err(invalid(format!(
            "promise enumeration needs 1 <= n <= {PROMISE_MAX_N}, got {n}"
        )));
    }
    let rev = |m: u32| m.reverse_bits() >> (32 - n);
    // Lexicographic order of the string x_1 x_2 ... x_n.
    let support = (0u32..1 << n).map(rev).filter(|m| m.count_ones() % 2 == 0).collect();
    Ok(PromiseEnsemble { n, support })
}

/// Draws one input sequence from the promise: `n - 1` free x bits, the last
/// fixed by parity, and uniform independent `y'` bits.
pub fn sample_input<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<InputSequence> {
    if n == 0 || n > 64 {
        return Err(invalid(format!("sample length must be in 1..=64, got {n}")));
    }
    let mut symbols = Vec::with_capacity(n);
    let mut parity = 0u8;
    for k in 0..n {
        let x = if k + 1 == n { parity } else { rng.gen_range(0..=1u8) };
        parity ^= x;
        symbols.push(InputSymbol::new(x, rng.gen_range(0..=1u8))?);
    }
    InputSequence::new(symbols)
}
