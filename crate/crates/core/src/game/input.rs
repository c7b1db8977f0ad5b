use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A dichotomic value `±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^bit`.
    pub fn from_bit(bit: u8) -> Sign {
        if bit & 1 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// Inverse of [`Sign::from_bit`].
    pub fn bit(self) -> u8 {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.value() as f64
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.value()
    }
}

impl TryFrom<i8> for Sign {
    type Error = crate::Error;

    fn try_from(v: i8) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(invalid(format!("expected ±1, got {v}"))),
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    // Multiplying signs adds their bits mod 2.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_bit(self.bit() ^ rhs.bit())
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        Sign::from_bit(self.bit() ^ 1)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// The two input bits applied at one step: `x` and `y'`.
///
/// The step's operation code is `X = 2 y' + x`, and `y = (-1)^{y'}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct InputSymbol {
    x: u8,
    yprime: u8,
}

impl InputSymbol {
    pub fn new(x: u8, yprime: u8) -> Result<Self> {
        if x > 1 || yprime > 1 {
            return Err(invalid(format!("input bits must be 0 or 1, got x={x}, y'={yprime}")));
        }
        Ok(InputSymbol { x, yprime })
    }

    pub fn from_code(code: u8) -> Result<Self> {
        if code > 3 {
            return Err(invalid(format!("operation code must be in 0..=3, got {code}")));
        }
        Ok(Self::from_code_unchecked(code))
    }

    pub(crate) fn from_code_unchecked(code: u8) -> Self {
        InputSymbol {
            x: code & 1,
            yprime: (code >> 1) & 1,
        }
    }

    pub fn x(self) -> u8 {
        self.x
    }

    pub fn yprime(self) -> u8 {
        self.yprime
    }

    pub fn y(self) -> Sign {
        Sign::from_bit(self.yprime)
    }

    pub fn code(self) -> u8 {
        2 * self.yprime + self.x
    }
}

/// An ordered, non-empty list of input symbols `X_1 .. X_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InputSequence {
    symbols: Vec<InputSymbol>,
}

impl InputSequence {
    pub fn new(symbols: Vec<InputSymbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(invalid("input sequence must have at least one symbol"));
        }
        Ok(InputSequence { symbols })
    }

    /// Builds a sequence from parallel `x` and `y'` bit strings.
    pub fn from_bits(xs: &[u8], yprimes: &[u8]) -> Result<Self> {
        if xs.len() != yprimes.len() {
            return Err(invalid(format!(
                "x and y' strings differ in length ({} vs {})",
                xs.len(),
                yprimes.len()
            )));
        }
        let symbols = xs
            .iter()
            .zip(yprimes)
            .map(|(&x, &yp)| InputSymbol::new(x, yp))
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols)
    }

    /// Sequence number `index` in the canonical order over all `4^n` inputs:
    /// the code of step `k` (0-based) is bits `2k..2k+2` of `index`.
    pub fn from_index(n: usize, index: u64) -> Result<Self> {
        if n == 0 || n > 32 {
            return Err(invalid(format!("sequence length must be in 1..=32, got {n}")));
        }
        if n < 32 && index >> (2 * n) != 0 {
            return Err(invalid(format!("index {index} out of range for n = {n}")));
        }
        Ok(Self::from_index_unchecked(n, index))
    }

    pub(crate) fn from_index_unchecked(n: usize, index: u64) -> Self {
        let symbols = (0..n)
            .map(|k| InputSymbol::from_code_unchecked(((index >> (2 * k)) & 3) as u8))
            .collect();
        InputSequence { symbols }
    }

    /// Builds a sequence from bit masks: bit `k` of each mask is step `k`.
    pub(crate) fn from_masks(n: usize, xmask: u64, ymask: u64) -> Self {
        let mut seq = InputSequence {
            symbols: vec![InputSymbol { x: 0, yprime: 0 }; n],
        };
        seq.overwrite_masks(xmask, ymask);
        seq
    }

    pub(crate) fn overwrite_masks(&mut self, xmask: u64, ymask: u64) {
        for (k, s) in self.symbols.iter_mut().enumerate() {
            s.x = ((xmask >> k) & 1) as u8;
            s.yprime = ((ymask >> k) & 1) as u8;
        }
    }

    /// Position of this sequence in the canonical `4^n` ordering.
    pub fn index(&self) -> u64 {
        self.symbols
            .iter()
            .enumerate()
            .map(|(k, s)| (s.code() as u64) << (2 * k))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[InputSymbol] {
        &self.symbols
    }

    pub fn xsum(&self) -> u64 {
        self.symbols.iter().map(|s| s.x as u64).sum()
    }

    pub fn parity(&self) -> u8 {
        (self.xsum() % 2) as u8
    }

    /// `∏ y_k`.
    pub fn y_product(&self) -> Sign {
        self.symbols.iter().fold(Sign::Plus, |acc, s| acc * s.y())
    }

    /// The same x-string with every `y'` bit flipped.
    pub fn with_flipped_y(&self) -> Self {
        let symbols = self
            .symbols
            .iter()
            .map(|s| InputSymbol {
                x: s.x,
                yprime: s.yprime ^ 1,
            })
            .collect();
        InputSequence { symbols }
    }
}
