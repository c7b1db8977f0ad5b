//! Exact dyadic rationals `num / 2^log2_den`.
//!
//! Every probability and fidelity in the game model has a power-of-two
//! denominator, so a dyadic type is enough to keep all search paths exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error};

/// A rational number `num / 2^log2_den`, always kept in lowest terms.
///
/// Zero is represented as `0 / 2^0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDyadic", into = "RawDyadic")]
pub struct Dyadic {
    num: i64,
    log2_den: u32,
}

#[derive(Serialize, Deserialize)]
struct RawDyadic {
    num: i64,
    log2_den: u32,
}

impl TryFrom<RawDyadic> for Dyadic {
    type Error = Error;

    fn try_from(raw: RawDyadic) -> Result<Self, Error> {
        if raw.log2_den > 62 {
            return Err(invalid(format!("denominator 2^{} is too large", raw.log2_den)));
        }
        Ok(Dyadic::new(raw.num, raw.log2_den))
    }
}

impl From<Dyadic> for RawDyadic {
    fn from(d: Dyadic) -> Self {
        RawDyadic {
            num: d.num,
            log2_den: d.log2_den,
        }
    }
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, log2_den: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, log2_den: 0 };

    pub fn new(num: i64, log2_den: u32) -> Self {
        Self::normalized(num as i128, log2_den as i64)
    }

    pub fn from_int(value: i64) -> Self {
        Dyadic {
            num: value,
            log2_den: 0,
        }
    }

    /// `2^exp` for any (possibly negative) exponent.
    pub fn pow2(exp: i32) -> Self {
        Self::ONE.mul_pow2(exp)
    }

    pub fn numerator(self) -> i64 {
        self.num
    }

    pub fn log2_denominator(self) -> u32 {
        self.log2_den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// Multiplies by `2^k`.
    pub fn mul_pow2(self, k: i32) -> Self {
        Self::normalized(self.num as i128, self.log2_den as i64 - k as i64)
    }

    /// Divides by another dyadic whose magnitude is a power of two.
    ///
    /// Returns `None` when the quotient is not dyadic.
    pub fn checked_div(self, rhs: Dyadic) -> Option<Self> {
        if rhs.num == 0 || !rhs.num.unsigned_abs().is_power_of_two() {
            return None;
        }
        let shift = rhs.num.unsigned_abs().trailing_zeros() as i32;
        let q = self.mul_pow2(rhs.log2_den as i32 - shift);
        Some(if rhs.num < 0 { -q } else { q })
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / 2f64.powi(self.log2_den as i32)
    }

    fn normalized(mut num: i128, mut log2_den: i64) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        while log2_den > 0 && num % 2 == 0 {
            num /= 2;
            log2_den -= 1;
        }
        if log2_den < 0 {
            num <<= (-log2_den) as u32;
            log2_den = 0;
        }
        let num = i64::try_from(num).expect("dyadic numerator overflow");
        let log2_den = u32::try_from(log2_den).expect("dyadic denominator overflow");
        Dyadic { num, log2_den }
    }

    fn aligned(self, rhs: Dyadic) -> (i128, i128, u32) {
        let den = self.log2_den.max(rhs.log2_den);
        let a = (self.num as i128) << (den - self.log2_den);
        let b = (rhs.num as i128) << (den - rhs.log2_den);
        (a, b, den)
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: Dyadic) -> Dyadic {
        let (a, b, den) = self.aligned(rhs);
        Self::normalized(a + b, den as i64)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;

    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            log2_den: self.log2_den,
        }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;

    fn mul(self, rhs: Dyadic) -> Dyadic {
        Self::normalized(
            self.num as i128 * rhs.num as i128,
            self.log2_den as i64 + rhs.log2_den as i64,
        )
    }
}

impl std::iter::Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::ZERO, Add::add)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(*other);
        a.cmp(&b)
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}

/// Formats as `p/2^q`, e.g. `1/2^1` for one half and `2/2^0` for two.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.log2_den)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || invalid(format!("expected `p/2^q`, got {s:?}"));
        let (num, den) = s.split_once("/2^").ok_or_else(bad)?;
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: u32 = den.trim().parse().map_err(|_| bad())?;
        if den > 62 {
            return Err(bad());
        }
        Ok(Dyadic::new(num, den))
    }
}
