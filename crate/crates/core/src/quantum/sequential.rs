//! Sequences of projective spin measurements on one qubit.
//!
//! Measuring `n·σ` with outcome `v` has probability `½(1 + v n·s)` and
//! leaves the Bloch vector `v n`, so a measurement sequence is a Markov chain
//! on Bloch vectors.

use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::game::Sign;

const UNIT_TOL: f64 = 1e-12;

/// Maximum sequence length for [`sequential_distribution`].
pub const MAX_MEASUREMENTS: usize = 8;

pub type Vec3 = [f64; 3];

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// A qubit density matrix `½(1 + s·σ)`, `|s| <= 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochState {
    s: Vec3,
}

impl BlochState {
    pub fn new(s: Vec3) -> Result<Self> {
        if s.iter().any(|c| !c.is_finite()) || norm(&s) > 1.0 + UNIT_TOL {
            return Err(invalid(format!("Bloch vector {s:?} has length > 1")));
        }
        Ok(BlochState { s })
    }

    pub fn maximally_mixed() -> Self {
        BlochState { s: [0.0; 3] }
    }

    pub fn vector(&self) -> Vec3 {
        self.s
    }
}

/// A unit vector naming a spin observable `n·σ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    n: Vec3,
}

impl Direction {
    pub fn new(n: Vec3) -> Result<Self> {
        if n.iter().any(|c| !c.is_finite()) || (norm(&n) - 1.0).abs() > UNIT_TOL {
            return Err(invalid(format!("direction {n:?} is not a unit vector")));
        }
        Ok(Direction { n })
    }

    /// Rescales any non-zero vector to unit length.
    pub fn normalized(v: Vec3) -> Result<Self> {
        let len = norm(&v);
        if !(len.is_finite() && len > 0.0) {
            return Err(invalid(format!("cannot normalize {v:?}")));
        }
        Ok(Direction {
            n: [v[0] / len, v[1] / len, v[2] / len],
        })
    }

    /// `(sin θ cos φ, sin θ sin φ, cos θ)`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Direction {
            n: [st * cp, st * sp, ct],
        }
    }

    pub fn x() -> Self {
        Direction { n: [1.0, 0.0, 0.0] }
    }

    pub fn y() -> Self {
        Direction { n: [0.0, 1.0, 0.0] }
    }

    pub fn z() -> Self {
        Direction { n: [0.0, 0.0, 1.0] }
    }

    pub fn vector(&self) -> Vec3 {
        self.n
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        dot(&self.n, &other.n)
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.n.serialize(serializer)
    }
}

/// Joint distribution of a measurement sequence.
///
/// Outcome tuple `i` has `v_k = -1` exactly when bit `k` of `i` is set; all
/// `2^m` tuples are present, including zero-probability ones.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution {
    initial: BlochState,
    dirs: Vec<Direction>,
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn outcome(&self, index: usize) -> Vec<Sign> {
        (0..self.dirs.len())
            .map(|k| Sign::from_bit((index >> k) as u8))
            .collect()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<Sign>, f64)> + '_ {
        self.probs.iter().enumerate().map(|(i, &p)| (self.outcome(i), p))
    }

    /// `Σ (∏ v_k) P(v)`.
    pub fn product_expectation(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, &p)| if i.count_ones() % 2 == 0 { p } else { -p })
            .sum()
    }

    /// Marginal distribution of the first `m` outcomes.
    pub fn marginal(&self, m: usize) -> Vec<f64> {
        let mut out = vec![0.0; 1 << m.min(self.dirs.len())];
        let mask = out.len() - 1;
        for (i, &p) in self.probs.iter().enumerate() {
            out[i & mask] += p;
        }
        out
    }
}

impl Serialize for OutcomeDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Outcome {
            v: Vec<i8>,
            p: f64,
        }
        let outcomes: Vec<Outcome> = self
            .iter()
            .map(|(v, p)| Outcome {
                v: v.into_iter().map(Sign::value).collect(),
                p,
            })
            .collect();
        let mut st = serializer.serialize_struct("OutcomeDistribution", 3)?;
        st.serialize_field("dirs", &self.dirs)?;
        st.serialize_field("s", &self.initial.s)?;
        st.serialize_field("outcomes", &outcomes)?;
        st.end()
    }
}

fn check_len(dirs: &[Direction]) -> Result<()> {
    if dirs.is_empty() || dirs.len() > MAX_MEASUREMENTS {
        return Err(invalid(format!(
            "need between 1 and {MAX_MEASUREMENTS} measurement directions, got {}",
            dirs.len()
        )));
    }
    Ok(())
}

/// Joint outcome probabilities of measuring `dirs` in order, starting from
/// `initial`.
pub fn sequential_distribution(initial: &BlochState, dirs: &[Direction]) -> Result<OutcomeDistribution> {
    check_len(dirs)?;
    let m = dirs.len();
    let probs = (0..1usize << m)
        .map(|i| {
            let mut state = initial.s;
            let mut p = 1.0;
            for (k, d) in dirs.iter().enumerate() {
                let v = Sign::from_bit((i >> k) as u8).to_f64();
                p *= 0.5 * (1.0 + v * dot(&d.n, &state));
                state = [v * d.n[0], v * d.n[1], v * d.n[2]];
            }
            p
        })
        .collect();
    Ok(OutcomeDistribution {
        initial: *initial,
        dirs: dirs.to_vec(),
        probs,
    })
}

/// Sequential correlation function `Σ (∏ v_k) P(v)`.
pub fn correlator(initial: &BlochState, dirs: &[Direction]) -> Result<f64> {
    Ok(sequential_distribution(initial, dirs)?.product_expectation())
}

/// Closed form of [`correlator`]: `(d1·d2)(d3·d4)···` for an even number of
/// measurements, `(s·d1)(d2·d3)(d4·d5)···` for an odd number.
pub fn analytic_correlator(initial: &BlochState, dirs: &[Direction]) -> Result<f64> {
    check_len(dirs)?;
    let (head, rest) = if dirs.len() % 2 == 1 {
        (dot(&initial.s, &dirs[0].n), &dirs[1..])
    } else {
        (1.0, dirs)
    };
    Ok(rest.chunks(2).fold(head, |acc, pair| acc * pair[0].dot(&pair[1])))
}

/// Draws one outcome sequence by walking the chain.
pub fn sample_sequence<R: Rng + ?Sized>(initial: &BlochState, dirs: &[Direction], rng: &mut R) -> Result<Vec<Sign>> {
    check_len(dirs)?;
    let mut state = initial.s;
    Ok(dirs
        .iter()
        .map(|d| {
            let p_plus = 0.5 * (1.0 + dot(&d.n, &state));
            let v = if rng.gen::<f64>() < p_plus {
                Sign::Plus
            } else {
                Sign::Minus
            };
            let f = v.to_f64();
            state = [f * d.n[0], f * d.n[1], f * d.n[2]];
            v
        })
        .collect())
}
