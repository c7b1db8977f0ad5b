use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Mul;

use num_complex::Complex64;
use rand::Rng;

use crate::dyadic::Dyadic;
use crate::error::{invalid, Error, Result};
use crate::game::{fidelity_average, InputSequence, Sign};

const NORM_TOL: f64 = 1e-12;

/// Probability slack within which a protocol outcome counts as certain.
pub const DETERMINISM_TOL: f64 = 1e-12;

/// `e^{iπX/2}` for `X = 0..4`, exact.
fn quarter_turn(code: u8) -> Complex64 {
    match code & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// A 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2(pub [[Complex64; 2]; 2]);

impl Unitary2 {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Unitary2([[one, zero], [zero, one]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Unitary2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_deviation(&self, other: &Unitary2) -> f64 {
        let mut d = 0f64;
        for r in 0..2 {
            for c in 0..2 {
                d = d.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        d
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: Unitary2) -> Unitary2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Unitary2(out)
    }
}

/// `diag(1, e^{iπX/2})`.
pub fn phase_gate(code: u8) -> Result<Unitary2> {
    if code > 3 {
        return Err(invalid(format!("phase gate code must be in 0..=3, got {code}")));
    }
    let zero = Complex64::new(0.0, 0.0);
    Ok(Unitary2([[Complex64::new(1.0, 0.0), zero], [zero, quarter_turn(code)]]))
}

/// A pure qubit state `amp0 |0> + amp1 |1>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitState {
    amp0: Complex64,
    amp1: Complex64,
}

impl QubitState {
    pub fn new(amp0: Complex64, amp1: Complex64) -> Result<Self> {
        let s = QubitState { amp0, amp1 };
        if (s.norm_sqr() - 1.0).abs() > NORM_TOL {
            return Err(invalid(format!("state norm² {} is not 1", s.norm_sqr())));
        }
        Ok(s)
    }

    /// `(|0> + |1>)/√2`.
    pub fn plus() -> Self {
        let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
        QubitState { amp0: a, amp1: a }
    }

    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        (self.amp0, self.amp1)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp0.norm_sqr() + self.amp1.norm_sqr()
    }

    pub fn apply(&self, u: &Unitary2) -> Self {
        let m = &u.0;
        QubitState {
            amp0: m[0][0] * self.amp0 + m[0][1] * self.amp1,
            amp1: m[1][0] * self.amp0 + m[1][1] * self.amp1,
        }
    }

    /// Probability of finding `(|0> + |1>)/√2` when measuring in the `±`
    /// basis; the other outcome has the complement.
    pub fn prob_plus(&self) -> f64 {
        (self.amp0 + self.amp1).norm_sqr() / 2.0
    }
}

/// Both evaluation paths of one protocol run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProtocolRun {
    /// `Σ X_k mod 4`: the exact accumulated phase in quarter turns.
    pub quarter_turns: u8,
    pub final_state: QubitState,
    /// Probability of the `+` outcome from the amplitudes.
    pub prob_plus: f64,
}

impl ProtocolRun {
    /// The certain outcome, from the exact phase count.
    pub fn outcome(&self) -> Result<Sign> {
        match self.quarter_turns {
            0 => Ok(Sign::Plus),
            2 => Ok(Sign::Minus),
            q => Err(Error::NonDeterministic(format!(
                "accumulated phase is {q}·π/2 (odd x-parity); the ± measurement is a coin flip"
            ))),
        }
    }
}

/// Prepares `(|0> + |1>)/√2`, applies one phase gate per input symbol, and
/// reports the final state with its `±`-basis statistics.
pub fn simulate_protocol(seq: &InputSequence) -> ProtocolRun {
    let mut state = QubitState::plus();
    let mut quarter_turns = 0u8;
    for sym in seq.symbols() {
        let code = sym.code();
        state = state.apply(&phase_gate(code).expect("symbol codes are in range"));
        quarter_turns = (quarter_turns + code) % 4;
    }
    ProtocolRun {
        quarter_turns,
        final_state: state,
        prob_plus: state.prob_plus(),
    }
}

/// Outcome of the protocol, certain on promise-support inputs.
///
/// Off the promise the outcome is a fair coin and
/// [`Error::NonDeterministic`] is returned.
pub fn run_protocol(seq: &InputSequence) -> Result<Sign> {
    let run = simulate_protocol(seq);
    let outcome = run.outcome()?;
    let p = match outcome {
        Sign::Plus => run.prob_plus,
        Sign::Minus => 1.0 - run.prob_plus,
    };
    assert!(
        (1.0 - p).abs() <= DETERMINISM_TOL,
        "amplitude path disagrees with phase count: p = {p} for {outcome}"
    );
    Ok(outcome)
}

/// Samples a `±` measurement of the final state.
pub fn sample_protocol<R: Rng + ?Sized>(seq: &InputSequence, rng: &mut R) -> Sign {
    let p = simulate_protocol(seq).prob_plus;
    if rng.gen::<f64>() < p {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Exact protocol fidelity over all promise inputs of length `n <= 14`.
pub fn quantum_fidelity_exact(n: usize) -> Result<Dyadic> {
    fidelity_average(|s| run_protocol(s).expect("fidelity only visits promise inputs"), n)
}

pub fn quantum_fidelity(n: usize) -> Result<f64> {
    quantum_fidelity_exact(n).map(Dyadic::to_f64)
}
