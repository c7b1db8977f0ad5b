//! Temporal Bell inequalities for sequentially operated two-state systems.
//!
//! A system is driven through `n` operations, each selected by two input bits
//! `(x_k, y'_k)`, and must end in a state that answers the task
//! `T_n = ∏ y_k · cos(π/2 Σ x_k)` on inputs whose x-bits have even parity.
//!
//! * [`game`]: inputs, the promise distribution, the task and the fidelity
//!   average.
//! * [`classical`]: macrorealist machines `A_k = F_k(X_k, A_{k-1})`, exact
//!   strategy searches and the bound `2^(1 - ⌈n/2⌉)`.
//! * [`quantum`]: the qubit phase-shift protocol that reaches fidelity 1, and
//!   sequential projective measurements of a qubit.
//! * [`inequalities`]: temporal CHSH and three-time expressions, their
//!   numerical maximization, and the unnormalized odd-`n` inequality family.

pub mod classical;
pub mod dyadic;
pub mod error;
pub mod game;
pub mod inequalities;
pub mod quantum;

pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use game::{InputSequence, InputSymbol, Sign};
