//! Inputs, the promise distribution, the task function and the fidelity
//! average shared by the classical and quantum models.

mod fidelity;
mod input;
mod task;

pub use fidelity::{fidelity_average, fidelity_monte_carlo, MonteCarloEstimate, EXACT_FIDELITY_MAX_N, MC_BLOCK};
pub use input::{InputSequence, InputSymbol, Sign};
pub use task::{
    cos_half_pi, enumerate_promise, promise_weight, sample_input, task_function, PromiseEnsemble, PromiseEntry,
    TaskValue, PROMISE_MAX_N,
};
