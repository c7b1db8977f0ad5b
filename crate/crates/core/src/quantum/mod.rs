//! The qubit phase-shift protocol and sequential spin measurements.

mod protocol;
mod sequential;

pub use protocol::{
    phase_gate, quantum_fidelity, quantum_fidelity_exact, run_protocol, sample_protocol, simulate_protocol,
    ProtocolRun, QubitState, Unitary2, DETERMINISM_TOL,
};
pub use sequential::{
    analytic_correlator, correlator, dot, norm, sample_sequence, sequential_distribution, BlochState, Direction,
    OutcomeDistribution, Vec3, MAX_MEASUREMENTS,
};
