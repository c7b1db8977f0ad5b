//! Temporal CHSH, the three-time extension, and the odd-`n` family.

mod general;
mod optimize;
mod report;
mod temporal;

pub use general::{
    general_bound, general_bound_search, general_lhs, violation_ratio, BoundMode, GeneralBoundCheck, SignChoice,
};
pub use optimize::{sphere_lattice, SphereOptimum, SphereSearch};
pub use report::{ChshSettings, InequalityKind, InequalityReport, MerminSettings, Witness, VIOLATION_MARGIN};
pub use temporal::{
    chsh_temporal, dot_correlator, maximize_chsh, maximize_chsh_with, maximize_mermin_for_state,
    maximize_mermin_temporal, mermin_temporal, sequential_correlator3, TEMPORAL_CLASSICAL_BOUND, TSIRELSON,
};
