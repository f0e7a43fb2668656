//! Time evolution of density matrices.
//!
//! Every backend integrates with fixed-step classical RK4 and checks the
//! state invariants (trace, Hermiticity, positivity) after every step. A
//! violation aborts the run; states are never renormalised or projected.

mod anneal;
mod exact_bath;
mod integrate;
mod partial_trace;
mod state;

pub use anneal::{evolve_annealing, Schedule, ScheduleFamily};
pub use exact_bath::{
    build_bath_hamiltonian, evolve_exact_bath, thermal_mode_state, BathHamiltonian, GIBBS_TAIL_TOL,
    MAX_EXACT_DIM,
};
pub use integrate::{evolve_closed, evolve_lindblad, step_count, DEFAULT_DT, STEP_GUARD};
pub use partial_trace::{partial_trace, partial_trace_matrix};
pub(crate) use state::hermitian_part;
pub use state::{
    check_state, DensityMatrix, StateChecks, Trajectory, HERMITICITY_TOL, POSITIVITY_TOL, TRACE_TOL,
};
