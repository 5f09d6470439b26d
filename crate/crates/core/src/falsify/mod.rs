//! Floating-point evidence: RK4 trajectories, simulation-based invariant
//! falsification and sign probes. Nothing here feeds a verdict.

mod ci;
mod probe;
mod rk4;

pub use ci::{numeric_ci_check, sample_initial, CiOutcome, SampleBudget};
pub use probe::{probe_step, sign_probe, ProbeOutcome, NOISE_FLOOR, PROBE_STEPS};
pub use rk4::{integrate, rk4_step, Direction, Trajectory};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FalsifyError {
    #[error("invalid budget: {0}")]
    Budget(String),
    #[error("problem is not closed: {0}")]
    Parametric(String),
    #[error("cannot sample initial states: {0}")]
    CannotSample(String),
}
