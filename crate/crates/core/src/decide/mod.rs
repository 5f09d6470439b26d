//! Discharging encodings through an external SMT-LIB solver, parameter
//! generation strategies, and verdicts.

mod check;
mod generate;
pub mod qe;
mod sexpr;
pub mod smtlib;
mod solver;
mod verdict;

pub(crate) use check::linear_root;
pub use check::{
    check_init_subset_domain, check_invariant, check_invariant_with_cap, check_validity, discharge,
    finite_points, with_pool, BoundInfo, CheckReport, Checker, GoalReport, Method,
};
pub use generate::{
    generate_constraint, pick_sample, GenerationMode, GenerationResult, Grid, Strategy,
};
pub use sexpr::ModelValue;
pub use solver::{interpret, run_script, SatStatus, SolverConfig, SolverResponse};
pub use verdict::{Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecideError {
    #[error("{0}")]
    Usage(String),
    #[error("encoding failed: {0}")]
    Encoding(String),
    #[error("i/o: {0}")]
    Io(String),
}

/// SMT-LIB text of every closed goal at `u0`, concatenated.
pub fn emit_scripts(
    checker: &Checker,
    u0: Option<&crate::polyring::Assignment>,
    cfg: &SolverConfig,
) -> Result<String, DecideError> {
    let goals = checker.goals_at(u0)?;
    let vars = &checker.problem().vars;
    Ok(goals
        .iter()
        .map(|g| {
            smtlib::validity_script(
                &g.formula.simplify(),
                vars,
                &cfg.logic,
                &cfg.options,
                g.kind.label(),
            )
        })
        .collect::<Vec<_>>()
        .join("\n"))
}

/// Text of the QE script for the parametric condition.
pub fn emit_qe(checker: &Checker) -> Result<String, DecideError> {
    let cond = checker
        .condition()
        .map_err(|e| DecideError::Encoding(e.to_string()))?;
    let vars = &checker.problem().vars;
    Ok(qe::emit_qe_script(
        &generate::eliminate_finite(&cond.goals, vars),
        vars,
    ))
}

#[cfg(test)]
mod tests;
