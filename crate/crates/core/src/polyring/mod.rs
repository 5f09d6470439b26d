//! Exact multivariate polynomials over ℚ, vector fields and Lie derivatives.
//!
//! Every polynomial lives in a [`Vars`] context listing the state variables
//! followed by the template parameters. Gradients and Lie derivatives only
//! differentiate with respect to state variables.

mod field;
mod lie;
mod monomial;
mod polynomial;
pub mod random;
pub mod rational;

pub use field::VectorField;
pub use lie::{lie_chain, lie_derivative, pointwise_rank, LieCache, LieChain, RankValue};
pub use monomial::{Monomial, Vars};
pub use polynomial::{Assignment, Polynomial};
pub use rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("variable context mismatch: {left:?} vs {right:?}")]
    ContextMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("no value assigned to variable `{0}`")]
    MissingAssignment(String),
    #[error("no value assigned to parameter `{0}`")]
    MissingParameter(String),
    #[error("vector field has {got} components, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("template parameter `{0}` appears in the vector field")]
    ParameterInField(String),
}
