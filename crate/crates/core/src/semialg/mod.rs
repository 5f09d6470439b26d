//! Semi-algebraic formulas, normal forms, and the Lie-derivative encodings
//! of entry, exit and invariance conditions.

mod dnf;
mod encoder;
pub mod families;
mod formula;
mod problem;

pub use dnf::{normalize_dnf, Dnf, NormAtom};
pub use encoder::{Condition, Encoder, Goal, GoalKind};
pub use families::{phi_plus, phi_zero, phi_zero_plus, psi_plus, psi_zero_plus, trans_formula};
pub use formula::{Atom, Formula, Relation};
pub use problem::{Problem, Route};
