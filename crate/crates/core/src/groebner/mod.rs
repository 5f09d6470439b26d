//! Gröbner bases, ideal membership and fixed-point rank bounds.

mod buchberger;
mod order;
mod rank;

pub use buchberger::{buchberger, buchberger_extend, ideal_member, normal_form, GroebnerBasis};
pub use order::{MonomialOrder, OrderKind};
pub use rank::{parametric_rank_bound, rank_bound, rank_bound_chain, RankBound, DEFAULT_CAP};

use crate::polyring::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroebnerError {
    #[error("zero polynomial in division basis")]
    ZeroInBasis,
    #[error("no generators given")]
    EmptyInput,
    #[error("ideal chain did not stabilise within {cap} Lie derivatives")]
    FixedPointNotReached { cap: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}
