//! Uniform rank bounds from the ascending chain of Lie-derivative ideals.
//!
//! `N` is the least `i` with `L^{i+1} p ∈ ⟨L⁰ p, …, L^i p⟩`. Once that holds,
//! every higher derivative lies in the same ideal, so a point where
//! `L⁰ … L^N` all vanish has infinite pointwise rank, and any finite
//! pointwise rank is at most `N`.

use super::buchberger::{buchberger_extend, GroebnerBasis};
use super::order::MonomialOrder;
use super::GroebnerError;
use crate::polyring::{LieChain, Polynomial, VectorField};

pub const DEFAULT_CAP: usize = 20;

#[derive(Debug, Clone)]
pub struct RankBound {
    /// `N`.
    pub value: usize,
    /// `[L⁰ p, …, L^{N+1} p]`.
    pub chain: Vec<Polynomial>,
    /// Reduced Gröbner bases of `⟨L⁰ … L^i⟩` for `i = 0..=N`.
    pub bases: Vec<GroebnerBasis>,
}

impl RankBound {
    pub fn base(&self) -> &Polynomial {
        &self.chain[0]
    }

    /// `[L⁰ p, …, L^N p]`, the derivatives the formula families use.
    pub fn derivatives(&self) -> &[Polynomial] {
        &self.chain[..=self.value]
    }

    pub fn witness_basis(&self) -> &GroebnerBasis {
        &self.bases[self.value]
    }

    /// Re-checks every stored basis and the fixed-point membership facts.
    pub fn verify(&self) -> Result<(), String> {
        for (i, gb) in self.bases.iter().enumerate() {
            gb.verify(&self.chain[..=i])
                .map_err(|e| format!("basis {i}: {e}"))?;
        }
        let n = self.value;
        if !self.bases[n].contains(&self.chain[n + 1]) {
            return Err(format!("L^{} is not in <L^0..L^{n}>", n + 1));
        }
        if n > 0 && self.bases[n - 1].contains(&self.chain[n]) {
            return Err(format!("N = {n} is not minimal"));
        }
        Ok(())
    }
}

/// Rank bound of `p` along `f` in the ring of `p`'s context (parameters, if
/// any, are ordinary ring variables ordered after the state).
pub fn rank_bound(p: &Polynomial, f: &VectorField, cap: usize) -> Result<RankBound, GroebnerError> {
    let chain = LieChain::new(p.clone(), f.clone())?;
    rank_bound_chain(&chain, cap, &MonomialOrder::grevlex(p.vars().len()))
}

/// Same search for a template; the bound holds for every instantiation.
pub fn parametric_rank_bound(
    p: &Polynomial,
    f: &VectorField,
    cap: usize,
) -> Result<RankBound, GroebnerError> {
    // VectorField construction already rejects parameters in f.
    rank_bound(p, f, cap)
}

pub fn rank_bound_chain(
    chain: &LieChain,
    cap: usize,
    order: &MonomialOrder,
) -> Result<RankBound, GroebnerError> {
    let cap = cap.max(1);
    let mut bases: Vec<GroebnerBasis> = Vec::new();
    for i in 0..=cap {
        let li = chain.get(i);
        let known: Vec<Polynomial> = bases
            .last()
            .map(|b| b.generators().to_vec())
            .unwrap_or_default();
        let gb = buchberger_extend(&known, &[li], order)?;
        let next = chain.get(i + 1);
        let member = next.is_zero() || gb.contains(&next);
        bases.push(gb);
        if member {
            return Ok(RankBound {
                value: i,
                chain: chain.prefix(i + 1),
                bases,
            });
        }
    }
    Err(GroebnerError::FixedPointNotReached { cap })
}
