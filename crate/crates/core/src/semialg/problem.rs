use super::dnf::normalize_dnf;
use super::formula::{Formula, Relation};
use crate::polyring::{Assignment, PolyError, Polynomial, Vars, VectorField};

/// A polynomial dynamical system `(H, f, Ξ)` together with a candidate or
/// template invariant `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub vars: Vars,
    pub field: VectorField,
    pub domain: Formula,
    pub init: Formula,
    pub invariant: Formula,
}

/// Which encoding the checker uses for a problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// `H` is `h ≥ 0` and `P` is `p ≥ 0`.
    Simple,
    /// `P` is `p = 0` and `H` is the whole space.
    Equational,
    General,
}

impl Problem {
    pub fn params(&self) -> &[String] {
        self.vars.param_names()
    }

    pub fn is_parametric(&self) -> bool {
        self.vars.n_params() > 0
    }

    /// `Ξ ⊆ H` is assumed, not enforced; see `decide::check_init_subset_domain`.
    pub fn instantiate(&self, u0: &Assignment) -> Result<Problem, PolyError> {
        Ok(Problem {
            invariant: self.invariant.instantiate(u0)?,
            ..self.clone()
        })
    }

    pub fn route(&self) -> Route {
        if self.domain.simplify().is_true() {
            if let Formula::Atom(a) = &self.invariant {
                if a.rel == Relation::Eq {
                    return Route::Equational;
                }
            }
        }
        if self.simple_atoms().is_some() {
            return Route::Simple;
        }
        Route::General
    }

    /// `(h, p)` when both domain and invariant normalize to a single
    /// non-strict atom.
    pub fn simple_atoms(&self) -> Option<(Polynomial, Polynomial)> {
        let h = normalize_dnf(&self.domain);
        let p = normalize_dnf(&self.invariant);
        match (h.single_atom(), p.single_atom()) {
            (Some(h), Some(p)) if !h.strict && !p.strict => Some((h.poly.clone(), p.poly.clone())),
            _ => None,
        }
    }

    /// `p` of an equational candidate `p = 0`.
    pub fn equation(&self) -> Option<&Polynomial> {
        match &self.invariant {
            Formula::Atom(a) if a.rel == Relation::Eq => Some(&a.poly),
            _ => None,
        }
    }
}
