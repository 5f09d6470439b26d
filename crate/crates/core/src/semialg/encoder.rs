use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::dnf::{normalize_dnf, Dnf, NormAtom};
use super::families;
use super::formula::{Formula, Relation};
use super::problem::{Problem, Route};
use crate::groebner::{rank_bound_chain, GroebnerError, MonomialOrder, RankBound, DEFAULT_CAP};
use crate::polyring::{Assignment, LieCache, PolyError, Polynomial, VectorField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GoalKind {
    /// `Ξ → P`.
    Init,
    /// `P ∧ H ∧ φ_H → φ_P`.
    Inward,
    /// `¬P ∧ H ∧ φ_H^Iv → ¬φ_P^Iv`.
    Inverse,
    /// `(p = 0 ∧ π(p)) → π(h)`.
    Theta,
    /// `p = 0 → ⋀_{i≥1} L^i p = 0`.
    Equational,
}

impl GoalKind {
    pub fn label(self) -> &'static str {
        match self {
            GoalKind::Init => "init",
            GoalKind::Inward => "inward",
            GoalKind::Inverse => "inverse",
            GoalKind::Theta => "theta",
            GoalKind::Equational => "equational",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            GoalKind::Init => "initial set contained in the candidate",
            GoalKind::Inward => "no exit from P while staying in H",
            GoalKind::Inverse => "no entry into the complement of P from inside P and H",
            GoalKind::Theta => "boundary exits of P are exits of H",
            GoalKind::Equational => "higher Lie derivatives vanish on p = 0",
        }
    }
}

/// One universally closed obligation over the state variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Goal {
    pub kind: GoalKind,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition {
    pub route: Route,
    pub goals: Vec<Goal>,
}

impl Condition {
    pub fn formula(&self) -> Formula {
        Formula::and(self.goals.iter().map(|g| g.formula.clone()))
    }

    /// Substitutes parameter values into every goal and simplifies.
    pub fn instantiate(&self, u0: &Assignment) -> Result<Condition, PolyError> {
        let goals = self
            .goals
            .iter()
            .map(|g| {
                Ok(Goal {
                    kind: g.kind,
                    formula: g.formula.instantiate(u0)?.simplify(),
                })
            })
            .collect::<Result<_, PolyError>>()?;
        Ok(Condition {
            route: self.route,
            goals,
        })
    }

    pub fn simplified(&self) -> Condition {
        Condition {
            route: self.route,
            goals: self
                .goals
                .iter()
                .map(|g| Goal {
                    kind: g.kind,
                    formula: g.formula.simplify(),
                })
                .collect(),
        }
    }
}

/// Builds the encodings for one vector field, caching Lie chains and rank
/// bounds per polynomial. Safe to share across threads.
pub struct Encoder {
    lie: LieCache,
    cap: usize,
    order: MonomialOrder,
    bounds: Mutex<HashMap<Polynomial, Arc<RankBound>>>,
}

impl Encoder {
    pub fn new(field: &VectorField) -> Self {
        Self::with_cap(field, DEFAULT_CAP)
    }

    pub fn with_cap(field: &VectorField, cap: usize) -> Self {
        let n = field.vars().len();
        Self::with_order(field, cap, MonomialOrder::grevlex(n))
    }

    pub fn with_order(field: &VectorField, cap: usize, order: MonomialOrder) -> Self {
        Encoder {
            lie: LieCache::new(field.clone()),
            cap,
            order,
            bounds: Mutex::new(HashMap::new()),
        }
    }

    pub fn field(&self) -> &VectorField {
        self.lie.field()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn bound(&self, p: &Polynomial) -> Result<Arc<RankBound>, GroebnerError> {
        if let Some(rb) = self.bounds.lock().unwrap().get(p) {
            return Ok(rb.clone());
        }
        let chain = self.lie.chain(p)?;
        let rb = Arc::new(rank_bound_chain(&chain, self.cap, &self.order)?);
        self.bounds.lock().unwrap().insert(p.clone(), rb.clone());
        Ok(rb)
    }

    /// Every bound computed so far, ordered by the printed polynomial.
    pub fn computed_bounds(&self) -> Vec<Arc<RankBound>> {
        let mut out: Vec<Arc<RankBound>> = self.bounds.lock().unwrap().values().cloned().collect();
        out.sort_by_key(|rb| rb.base().to_string());
        out
    }

    pub fn trans(&self, p: &Polynomial) -> Result<Formula, GroebnerError> {
        Ok(families::trans_formula(self.bound(p)?.derivatives()))
    }

    pub fn psi_plus(&self, p: &Polynomial) -> Result<Formula, GroebnerError> {
        Ok(families::psi_plus(self.bound(p)?.derivatives()))
    }

    pub fn phi_zero(&self, p: &Polynomial) -> Result<Formula, GroebnerError> {
        Ok(families::phi_zero(self.bound(p)?.derivatives()))
    }

    pub fn phi_plus(&self, p: &Polynomial) -> Result<Formula, GroebnerError> {
        Ok(families::phi_plus(self.bound(p)?.derivatives()))
    }

    fn assemble(&self, dnf: &Dnf, inverse: bool) -> Result<Formula, GroebnerError> {
        if dnf.is_true() {
            return Ok(Formula::True);
        }
        let atom = |a: &NormAtom| -> Result<Formula, GroebnerError> {
            let rb = self.bound(&a.poly)?;
            let ch = rb.derivatives();
            Ok(match (inverse, a.strict) {
                (false, false) => families::psi_zero_plus(ch),
                (false, true) => families::psi_plus(ch),
                (true, false) => families::phi_zero_plus(ch),
                (true, true) => families::phi_plus(ch),
            })
        };
        let mut disjuncts = Vec::with_capacity(dnf.disjuncts.len());
        for d in &dnf.disjuncts {
            let conj: Result<Vec<Formula>, GroebnerError> = d.iter().map(atom).collect();
            disjuncts.push(Formula::and(conj?));
        }
        Ok(Formula::or(disjuncts))
    }

    /// Points whose forward trajectory immediately enters the set.
    pub fn in_formula(&self, dnf: &Dnf) -> Result<Formula, GroebnerError> {
        self.assemble(dnf, false)
    }

    /// Points reached from inside the set along the trajectory.
    pub fn ivin_formula(&self, dnf: &Dnf) -> Result<Formula, GroebnerError> {
        self.assemble(dnf, true)
    }

    pub fn theta_simple(&self, h: &Polynomial, p: &Polynomial) -> Result<Formula, GroebnerError> {
        Ok(Formula::implies(
            Formula::and(vec![Formula::atom(p.clone(), Relation::Eq), self.trans(p)?]),
            self.trans(h)?,
        ))
    }

    /// Three goals: initial containment, inward and inverse conditions.
    pub fn main_condition(&self, prob: &Problem) -> Result<Condition, GroebnerError> {
        let h = normalize_dnf(&prob.domain);
        let p = normalize_dnf(&prob.invariant);
        let phi_h = self.in_formula(&h)?;
        let phi_p = self.in_formula(&p)?;
        let phi_h_iv = self.ivin_formula(&h)?;
        let phi_p_iv = self.ivin_formula(&p)?;
        let (pf, hf) = (prob.invariant.clone(), prob.domain.clone());
        Ok(Condition {
            route: Route::General,
            goals: vec![
                Goal {
                    kind: GoalKind::Init,
                    formula: Formula::implies(prob.init.clone(), pf.clone()),
                },
                Goal {
                    kind: GoalKind::Inward,
                    formula: Formula::implies(
                        Formula::and(vec![pf.clone(), hf.clone(), phi_h]),
                        phi_p,
                    ),
                },
                Goal {
                    kind: GoalKind::Inverse,
                    formula: Formula::implies(
                        Formula::and(vec![Formula::not(pf), hf, phi_h_iv]),
                        Formula::not(phi_p_iv),
                    ),
                },
            ],
        })
    }

    /// `Ξ → p = 0` and `p = 0 → ⋀_{i=1}^{N} L^i p = 0`.
    pub fn equational_condition(
        &self,
        p: &Polynomial,
        init: &Formula,
    ) -> Result<Condition, GroebnerError> {
        let rb = self.bound(p)?;
        let eq = Formula::atom(p.clone(), Relation::Eq);
        let higher = Formula::and(
            rb.derivatives()[1..]
                .iter()
                .map(|q| Formula::atom(q.clone(), Relation::Eq)),
        );
        Ok(Condition {
            route: Route::Equational,
            goals: vec![
                Goal {
                    kind: GoalKind::Init,
                    formula: Formula::implies(init.clone(), eq.clone()),
                },
                Goal {
                    kind: GoalKind::Equational,
                    formula: Formula::implies(eq, higher),
                },
            ],
        })
    }

    /// Picks the cheapest sound encoding for the problem's shape.
    pub fn condition(&self, prob: &Problem) -> Result<Condition, GroebnerError> {
        match prob.route() {
            Route::Equational => self.equational_condition(prob.equation().unwrap(), &prob.init),
            Route::Simple => {
                let (h, p) = prob.simple_atoms().unwrap();
                Ok(Condition {
                    route: Route::Simple,
                    goals: vec![
                        Goal {
                            kind: GoalKind::Init,
                            formula: Formula::implies(
                                prob.init.clone(),
                                Formula::atom(p.clone(), Relation::Ge),
                            ),
                        },
                        Goal {
                            kind: GoalKind::Theta,
                            formula: self.theta_simple(&h, &p)?,
                        },
                    ],
                })
            }
            Route::General => self.main_condition(prob),
        }
    }
}
