use num_traits::Signed;

use super::formula::{Formula, Relation};
use crate::polyring::{Polynomial, Rational};

/// Normalized atom `p ≥ 0` or `p > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormAtom {
    pub poly: Polynomial,
    pub strict: bool,
}

impl NormAtom {
    pub fn ge(poly: Polynomial) -> Self {
        NormAtom {
            poly,
            strict: false,
        }
    }

    pub fn gt(poly: Polynomial) -> Self {
        NormAtom { poly, strict: true }
    }

    pub fn relation(&self) -> Relation {
        if self.strict {
            Relation::Gt
        } else {
            Relation::Ge
        }
    }

    pub fn to_formula(&self) -> Formula {
        Formula::atom(self.poly.clone(), self.relation())
    }

    fn holds(&self, v: &Rational) -> bool {
        if self.strict {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    }
}

/// `⋁ᵢ ⋀ⱼ pᵢⱼ ▷ 0` with `▷ ∈ {≥, >}`. No disjuncts is `false`; an empty
/// disjunct is `true`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dnf {
    pub disjuncts: Vec<Vec<NormAtom>>,
}

impl Dnf {
    pub fn is_true(&self) -> bool {
        self.disjuncts.iter().any(Vec::is_empty)
    }

    pub fn is_false(&self) -> bool {
        self.disjuncts.is_empty()
    }

    /// The single atom if this is one disjunct of one atom.
    pub fn single_atom(&self) -> Option<&NormAtom> {
        match self.disjuncts.as_slice() {
            [d] if d.len() == 1 => d.first(),
            _ => None,
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = &NormAtom> {
        self.disjuncts.iter().flatten()
    }

    pub fn to_formula(&self) -> Formula {
        Formula::or(
            self.disjuncts
                .iter()
                .map(|d| Formula::and(d.iter().map(NormAtom::to_formula))),
        )
    }

    pub fn eval_dense(&self, point: &[Rational]) -> bool {
        self.disjuncts
            .iter()
            .any(|d| d.iter().all(|a| a.holds(&a.poly.eval_dense(point))))
    }

    /// Floating-point evaluation with every atom relaxed by `margin`:
    /// `p ≥ 0` holds when `p ≥ -margin`, `p > 0` when `p > -margin`.
    pub fn eval_f64_relaxed(&self, point: &[f64], margin: f64) -> bool {
        self.disjuncts.iter().any(|d| {
            d.iter().all(|a| {
                let v = a.poly.eval_f64(point);
                if a.strict {
                    v > -margin
                } else {
                    v >= -margin
                }
            })
        })
    }
}

/// Negation normal form over normalized atoms.
enum Nnf {
    Atom(NormAtom),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

fn nnf(f: &Formula, positive: bool) -> Nnf {
    match f {
        Formula::True | Formula::False => {
            if f.is_true() == positive {
                Nnf::And(vec![])
            } else {
                Nnf::Or(vec![])
            }
        }
        Formula::Atom(a) => {
            let rel = if positive { a.rel } else { negate(a.rel) };
            let p = &a.poly;
            match rel {
                Relation::Ge => Nnf::Atom(NormAtom::ge(p.clone())),
                Relation::Gt => Nnf::Atom(NormAtom::gt(p.clone())),
                Relation::Le => Nnf::Atom(NormAtom::ge(-p)),
                Relation::Lt => Nnf::Atom(NormAtom::gt(-p)),
                Relation::Eq => Nnf::And(vec![
                    Nnf::Atom(NormAtom::ge(p.clone())),
                    Nnf::Atom(NormAtom::ge(-p)),
                ]),
                Relation::Ne => Nnf::Or(vec![
                    Nnf::Atom(NormAtom::gt(p.clone())),
                    Nnf::Atom(NormAtom::gt(-p)),
                ]),
            }
        }
        Formula::Not(g) => nnf(g, !positive),
        Formula::And(v) | Formula::Or(v) => {
            let parts = v.iter().map(|g| nnf(g, positive)).collect();
            if matches!(f, Formula::And(_)) == positive {
                Nnf::And(parts)
            } else {
                Nnf::Or(parts)
            }
        }
        Formula::Implies(a, b) => {
            if positive {
                Nnf::Or(vec![nnf(a, false), nnf(b, true)])
            } else {
                Nnf::And(vec![nnf(a, true), nnf(b, false)])
            }
        }
    }
}

fn negate(rel: Relation) -> Relation {
    match rel {
        Relation::Ge => Relation::Lt,
        Relation::Gt => Relation::Le,
        Relation::Le => Relation::Gt,
        Relation::Lt => Relation::Ge,
        Relation::Eq => Relation::Ne,
        Relation::Ne => Relation::Eq,
    }
}

fn distribute(n: Nnf) -> Vec<Vec<NormAtom>> {
    match n {
        Nnf::Atom(a) => vec![vec![a]],
        Nnf::Or(parts) => {
            let mut out = Vec::new();
            for p in parts {
                for d in distribute(p) {
                    if !out.contains(&d) {
                        out.push(d);
                    }
                }
            }
            out
        }
        Nnf::And(parts) => {
            let mut acc: Vec<Vec<NormAtom>> = vec![vec![]];
            for p in parts {
                let rhs = distribute(p);
                let mut next = Vec::with_capacity(acc.len() * rhs.len());
                for l in &acc {
                    for r in &rhs {
                        let mut d = l.clone();
                        for a in r {
                            if !d.contains(a) {
                                d.push(a.clone());
                            }
                        }
                        if !next.contains(&d) {
                            next.push(d);
                        }
                    }
                }
                acc = next;
            }
            acc
        }
    }
}

/// Rewrites to negation normal form over `≥`/`>` atoms and distributes
/// conjunction over disjunction. Repeated atoms and disjuncts are merged;
/// nothing else is simplified.
pub fn normalize_dnf(f: &Formula) -> Dnf {
    Dnf {
        disjuncts: distribute(nnf(f, true)),
    }
}
