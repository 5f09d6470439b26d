use std::fmt;

use num_traits::{Signed, Zero};

use crate::polyring::{Assignment, PolyError, Polynomial, Rational, Vars};

/// Sign condition `p ▷ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
    Ne,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Eq => "=",
            Relation::Ne => "!=",
        }
    }

    pub fn unicode(self) -> &'static str {
        match self {
            Relation::Ge => "≥",
            Relation::Gt => ">",
            Relation::Le => "≤",
            Relation::Lt => "<",
            Relation::Eq => "=",
            Relation::Ne => "≠",
        }
    }

    pub fn holds(self, value: &Rational) -> bool {
        match self {
            Relation::Ge => !value.is_negative(),
            Relation::Gt => value.is_positive(),
            Relation::Le => !value.is_positive(),
            Relation::Lt => value.is_negative(),
            Relation::Eq => value.is_zero(),
            Relation::Ne => !value.is_zero(),
        }
    }

    pub fn holds_f64(self, value: f64) -> bool {
        match self {
            Relation::Ge => value >= 0.0,
            Relation::Gt => value > 0.0,
            Relation::Le => value <= 0.0,
            Relation::Lt => value < 0.0,
            Relation::Eq => value == 0.0,
            Relation::Ne => value != 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub poly: Polynomial,
    pub rel: Relation,
}

impl Atom {
    pub fn new(poly: Polynomial, rel: Relation) -> Self {
        Atom { poly, rel }
    }

    pub fn eval_dense(&self, point: &[Rational]) -> bool {
        self.rel.holds(&self.poly.eval_dense(point))
    }
}

/// Quantifier-free formula over polynomial sign conditions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(poly: Polynomial, rel: Relation) -> Formula {
        Formula::Atom(Atom::new(poly, rel))
    }

    /// Conjunction with nested conjunctions flattened. The empty conjunction
    /// is `True` and a singleton is returned as is.
    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Disjunction with nested disjunctions flattened. The empty disjunction
    /// is `False`.
    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Formula::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Formula::False)
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => out.push(a),
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(v) | Formula::Or(v) => v.iter().for_each(|f| f.collect_atoms(out)),
            Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Variable context of the first atom, if any.
    pub fn vars(&self) -> Option<Vars> {
        self.atoms().first().map(|a| a.poly.vars().clone())
    }

    pub fn involves_params(&self) -> bool {
        self.atoms().iter().any(|a| a.poly.involves_params())
    }

    /// Sorted indices of all variables occurring in some atom.
    pub fn support(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.atoms().iter().flat_map(|a| a.poly.support()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::And(v) | Formula::Or(v) => 1 + v.iter().map(Formula::size).sum::<usize>(),
            Formula::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn map_polys(&self, f: &impl Fn(&Polynomial) -> Polynomial) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => Formula::atom(f(&a.poly), a.rel),
            Formula::Not(g) => Formula::Not(Box::new(g.map_polys(f))),
            Formula::And(v) => Formula::And(v.iter().map(|g| g.map_polys(f)).collect()),
            Formula::Or(v) => Formula::Or(v.iter().map(|g| g.map_polys(f)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.map_polys(f), b.map_polys(f)),
        }
    }

    /// Substitutes values for the named variables in every atom.
    pub fn substitute(&self, values: &Assignment) -> Formula {
        self.map_polys(&|p| p.substitute(values))
    }

    /// Replaces every template parameter; all must be assigned.
    pub fn instantiate(&self, u0: &Assignment) -> Result<Formula, PolyError> {
        if let Some(vars) = self.vars() {
            for name in vars.param_names() {
                if !u0.contains_key(name) {
                    return Err(PolyError::MissingParameter(name.clone()));
                }
            }
        }
        Ok(self.substitute(u0))
    }

    /// Exact truth value at a dense point over the context's variables.
    pub fn eval_dense(&self, point: &[Rational]) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => a.eval_dense(point),
            Formula::Not(f) => !f.eval_dense(point),
            Formula::And(v) => v.iter().all(|f| f.eval_dense(point)),
            Formula::Or(v) => v.iter().any(|f| f.eval_dense(point)),
            Formula::Implies(a, b) => !a.eval_dense(point) || b.eval_dense(point),
        }
    }

    /// Exact truth value at a named point; variables that occur must be
    /// assigned.
    pub fn evaluate(&self, point: &Assignment) -> Result<bool, PolyError> {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => a.rel.holds(&a.poly.evaluate(point)?),
            Formula::Not(f) => !f.evaluate(point)?,
            Formula::And(v) => {
                for f in v {
                    if !f.evaluate(point)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(v) => {
                for f in v {
                    if f.evaluate(point)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => !a.evaluate(point)? || b.evaluate(point)?,
        })
    }

    /// Plain floating-point truth value, no margins.
    pub fn eval_f64(&self, point: &[f64]) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => a.rel.holds_f64(a.poly.eval_f64(point)),
            Formula::Not(f) => !f.eval_f64(point),
            Formula::And(v) => v.iter().all(|f| f.eval_f64(point)),
            Formula::Or(v) => v.iter().any(|f| f.eval_f64(point)),
            Formula::Implies(a, b) => !a.eval_f64(point) || b.eval_f64(point),
        }
    }

    /// Conservative clean-up: constant atoms are folded, `True`/`False`
    /// units dropped or propagated, and structurally repeated operands
    /// removed. No other rewriting happens.
    pub fn simplify(&self) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => match a.poly.as_constant() {
                Some(c) => bool_formula(a.rel.holds(&c)),
                None => self.clone(),
            },
            Formula::Not(f) => match f.simplify() {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                g => Formula::not(g),
            },
            Formula::And(v) => {
                let mut out: Vec<Formula> = Vec::new();
                for f in v {
                    match f.simplify() {
                        Formula::True => {}
                        Formula::False => return Formula::False,
                        Formula::And(inner) => {
                            for g in inner {
                                push_unique(&mut out, g)
                            }
                        }
                        g => push_unique(&mut out, g),
                    }
                }
                Formula::and(out)
            }
            Formula::Or(v) => {
                let mut out: Vec<Formula> = Vec::new();
                for f in v {
                    match f.simplify() {
                        Formula::False => {}
                        Formula::True => return Formula::True,
                        Formula::Or(inner) => {
                            for g in inner {
                                push_unique(&mut out, g)
                            }
                        }
                        g => push_unique(&mut out, g),
                    }
                }
                Formula::or(out)
            }
            Formula::Implies(a, b) => match (a.simplify(), b.simplify()) {
                (Formula::False, _) | (_, Formula::True) => Formula::True,
                (Formula::True, g) => g,
                (g, Formula::False) => Formula::not(g),
                (g, h) => Formula::implies(g, h),
            },
        }
    }

    /// Same formula with Unicode connectives, for reports.
    pub fn to_unicode(&self) -> String {
        let mut s = String::new();
        write_formula(&mut s, self, 0, &UNICODE).unwrap();
        s
    }
}

fn push_unique(out: &mut Vec<Formula>, f: Formula) {
    if !out.contains(&f) {
        out.push(f);
    }
}

fn bool_formula(b: bool) -> Formula {
    if b {
        Formula::True
    } else {
        Formula::False
    }
}

struct Notation {
    t: &'static str,
    f: &'static str,
    not: &'static str,
    and: &'static str,
    or: &'static str,
    implies: &'static str,
    unicode_rel: bool,
}

const ASCII: Notation = Notation {
    t: "true",
    f: "false",
    not: "!",
    and: " & ",
    or: " | ",
    implies: " -> ",
    unicode_rel: false,
};

const UNICODE: Notation = Notation {
    t: "true",
    f: "false",
    not: "¬",
    and: " ∧ ",
    or: " ∨ ",
    implies: " → ",
    unicode_rel: true,
};

// Binding strength: implies 1, or 2, and 3, not/atom 4.
fn write_formula(out: &mut String, f: &Formula, ctx: u8, n: &Notation) -> fmt::Result {
    use std::fmt::Write;
    let (prec, body) = match f {
        Formula::True => (4, n.t.to_string()),
        Formula::False => (4, n.f.to_string()),
        Formula::Atom(a) => {
            let rel = if n.unicode_rel {
                a.rel.unicode()
            } else {
                a.rel.symbol()
            };
            (4, format!("{} {} 0", a.poly, rel))
        }
        Formula::Not(g) => {
            let mut s = String::new();
            write_formula(&mut s, g, 4, n)?;
            (4, format!("{}{}", n.not, s))
        }
        Formula::And(v) | Formula::Or(v) => {
            let (p, sep) = if matches!(f, Formula::And(_)) {
                (3, n.and)
            } else {
                (2, n.or)
            };
            if v.is_empty() {
                (4, if p == 3 { n.t } else { n.f }.to_string())
            } else {
                let parts: Result<Vec<String>, fmt::Error> = v
                    .iter()
                    .map(|g| {
                        let mut s = String::new();
                        write_formula(&mut s, g, p + 1, n).map(|_| s)
                    })
                    .collect();
                (p, parts?.join(sep))
            }
        }
        Formula::Implies(a, b) => {
            let mut s = String::new();
            write_formula(&mut s, a, 2, n)?;
            s.push_str(n.implies);
            write_formula(&mut s, b, 1, n)?;
            (1, s)
        }
    };
    if prec < ctx {
        write!(out, "({body})")
    } else {
        write!(out, "{body}")
    }
}

/// Parser-compatible ASCII syntax: `x - y >= 0 & !(y > 0) -> x = 0`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_formula(&mut s, self, 0, &ASCII)?;
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rational::int;

    fn ring() -> (Vars, Polynomial, Polynomial) {
        let v = Vars::new(&["x", "y"], &[] as &[&str]);
        (v.clone(), Polynomial::var(&v, 0), Polynomial::var(&v, 1))
    }

    #[test]
    fn simplify_folds_constants_and_units() {
        let (v, x, _) = ring();
        let one = Polynomial::one(&v);
        let f = Formula::and(vec![
            Formula::atom(one.clone(), Relation::Gt),
            Formula::atom(x.clone(), Relation::Ge),
            Formula::atom(x.clone(), Relation::Ge),
        ]);
        assert_eq!(f.simplify(), Formula::atom(x.clone(), Relation::Ge));
        let g = Formula::or(vec![
            Formula::atom(one.clone(), Relation::Lt),
            Formula::False,
        ]);
        assert_eq!(g.simplify(), Formula::False);
        let h = Formula::implies(
            Formula::atom(-&one, Relation::Ge),
            Formula::atom(x.clone(), Relation::Gt),
        );
        assert_eq!(h.simplify(), Formula::True);
        let zero = Polynomial::zero(&v);
        assert_eq!(Formula::atom(zero, Relation::Eq).simplify(), Formula::True);
    }

    #[test]
    fn display_parenthesises_by_precedence() {
        let (_, x, y) = ring();
        let a = Formula::atom(x.clone(), Relation::Ge);
        let b = Formula::atom(y.clone(), Relation::Gt);
        let f = Formula::implies(
            Formula::and(vec![a.clone(), Formula::or(vec![a.clone(), b.clone()])]),
            Formula::not(b.clone()),
        );
        assert_eq!(f.to_string(), "x >= 0 & (x >= 0 | y > 0) -> !y > 0");
        assert_eq!(f.to_unicode(), "x ≥ 0 ∧ (x ≥ 0 ∨ y > 0) → ¬y > 0");
    }

    #[test]
    fn evaluation() {
        let (_, x, y) = ring();
        let f = Formula::implies(
            Formula::atom(&x - &y, Relation::Eq),
            Formula::atom(x.clone(), Relation::Ne),
        );
        assert!(!f.eval_dense(&[int(0), int(0)]));
        assert!(f.eval_dense(&[int(1), int(1)]));
        assert!(f.eval_dense(&[int(0), int(1)]));
        let pt = Assignment::from([("x".into(), int(0)), ("y".into(), int(0))]);
        assert!(!f.evaluate(&pt).unwrap());
    }
}
