use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, Vars};
use super::rational::{format_rational, to_f64, Rational};
use super::PolyError;

/// Variable name → value.
pub type Assignment = BTreeMap<String, Rational>;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// The term map never holds a zero coefficient, so structural equality is
/// polynomial equality and the zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(vars: &Vars) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        Self::term(vars, c, Monomial::one())
    }

    pub fn var(vars: &Vars, idx: usize) -> Self {
        assert!(idx < vars.len(), "variable index {idx} out of range");
        Self::term(vars, Rational::one(), Monomial::var(idx))
    }

    /// Looks a variable up by name.
    pub fn var_named(vars: &Vars, name: &str) -> Option<Self> {
        vars.index_of(name).map(|i| Self::var(vars, i))
    }

    pub fn term(vars: &Vars, c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial {
            vars: vars.clone(),
            terms,
        }
    }

    /// Collects terms, merging duplicate monomials and dropping zeros.
    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Total degree counting only state variables.
    pub fn state_degree(&self) -> Option<u32> {
        let n = self.vars.n_state();
        self.terms
            .keys()
            .map(|m| m.iter().filter(|&(v, _)| v < n).map(|(_, e)| e).sum())
            .max()
    }

    pub fn involves(&self, idx: usize) -> bool {
        self.terms.keys().any(|m| m.involves(idx))
    }

    pub fn involves_params(&self) -> bool {
        let n = self.vars.n_state();
        self.terms.keys().any(|m| m.iter().any(|(v, _)| v >= n))
    }

    /// Indices of every variable with a nonzero exponent somewhere.
    pub fn support(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .terms
            .keys()
            .flat_map(|m| m.iter().map(|(v, _)| v))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_context(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch {
                left: self.vars.names().to_vec(),
                right: other.vars.names().to_vec(),
            })
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_context(other)?;
        let mut out = Polynomial::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Rational, m: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(t, k)| (t.mul(m), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Evaluates at a named point; every variable occurring in `self` must be
    /// assigned.
    pub fn evaluate(&self, point: &Assignment) -> Result<Rational, PolyError> {
        let mut values: HashMap<usize, Rational> = HashMap::new();
        for idx in self.support() {
            let name = self.vars.name(idx);
            let v = point
                .get(name)
                .ok_or_else(|| PolyError::MissingAssignment(name.to_string()))?;
            values.insert(idx, v.clone());
        }
        Ok(self.eval_with(|i| values[&i].clone()))
    }

    /// Evaluates with a value per variable index (state then parameters).
    pub fn eval_dense(&self, values: &[Rational]) -> Rational {
        self.eval_with(|i| values[i].clone())
    }

    fn eval_with(&self, value: impl Fn(usize) -> Rational) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                t *= num_traits::pow(value(v), e as usize);
            }
            total += t;
        }
        total
    }

    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .fold(to_f64(c), |acc, (v, e)| acc * values[v].powi(e as i32))
            })
            .sum()
    }

    /// `∂self/∂x_idx`.
    pub fn partial(&self, idx: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.derivative(idx) {
                out.add_term(rest, c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// Gradient with respect to the state variables only; parameters are
    /// treated as constants.
    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.vars.n_state()).map(|i| self.partial(i)).collect()
    }

    /// Substitutes values for the named variables (typically parameters).
    /// Unlisted variables are left symbolic.
    pub fn substitute(&self, values: &Assignment) -> Polynomial {
        let fixed: HashMap<usize, &Rational> = values
            .iter()
            .filter_map(|(name, v)| self.vars.index_of(name).map(|i| (i, v)))
            .collect();
        if fixed.is_empty() {
            return self.clone();
        }
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let (keep, hit) = m.split_off(|v| fixed.contains_key(&v));
            let mut k = c.clone();
            for (v, e) in hit.iter() {
                k *= num_traits::pow(fixed[&v].clone(), e as usize);
            }
            out.add_term(keep, k);
        }
        out
    }

    /// Replaces every template parameter by its value in `u0`.
    pub fn instantiate(&self, u0: &Assignment) -> Result<Polynomial, PolyError> {
        for name in self.vars.param_names() {
            if !u0.contains_key(name) {
                return Err(PolyError::MissingParameter(name.clone()));
            }
        }
        let only_params: Assignment = u0
            .iter()
            .filter(|(k, _)| self.vars.index_of(k).is_some_and(|i| self.vars.is_param(i)))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Ok(self.substitute(&only_params))
    }

    /// Terms in display order: descending total degree, then descending
    /// exponents in variable-declaration order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let n = self.vars.len();
        let mut out: Vec<_> = self.terms.iter().collect();
        out.sort_by(|(a, _), (b, _)| {
            b.degree().cmp(&a.degree()).then_with(|| {
                for v in 0..n {
                    let o = b.exponent(v).cmp(&a.exponent(v));
                    if o != std::cmp::Ordering::Equal {
                        return o;
                    }
                }
                std::cmp::Ordering::Equal
            })
        });
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", m.display(&self.vars))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), m.display(&self.vars))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

// Operator forms panic on a context mismatch; use the `checked_*` methods
// when the operands may come from different problems.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial context mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial context mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial context mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rational::{frac, int};

    fn xy() -> (Vars, Polynomial, Polynomial) {
        let v = Vars::new(&["x", "y"], &[] as &[&str]);
        let x = Polynomial::var(&v, 0);
        let y = Polynomial::var(&v, 1);
        (v, x, y)
    }

    #[test]
    fn add_examples() {
        let (v, x, y) = xy();
        let p = &x + &y.pow(2);
        assert_eq!(&p + &Polynomial::zero(&v), p);
        let q = &(-&x) + &y.pow(2).scale(&int(2));
        assert_eq!(&p + &q, y.pow(2).scale(&int(3)));
        assert!((&p + &p.scale(&int(-1))).is_zero());
    }

    #[test]
    fn mul_examples() {
        let (v, x, y) = xy();
        let p = &x + &y.pow(2);
        assert_eq!(&p * &Polynomial::one(&v), p);
        assert_eq!(&(&x - &y) * &(&x + &y), &x.pow(2) - &y.pow(2));
        assert!((&p * &Polynomial::zero(&v)).is_zero());
        assert_eq!((&p * &p).degree(), Some(4));
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let (_, x, _) = xy();
        let other = Vars::new(&["x"], &[] as &[&str]);
        let z = Polynomial::var(&other, 0);
        assert!(matches!(
            x.checked_add(&z),
            Err(PolyError::ContextMismatch { .. })
        ));
        assert!(x.checked_mul(&z).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let (_, x, y) = xy();
        let p = &x + &y.pow(2);
        let at = |a: i64, b: i64| Assignment::from([("x".into(), int(a)), ("y".into(), int(b))]);
        assert_eq!(p.evaluate(&at(0, 0)).unwrap(), int(0));
        assert_eq!(p.evaluate(&at(-4, 2)).unwrap(), int(0));
        let l1 = y.scale(&int(-2)) + (&x.pow(2) * &y).scale(&int(2));
        assert_eq!(l1.evaluate(&at(-4, 2)).unwrap(), int(60));
        let partial = Assignment::from([("x".into(), int(1))]);
        assert_eq!(
            p.evaluate(&partial),
            Err(PolyError::MissingAssignment("y".into()))
        );
    }

    #[test]
    fn gradient_examples() {
        let (v, x, y) = xy();
        let p = &x + &y.pow(2);
        assert_eq!(p.gradient(), vec![Polynomial::one(&v), y.scale(&int(2))]);
        let c = Polynomial::constant(&v, frac(3, 2));
        assert!(c.gradient().iter().all(Polynomial::is_zero));
    }

    #[test]
    fn parametric_gradient_ignores_parameters() {
        let v = Vars::new(&["x", "y"], &["a"]);
        let (x, y, a) = (
            Polynomial::var(&v, 0),
            Polynomial::var(&v, 1),
            Polynomial::var(&v, 2),
        );
        let p = &(&a * &y) * &(&x - &y);
        let g = p.gradient();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0], &a * &y);
        assert_eq!(g[1], &(&a * &x) - &(&a * &y).scale(&int(2)));
    }

    #[test]
    fn instantiate_examples() {
        let v = Vars::new(&["x", "y"], &["a"]);
        let (x, y, a) = (
            Polynomial::var(&v, 0),
            Polynomial::var(&v, 1),
            Polynomial::var(&v, 2),
        );
        let p = &(&a * &y) * &(&x - &y);
        let u0 = Assignment::from([("a".into(), int(-1))]);
        assert_eq!(p.instantiate(&u0).unwrap(), &y.pow(2) - &(&x * &y));
        let zero = Assignment::from([("a".into(), int(0))]);
        assert!(p.instantiate(&zero).unwrap().is_zero());
        assert_eq!(
            p.instantiate(&Assignment::new()),
            Err(PolyError::MissingParameter("a".into()))
        );
    }

    #[test]
    fn display_is_stable() {
        let (_, x, y) = xy();
        let p = y.scale(&int(-2)) + (&x.pow(2) * &y).scale(&int(2));
        assert_eq!(p.to_string(), "2*x^2*y - 2*y");
        assert_eq!((-&x).to_string(), "-x");
        assert_eq!(
            (&x.scale(&frac(1, 2)) - &Polynomial::one(x.vars())).to_string(),
            "1/2*x - 1"
        );
    }
}
