//! Lie derivatives along polynomial vector fields and pointwise ranks.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use num_traits::Zero;

use super::field::VectorField;
use super::polynomial::Polynomial;
use super::rational::Rational;
use super::PolyError;

/// `⟨∇p, f⟩`, with the gradient taken over state variables only.
pub fn lie_derivative(p: &Polynomial, f: &VectorField) -> Result<Polynomial, PolyError> {
    if p.vars() != f.vars() {
        return Err(PolyError::ContextMismatch {
            left: p.vars().names().to_vec(),
            right: f.vars().names().to_vec(),
        });
    }
    let mut out = Polynomial::zero(p.vars());
    for (i, fi) in f.components().iter().enumerate() {
        if fi.is_zero() || !p.involves(i) {
            continue;
        }
        let d = p.partial(i);
        out = &out + &(&d * fi);
    }
    Ok(out)
}

/// `[L⁰ p, L¹ p, …, L^k p]`.
pub fn lie_chain(p: &Polynomial, f: &VectorField, k: usize) -> Result<Vec<Polynomial>, PolyError> {
    let chain = LieChain::new(p.clone(), f.clone())?;
    Ok(chain.prefix(k))
}

/// Lazily extended, memoized Lie chain of one polynomial along one field.
/// Safe to share across threads; extension takes a write lock.
pub struct LieChain {
    field: VectorField,
    derivs: RwLock<Vec<Polynomial>>,
}

impl LieChain {
    pub fn new(p: Polynomial, field: VectorField) -> Result<Self, PolyError> {
        if p.vars() != field.vars() {
            return Err(PolyError::ContextMismatch {
                left: p.vars().names().to_vec(),
                right: field.vars().names().to_vec(),
            });
        }
        Ok(LieChain {
            field,
            derivs: RwLock::new(vec![p]),
        })
    }

    pub fn field(&self) -> &VectorField {
        &self.field
    }

    pub fn base(&self) -> Polynomial {
        self.derivs.read().unwrap()[0].clone()
    }

    fn ensure(&self, k: usize) {
        if self.derivs.read().unwrap().len() > k {
            return;
        }
        let mut guard = self.derivs.write().unwrap();
        while guard.len() <= k {
            let last = guard.last().unwrap();
            // Contexts were checked at construction.
            let next = lie_derivative(last, &self.field).unwrap();
            guard.push(next);
        }
    }

    /// `L^k p`.
    pub fn get(&self, k: usize) -> Polynomial {
        self.ensure(k);
        self.derivs.read().unwrap()[k].clone()
    }

    /// `[L⁰ p, …, L^k p]`.
    pub fn prefix(&self, k: usize) -> Vec<Polynomial> {
        self.ensure(k);
        self.derivs.read().unwrap()[..=k].to_vec()
    }

    pub fn computed(&self) -> usize {
        self.derivs.read().unwrap().len()
    }
}

/// Memo of Lie chains for one vector field, keyed by base polynomial.
pub struct LieCache {
    field: VectorField,
    chains: Mutex<HashMap<Polynomial, Arc<LieChain>>>,
}

impl LieCache {
    pub fn new(field: VectorField) -> Self {
        LieCache {
            field,
            chains: Mutex::new(HashMap::new()),
        }
    }

    pub fn field(&self) -> &VectorField {
        &self.field
    }

    pub fn chain(&self, p: &Polynomial) -> Result<Arc<LieChain>, PolyError> {
        let mut map = self.chains.lock().unwrap();
        if let Some(c) = map.get(p) {
            return Ok(c.clone());
        }
        let chain = Arc::new(LieChain::new(p.clone(), self.field.clone())?);
        map.insert(p.clone(), chain.clone());
        Ok(chain)
    }

    pub fn len(&self) -> usize {
        self.chains.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Pointwise rank `γ_{p,f}(x₀)`: index of the first nonvanishing Lie
/// derivative, or infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum RankValue {
    Finite(usize),
    Infinite,
}

impl RankValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, RankValue::Finite(_))
    }
}

impl std::fmt::Display for RankValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RankValue::Finite(k) => write!(f, "{k}"),
            RankValue::Infinite => write!(f, "inf"),
        }
    }
}

/// Scans `L⁰ … L^N` at `x₀` (a dense point over all ring variables).
///
/// `N` must be a valid rank bound for `(p, f)`; when every derivative up to
/// `N` vanishes the rank is infinite and the paired value is zero.
pub fn pointwise_rank(chain: &LieChain, point: &[Rational], bound: usize) -> (RankValue, Rational) {
    for k in 0..=bound {
        let v = chain.get(k).eval_dense(point);
        if !v.is_zero() {
            return (RankValue::Finite(k), v);
        }
    }
    (RankValue::Infinite, Rational::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rational::int;
    use crate::polyring::Vars;

    fn setup() -> (Vars, Polynomial, Polynomial) {
        let v = Vars::new(&["x", "y"], &[] as &[&str]);
        (v.clone(), Polynomial::var(&v, 0), Polynomial::var(&v, 1))
    }

    #[test]
    fn example_one_chain() {
        let (v, x, y) = setup();
        let f = VectorField::new(&v, vec![-&x, y.clone()]).unwrap();
        let p = &x + &y.pow(2);
        let chain = lie_chain(&p, &f, 2).unwrap();
        assert_eq!(chain[0], p);
        assert_eq!(chain[1], &(-&x) + &y.pow(2).scale(&int(2)));
        assert_eq!(chain[2], &x + &y.pow(2).scale(&int(4)));
    }

    #[test]
    fn example_two_chain() {
        let (v, x, y) = setup();
        let f = VectorField::new(&v, vec![y.scale(&int(-2)), x.pow(2)]).unwrap();
        let h = &x + &y.pow(2);
        let chain = lie_chain(&h, &f, 2).unwrap();
        assert_eq!(
            chain[1],
            y.scale(&int(-2)) + (&x.pow(2) * &y).scale(&int(2))
        );
        // −8y²x − (2 − 2x²)x²
        let two = Polynomial::constant(&v, int(2));
        let expected =
            (&y.pow(2) * &x).scale(&int(-8)) - (&two - x.pow(2).scale(&int(2))) * x.pow(2);
        assert_eq!(chain[2], expected);
    }

    #[test]
    fn constant_has_zero_derivative() {
        let (v, x, y) = setup();
        let f = VectorField::new(&v, vec![y.clone(), x.clone()]).unwrap();
        let c = Polynomial::constant(&v, int(5));
        assert!(lie_derivative(&c, &f).unwrap().is_zero());
        assert_eq!(lie_chain(&c, &f, 0).unwrap(), vec![c]);
    }

    #[test]
    fn dimension_mismatch() {
        let (v, x, _) = setup();
        assert!(matches!(
            VectorField::new(&v, vec![x]),
            Err(PolyError::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn field_rejects_parameters() {
        let v = Vars::new(&["x"], &["a"]);
        let a = Polynomial::var(&v, 1);
        assert_eq!(
            VectorField::new(&v, vec![a]),
            Err(PolyError::ParameterInField("a".into()))
        );
    }

    #[test]
    fn example_two_ranks() {
        let (v, x, y) = setup();
        let f = VectorField::new(&v, vec![y.scale(&int(-2)), x.pow(2)]).unwrap();
        let chain = LieChain::new(&x + &y.pow(2), f).unwrap();
        assert_eq!(
            pointwise_rank(&chain, &[int(0), int(0)], 2),
            (RankValue::Infinite, int(0))
        );
        assert_eq!(
            pointwise_rank(&chain, &[int(-4), int(2)], 2),
            (RankValue::Finite(1), int(60))
        );
        assert_eq!(
            pointwise_rank(&chain, &[int(-1), int(1)], 2),
            (RankValue::Finite(2), int(8))
        );
    }

    #[test]
    fn cache_reuses_chains() {
        let (v, x, y) = setup();
        let f = VectorField::new(&v, vec![-&y, x.clone()]).unwrap();
        let cache = LieCache::new(f);
        let a = cache.chain(&x).unwrap();
        a.get(3);
        let b = cache.chain(&x).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(b.computed(), 4);
        assert_eq!(cache.len(), 1);
    }
}
