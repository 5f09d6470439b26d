use std::fmt;
use std::sync::Arc;

/// Ordered variable context: state variables first, then template parameters.
///
/// Two contexts are compatible when they list the same names with the same
/// state/parameter split.
#[derive(Clone)]
pub struct Vars(Arc<VarsInner>);

#[derive(Debug, PartialEq, Eq, Hash)]
struct VarsInner {
    names: Vec<String>,
    n_state: usize,
}

impl Vars {
    pub fn new<S: AsRef<str>>(state: &[S], params: &[S]) -> Self {
        let names = state
            .iter()
            .chain(params.iter())
            .map(|s| s.as_ref().to_string())
            .collect();
        Vars(Arc::new(VarsInner {
            names,
            n_state: state.len(),
        }))
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn n_state(&self) -> usize {
        self.0.n_state
    }

    pub fn n_params(&self) -> usize {
        self.len() - self.n_state()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn state_names(&self) -> &[String] {
        &self.0.names[..self.0.n_state]
    }

    pub fn param_names(&self) -> &[String] {
        &self.0.names[self.0.n_state..]
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.0.names[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub fn is_param(&self, idx: usize) -> bool {
        idx >= self.0.n_state
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Vars {}

impl std::hash::Hash for Vars {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Vars({:?} | {:?})",
            self.state_names(),
            self.param_names()
        )
    }
}

/// Power product stored sparsely as `(variable index, exponent)` pairs sorted
/// by index. Zero exponents are never stored, so the empty list is `1`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(idx: usize) -> Self {
        Monomial(vec![(idx as u32, 1)])
    }

    pub fn var_pow(idx: usize, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(idx as u32, exp)])
        }
    }

    /// Builds from a dense exponent vector.
    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(
            exps.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i as u32, e))
                .collect(),
        )
    }

    pub fn from_pairs(mut pairs: Vec<(usize, u32)>) -> Self {
        pairs.sort_unstable();
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.0 == v as u32 => last.1 += e,
                _ => out.push((v as u32, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, idx: usize) -> u32 {
        match self.0.binary_search_by_key(&(idx as u32), |&(v, _)| v) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    /// Iterates `(variable index, exponent)` with nonzero exponents.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|&(v, e)| (v as usize, e))
    }

    pub fn involves(&self, idx: usize) -> bool {
        self.exponent(idx) > 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn pow(&self, n: u32) -> Monomial {
        if n == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * n)).collect())
    }

    /// True when `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        let mut j = 0;
        for &(v, e) in &self.0 {
            while j < other.0.len() && other.0[j].0 < v {
                j += 1;
            }
            if j == other.0.len() || other.0[j].0 != v || other.0[j].1 < e {
                return false;
            }
        }
        true
    }

    /// `other / self`, if exact.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let out = other
            .0
            .iter()
            .filter_map(|&(v, e)| {
                let d = e - self.exponent(v as usize);
                (d > 0).then_some((v, d))
            })
            .collect();
        Some(Monomial(out))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut pairs: Vec<(usize, u32)> = Vec::new();
        let mut vars: Vec<u32> = self.0.iter().chain(other.0.iter()).map(|p| p.0).collect();
        vars.sort_unstable();
        vars.dedup();
        for v in vars {
            let e = self.exponent(v as usize).max(other.exponent(v as usize));
            pairs.push((v as usize, e));
        }
        Monomial::from_pairs(pairs)
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(v, _)| other.exponent(v as usize) == 0)
    }

    /// `∂/∂x_idx`: the exponent brought down and the reduced monomial.
    pub fn derivative(&self, idx: usize) -> Option<(u32, Monomial)> {
        let e = self.exponent(idx);
        if e == 0 {
            return None;
        }
        let out = self
            .0
            .iter()
            .filter_map(|&(v, ev)| {
                if v as usize == idx {
                    (ev > 1).then_some((v, ev - 1))
                } else {
                    Some((v, ev))
                }
            })
            .collect();
        Some((e, Monomial(out)))
    }

    /// Drops the listed variables, returning the removed part separately.
    pub(crate) fn split_off(&self, pred: impl Fn(usize) -> bool) -> (Monomial, Monomial) {
        let (hit, keep): (Vec<_>, Vec<_>) = self.0.iter().partition(|&&(v, _)| pred(v as usize));
        (Monomial(keep), Monomial(hit))
    }

    pub fn display(&self, vars: &Vars) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&(v, e)| {
                let name = vars.name(v as usize);
                if e == 1 {
                    name.to_string()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    format!("x{v}")
                } else {
                    format!("x{v}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let x = Monomial::var(0);
        let y2 = Monomial::var_pow(1, 2);
        let m = x.mul(&y2);
        assert_eq!(m.degree(), 3);
        assert_eq!(m.exponent(1), 2);
        assert!(x.divides(&m));
        assert!(!m.divides(&x));
        assert_eq!(x.quotient_of(&m).unwrap(), y2);
        assert_eq!(
            m.lcm(&Monomial::var_pow(0, 3)),
            Monomial::from_exponents(&[3, 2])
        );
        assert!(x.coprime(&y2));
        assert_eq!(
            m.derivative(1).unwrap(),
            (2, Monomial::from_exponents(&[1, 1]))
        );
        assert!(m.derivative(2).is_none());
    }

    #[test]
    fn no_zero_exponents() {
        let m = Monomial::from_pairs(vec![(2, 0), (1, 1), (1, 2)]);
        assert_eq!(m.iter().collect::<Vec<_>>(), vec![(1, 3)]);
        assert_eq!(Monomial::from_exponents(&[0, 0]), Monomial::one());
    }

    #[test]
    fn context_equality_is_structural() {
        let a = Vars::new(&["x", "y"], &["a"]);
        let b = Vars::new(&["x", "y"], &["a"]);
        let c = Vars::new(&["x", "y", "a"], &[]);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.param_names(), ["a".to_string()]);
        assert!(a.is_param(2));
    }
}
