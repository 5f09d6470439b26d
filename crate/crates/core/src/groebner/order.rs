use std::cmp::Ordering;

use crate::polyring::Monomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderKind {
    GRevLex,
    Lex,
    GrLex,
}

/// Total monomial order. `precedence[0]` is the most significant variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    precedence: Vec<usize>,
}

impl MonomialOrder {
    /// Declaration order `x₀ ≻ x₁ ≻ …` over `n` variables.
    pub fn new(kind: OrderKind, n: usize) -> Self {
        MonomialOrder {
            kind,
            precedence: (0..n).collect(),
        }
    }

    pub fn grevlex(n: usize) -> Self {
        Self::new(OrderKind::GRevLex, n)
    }

    pub fn lex(n: usize) -> Self {
        Self::new(OrderKind::Lex, n)
    }

    pub fn grlex(n: usize) -> Self {
        Self::new(OrderKind::GrLex, n)
    }

    /// Custom variable precedence; must be a permutation of `0..n`.
    pub fn with_precedence(kind: OrderKind, precedence: Vec<usize>) -> Self {
        let mut check = precedence.clone();
        check.sort_unstable();
        assert!(
            check.iter().enumerate().all(|(i, &v)| i == v),
            "precedence must be a permutation"
        );
        MonomialOrder { kind, precedence }
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Lex => self.lex_cmp(a, b),
            OrderKind::GrLex => a.degree().cmp(&b.degree()).then_with(|| self.lex_cmp(a, b)),
            OrderKind::GRevLex => a.degree().cmp(&b.degree()).then_with(|| {
                for &v in self.precedence.iter().rev() {
                    match a.exponent(v).cmp(&b.exponent(v)) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }

    fn lex_cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        for &v in &self.precedence {
            match a.exponent(v).cmp(&b.exponent(v)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn lex_prefers_first_variable() {
        let o = MonomialOrder::lex(3);
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 2, 0]), &m(&[1, 1, 3])), Ordering::Greater);
    }

    #[test]
    fn grevlex_textbook_cases() {
        let o = MonomialOrder::grevlex(3);
        // x y^5 z^2 ≻ x^4 y z^3 (same degree, smaller z exponent wins)
        assert_eq!(o.cmp(&m(&[1, 5, 2]), &m(&[4, 1, 3])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 0, 2]), &m(&[1, 0, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 1, 0]), &m(&[0, 0, 2])), Ordering::Greater);
        assert_eq!(o.cmp(&Monomial::one(), &m(&[0, 0, 1])), Ordering::Less);
    }

    #[test]
    fn grlex_ties_broken_lexicographically() {
        let o = MonomialOrder::grlex(3);
        assert_eq!(o.cmp(&m(&[1, 2, 1]), &m(&[1, 1, 2])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 0, 3]), &m(&[2, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn precedence_permutes_variables() {
        let o = MonomialOrder::with_precedence(OrderKind::Lex, vec![1, 0]);
        assert_eq!(o.cmp(&m(&[0, 1]), &m(&[5, 0])), Ordering::Greater);
    }
}
