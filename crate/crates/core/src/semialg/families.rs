//! Formula families over a truncated Lie chain `[L⁰ p, …, L^N p]`.
//!
//! Every family is a disjunction (or conjunction) over `i = 0..=N` and is
//! built without constant folding, so its shape can be read off directly.

use super::formula::{Formula, Relation};
use crate::polyring::Polynomial;

fn prefix_zero(chain: &[Polynomial], i: usize) -> impl Iterator<Item = Formula> + '_ {
    chain[..i]
        .iter()
        .map(|q| Formula::atom(q.clone(), Relation::Eq))
}

fn first_sign(chain: &[Polynomial], rel: Relation, alternate: bool) -> Formula {
    Formula::or((0..chain.len()).map(|i| {
        let li = if alternate && i % 2 == 1 {
            -&chain[i]
        } else {
            chain[i].clone()
        };
        Formula::and(prefix_zero(chain, i).chain(std::iter::once(Formula::atom(li, rel))))
    }))
}

/// `π`: the first non-vanishing derivative is negative.
pub fn trans_formula(chain: &[Polynomial]) -> Formula {
    first_sign(chain, Relation::Lt, false)
}

/// `ψ₊`: the first non-vanishing derivative is positive.
pub fn psi_plus(chain: &[Polynomial]) -> Formula {
    first_sign(chain, Relation::Gt, false)
}

/// `φ₀`: all derivatives up to `N` vanish.
pub fn phi_zero(chain: &[Polynomial]) -> Formula {
    Formula::and(prefix_zero(chain, chain.len()))
}

/// `φ₊`: `(-1)ⁱ L^i p > 0` at the first non-vanishing index.
pub fn phi_plus(chain: &[Polynomial]) -> Formula {
    first_sign(chain, Relation::Gt, true)
}

pub fn psi_zero_plus(chain: &[Polynomial]) -> Formula {
    Formula::or(vec![psi_plus(chain), phi_zero(chain)])
}

pub fn phi_zero_plus(chain: &[Polynomial]) -> Formula {
    Formula::or(vec![phi_plus(chain), phi_zero(chain)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{lie_chain, Vars, VectorField};

    #[test]
    fn zeta_component_for_x_minus_a() {
        let v = Vars::new(&["x", "y"], &["a"]);
        let (x, y, a) = (
            Polynomial::var(&v, 0),
            Polynomial::var(&v, 1),
            Polynomial::var(&v, 2),
        );
        let f = VectorField::new(&v, vec![-(&y + &y), x.pow(2)]).unwrap();
        let chain = lie_chain(&(&x - &a), &f, 2).unwrap();
        assert_eq!(
            psi_plus(&chain).to_string(),
            "x - a > 0 | x - a = 0 & -2*y > 0 | x - a = 0 & -2*y = 0 & -2*x^2 > 0"
        );
        assert_eq!(
            phi_plus(&chain).to_string(),
            "x - a > 0 | x - a = 0 & 2*y > 0 | x - a = 0 & -2*y = 0 & -2*x^2 > 0"
        );
        assert_eq!(
            phi_zero(&chain).to_string(),
            "x - a = 0 & -2*y = 0 & -2*x^2 = 0"
        );
    }

    #[test]
    fn rank_zero_families() {
        let v = Vars::new(&["x"], &[] as &[&str]);
        let one = Polynomial::one(&v);
        assert_eq!(trans_formula(&[one.clone()]).to_string(), "1 < 0");
        assert_eq!(psi_plus(&[one.clone()]).simplify(), Formula::True);
        assert_eq!(phi_plus(&[-&one]).simplify(), Formula::False);
        assert_eq!(phi_zero(&[one]).simplify(), Formula::False);
        assert_eq!(phi_zero(&[Polynomial::zero(&v)]).simplify(), Formula::True);
    }
}
