//! Seeded random polynomials and fields for property tests and statistical
//! checks.

use rand::Rng;

use super::rational::frac;
use super::{Monomial, Polynomial, Rational, Vars, VectorField};

/// Small rational `n/d` with `|n| ≤ num_max`, `1 ≤ d ≤ den_max`.
pub fn random_rational<R: Rng>(rng: &mut R, num_max: i64, den_max: i64) -> Rational {
    frac(
        rng.gen_range(-num_max..=num_max),
        rng.gen_range(1..=den_max),
    )
}

/// Up to `terms` terms of total degree `≤ degree` over the variables with
/// indices in `over`. Integer coefficients in `[-5, 5]`.
pub fn random_polynomial<R: Rng>(
    rng: &mut R,
    vars: &Vars,
    over: &[usize],
    degree: u32,
    terms: usize,
) -> Polynomial {
    let mut p = Polynomial::zero(vars);
    for _ in 0..terms {
        let total = rng.gen_range(0..=degree);
        let mut exps = Vec::new();
        for _ in 0..total {
            exps.push((over[rng.gen_range(0..over.len())], 1u32));
        }
        let c = frac(rng.gen_range(-5..=5), 1);
        p = &p + &Polynomial::term(vars, c, Monomial::from_pairs(exps));
    }
    p
}

/// Random field over the state variables of `vars`.
pub fn random_field<R: Rng>(rng: &mut R, vars: &Vars, degree: u32, terms: usize) -> VectorField {
    let state: Vec<usize> = (0..vars.n_state()).collect();
    let comps = state
        .iter()
        .map(|_| random_polynomial(rng, vars, &state, degree, terms))
        .collect();
    VectorField::new(vars, comps).expect("state-only components")
}

/// Random rational point over every variable of the context.
pub fn random_point<R: Rng>(rng: &mut R, vars: &Vars, num_max: i64, den_max: i64) -> Vec<Rational> {
    (0..vars.len())
        .map(|_| random_rational(rng, num_max, den_max))
        .collect()
}
