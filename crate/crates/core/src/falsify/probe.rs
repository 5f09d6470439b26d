use num_traits::Signed;
use serde::Serialize;

use super::rk4::{integrate, Direction};
use crate::polyring::rational::to_f64;
use crate::polyring::{pointwise_rank, LieChain, Polynomial, RankValue, Rational, VectorField};

/// Values of `|p|` below this count as zero.
pub const NOISE_FLOOR: f64 = 1e-9;
/// Probes at `h, 2h, …, PROBE_STEPS·h`.
pub const PROBE_STEPS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum ProbeOutcome {
    /// `excluded` probes fell under the noise floor.
    Agree {
        excluded: usize,
    },
    Disagree {
        detail: String,
    },
    /// Every probe fell under the noise floor while a sign was predicted.
    Inconclusive,
}

/// Largest step at which the leading Taylor term of `p` at `x0` still
/// dominates over the whole probe window, capped at `step`.
///
/// With `c_j = L^j p(x0) / j!` and leading order `k`, the window must stay
/// below `(|c_k| / |c_{k+j}|)^(1/j)` for the next two orders.
pub fn probe_step(chain: &LieChain, x0: &[Rational], rank: usize, step: f64) -> f64 {
    let coeff = |j: usize| {
        let fact: f64 = (1..=j).map(|i| i as f64).product();
        to_f64(&chain.get(j).eval_dense(x0)).abs() / fact
    };
    let lead = coeff(rank);
    let mut window = step * PROBE_STEPS as f64;
    for j in 1..=2 {
        let c = coeff(rank + j);
        if c > 0.0 {
            window = window.min(0.1 * (lead / c).powf(1.0 / j as f64));
        }
    }
    window / PROBE_STEPS as f64
}

/// Compares the sign of the first nonvanishing Lie derivative at `x0` with
/// the sign of `p` along a short forward trajectory of `PROBE_STEPS` steps
/// of at most `step` each (see [`probe_step`]).
pub fn sign_probe(
    p: &Polynomial,
    field: &VectorField,
    x0: &[Rational],
    bound: usize,
    step: f64,
) -> ProbeOutcome {
    let chain =
        LieChain::new(p.clone(), field.clone()).expect("polynomial and field share a context");
    let (rank, value) = pointwise_rank(&chain, x0, bound);
    let step = match rank {
        RankValue::Finite(k) => probe_step(&chain, x0, k, step),
        RankValue::Infinite => step,
    };
    let xf: Vec<f64> = x0.iter().map(to_f64).collect();
    let traj = integrate(
        field,
        &xf,
        step,
        step * PROBE_STEPS as f64,
        Direction::Forward,
    );
    let probes: Vec<f64> = traj.states[1..].iter().map(|x| p.eval_f64(x)).collect();
    match rank {
        RankValue::Infinite => match probes.iter().find(|v| v.abs() >= NOISE_FLOOR) {
            None => ProbeOutcome::Agree { excluded: 0 },
            Some(v) => ProbeOutcome::Disagree {
                detail: format!("rank is infinite but p reached {v:e}"),
            },
        },
        RankValue::Finite(k) => {
            let positive = value.is_positive();
            let mut excluded = 0;
            for (i, v) in probes.iter().enumerate() {
                if v.abs() < NOISE_FLOOR {
                    excluded += 1;
                } else if (*v > 0.0) != positive {
                    return ProbeOutcome::Disagree {
                        detail: format!(
                            "rank {k} with value {value} but p = {v:e} at t = {}",
                            (i + 1) as f64 * step
                        ),
                    };
                }
            }
            if excluded == probes.len() {
                ProbeOutcome::Inconclusive
            } else {
                ProbeOutcome::Agree { excluded }
            }
        }
    }
}
