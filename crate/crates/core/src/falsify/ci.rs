use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::rk4::{integrate, Direction};
use super::FalsifyError;
use crate::decide::finite_points;
use crate::polyring::rational::{from_f64, to_f64};
use crate::polyring::{Rational, Vars};
use crate::semialg::{normalize_dnf, Formula, Problem, Relation};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleBudget {
    pub n_init_points: usize,
    pub horizon: f64,
    pub step: f64,
    pub tolerance: f64,
    /// Half-width of the box `[-r, r]ⁿ` used for rejection sampling.
    pub sample_box: f64,
    pub seed: u64,
}

impl Default for SampleBudget {
    fn default() -> Self {
        SampleBudget {
            n_init_points: 100,
            horizon: 10.0,
            step: 1e-3,
            tolerance: 1e-6,
            sample_box: 10.0,
            seed: 0,
        }
    }
}

impl SampleBudget {
    pub fn validate(&self) -> Result<(), FalsifyError> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !(ok(self.horizon) && ok(self.step) && ok(self.tolerance) && ok(self.sample_box)) {
            return Err(FalsifyError::Budget(
                "horizon, step, tolerance and box must be positive".into(),
            ));
        }
        if self.n_init_points == 0 {
            return Err(FalsifyError::Budget(
                "need at least one initial point".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum CiOutcome {
    NoViolationFound {
        samples: usize,
        diverged: usize,
    },
    /// The trajectory from `x0` stayed in the domain up to `t` and left the
    /// candidate there.
    Violation {
        #[serde(serialize_with = "ser_point")]
        x0: Vec<Rational>,
        t: f64,
        state: Vec<f64>,
    },
}

fn ser_point<S: serde::Serializer>(p: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    p.iter()
        .map(crate::polyring::rational::format_rational)
        .collect::<Vec<_>>()
        .serialize(s)
}

/// Exact initial points: all of a finite `Ξ`, else rejection samples from
/// the box with linear equations of each disjunct pinned.
pub fn sample_initial(
    init: &Formula,
    vars: &Vars,
    budget: &SampleBudget,
) -> Result<Vec<Vec<Rational>>, FalsifyError> {
    if let Some(points) = finite_points(init, vars) {
        if points.is_empty() {
            return Err(FalsifyError::CannotSample(
                "the initial set is empty".into(),
            ));
        }
        return Ok(points);
    }
    let disjuncts: Vec<&Formula> = match init {
        Formula::Or(v) => v.iter().collect(),
        f => vec![f],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut out = Vec::new();
    let tries = budget.n_init_points * 1000;
    for _ in 0..tries {
        if out.len() == budget.n_init_points {
            break;
        }
        let d = disjuncts[rng.gen_range(0..disjuncts.len())];
        let mut point = vec![Rational::zero(); vars.len()];
        let mut pinned = vec![false; vars.n_state()];
        let conj: Vec<&Formula> = match d {
            Formula::And(v) => v.iter().collect(),
            f => vec![f],
        };
        for c in conj {
            if let Formula::Atom(a) = c {
                if a.rel == Relation::Eq {
                    if let Some((i, v)) = crate::decide::linear_root(&a.poly) {
                        point[i] = v;
                        pinned[i] = true;
                    }
                }
            }
        }
        for i in 0..vars.n_state() {
            if !pinned[i] {
                let x: f64 = rng.gen_range(-budget.sample_box..=budget.sample_box);
                // Round to a short dyadic so the exact value stays small.
                point[i] = from_f64((x * 1024.0).round() / 1024.0).unwrap();
            }
        }
        if init.eval_dense(&point) {
            out.push(point);
        }
    }
    if out.is_empty() {
        return Err(FalsifyError::CannotSample(format!(
            "no point of the initial set found in {tries} tries"
        )));
    }
    Ok(out)
}

/// Direct simulation test of the invariant definition on a closed problem.
pub fn numeric_ci_check(prob: &Problem, budget: &SampleBudget) -> Result<CiOutcome, FalsifyError> {
    budget.validate()?;
    for (what, f) in [
        ("domain", &prob.domain),
        ("init", &prob.init),
        ("invariant", &prob.invariant),
    ] {
        if f.involves_params() {
            return Err(FalsifyError::Parametric(format!(
                "the {what} still has parameters"
            )));
        }
    }
    let vars = &prob.vars;
    let domain = normalize_dnf(&prob.domain);
    let inv = normalize_dnf(&prob.invariant);
    let points = sample_initial(&prob.init, vars, budget)?;
    let results: Vec<(Option<CiOutcome>, bool)> = points
        .par_iter()
        .map(|x0| {
            let xf: Vec<f64> = x0.iter().map(to_f64).collect();
            let traj = integrate(
                &prob.field,
                &xf,
                budget.step,
                budget.horizon,
                Direction::Forward,
            );
            for (t, x) in traj.times.iter().zip(&traj.states) {
                if !domain.eval_f64_relaxed(x, budget.tolerance) {
                    break;
                }
                if !inv.eval_f64_relaxed(x, budget.tolerance) {
                    let v = CiOutcome::Violation {
                        x0: x0[..vars.n_state()].to_vec(),
                        t: *t,
                        state: x[..vars.n_state()].to_vec(),
                    };
                    return (Some(v), traj.diverged);
                }
            }
            (None, traj.diverged)
        })
        .collect();
    let diverged = results.iter().filter(|r| r.1).count();
    Ok(results
        .into_iter()
        .find_map(|r| r.0)
        .unwrap_or(CiOutcome::NoViolationFound {
            samples: points.len(),
            diverged,
        }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_problem;
    use crate::polyring::rational::{frac, int};
    use crate::polyring::Assignment;

    fn parabola_template(a: i64) -> Problem {
        let text = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/problems/parabola_template.prob"
        ))
        .unwrap();
        let p = parse_problem(&text).unwrap();
        p.instantiate(&Assignment::from([("a".into(), int(a))]))
            .unwrap()
    }

    #[test]
    fn invariant_parabola_template_has_no_violation() {
        let out = numeric_ci_check(&parabola_template(-1), &SampleBudget::default()).unwrap();
        assert!(
            matches!(out, CiOutcome::NoViolationFound { samples: 2, .. }),
            "{out:?}"
        );
    }

    #[test]
    fn positive_a_fails_immediately() {
        match numeric_ci_check(&parabola_template(1), &SampleBudget::default()).unwrap() {
            CiOutcome::Violation { x0, t, .. } => {
                assert_eq!(t, 0.0);
                assert_eq!(x0, vec![int(-1), frac(1, 2)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn whole_space_is_vacuous() {
        let p = parse_problem(
            "vars: x, y\nfield: x' = y; y' = -x\ninit: x^2 + y^2 <= 4\ninvariant: true\n",
        )
        .unwrap();
        let out = numeric_ci_check(
            &p,
            &SampleBudget {
                horizon: 1.0,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(
            out,
            CiOutcome::NoViolationFound {
                samples: 100,
                diverged: 0
            }
        );
    }

    #[test]
    fn pinned_equations_are_sampled() {
        let p = parse_problem("vars: s, v, a, vseg\nfield: s' = v; v' = a; a' = 0; vseg' = 0\ndomain: v < vseg\ninit: s = 0 & v < vseg\ninvariant: v < vseg\n").unwrap();
        let pts = sample_initial(&p.init, &p.vars, &SampleBudget::default()).unwrap();
        assert_eq!(pts.len(), 100);
        assert!(pts.iter().all(|x| x[0].is_zero() && x[1] < x[3]));
        let out = numeric_ci_check(
            &p,
            &SampleBudget {
                horizon: 2.0,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(matches!(out, CiOutcome::NoViolationFound { .. }), "{out:?}");
    }

    #[test]
    fn empty_initial_set_is_reported() {
        let p =
            parse_problem("vars: x\nfield: x' = 1\ninit: x^2 < 0\ninvariant: x >= 0\n").unwrap();
        assert!(matches!(
            numeric_ci_check(&p, &SampleBudget::default()),
            Err(FalsifyError::CannotSample(_))
        ));
    }

    #[test]
    fn parametric_problem_is_rejected() {
        let text = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/problems/parabola_template.prob"
        ))
        .unwrap();
        let p = parse_problem(&text).unwrap();
        assert!(matches!(
            numeric_ci_check(&p, &SampleBudget::default()),
            Err(FalsifyError::Parametric(_))
        ));
    }
}
