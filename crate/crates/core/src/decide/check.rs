use std::path::PathBuf;
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::sexpr::ModelValue;
use super::smtlib;
use super::solver::{run_script, SatStatus, SolverConfig};
use super::verdict::{AssignmentSer, Verdict, Witness};
use super::DecideError;
use crate::groebner::DEFAULT_CAP;
use crate::polyring::rational::to_f64;
use crate::polyring::{Assignment, Polynomial, Rational, Vars};
use crate::semialg::{Condition, Encoder, Formula, Goal, GoalKind, Problem, Relation, Route};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Folded to a constant by simplification.
    Trivial,
    /// Antecedent is a finite point set; decided by exact evaluation.
    FinitePoints,
    Solver,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoalReport {
    pub kind: GoalKind,
    pub verdict: Verdict,
    pub method: Method,
    pub millis: u128,
    pub formula_size: usize,
    pub script: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundInfo {
    pub atom: String,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub route: Option<Route>,
    #[serde(serialize_with = "ser_opt_assignment")]
    pub parameters: Option<Assignment>,
    pub goals: Vec<GoalReport>,
    pub bounds: Vec<BoundInfo>,
    pub millis: u128,
}

fn ser_opt_assignment<S: serde::Serializer>(
    a: &Option<Assignment>,
    s: S,
) -> Result<S::Ok, S::Error> {
    a.as_ref().map(AssignmentSer).serialize(s)
}

/// Points of `f` when it pins every state variable by linear equations in
/// each disjunct. Parameters must not occur.
pub fn finite_points(f: &Formula, vars: &Vars) -> Option<Vec<Vec<Rational>>> {
    if f.involves_params() {
        return None;
    }
    let disjuncts: Vec<&Formula> = match f {
        Formula::Or(v) => v.iter().collect(),
        Formula::False => vec![],
        other => vec![other],
    };
    let mut out: Vec<Vec<Rational>> = Vec::new();
    'disj: for d in disjuncts {
        let conj: Vec<&Formula> = match d {
            Formula::And(v) => v.iter().collect(),
            other => vec![other],
        };
        let mut pinned: Vec<Option<Rational>> = vec![None; vars.n_state()];
        for c in &conj {
            if let Formula::Atom(a) = c {
                if a.rel == Relation::Eq {
                    if let Some((idx, val)) = linear_root(&a.poly) {
                        match &pinned[idx] {
                            Some(old) if *old != val => continue 'disj,
                            _ => pinned[idx] = Some(val),
                        }
                    }
                }
            }
        }
        if pinned.iter().any(Option::is_none) {
            return None;
        }
        let mut point: Vec<Rational> = pinned.into_iter().map(Option::unwrap).collect();
        point.resize(vars.len(), Rational::zero());
        if conj.iter().all(|c| c.eval_dense(&point)) && !out.contains(&point) {
            out.push(point);
        }
    }
    Some(out)
}

/// `(i, -b/a)` for `a·x_i + b`.
pub(crate) fn linear_root(p: &Polynomial) -> Option<(usize, Rational)> {
    let support = p.support();
    if support.len() != 1 || p.degree() != Some(1) {
        return None;
    }
    let idx = support[0];
    if p.vars().is_param(idx) {
        return None;
    }
    let mut a = Rational::zero();
    let mut b = Rational::zero();
    for (m, c) in p.terms() {
        if m.is_one() {
            b = c.clone();
        } else {
            a = c.clone();
        }
    }
    Some((idx, -b / a))
}

fn dense_to_assignment(vars: &Vars, point: &[Rational], only_state: bool) -> Assignment {
    vars.names()
        .iter()
        .enumerate()
        .filter(|(i, _)| !only_state || *i < vars.n_state())
        .map(|(i, n)| (n.clone(), point[i].clone()))
        .collect()
}

/// Decides `∀x. φ` for a closed goal and records how.
pub fn discharge(
    phi: &Formula,
    vars: &Vars,
    cfg: &SolverConfig,
    tag: &str,
) -> (Verdict, Method, Option<PathBuf>) {
    let f = phi.simplify();
    match &f {
        Formula::True => return (Verdict::Valid, Method::Trivial, None),
        Formula::False => {
            let zero = vec![Rational::zero(); vars.len()];
            return (
                Verdict::Invalid(Witness::exact(dense_to_assignment(vars, &zero, true))),
                Method::Trivial,
                None,
            );
        }
        Formula::Implies(a, b) => {
            if let Some(points) = finite_points(a, vars) {
                for p in points {
                    if !b.eval_dense(&p) {
                        return (
                            Verdict::Invalid(Witness::exact(dense_to_assignment(vars, &p, true))),
                            Method::FinitePoints,
                            None,
                        );
                    }
                }
                return (Verdict::Valid, Method::FinitePoints, None);
            }
        }
        _ => {}
    }
    let script = smtlib::validity_script(&f, vars, &cfg.logic, &cfg.options, tag);
    let path = write_transcript(cfg, tag, "smt2", &script);
    let resp = run_script(cfg, &script);
    write_transcript(cfg, tag, "out", &resp.raw);
    let verdict = match resp.status {
        SatStatus::Unsat => Verdict::Valid,
        SatStatus::Unknown(r) => Verdict::Unknown(r),
        SatStatus::Sat => gate(&f, vars, &resp.model),
    };
    (verdict, Method::Solver, path)
}

/// Re-evaluates a solver model against the goal. Exact models must falsify
/// it exactly; approximate ones are checked in floating point.
fn gate(
    f: &Formula,
    vars: &Vars,
    model: &std::collections::BTreeMap<String, ModelValue>,
) -> Verdict {
    let mut point = vec![Rational::zero(); vars.len()];
    let mut exact = true;
    for (i, name) in vars.names().iter().enumerate() {
        match model.get(name) {
            Some(ModelValue::Exact(q)) => point[i] = q.clone(),
            Some(ModelValue::Approx(q)) => {
                point[i] = q.clone();
                exact = false;
            }
            Some(ModelValue::Algebraic) => {
                return Verdict::Unknown(format!(
                    "no decimal value for `{name}` in the solver model"
                ))
            }
            None => {}
        }
    }
    let falsified = if exact {
        !f.eval_dense(&point)
    } else {
        let pf: Vec<f64> = point.iter().map(to_f64).collect();
        !f.eval_f64(&pf)
    };
    if falsified {
        Verdict::Invalid(Witness {
            point: dense_to_assignment(vars, &point, true),
            exact,
        })
    } else {
        Verdict::Unknown("solver model does not falsify the goal on re-evaluation".into())
    }
}

fn write_transcript(cfg: &SolverConfig, tag: &str, ext: &str, text: &str) -> Option<PathBuf> {
    let dir = cfg.transcript_dir.as_ref()?;
    std::fs::create_dir_all(dir).ok()?;
    let safe: String = tag
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect();
    let path = dir.join(format!("{safe}.{ext}"));
    std::fs::write(&path, text).ok()?;
    Some(path)
}

/// `∀x. φ` for a formula without free parameters.
pub fn check_validity(phi: &Formula, vars: &Vars, cfg: &SolverConfig) -> Verdict {
    discharge(phi, vars, cfg, "validity").0
}

/// Holds the parametric encoding of one problem so that it can be checked
/// at many parameter values.
pub struct Checker {
    prob: Problem,
    encoder: Encoder,
    condition: Result<Condition, String>,
}

impl Checker {
    pub fn new(prob: &Problem, cap: usize) -> Self {
        let encoder = Encoder::with_cap(&prob.field, cap);
        let condition = encoder.condition(prob).map_err(|e| e.to_string());
        Checker {
            prob: prob.clone(),
            encoder,
            condition,
        }
    }

    pub fn problem(&self) -> &Problem {
        &self.prob
    }

    pub fn condition(&self) -> Result<&Condition, &str> {
        self.condition.as_ref().map_err(String::as_str)
    }

    pub fn encoder(&self) -> &Encoder {
        &self.encoder
    }

    pub fn bounds(&self) -> Vec<BoundInfo> {
        self.encoder
            .computed_bounds()
            .iter()
            .map(|rb| BoundInfo {
                atom: rb.base().to_string(),
                n: rb.value,
            })
            .collect()
    }

    fn validate_params(&self, u0: Option<&Assignment>) -> Result<(), DecideError> {
        let params = self.prob.params();
        match u0 {
            None if !params.is_empty() => Err(DecideError::Usage(format!(
                "parameters {} need values",
                params.join(", ")
            ))),
            Some(u) => {
                for p in params {
                    if !u.contains_key(p) {
                        return Err(DecideError::Usage(format!("no value for parameter `{p}`")));
                    }
                }
                for k in u.keys() {
                    if !params.contains(k) {
                        return Err(DecideError::Usage(format!(
                            "`{k}` is not a declared parameter"
                        )));
                    }
                }
                Ok(())
            }
            None => Ok(()),
        }
    }

    /// Closed goals at `u0`.
    pub fn goals_at(&self, u0: Option<&Assignment>) -> Result<Vec<Goal>, DecideError> {
        self.validate_params(u0)?;
        let cond = self
            .condition
            .as_ref()
            .map_err(|e| DecideError::Encoding(e.clone()))?;
        let cond = match u0 {
            Some(u) => cond
                .instantiate(u)
                .map_err(|e| DecideError::Usage(e.to_string()))?,
            None => cond.simplified(),
        };
        Ok(cond.goals)
    }

    /// Discharges every goal at `u0`. With `early_exit` goals run in order
    /// and stop at the first invalid one; otherwise they run concurrently.
    pub fn check(
        &self,
        u0: Option<&Assignment>,
        cfg: &SolverConfig,
        early_exit: bool,
        tag: &str,
    ) -> Result<CheckReport, DecideError> {
        let start = Instant::now();
        self.validate_params(u0)?;
        let route = self.condition.as_ref().ok().map(|c| c.route);
        let goals = match self.goals_at(u0) {
            Ok(g) => g,
            Err(DecideError::Encoding(reason)) => {
                return Ok(CheckReport {
                    verdict: Verdict::Unknown(reason),
                    route,
                    parameters: u0.cloned(),
                    goals: vec![],
                    bounds: self.bounds(),
                    millis: start.elapsed().as_millis(),
                })
            }
            Err(e) => return Err(e),
        };
        let run = |g: &Goal| {
            let t = Instant::now();
            let label = format!("{tag}-{}", g.kind.label());
            let (verdict, method, script) = discharge(&g.formula, &self.prob.vars, cfg, &label);
            GoalReport {
                kind: g.kind,
                verdict,
                method,
                millis: t.elapsed().as_millis(),
                formula_size: g.formula.size(),
                script,
            }
        };
        let reports: Vec<GoalReport> = if early_exit {
            let mut out = Vec::new();
            for g in &goals {
                let r = run(g);
                let stop = r.verdict.is_invalid();
                out.push(r);
                if stop {
                    break;
                }
            }
            out
        } else {
            goals.par_iter().map(run).collect()
        };
        let verdict = aggregate(&reports);
        Ok(CheckReport {
            verdict,
            route,
            parameters: u0.cloned(),
            goals: reports,
            bounds: self.bounds(),
            millis: start.elapsed().as_millis(),
        })
    }
}

fn aggregate(reports: &[GoalReport]) -> Verdict {
    if let Some(r) = reports.iter().find(|r| r.verdict.is_invalid()) {
        return r.verdict.clone();
    }
    if let Some(r) = reports
        .iter()
        .find(|r| matches!(r.verdict, Verdict::Unknown(_)))
    {
        return Verdict::Unknown(format!(
            "{}: {}",
            r.kind.label(),
            match &r.verdict {
                Verdict::Unknown(m) => m.as_str(),
                _ => unreachable!(),
            }
        ));
    }
    Verdict::Valid
}

/// Runs `f` on a thread pool sized by the configuration.
pub fn with_pool<T: Send>(cfg: &SolverConfig, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
    {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Full check of `P` (instantiated at `u0` when parametric).
pub fn check_invariant(
    prob: &Problem,
    u0: Option<&Assignment>,
    cfg: &SolverConfig,
) -> Result<CheckReport, DecideError> {
    check_invariant_with_cap(prob, u0, cfg, DEFAULT_CAP)
}

pub fn check_invariant_with_cap(
    prob: &Problem,
    u0: Option<&Assignment>,
    cfg: &SolverConfig,
    cap: usize,
) -> Result<CheckReport, DecideError> {
    cfg.validate().map_err(DecideError::Usage)?;
    with_pool(cfg, || {
        Checker::new(prob, cap).check(u0, cfg, false, "check")
    })
}

/// `∀x. Ξ → H`; the result is advisory.
pub fn check_init_subset_domain(prob: &Problem, cfg: &SolverConfig) -> Verdict {
    discharge(
        &Formula::implies(prob.init.clone(), prob.domain.clone()),
        &prob.vars,
        cfg,
        "init-in-domain",
    )
    .0
}
