use std::cmp::Ordering;
use std::path::PathBuf;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::check::{finite_points, with_pool, CheckReport, Checker};
use super::qe;
use super::sexpr::ModelValue;
use super::smtlib;
use super::solver::{run_script, SatStatus, SolverConfig};
use super::verdict::{AssignmentSer, Verdict};
use super::DecideError;
use crate::polyring::{parse_rational, Assignment, Rational, Vars};
use crate::semialg::{Formula, Goal, Problem};

/// Rational tuples `name=start:end:step`, one axis per parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub axes: Vec<(String, Vec<Rational>)>,
}

impl Grid {
    /// `a=-2:2:1,b=-1:1:1`; a bare value `a=3` is a one-point axis.
    pub fn parse(spec: &str) -> Result<Grid, String> {
        let mut axes = Vec::new();
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, range) = part.split_once('=').ok_or_else(|| {
                format!("grid axis `{part}` is not of the form name=start:end:step")
            })?;
            let nums: Result<Vec<Rational>, String> = range
                .split(':')
                .map(|s| parse_rational(s.trim()).map_err(|e| e.to_string()))
                .collect();
            let nums = nums?;
            let values = match nums.as_slice() {
                [v] => vec![v.clone()],
                [a, b] => Self::range(a, b, &Rational::from_integer(1.into()))?,
                [a, b, s] => Self::range(a, b, s)?,
                _ => return Err(format!("grid axis `{part}` has too many fields")),
            };
            axes.push((name.trim().to_string(), values));
        }
        if axes.is_empty() {
            return Err("empty grid".into());
        }
        Ok(Grid { axes })
    }

    fn range(a: &Rational, b: &Rational, step: &Rational) -> Result<Vec<Rational>, String> {
        if !step.is_positive() {
            return Err("grid step must be positive".into());
        }
        let mut out = Vec::new();
        let mut v = a.clone();
        while v <= *b {
            out.push(v.clone());
            v += step;
            if out.len() > 100_000 {
                return Err("grid axis too long".into());
            }
        }
        Ok(out)
    }

    /// Every tuple, last axis varying fastest.
    pub fn points(&self) -> Vec<Assignment> {
        let mut out = vec![Assignment::new()];
        for (name, values) in &self.axes {
            let mut next = Vec::with_capacity(out.len() * values.len());
            for a in &out {
                for v in values {
                    let mut b = a.clone();
                    b.insert(name.clone(), v.clone());
                    next.push(b);
                }
            }
            out = next;
        }
        out
    }
}

#[derive(Debug, Clone)]
pub enum Strategy {
    Grid(Grid),
    Existential,
    /// Writes a QE script; if `result` names an existing file, its contents
    /// are parsed as the constraint on the parameters.
    QeScript {
        script: PathBuf,
        result: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenerationMode {
    ConstraintFormula,
    WitnessList,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenerationResult {
    pub mode: GenerationMode,
    #[serde(serialize_with = "ser_formula")]
    pub constraint: Option<Formula>,
    #[serde(serialize_with = "ser_assignments")]
    pub witnesses: Vec<Assignment>,
    /// Per-tuple reports for the grid strategy (or the re-check of an
    /// existential witness).
    pub checks: Vec<CheckReport>,
    pub note: Option<String>,
    pub script: Option<PathBuf>,
}

fn ser_formula<S: serde::Serializer>(f: &Option<Formula>, s: S) -> Result<S::Ok, S::Error> {
    f.as_ref().map(|f| f.to_string()).serialize(s)
}

fn ser_assignments<S: serde::Serializer>(v: &[Assignment], s: S) -> Result<S::Ok, S::Error> {
    v.iter().map(AssignmentSer).collect::<Vec<_>>().serialize(s)
}

impl GenerationResult {
    fn empty(mode: GenerationMode) -> Self {
        GenerationResult {
            mode,
            constraint: None,
            witnesses: vec![],
            checks: vec![],
            note: None,
            script: None,
        }
    }
}

/// Goals with finite antecedents replaced by the consequent at each point,
/// leaving a condition on the parameters alone.
pub(crate) fn eliminate_finite(goals: &[Goal], vars: &Vars) -> Formula {
    Formula::and(goals.iter().map(|g| match &g.formula {
        Formula::Implies(a, b) => match finite_points(a, vars) {
            Some(points) => Formula::and(points.iter().map(|p| {
                let named: Assignment = vars
                    .state_names()
                    .iter()
                    .enumerate()
                    .map(|(i, n)| (n.clone(), p[i].clone()))
                    .collect();
                b.substitute(&named)
            })),
            None => g.formula.clone(),
        },
        f => f.clone(),
    }))
    .simplify()
}

pub fn generate_constraint(
    prob: &Problem,
    cfg: &SolverConfig,
    strategy: &Strategy,
    cap: usize,
) -> Result<GenerationResult, DecideError> {
    cfg.validate().map_err(DecideError::Usage)?;
    if !prob.is_parametric() {
        return Err(DecideError::Usage(
            "generation needs a template with parameters".into(),
        ));
    }
    with_pool(cfg, || {
        let checker = Checker::new(prob, cap);
        if let Err(e) = checker.condition() {
            let mut r = GenerationResult::empty(GenerationMode::Unknown);
            r.note = Some(e.to_string());
            return Ok(r);
        }
        match strategy {
            Strategy::Grid(grid) => grid_search(&checker, grid, cfg),
            Strategy::Existential => existential(&checker, cfg),
            Strategy::QeScript { script, result } => qe_strategy(&checker, script, result.as_ref()),
        }
    })
}

fn grid_search(
    checker: &Checker,
    grid: &Grid,
    cfg: &SolverConfig,
) -> Result<GenerationResult, DecideError> {
    let params = checker.problem().params();
    let names: Vec<&String> = grid.axes.iter().map(|(n, _)| n).collect();
    for p in params {
        if !names.contains(&p) {
            return Err(DecideError::Usage(format!(
                "grid has no axis for parameter `{p}`"
            )));
        }
    }
    for n in &names {
        if !params.contains(n) {
            return Err(DecideError::Usage(format!(
                "grid axis `{n}` is not a parameter"
            )));
        }
    }
    let points = grid.points();
    let checks: Result<Vec<CheckReport>, DecideError> = points
        .par_iter()
        .enumerate()
        .map(|(i, u)| checker.check(Some(u), cfg, true, &format!("grid-{i}")))
        .collect();
    let checks = checks?;
    let witnesses = checks
        .iter()
        .filter(|c| c.verdict.is_valid())
        .map(|c| c.parameters.clone().unwrap())
        .collect();
    let unknown = checks
        .iter()
        .filter(|c| matches!(c.verdict, Verdict::Unknown(_)))
        .count();
    Ok(GenerationResult {
        mode: GenerationMode::WitnessList,
        constraint: None,
        witnesses,
        note: (unknown > 0).then(|| format!("{unknown} grid point(s) undecided")),
        checks,
        script: None,
    })
}

fn existential(checker: &Checker, cfg: &SolverConfig) -> Result<GenerationResult, DecideError> {
    if !cfg.quantifiers {
        let mut r = GenerationResult::empty(GenerationMode::Unknown);
        r.note =
            Some("backend does not advertise quantifier support; use the grid strategy".into());
        return Ok(r);
    }
    let vars = &checker.problem().vars;
    let cond = checker
        .condition()
        .map_err(|e| DecideError::Encoding(e.to_string()))?;
    let matrix = eliminate_finite(&cond.goals, vars);
    let script = smtlib::exists_forall_script(&matrix, vars, &cfg.options);
    let resp = run_script(cfg, &script);
    let mut r = GenerationResult::empty(GenerationMode::Unknown);
    match resp.status {
        SatStatus::Unknown(reason) => r.note = Some(reason),
        SatStatus::Unsat => {
            r.mode = GenerationMode::WitnessList;
            r.note = Some("backend reports that no parameter value satisfies the condition".into());
        }
        SatStatus::Sat => {
            let mut u = Assignment::new();
            for p in vars.param_names() {
                match resp.model.get(p) {
                    Some(ModelValue::Exact(q)) => {
                        u.insert(p.clone(), q.clone());
                    }
                    None => {
                        u.insert(p.clone(), Rational::zero());
                    }
                    Some(_) => {
                        r.note = Some(format!("irrational value for `{p}` in the solver model"));
                        return Ok(r);
                    }
                }
            }
            let check = checker.check(Some(&u), cfg, false, "existential")?;
            if check.verdict.is_valid() {
                r.mode = GenerationMode::WitnessList;
                r.witnesses.push(u);
            } else {
                r.note = Some(format!("solver witness failed re-check: {}", check.verdict));
            }
            r.checks.push(check);
        }
    }
    Ok(r)
}

fn qe_strategy(
    checker: &Checker,
    script: &PathBuf,
    result: Option<&PathBuf>,
) -> Result<GenerationResult, DecideError> {
    let vars = &checker.problem().vars;
    let cond = checker
        .condition()
        .map_err(|e| DecideError::Encoding(e.to_string()))?;
    let text = qe::emit_qe_script(&eliminate_finite(&cond.goals, vars), vars);
    std::fs::write(script, &text)
        .map_err(|e| DecideError::Io(format!("{}: {e}", script.display())))?;
    let mut r = GenerationResult::empty(GenerationMode::Unknown);
    r.script = Some(script.clone());
    match result {
        Some(path) if path.exists() => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| DecideError::Io(format!("{}: {e}", path.display())))?;
            let constraint = qe::parse_constraint(&text, vars).map_err(DecideError::Usage)?;
            r.mode = GenerationMode::ConstraintFormula;
            r.constraint = Some(constraint);
        }
        _ => {
            r.note =
                Some("QE script written; run an external QE tool and pass its output back".into())
        }
    }
    Ok(r)
}

fn lex_cmp(a: &Assignment, b: &Assignment, order: &[String]) -> Ordering {
    for p in order {
        match a.get(p).cmp(&b.get(p)) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Deterministic choice of one parameter value: the lexicographically
/// smallest witness, or one satisfiability query on a constraint formula.
pub fn pick_sample(
    result: &GenerationResult,
    params: &[String],
    cfg: &SolverConfig,
) -> Option<Assignment> {
    match result.mode {
        GenerationMode::WitnessList => result
            .witnesses
            .iter()
            .min_by(|a, b| lex_cmp(a, b, params))
            .cloned(),
        GenerationMode::ConstraintFormula => {
            let c = result.constraint.as_ref()?;
            let script = smtlib::satisfiability_script(c, params, &cfg.logic);
            let resp = run_script(cfg, &script);
            if resp.status != SatStatus::Sat {
                return None;
            }
            let mut u = Assignment::new();
            for p in params {
                let v = match resp.model.get(p) {
                    Some(ModelValue::Exact(q)) | Some(ModelValue::Approx(q)) => q.clone(),
                    Some(ModelValue::Algebraic) => return None,
                    None => Rational::zero(),
                };
                u.insert(p.clone(), v);
            }
            Some(u)
        }
        GenerationMode::Unknown => None,
    }
}
