use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use super::report::Report;
use super::{parse_polynomial, parse_problem};
use crate::decide::{
    check_init_subset_domain, emit_qe, emit_scripts, generate_constraint, pick_sample, Checker,
    GenerationMode, Grid, SolverConfig, Strategy, Verdict,
};
use crate::falsify::{
    integrate, numeric_ci_check, sample_initial, CiOutcome, Direction, SampleBudget,
};
use crate::groebner::DEFAULT_CAP;
use crate::polyring::rational::{format_rational, to_f64};
use crate::polyring::{lie_chain, parse_rational, Assignment, Polynomial};
use crate::semialg::{normalize_dnf, Encoder, Problem};

/// Exit status for usage, configuration and input errors.
pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "lieinv",
    version,
    about = "Check and generate semi-algebraic invariants of polynomial ODEs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print the Lie derivatives of the candidate's polynomials.
    Lie {
        file: PathBuf,
        /// Highest derivative order.
        #[arg(short = 'k', long, default_value_t = 2)]
        order: usize,
        #[command(flatten)]
        target: Target,
    },
    /// Print the rank bound N and the ideal basis witnessing it.
    Rank {
        file: PathBuf,
        #[arg(long = "max-order", default_value_t = DEFAULT_CAP)]
        max_order: usize,
        #[command(flatten)]
        target: Target,
    },
    /// Print the transverse and entry formulas of a polynomial.
    Trans {
        file: PathBuf,
        #[arg(long = "max-order", default_value_t = DEFAULT_CAP)]
        max_order: usize,
        #[command(flatten)]
        target: Target,
    },
    /// Decide whether the (instantiated) candidate is an invariant.
    Check {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Also write the SMT-LIB scripts to this path.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Search the template parameters for invariants.
    Generate {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Grid such as `a=-2:2:1,b=-1:1:1`.
        #[arg(long, conflicts_with_all = ["existential", "qe_script"])]
        grid: Option<String>,
        /// One quantified query to the solver.
        #[arg(long)]
        existential: bool,
        /// Write a QE script here instead of solving.
        #[arg(long = "qe-script")]
        qe_script: Option<PathBuf>,
        /// Constraint returned by an external QE tool.
        #[arg(long = "qe-result", requires = "qe_script")]
        qe_result: Option<PathBuf>,
    },
    /// Simulate trajectories from the initial set looking for a violation.
    Falsify {
        file: PathBuf,
        #[arg(short = 'p', value_name = "NAME=VALUE")]
        params: Vec<String>,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 10.0)]
        horizon: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[arg(long = "box", default_value_t = 10.0)]
        sample_box: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Dump the trajectory of the first violation (or first sample) as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Write solver scripts without running a solver.
    Emit {
        file: PathBuf,
        #[arg(short = 'p', value_name = "NAME=VALUE")]
        params: Vec<String>,
        /// Output path; standard output when omitted.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Emit the QE script for the template instead.
        #[arg(long)]
        qe: bool,
        #[arg(long = "max-order", default_value_t = DEFAULT_CAP)]
        max_order: usize,
    },
}

#[derive(Args, Debug)]
struct Target {
    /// Polynomial to analyse; defaults to the invariant's atoms.
    #[arg(long)]
    poly: Option<String>,
    /// Use the domain's atoms instead of the invariant's.
    #[arg(long, conflicts_with = "poly")]
    domain: bool,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(short = 'p', value_name = "NAME=VALUE")]
    params: Vec<String>,
    #[arg(long = "solver-cmd", default_value = "z3 -in")]
    solver_cmd: String,
    /// Seconds per solver query.
    #[arg(long, default_value_t = 60)]
    timeout: u64,
    #[arg(long = "max-order", default_value_t = DEFAULT_CAP)]
    max_order: usize,
    #[arg(long)]
    workers: Option<usize>,
    /// Keep every script and raw solver answer in this directory.
    #[arg(long)]
    transcripts: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

impl Common {
    fn solver(&self) -> Result<SolverConfig, String> {
        let mut cfg = SolverConfig::with_command(&self.solver_cmd);
        cfg.timeout_secs = self.timeout;
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        if let Some(dir) = &self.transcripts {
            std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
            cfg.transcript_dir = Some(dir.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

type CmdResult = Result<i32, String>;

/// Runs the command line `args` (program name first) and returns the exit
/// status. Output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let mut io = Io { out, err };
    match dispatch(cli.cmd, &mut io) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(io.err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn load(path: &Path) -> Result<Problem, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_problem(&text).map_err(|e| format!("{}:{e}", path.display()))
}

fn parse_params(pairs: &[String]) -> Result<Option<Assignment>, String> {
    if pairs.is_empty() {
        return Ok(None);
    }
    let mut u = Assignment::new();
    for pair in pairs {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| format!("`-p {pair}` is not of the form name=value"))?;
        let q = parse_rational(v).map_err(|e| e.to_string())?;
        if u.insert(k.trim().to_string(), q).is_some() {
            return Err(format!("parameter `{k}` given twice"));
        }
    }
    Ok(Some(u))
}

fn targets(prob: &Problem, t: &Target) -> Result<Vec<Polynomial>, String> {
    if let Some(text) = &t.poly {
        return Ok(vec![
            parse_polynomial(text, &prob.vars).map_err(|e| format!("--poly: {e}"))?
        ]);
    }
    let f = if t.domain {
        &prob.domain
    } else {
        &prob.invariant
    };
    let mut out: Vec<Polynomial> = Vec::new();
    for a in normalize_dnf(f).atoms() {
        let p = a.poly.clone();
        if !out.contains(&p) && !out.contains(&-&p) && !p.is_constant() {
            out.push(p);
        }
    }
    if out.is_empty() {
        return Err("no non-constant atoms to analyse; pass --poly".into());
    }
    Ok(out)
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> String + '_ {
    move |e| format!("{}: {e}", path.display())
}

fn dispatch(cmd: Cmd, io: &mut Io) -> CmdResult {
    let w = |r: std::io::Result<()>| r.map_err(|e| e.to_string());
    match cmd {
        Cmd::Lie {
            file,
            order,
            target,
        } => {
            let prob = load(&file)?;
            for p in targets(&prob, &target)? {
                let chain = lie_chain(&p, &prob.field, order).map_err(|e| e.to_string())?;
                for (i, l) in chain.iter().enumerate() {
                    w(writeln!(io.out, "L^{i} = {l}"))?;
                }
            }
            Ok(0)
        }
        Cmd::Rank {
            file,
            max_order,
            target,
        } => {
            let prob = load(&file)?;
            let enc = Encoder::with_cap(&prob.field, max_order);
            for p in targets(&prob, &target)? {
                match enc.bound(&p) {
                    Ok(rb) => {
                        let n = rb.value;
                        w(writeln!(io.out, "p = {p}"))?;
                        w(writeln!(io.out, "N = {n}"))?;
                        w(writeln!(io.out, "L^{} = {}", n + 1, rb.chain[n + 1]))?;
                        let gens: Vec<String> = (0..=n).map(|i| format!("L^{i}")).collect();
                        w(writeln!(
                            io.out,
                            "L^{} reduces to 0 modulo a Groebner basis of <{}>:",
                            n + 1,
                            gens.join(", ")
                        ))?;
                        for g in rb.witness_basis().generators() {
                            w(writeln!(io.out, "  {g}"))?;
                        }
                    }
                    Err(e) => {
                        w(writeln!(io.err, "error: {p}: {e} (raise --max-order)"))?;
                        return Ok(2);
                    }
                }
            }
            Ok(0)
        }
        Cmd::Trans {
            file,
            max_order,
            target,
        } => {
            let prob = load(&file)?;
            let enc = Encoder::with_cap(&prob.field, max_order);
            for p in targets(&prob, &target)? {
                let n = match enc.bound(&p) {
                    Ok(rb) => rb.value,
                    Err(e) => {
                        w(writeln!(io.err, "error: {p}: {e} (raise --max-order)"))?;
                        return Ok(2);
                    }
                };
                let show = |f: Result<crate::semialg::Formula, _>| -> Result<String, String> {
                    f.map(|f| f.to_unicode())
                        .map_err(|e: crate::groebner::GroebnerError| e.to_string())
                };
                w(writeln!(io.out, "p = {p}, N = {n}"))?;
                w(writeln!(io.out, "π = {}", show(enc.trans(&p))?))?;
                w(writeln!(io.out, "ψ₊ = {}", show(enc.psi_plus(&p))?))?;
                w(writeln!(io.out, "φ₀ = {}", show(enc.phi_zero(&p))?))?;
                w(writeln!(io.out, "φ₊ = {}", show(enc.phi_plus(&p))?))?;
            }
            Ok(0)
        }
        Cmd::Check { file, common, emit } => cmd_check(io, &file, &common, emit.as_deref()),
        Cmd::Generate {
            file,
            common,
            grid,
            existential,
            qe_script,
            qe_result,
        } => {
            let prob = load(&file)?;
            if parse_params(&common.params)?.is_some() {
                return Err("generate takes no -p values".into());
            }
            let cfg = common.solver()?;
            let strategy = match (grid, existential, qe_script) {
                (Some(g), _, _) => Strategy::Grid(Grid::parse(&g)?),
                (None, true, _) => Strategy::Existential,
                (None, false, Some(script)) => Strategy::QeScript {
                    script,
                    result: qe_result,
                },
                (None, false, None) => {
                    return Err("choose --grid, --existential or --qe-script".into())
                }
            };
            let res = generate_constraint(&prob, &cfg, &strategy, common.max_order)
                .map_err(|e| e.to_string())?;
            let sample = pick_sample(&res, prob.params(), &cfg);
            let code = if res.mode == GenerationMode::Unknown {
                2
            } else {
                0
            };
            if common.json {
                #[derive(Serialize)]
                struct Gen<'a> {
                    generation: &'a crate::decide::GenerationResult,
                    #[serde(serialize_with = "ser_sample")]
                    sample: &'a Option<Assignment>,
                }
                let status = match res.mode {
                    GenerationMode::ConstraintFormula => "constraint-formula",
                    GenerationMode::WitnessList => "witness-list",
                    GenerationMode::Unknown => "unknown",
                };
                let rep = Report::new("generate", &prob, None)
                    .with_solver(&cfg, common.max_order)
                    .with_result(
                        status,
                        code,
                        &Gen {
                            generation: &res,
                            sample: &sample,
                        },
                    );
                w(writeln!(io.out, "{}", rep.to_json()))?;
                return Ok(code);
            }
            match res.mode {
                GenerationMode::WitnessList => {
                    w(writeln!(
                        io.out,
                        "valid parameter values: {}",
                        res.witnesses.len()
                    ))?;
                    for u in &res.witnesses {
                        w(writeln!(io.out, "  {}", fmt_assignment(u)))?;
                    }
                }
                GenerationMode::ConstraintFormula => {
                    w(writeln!(
                        io.out,
                        "constraint: {}",
                        res.constraint.as_ref().unwrap()
                    ))?;
                }
                GenerationMode::Unknown => w(writeln!(io.out, "no result"))?,
            }
            if let Some(n) = &res.note {
                w(writeln!(io.out, "note: {n}"))?;
            }
            if let Some(s) = &res.script {
                w(writeln!(io.out, "QE script: {}", s.display()))?;
            }
            match &sample {
                Some(u) => w(writeln!(io.out, "sample: {}", fmt_assignment(u)))?,
                None => w(writeln!(io.out, "sample: none"))?,
            }
            Ok(code)
        }
        Cmd::Falsify {
            file,
            params,
            json,
            samples,
            horizon,
            step,
            tolerance,
            sample_box,
            seed,
            csv,
        } => {
            let prob = load(&file)?;
            let u = parse_params(&params)?;
            let inst = instantiate(&prob, u.as_ref())?;
            let budget = SampleBudget {
                n_init_points: samples,
                horizon,
                step,
                tolerance,
                sample_box,
                seed,
            };
            budget.validate().map_err(|e| e.to_string())?;
            let result = numeric_ci_check(&inst, &budget);
            let (code, status) = match &result {
                Ok(CiOutcome::NoViolationFound { .. }) => (0, "no-violation-found"),
                Ok(CiOutcome::Violation { .. }) => (1, "violation"),
                Err(_) => (2, "cannot-sample"),
            };
            if let Some(path) = &csv {
                let x0: Vec<f64> = match &result {
                    Ok(CiOutcome::Violation { x0, .. }) => x0.iter().map(to_f64).collect(),
                    _ => match sample_initial(&inst.init, &inst.vars, &budget) {
                        Ok(points) => points[0].iter().map(to_f64).collect(),
                        Err(e) => return Err(e.to_string()),
                    },
                };
                let traj = integrate(&inst.field, &x0, step, horizon, Direction::Forward);
                let f = std::fs::File::create(path).map_err(io_err(path))?;
                traj.write_csv(inst.vars.state_names(), std::io::BufWriter::new(f))
                    .map_err(io_err(path))?;
            }
            if json {
                let outcome = match &result {
                    Ok(o) => serde_json::to_value(o).unwrap(),
                    Err(e) => {
                        serde_json::json!({"outcome": "cannot-sample", "reason": e.to_string()})
                    }
                };
                let rep = Report::new("falsify", &prob, u.as_ref()).with_result(
                    status,
                    code,
                    &serde_json::json!({"budget": budget, "outcome": outcome}),
                );
                w(writeln!(io.out, "{}", rep.to_json()))?;
                return Ok(code);
            }
            match &result {
                Ok(CiOutcome::Violation { x0, t, .. }) => {
                    let x0: Vec<String> = x0.iter().map(format_rational).collect();
                    w(writeln!(
                        io.out,
                        "violation at t = {t} from x0 = ({})",
                        x0.join(", ")
                    ))?
                }
                Ok(CiOutcome::NoViolationFound { samples, diverged }) => w(writeln!(
                    io.out,
                    "no violation found ({samples} initial points, {diverged} diverged)"
                ))?,
                Err(e) => w(writeln!(io.out, "{e}"))?,
            }
            Ok(code)
        }
        Cmd::Emit {
            file,
            params,
            emit,
            qe,
            max_order,
        } => {
            let prob = load(&file)?;
            let checker = Checker::new(&prob, max_order);
            let text = if qe {
                if !prob.is_parametric() {
                    return Err("--qe needs a template with parameters".into());
                }
                emit_qe(&checker).map_err(|e| e.to_string())?
            } else {
                let u = parse_params(&params)?;
                emit_scripts(&checker, u.as_ref(), &SolverConfig::default())
                    .map_err(|e| e.to_string())?
            };
            match emit {
                Some(path) => std::fs::write(&path, text).map_err(io_err(&path))?,
                None => w(write!(io.out, "{text}"))?,
            }
            Ok(0)
        }
    }
}

fn ser_sample<S: serde::Serializer>(a: &&Option<Assignment>, s: S) -> Result<S::Ok, S::Error> {
    let m: Option<std::collections::BTreeMap<&String, String>> = a
        .as_ref()
        .map(|u| u.iter().map(|(k, v)| (k, format_rational(v))).collect());
    m.serialize(s)
}

fn fmt_assignment(u: &Assignment) -> String {
    u.iter()
        .map(|(k, v)| format!("{k} = {}", format_rational(v)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn instantiate(prob: &Problem, u: Option<&Assignment>) -> Result<Problem, String> {
    match u {
        Some(u) => {
            for k in u.keys() {
                if !prob.params().contains(k) {
                    return Err(format!("`{k}` is not a declared parameter"));
                }
            }
            prob.instantiate(u).map_err(|e| e.to_string())
        }
        None if prob.is_parametric() => Err(format!(
            "parameters {} need values",
            prob.params().join(", ")
        )),
        None => Ok(prob.clone()),
    }
}

fn cmd_check(io: &mut Io, file: &Path, common: &Common, emit: Option<&Path>) -> CmdResult {
    let w = |r: std::io::Result<()>| r.map_err(|e| e.to_string());
    let prob = load(file)?;
    let u = parse_params(&common.params)?;
    let cfg = common.solver()?;
    let checker = Checker::new(&prob, common.max_order);
    if let Some(path) = emit {
        let text = emit_scripts(&checker, u.as_ref(), &cfg).map_err(|e| e.to_string())?;
        std::fs::write(path, text).map_err(io_err(path))?;
    }
    let report = crate::decide::with_pool(&cfg, || checker.check(u.as_ref(), &cfg, false, "check"))
        .map_err(|e| e.to_string())?;
    let code = report.verdict.exit_code();
    if common.json {
        let rep = Report::new("check", &prob, u.as_ref())
            .with_solver(&cfg, common.max_order)
            .with_result(report.verdict.status(), code, &report);
        w(writeln!(io.out, "{}", rep.to_json()))?;
        return Ok(code);
    }
    if let Verdict::Invalid(_) = check_init_subset_domain(&prob, &cfg) {
        w(writeln!(
            io.err,
            "warning: the initial set is not contained in the domain"
        ))?;
    }
    if let Some(route) = report.route {
        w(writeln!(
            io.out,
            "route: {}",
            serde_json::to_value(route).unwrap().as_str().unwrap()
        ))?;
    }
    for b in &report.bounds {
        w(writeln!(io.out, "N = {} for {}", b.n, b.atom))?;
    }
    for g in &report.goals {
        w(writeln!(
            io.out,
            "{}: {} [{}; {}; {} ms]",
            g.kind.label(),
            g.verdict,
            g.kind.describe(),
            serde_json::to_value(g.method).unwrap().as_str().unwrap(),
            g.millis
        ))?;
    }
    w(writeln!(io.out, "verdict: {}", report.verdict))?;
    Ok(code)
}
