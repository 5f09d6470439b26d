use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use serde::Serialize;

use super::sexpr::{collect_model, is_error, parse_all, ModelValue, Sexp};

#[derive(Debug, Clone, Serialize)]
pub struct SolverConfig {
    /// Program and arguments; the script is written to its stdin.
    pub command: Vec<String>,
    pub timeout_secs: u64,
    pub logic: String,
    /// Raw SMT-LIB commands inserted after `set-logic`.
    pub options: Vec<String>,
    /// Whether `∃u∀x` queries may be sent to this backend.
    pub quantifiers: bool,
    pub workers: usize,
    /// Where scripts and raw responses are written, if anywhere.
    pub transcript_dir: Option<PathBuf>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig::with_command("z3 -in")
    }
}

impl SolverConfig {
    /// Splits `cmd` on whitespace. z3 is known to accept quantified
    /// nonlinear real arithmetic; other backends must opt in.
    pub fn with_command(cmd: &str) -> Self {
        let command: Vec<String> = cmd.split_whitespace().map(String::from).collect();
        let quantifiers = command
            .first()
            .map(|p| p.rsplit('/').next().unwrap_or(p).starts_with("z3"))
            .unwrap_or(false);
        SolverConfig {
            command,
            timeout_secs: 60,
            logic: "QF_NRA".into(),
            options: Vec::new(),
            quantifiers,
            workers: std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1),
            transcript_dir: None,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.command.is_empty() {
            return Err("empty solver command".into());
        }
        if self.timeout_secs == 0 {
            return Err("timeout must be positive".into());
        }
        if self.workers == 0 {
            return Err("worker count must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatStatus {
    Sat,
    Unsat,
    Unknown(String),
}

#[derive(Debug, Clone)]
pub struct SolverResponse {
    pub status: SatStatus,
    /// Values from the first model; approximations from a decimal re-print
    /// replace algebraic entries.
    pub model: BTreeMap<String, ModelValue>,
    pub raw: String,
    pub elapsed: Duration,
}

/// Commands appended after the script so that irrational model values also
/// come back as decimals.
const DECIMAL_REQUERY: &str = "(set-option :pp.decimal true)\n(get-model)\n";

/// Runs one script. Launch failures, timeouts and unreadable output all map
/// to `Unknown` with a reason.
pub fn run_script(cfg: &SolverConfig, script: &str) -> SolverResponse {
    let start = Instant::now();
    let unknown = |reason: String, raw: String| SolverResponse {
        status: SatStatus::Unknown(reason),
        model: BTreeMap::new(),
        raw,
        elapsed: start.elapsed(),
    };
    let Some((prog, args)) = cfg.command.split_first() else {
        return unknown("empty solver command".into(), String::new());
    };
    let mut child = match Command::new(prog)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
    {
        Ok(c) => c,
        Err(e) => return unknown(format!("solver launch failed: {e}"), String::new()),
    };
    let mut stdin = child.stdin.take().unwrap();
    let input = format!("{script}{DECIMAL_REQUERY}");
    let writer = std::thread::spawn(move || {
        let _ = stdin.write_all(input.as_bytes());
    });
    let mut stdout = child.stdout.take().unwrap();
    let reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    let deadline = start + Duration::from_secs(cfg.timeout_secs);
    let timed_out = loop {
        match child.try_wait() {
            Ok(Some(_)) => break false,
            Ok(None) if Instant::now() >= deadline => {
                let _ = child.kill();
                let _ = child.wait();
                break true;
            }
            Ok(None) => std::thread::sleep(Duration::from_millis(5)),
            Err(e) => return unknown(format!("solver wait failed: {e}"), String::new()),
        }
    };
    let _ = writer.join();
    let raw = reader.join().unwrap_or_default();
    if timed_out {
        return unknown(format!("timeout after {} s", cfg.timeout_secs), raw);
    }
    let mut resp = interpret(&raw);
    resp.elapsed = start.elapsed();
    resp
}

/// Reads a response of the form `status` followed by models or errors.
pub fn interpret(raw: &str) -> SolverResponse {
    let mk = |status, model| SolverResponse {
        status,
        model,
        raw: raw.to_string(),
        elapsed: Duration::ZERO,
    };
    let exprs = match parse_all(raw) {
        Ok(e) => e,
        Err(e) => {
            return mk(
                SatStatus::Unknown(format!("unparseable solver output: {e}")),
                BTreeMap::new(),
            )
        }
    };
    let status = match exprs.first() {
        Some(Sexp::Atom(a)) if a == "sat" => SatStatus::Sat,
        Some(Sexp::Atom(a)) if a == "unsat" => SatStatus::Unsat,
        Some(Sexp::Atom(a)) if a == "unknown" || a == "timeout" => {
            SatStatus::Unknown(format!("solver answered {a}"))
        }
        Some(e) => {
            let reason = is_error(e)
                .map(|m| format!("solver error: {m}"))
                .unwrap_or_else(|| format!("unexpected solver output {e:?}"));
            return mk(SatStatus::Unknown(reason), BTreeMap::new());
        }
        None => {
            return mk(
                SatStatus::Unknown("empty solver output".into()),
                BTreeMap::new(),
            )
        }
    };
    if status != SatStatus::Sat {
        return mk(status, BTreeMap::new());
    }
    let models: Vec<&Sexp> = exprs[1..]
        .iter()
        .filter(|e| is_error(e).is_none())
        .collect();
    let mut model = BTreeMap::new();
    if let Some(first) = models.first() {
        if let Err(e) = collect_model(first, &mut model) {
            return mk(
                SatStatus::Unknown(format!("unparseable model: {e}")),
                BTreeMap::new(),
            );
        }
    }
    if let Some(second) = models.get(1) {
        let mut approx = BTreeMap::new();
        if collect_model(second, &mut approx).is_ok() {
            for (k, v) in model.iter_mut() {
                if *v == ModelValue::Algebraic {
                    if let Some(a @ ModelValue::Approx(_)) = approx.get(k) {
                        *v = a.clone();
                    }
                }
            }
        }
    }
    mk(SatStatus::Sat, model)
}
