use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use super::print_problem;
use crate::decide::SolverConfig;
use crate::polyring::rational::format_rational;
use crate::polyring::Assignment;
use crate::semialg::Problem;

/// Bumped on any incompatible change to the report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// JSON schema of [`Report`].
pub const REPORT_SCHEMA: &str = include_str!("../../schema/report.schema.json");

#[derive(Debug, Clone, Serialize)]
pub struct SolverEcho {
    pub command: Vec<String>,
    pub timeout_secs: u64,
    pub workers: usize,
    pub max_order: usize,
}

/// Machine-readable output of every subcommand. `problem` and
/// `parameters` are enough to re-run the query.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub status: String,
    pub exit_code: i32,
    pub problem: String,
    pub parameters: BTreeMap<String, String>,
    pub solver: Option<SolverEcho>,
    pub result: Value,
}

impl Report {
    pub fn new(command: &str, prob: &Problem, params: Option<&Assignment>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            status: String::new(),
            exit_code: 0,
            problem: print_problem(prob),
            parameters: params
                .map(|u| {
                    u.iter()
                        .map(|(k, v)| (k.clone(), format_rational(v)))
                        .collect()
                })
                .unwrap_or_default(),
            solver: None,
            result: Value::Null,
        }
    }

    pub fn with_solver(mut self, cfg: &SolverConfig, max_order: usize) -> Self {
        self.solver = Some(SolverEcho {
            command: cfg.command.clone(),
            timeout_secs: cfg.timeout_secs,
            workers: cfg.workers,
            max_order,
        });
        self
    }

    pub fn with_result<T: Serialize>(mut self, status: &str, exit_code: i32, result: &T) -> Self {
        self.status = status.into();
        self.exit_code = exit_code;
        self.result = serde_json::to_value(result).expect("report values serialize");
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values serialize")
    }
}
