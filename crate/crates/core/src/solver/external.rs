//! Process-boundary adapter for third-party MILP solvers.
//!
//! The model is written as LP text and the command is run as
//! `<cmd...> <model.lp> <solution.txt>`. The solution file holds one
//! `=obj= <value>` line (or `=infeasible=`) followed by `<var> <value>` lines;
//! unlisted variables are 0. Booleans are rounded, continuous values are
//! recomputed exactly, and the result is checked against every row before it
//! is reported as optimal.

use std::collections::HashMap;
use std::process::Command;
use std::time::Instant;

use super::presolve::Compiled;
use super::{Budget, SolveError, SolveResult, SolveStats, SolveStatus, SolverBackend};
use crate::ilp::{lp_format, IlpModel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalBackend {
    pub program: String,
    pub args: Vec<String>,
}

impl ExternalBackend {
    /// Split a command line on whitespace.
    pub fn new(cmd: &str) -> Self {
        let mut parts = cmd.split_whitespace().map(str::to_string);
        let program = parts.next().unwrap_or_default();
        ExternalBackend { program, args: parts.collect() }
    }
}

enum Parsed {
    Infeasible,
    Values(HashMap<String, f64>),
}

fn parse_solution(text: &str) -> Result<Parsed, SolveError> {
    let mut values = HashMap::new();
    let mut seen_header = false;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if line.starts_with("=infeasible=") {
            return Ok(Parsed::Infeasible);
        }
        if line.starts_with("=obj=") {
            seen_header = true;
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(name), Some(value), None) = (it.next(), it.next(), it.next()) else {
            return Err(SolveError::External(format!("malformed solution line {line:?}")));
        };
        let value: f64 = value.parse().map_err(|_| SolveError::External(format!("bad value in {line:?}")))?;
        values.insert(name.to_string(), value);
    }
    if !seen_header {
        return Err(SolveError::External("solution file lacks an =obj= line".into()));
    }
    Ok(Parsed::Values(values))
}

impl SolverBackend for ExternalBackend {
    fn solve(&self, model: &IlpModel, budget: &Budget) -> Result<SolveResult, SolveError> {
        let start = Instant::now();
        let compiled = Compiled::new(model)?;
        let dir = tempfile::tempdir()?;
        let lp_path = dir.path().join("model.lp");
        let sol_path = dir.path().join("solution.txt");
        std::fs::write(&lp_path, lp_format::write_lp(model))?;

        let mut cmd = Command::new(&self.program);
        cmd.args(&self.args).arg(&lp_path).arg(&sol_path);
        if let Some(ms) = budget.max_wall_ms {
            cmd.env("SFC_PLACER_MAX_WALL_MS", ms.to_string());
        }
        let output = cmd.output().map_err(|e| SolveError::External(format!("cannot run {}: {e}", self.program)))?;
        if !output.status.success() {
            return Err(SolveError::External(format!(
                "{} exited with {}: {}",
                self.program,
                output.status,
                String::from_utf8_lossy(&output.stderr).trim()
            )));
        }
        let text = std::fs::read_to_string(&sol_path)?;
        let stats = || SolveStats { nodes_explored: 0, propagations: 0, wall_ms: start.elapsed().as_millis() as u64 };

        let values = match parse_solution(&text)? {
            Parsed::Infeasible => return Ok(SolveResult::infeasible(stats())),
            Parsed::Values(v) => v,
        };
        let mut bits = vec![super::propagate::FREE; compiled.n];
        for (i, bit) in bits.iter_mut().enumerate() {
            if !compiled.binary[i] {
                continue;
            }
            let x = values.get(&model.vars.name(crate::ilp::VarId(i))).copied().unwrap_or(0.0);
            if (x - x.round()).abs() > 1e-6 || !(x.round() == 0.0 || x.round() == 1.0) {
                return Err(SolveError::External(format!("non-boolean value {x} for {}", model.vars.name(crate::ilp::VarId(i)))));
            }
            *bit = x.round() as i8;
        }
        let assignment = compiled.expand(&bits);
        let violated = model.violated_rows(&assignment);
        if !violated.is_empty() {
            return Err(SolveError::External(format!("solution violates {} rows", violated.len())));
        }
        let objective = model.objective_value(&assignment);
        Ok(SolveResult {
            status: SolveStatus::Optimal,
            objective: Some(objective),
            assignment: Some(assignment),
            incumbent_objective: Some(objective),
            bound: Some(objective),
            stats: stats(),
        })
    }
}
