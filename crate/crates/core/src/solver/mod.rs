//! Exact minimization of an [`IlpModel`].
//!
//! The built-in backend is a depth-first branch and bound over the boolean
//! variables with activity-based propagation. Continuous variables must be
//! defined by an equality over booleans; they are derived, never branched on.
//! An external MILP solver can be plugged in through [`ExternalBackend`].

mod bnb;
mod bound;
mod explain;
mod external;
mod presolve;
mod propagate;

use std::str::FromStr;

use serde::Serialize;

use crate::ilp::{IlpModel, IntegrityError, VarId};
use crate::num::Rational;

pub use bnb::{solve_with, BnbOptions};
pub use explain::explain_infeasible;
pub use external::ExternalBackend;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    TimedOut,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::TimedOut => "timed_out",
        })
    }
}

/// Search limits. `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_wall_ms: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Self { max_nodes: Some(max_nodes), max_wall_ms: None }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub nodes_explored: u64,
    pub propagations: u64,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Present iff `status` is `Optimal`.
    pub objective: Option<Rational>,
    /// Value of every variable, indexed by [`VarId`]. For `TimedOut` this is
    /// the best incumbent, if one was found.
    pub assignment: Option<Vec<Rational>>,
    pub incumbent_objective: Option<Rational>,
    /// Proven lower bound on the optimum.
    pub bound: Option<Rational>,
    pub stats: SolveStats,
}

impl SolveResult {
    pub(crate) fn infeasible(stats: SolveStats) -> Self {
        SolveResult {
            status: SolveStatus::Infeasible,
            objective: None,
            assignment: None,
            incumbent_objective: None,
            bound: None,
            stats,
        }
    }

    /// `incumbent - bound` for a timed-out search with an incumbent.
    pub fn gap(&self) -> Option<Rational> {
        Some(self.incumbent_objective? - self.bound?)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("malformed model: {0}")]
    Integrity(IntegrityError),
    #[error("unsupported model: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("external solver: {0}")]
    External(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub trait SolverBackend {
    fn solve(&self, model: &IlpModel, budget: &Budget) -> Result<SolveResult, SolveError>;
}

/// Solve with the built-in branch and bound.
pub fn solve_bnb(model: &IlpModel, budget: &Budget) -> Result<SolveResult, SolveError> {
    solve_with(model, budget, &BnbOptions::default())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BnbBackend;

impl SolverBackend for BnbBackend {
    fn solve(&self, model: &IlpModel, budget: &Budget) -> Result<SolveResult, SolveError> {
        solve_bnb(model, budget)
    }
}

/// Backend selector as written on the command line: `bnb` or `external:<cmd>`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Bnb,
    External(ExternalBackend),
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            None if s == "bnb" => Ok(Backend::Bnb),
            Some(("external", cmd)) if !cmd.trim().is_empty() => Ok(Backend::External(ExternalBackend::new(cmd))),
            _ => Err(format!("unknown backend {s:?}, expected bnb or external:<cmd>")),
        }
    }
}

impl SolverBackend for Backend {
    fn solve(&self, model: &IlpModel, budget: &Budget) -> Result<SolveResult, SolveError> {
        match self {
            Backend::Bnb => solve_bnb(model, budget),
            Backend::External(e) => e.solve(model, budget),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Propagation {
    /// Variables fixed by propagation, excluding the given partial assignment.
    Consistent(Vec<(VarId, bool)>),
    Conflict,
}

/// Fixpoint of bound propagation from a partial 0/1 assignment.
pub fn propagate(model: &IlpModel, partial: &[(VarId, bool)]) -> Result<Propagation, SolveError> {
    let c = presolve::Compiled::new(model)?;
    let mut engine = propagate::Engine::new(&c);
    if !apply(&c, &mut engine, partial)? {
        return Ok(Propagation::Conflict);
    }
    let given: std::collections::BTreeSet<usize> = partial.iter().map(|(v, _)| v.0).collect();
    let implied = (0..c.n)
        .filter(|v| c.binary[*v] && engine.val[*v] != propagate::FREE && !given.contains(v))
        .map(|v| (VarId(v), engine.val[v] == 1))
        .collect();
    Ok(Propagation::Consistent(implied))
}

/// Admissible lower bound on the objective over all completions of a partial
/// assignment; `None` when the partial assignment is refuted.
pub fn lower_bound(model: &IlpModel, partial: &[(VarId, bool)]) -> Result<Option<Rational>, SolveError> {
    let c = presolve::Compiled::new(model)?;
    let mut engine = propagate::Engine::new(&c);
    if !apply(&c, &mut engine, partial)? {
        return Ok(None);
    }
    let mut b = bound::generic(&c, &engine.val);
    if let Some(l) = model.layout().filter(|_| model.cost_objective) {
        let cost = bound::coefficient_table(&c);
        let packing = bound::Packing::new(l, &cost);
        match bound::deployment(&c, l, &cost, &packing, &engine.val) {
            Some(d) => b = b.max(d),
            None => return Ok(None),
        }
    }
    Ok(Some(c.objective_of(b)))
}

fn apply(c: &presolve::Compiled, engine: &mut propagate::Engine<'_>, partial: &[(VarId, bool)]) -> Result<bool, SolveError> {
    if c.trivially_infeasible || !engine.propagate_all() {
        return Ok(false);
    }
    for &(v, value) in partial {
        if v.0 >= c.n || !c.binary[v.0] {
            return Err(SolveError::Unsupported(format!("variable {} is not boolean", v.0)));
        }
        match engine.val[v.0] {
            propagate::FREE => {
                engine.assign(v.0, value);
                if !engine.propagate() {
                    return Ok(false);
                }
            }
            x if (x == 1) != value => return Ok(false),
            _ => {}
        }
    }
    Ok(true)
}
