//! Parameter sweeps over the number of clouds or chains.

use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::stats::{ci95_half_width, mean};
use super::{derive_seed, generate, ConfigError, GenConfig};
use crate::num::{format_decimal_lossy, to_f64, Rational};
use crate::oracle::Placement;
use crate::pipeline::{place, PlaceError, PlaceOptions};
use crate::solver::SolveStatus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// Number of clouds/edges.
    Edges,
    /// Number of chains.
    Sfcs,
}

impl std::str::FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edges" => Ok(Axis::Edges),
            "sfcs" => Ok(Axis::Sfcs),
            _ => Err(format!("unknown axis {s:?}, expected edges or sfcs")),
        }
    }
}

/// How repetition seeds are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeedPolicy {
    /// Each repetition gets its own seed.
    #[default]
    Distinct,
    /// Every repetition reuses the base seed.
    Identical,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub axis: Axis,
    pub points: Vec<usize>,
    pub repetitions: usize,
    pub base: GenConfig,
    /// Reuse one seed per repetition across all points, so each larger
    /// scenario extends the smaller ones.
    pub nested: bool,
    pub seeds: SeedPolicy,
    pub place: PlaceOptions,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub axis_value: usize,
    pub rep: usize,
    pub seed: u64,
    pub status: SolveStatus,
    /// Cost and delay of the optimal placement; absent otherwise.
    pub cost: Option<Rational>,
    pub mean_delay_ms: Option<Rational>,
    /// Largest delay limit among the chains, for sanity checks.
    pub max_delay_limit_ms: Option<Rational>,
    pub violations: usize,
    pub nodes_explored: u64,
    pub wall_ms: u64,
    /// The optimal placement; regenerate the scenario with
    /// [`SweepConfig::config_for`] to re-check it.
    pub placement: Option<Placement>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointSummary {
    pub axis_value: usize,
    pub n_repetitions: usize,
    pub n_feasible: usize,
    pub infeasible_count: usize,
    pub timed_out_count: usize,
    pub mean_cost: Option<f64>,
    pub ci95_cost: Option<f64>,
    pub mean_delay_ms: Option<f64>,
    pub ci95_delay_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: Axis,
    pub runs: Vec<RunRecord>,
    pub points: Vec<PointSummary>,
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("at least two repetitions are required")]
    TooFewRepetitions,
    #[error("axis value {0} at repetition {1}: {2}")]
    Place(usize, usize, PlaceError),
    #[error("thread pool: {0}")]
    Pool(String),
}

impl SweepConfig {
    pub fn seed_for(&self, axis_value: usize, rep: usize) -> u64 {
        match (self.seeds, self.nested) {
            (SeedPolicy::Identical, _) => self.base.seed,
            (SeedPolicy::Distinct, true) => derive_seed(self.base.seed, &[rep as u64]),
            (SeedPolicy::Distinct, false) => derive_seed(self.base.seed, &[rep as u64, axis_value as u64]),
        }
    }

    pub fn config_for(&self, axis_value: usize, rep: usize) -> GenConfig {
        let mut c = self.base.clone();
        c.seed = self.seed_for(axis_value, rep);
        match self.axis {
            Axis::Edges => c.n_clouds = axis_value,
            Axis::Sfcs => c.n_sfcs = axis_value,
        }
        c
    }
}

fn run_one(sweep: &SweepConfig, axis_value: usize, rep: usize) -> Result<RunRecord, SweepError> {
    let config = sweep.config_for(axis_value, rep);
    let scenario = generate(&config)?;
    let out = place(&scenario, &sweep.place).map_err(|e| SweepError::Place(axis_value, rep, e))?;
    let optimal = out.status == SolveStatus::Optimal;
    let placement = out.placement.as_ref().filter(|_| optimal);
    let mean_delay = placement.and_then(|p| {
        let n = p.sfcs.len() as i64;
        (n > 0).then(|| p.sfcs.iter().map(|s| s.total_delay_ms).sum::<Rational>() / Rational::from_integer(n))
    });
    Ok(RunRecord {
        axis_value,
        rep,
        seed: config.seed,
        status: out.status,
        cost: placement.map(|p| p.total_cost),
        mean_delay_ms: mean_delay,
        max_delay_limit_ms: scenario.sfcs.iter().map(|s| s.max_delay_ms).max(),
        violations: out.violations.len(),
        nodes_explored: out.result.stats.nodes_explored,
        wall_ms: out.result.stats.wall_ms,
        placement: placement.cloned(),
    })
}

fn summarize(axis_value: usize, runs: &[&RunRecord]) -> PointSummary {
    let costs: Vec<f64> = runs.iter().filter_map(|r| r.cost.as_ref().map(to_f64)).collect();
    let delays: Vec<f64> = runs.iter().filter_map(|r| r.mean_delay_ms.as_ref().map(to_f64)).collect();
    let count = |s: SolveStatus| runs.iter().filter(|r| r.status == s).count();
    PointSummary {
        axis_value,
        n_repetitions: runs.len(),
        n_feasible: count(SolveStatus::Optimal),
        infeasible_count: count(SolveStatus::Infeasible),
        timed_out_count: count(SolveStatus::TimedOut),
        mean_cost: mean(&costs),
        ci95_cost: ci95_half_width(&costs),
        mean_delay_ms: mean(&delays),
        ci95_delay_ms: ci95_half_width(&delays),
    }
}

/// Solve every (point, repetition) instance and aggregate per point.
/// Instances that are infeasible or time out are counted, not averaged.
pub fn run_sweep(sweep: &SweepConfig) -> Result<SweepResult, SweepError> {
    if sweep.repetitions < 2 {
        return Err(SweepError::TooFewRepetitions);
    }
    sweep.base.check()?;
    let jobs: Vec<(usize, usize)> =
        sweep.points.iter().flat_map(|&p| (0..sweep.repetitions).map(move |r| (p, r))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(sweep.jobs)
        .build()
        .map_err(|e| SweepError::Pool(e.to_string()))?;
    let runs: Vec<RunRecord> =
        pool.install(|| jobs.par_iter().map(|&(p, r)| run_one(sweep, p, r)).collect::<Result<_, _>>())?;
    let points = sweep
        .points
        .iter()
        .map(|&p| summarize(p, &runs.iter().filter(|r| r.axis_value == p).collect::<Vec<_>>()))
        .collect();
    Ok(SweepResult { axis: sweep.axis, runs, points })
}

fn opt_rational(v: &Option<Rational>) -> String {
    v.as_ref().map(format_decimal_lossy).unwrap_or_default()
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

impl SweepResult {
    /// Per-repetition rows. Wall time is left blank unless `timing` is set,
    /// which keeps the file identical across reruns.
    pub fn runs_csv(&self, timing: bool) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["axis_value", "rep", "seed", "status", "cost", "mean_delay_ms", "nodes_explored", "wall_ms"])
            .expect("in-memory write");
        for r in &self.runs {
            w.write_record([
                r.axis_value.to_string(),
                r.rep.to_string(),
                r.seed.to_string(),
                r.status.to_string(),
                opt_rational(&r.cost),
                opt_rational(&r.mean_delay_ms),
                r.nodes_explored.to_string(),
                if timing { r.wall_ms.to_string() } else { String::new() },
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("csv is utf-8")
    }

    pub fn summary_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "axis_value",
            "n_repetitions",
            "n_feasible",
            "infeasible_count",
            "timed_out_count",
            "mean_cost",
            "ci95_cost",
            "mean_delay_ms",
            "ci95_delay_ms",
        ])
        .expect("in-memory write");
        for p in &self.points {
            w.write_record([
                p.axis_value.to_string(),
                p.n_repetitions.to_string(),
                p.n_feasible.to_string(),
                p.infeasible_count.to_string(),
                p.timed_out_count.to_string(),
                opt_f64(p.mean_cost),
                opt_f64(p.ci95_cost),
                opt_f64(p.mean_delay_ms),
                opt_f64(p.ci95_delay_ms),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("csv is utf-8")
    }

    /// Fixed-width table for terminals.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let axis = match self.axis {
            Axis::Edges => "clouds",
            Axis::Sfcs => "sfcs",
        };
        let _ = writeln!(out, "{axis:>6}  {:>4}  {:>11}  {:>10}  {:>12}  {:>10}", "ok", "mean_cost", "ci95", "mean_delay", "ci95");
        for p in &self.points {
            let cell = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "{:>6}  {:>4}  {:>11}  {:>10}  {:>12}  {:>10}",
                p.axis_value,
                format!("{}/{}", p.n_feasible, p.n_repetitions),
                cell(p.mean_cost),
                cell(p.ci95_cost),
                cell(p.mean_delay_ms),
                cell(p.ci95_delay_ms),
            );
        }
        out
    }

    /// Spearman correlation of the per-point means against the axis values.
    pub fn trend(&self, metric: impl Fn(&PointSummary) -> Option<f64>) -> Option<f64> {
        let (xs, ys): (Vec<f64>, Vec<f64>) =
            self.points.iter().filter_map(|p| Some((p.axis_value as f64, metric(p)?))).unzip();
        super::stats::spearman(&xs, &ys)
    }
}
