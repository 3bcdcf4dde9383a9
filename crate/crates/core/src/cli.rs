//! Command-line front end.
//!
//! Exit codes are part of the interface and do not change between versions:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success: optimal placement found, solution valid, files written |
//! | 1 | infeasibility proven (`solve`) or violations found (`validate`) |
//! | 2 | budget exhausted before optimality was proven |
//! | 3 | input error: bad flags, unreadable or invalid documents |
//! | 4 | internal invariant breach: a solver result failed validation |

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::ilp::{self, lp_format, BuildOptions};
use crate::model::{self, ModelError, Scenario};
use crate::num::{format_rational, serde_decimal};
use crate::oracle::{self, Placement};
use crate::pipeline::{self, PlaceOptions};
use crate::scenarios::{self, Axis, GenConfig, SeedPolicy, Span, SweepConfig};
use crate::solver::{self, Backend, Budget, SolveStatus};

const EXPLAIN_NODES: u64 = 50_000;

/// Stable process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitContract {
    Success = 0,
    Infeasible = 1,
    Timeout = 2,
    InputError = 3,
    InternalBreach = 4,
}

impl ExitContract {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Parser)]
#[command(name = "sfc-placer", version, about = "Cost-minimal, delay- and security-aware SFC placement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a scenario and write the placement.
    Solve(SolveArgs),
    /// Check a placement against a scenario and report every violation.
    Validate(ValidateArgs),
    /// Generate a random scenario.
    Gen(GenArgs),
    /// Run a parameter sweep and write per-run and summary CSV files.
    Sweep(SweepArgs),
    /// Write the scenario's integer program in LP format.
    DumpLp(DumpLpArgs),
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// Topology document.
    #[arg(long, requires_all = ["sfcs", "flavors"], conflicts_with = "bundle")]
    topology: Option<PathBuf>,
    /// SFC request document.
    #[arg(long, requires = "topology")]
    sfcs: Option<PathBuf>,
    /// Flavor catalog document.
    #[arg(long, requires = "topology")]
    flavors: Option<PathBuf>,
    /// Single document `{topology, sfcs, flavors}` instead of three files.
    #[arg(long)]
    bundle: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ModelFlags {
    /// Enforce link bandwidth against the chains' traffic.
    #[arg(long)]
    bandwidth: bool,
    /// Include user-ingress and IoT-egress hops in the delay limit.
    #[arg(long)]
    endpoints: bool,
    /// Do not add the instance-ordering rows that remove relabelings.
    #[arg(long)]
    no_symmetry_breaking: bool,
}

impl ModelFlags {
    fn build_options(&self) -> BuildOptions {
        BuildOptions { symmetry_breaking: !self.no_symmetry_breaking, bandwidth: self.bandwidth, endpoints: self.endpoints }
    }
}

#[derive(Debug, Args)]
struct BudgetArgs {
    /// Branch-and-bound node limit.
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Wall-clock limit in milliseconds.
    #[arg(long)]
    max_wall_ms: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget { max_nodes: self.max_nodes, max_wall_ms: self.max_wall_ms }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    model: ModelFlags,
    #[command(flatten)]
    budget: BudgetArgs,
    /// `bnb` or `external:<command>`; the command is called as `<command> <model.lp> <solution>`.
    #[arg(long, default_value = "bnb")]
    backend: Backend,
    /// Where to write the placement document.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the model in LP format.
    #[arg(long, value_name = "PATH")]
    dump_lp: Option<PathBuf>,
    /// Keep the first cost-optimal placement instead of searching for the
    /// lowest-delay one among them.
    #[arg(long)]
    no_polish: bool,
    /// Print one JSON document on stdout instead of the summary.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Placement document to check.
    #[arg(long)]
    solution: PathBuf,
    /// Check link bandwidth as well.
    #[arg(long)]
    bandwidth: bool,
    /// Count endpoint hops toward the delay limit.
    #[arg(long)]
    endpoints: bool,
    /// Print the violations as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct GenShape {
    /// Generator configuration (JSON); flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base seed.
    #[arg(long, env = "SFC_PLACER_SEED")]
    seed: Option<u64>,
    /// Number of clouds.
    #[arg(long)]
    clouds: Option<usize>,
    /// Number of SFC requests.
    #[arg(long = "n-sfcs")]
    n_sfcs: Option<usize>,
    /// Chain length, `n` or `min..max`.
    #[arg(long, value_parser = parse_span)]
    chain_len: Option<Span>,
    /// Number of VNF types.
    #[arg(long)]
    types: Option<u32>,
    /// Number of flavors.
    #[arg(long = "n-flavors")]
    n_flavors: Option<usize>,
    /// Probability that a VNF conflicts with each earlier one.
    #[arg(long)]
    conflict_prob: Option<f64>,
}

impl GenShape {
    fn config(&self) -> Result<GenConfig, String> {
        let mut c = match &self.config {
            Some(path) => serde_json::from_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?,
            None => GenConfig::default(),
        };
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.clouds {
            c.n_clouds = v;
        }
        if let Some(v) = self.n_sfcs {
            c.n_sfcs = v;
        }
        if let Some(v) = self.chain_len {
            c.chain_len = v;
        }
        if let Some(v) = self.types {
            c.n_types = v;
        }
        if let Some(v) = self.n_flavors {
            c.n_flavors = v;
        }
        if let Some(v) = self.conflict_prob {
            c.conflict_prob = v;
        }
        c.check().map_err(|e| e.to_string())?;
        Ok(c)
    }
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(flatten)]
    shape: GenShape,
    /// Write topology.json, sfcs.json and flavors.json into this directory.
    #[arg(long, conflicts_with = "bundle")]
    out_dir: Option<PathBuf>,
    /// Write a single bundle document. Without either flag the bundle goes to stdout.
    #[arg(long)]
    bundle: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    shape: GenShape,
    /// `edges` (number of clouds) or `sfcs` (number of chains).
    #[arg(long)]
    axis: Axis,
    /// Axis values, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    points: Vec<usize>,
    /// Repetitions per axis point.
    #[arg(long, default_value_t = 10)]
    reps: usize,
    /// Directory for runs.csv and summary.csv.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Reuse each repetition's seed across points so larger scenarios extend smaller ones.
    #[arg(long)]
    nested: bool,
    /// Give every repetition the same seed.
    #[arg(long)]
    identical_seeds: bool,
    /// Parallel solves; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Record wall-clock times (makes runs.csv differ between reruns).
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Skip the delay tie-break after the cost optimum.
    #[arg(long)]
    no_polish: bool,
    /// Print the point summaries as JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct DumpLpArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    model: ModelFlags,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_span(s: &str) -> Result<Span, String> {
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => Ok(Span::new(parse(a)?, parse(b.trim_start_matches('='))?)),
        None => {
            let n = parse(s)?;
            Ok(Span::new(n, n))
        }
    }
}

/// A failure with its exit code and message.
struct Failure(ExitContract, String);

type Outcome = Result<ExitContract, Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure(ExitContract::InputError, e.to_string())
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| input(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load(args: &ScenarioArgs) -> Result<Scenario, Failure> {
    let scenario = match (&args.bundle, &args.topology, &args.sfcs, &args.flavors) {
        (Some(b), _, _, _) => model::load_bundle(&read(b).map_err(input)?),
        (None, Some(t), Some(s), Some(f)) => {
            model::load_scenario(&read(t).map_err(input)?, &read(s).map_err(input)?, &read(f).map_err(input)?)
        }
        _ => return Err(input("give --bundle or all of --topology, --sfcs and --flavors")),
    };
    scenario.map_err(|e: ModelError| input(e)).map(Scenario::normalize_types)
}

fn placement_json(p: &Placement) -> String {
    let mut s = serde_json::to_string_pretty(p).expect("placements serialize");
    s.push('\n');
    s
}

/// Per-cloud capacity left after the placement.
fn residual_capacity(scenario: &Scenario, p: &Placement) -> Vec<(String, Vec<(String, i64)>)> {
    let mut seen = std::collections::BTreeSet::new();
    scenario
        .topology
        .clouds
        .iter()
        .map(|c| {
            let mut left: Vec<(String, i64)> = c.capacity.iter().map(|(r, &v)| (r.clone(), v as i64)).collect();
            for v in p.vnfs.iter().filter(|v| v.cloud == c.id) {
                if !seen.insert(v.vnfi) {
                    continue;
                }
                if let Some(f) = scenario.flavors.get(&v.flavor) {
                    for (r, amount) in left.iter_mut() {
                        *amount -= f.demand.get(r).copied().unwrap_or(0) as i64;
                    }
                }
            }
            (c.id.clone(), left)
        })
        .collect()
}

fn summary(scenario: &Scenario, p: &Placement, nodes: u64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "objective: {}", format_rational(&p.total_cost));
    let _ = writeln!(out, "instances: {}", p.hosted().len());
    let _ = writeln!(out, "nodes explored: {nodes}");
    for m in &p.sfcs {
        let _ = writeln!(
            out,
            "sfc {}: delay {} ms, lowest link security {}",
            m.sfc,
            format_rational(&m.total_delay_ms),
            m.min_link_security_used
        );
    }
    for (cloud, left) in residual_capacity(scenario, p) {
        let cells: Vec<String> = left.iter().map(|(r, v)| format!("{r}={v}")).collect();
        let _ = writeln!(out, "cloud {cloud} residual: {}", cells.join(" "));
    }
    out
}

fn cmd_solve(a: &SolveArgs, stdout: &mut dyn Write) -> Outcome {
    let scenario = load(&a.scenario)?;
    let build = a.model.build_options();
    if let Some(path) = &a.dump_lp {
        let m = ilp::build_model(&scenario, &build).map_err(|e| Failure(ExitContract::InternalBreach, e.to_string()))?;
        write_file(path, &lp_format::write_lp(&m))?;
    }
    let options = PlaceOptions {
        build,
        budget: a.budget.budget(),
        backend: a.backend.clone(),
        polish_delay: !a.no_polish,
        ..PlaceOptions::default()
    };
    let out = pipeline::place(&scenario, &options).map_err(|e| Failure(ExitContract::InternalBreach, e.to_string()))?;

    if out.status == SolveStatus::Optimal && !out.violations.is_empty() {
        let list: Vec<String> = out.violations.iter().map(|v| v.to_string()).collect();
        return Err(Failure(
            ExitContract::InternalBreach,
            format!("optimal placement fails validation:\n  {}", list.join("\n  ")),
        ));
    }
    if let (Some(path), Some(p)) = (&a.out, &out.placement) {
        write_file(path, &placement_json(p))?;
    }

    let culprits = if out.status == SolveStatus::Infeasible {
        // Each relaxation gets a bounded search; one that runs out is simply not named.
        let per_check = Budget {
            max_nodes: Some(a.budget.max_nodes.unwrap_or(EXPLAIN_NODES).min(EXPLAIN_NODES)),
            max_wall_ms: a.budget.max_wall_ms,
        };
        solver::explain_infeasible(&out.model, &per_check)
            .map_err(|e| Failure(ExitContract::InternalBreach, e.to_string()))?
    } else {
        Vec::new()
    };
    let code = match out.status {
        SolveStatus::Optimal => ExitContract::Success,
        SolveStatus::Infeasible => ExitContract::Infeasible,
        SolveStatus::TimedOut => ExitContract::Timeout,
    };

    let nodes = out.result.stats.nodes_explored;
    let text = if a.json {
        let doc = json!({
            "status": out.status,
            "objective": out.result.objective.as_ref().map(serde_decimal::to_json),
            "incumbent_objective": out.result.incumbent_objective.as_ref().map(serde_decimal::to_json),
            "bound": out.result.bound.as_ref().map(serde_decimal::to_json),
            "nodes_explored": nodes,
            "placement": out.placement,
            "infeasible_families": culprits.iter().map(|t| t.as_str()).collect::<Vec<_>>(),
        });
        format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
    } else {
        match (&out.status, &out.placement) {
            (SolveStatus::Optimal, Some(p)) => format!("status: optimal\n{}", summary(&out.scenario, p, nodes)),
            (SolveStatus::TimedOut, Some(p)) => format!(
                "status: timed out (incumbent, not proven optimal; lower bound {})\n{}",
                out.result.bound.as_ref().map(format_rational).unwrap_or_default(),
                summary(&out.scenario, p, nodes)
            ),
            (SolveStatus::TimedOut, None) => "status: timed out without a feasible placement\n".to_string(),
            _ => {
                let families = if culprits.is_empty() {
                    "no single constraint family explains it".to_string()
                } else {
                    let names: Vec<&str> = culprits.iter().map(|t| t.as_str()).collect();
                    format!("constraints tagged {} cannot be satisfied", names.join(", "))
                };
                format!("status: infeasible\n{families}\n")
            }
        }
    };
    stdout.write_all(text.as_bytes()).map_err(input)?;
    Ok(code)
}

fn cmd_validate(a: &ValidateArgs, stdout: &mut dyn Write) -> Outcome {
    let scenario = load(&a.scenario)?;
    let text = read(&a.solution).map_err(input)?;
    let placement: Placement =
        serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", a.solution.display())))?;
    let checks = oracle::Checks { bandwidth: a.bandwidth, endpoints: a.endpoints };
    let violations = oracle::validate_solution_with(&scenario, &placement, &checks).map_err(input)?;
    let report = if a.json {
        format!("{}\n", serde_json::to_string_pretty(&json!({ "valid": violations.is_empty(), "violations": violations })).expect("json"))
    } else if violations.is_empty() {
        "valid: no violations\n".to_string()
    } else {
        let mut s = format!("invalid: {} violation(s)\n", violations.len());
        for v in &violations {
            let _ = writeln!(s, "  - {v}");
        }
        s
    };
    stdout.write_all(report.as_bytes()).map_err(input)?;
    Ok(if violations.is_empty() { ExitContract::Success } else { ExitContract::Infeasible })
}

fn cmd_gen(a: &GenArgs, stdout: &mut dyn Write) -> Outcome {
    let config = a.shape.config().map_err(input)?;
    let scenario = scenarios::generate(&config).map_err(input)?;
    match (&a.out_dir, &a.bundle) {
        (Some(dir), _) => {
            let docs = model::save_scenario(&scenario);
            write_file(&dir.join("topology.json"), &docs.topology)?;
            write_file(&dir.join("sfcs.json"), &docs.sfcs)?;
            write_file(&dir.join("flavors.json"), &docs.flavors)?;
        }
        (None, Some(path)) => write_file(path, &model::save_bundle(&scenario))?,
        (None, None) => stdout.write_all(model::save_bundle(&scenario).as_bytes()).map_err(input)?,
    }
    Ok(ExitContract::Success)
}

fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write) -> Outcome {
    let mut base = a.shape.config().map_err(input)?;
    // The non-swept dimension defaults to the desk-scale experiment shapes.
    match a.axis {
        Axis::Edges if a.shape.n_sfcs.is_none() && a.shape.config.is_none() => base.n_sfcs = 4,
        Axis::Sfcs if a.shape.clouds.is_none() && a.shape.config.is_none() => base.n_clouds = 10,
        _ => {}
    }
    let sweep = SweepConfig {
        axis: a.axis,
        points: a.points.clone(),
        repetitions: a.reps,
        base,
        nested: a.nested,
        seeds: if a.identical_seeds { SeedPolicy::Identical } else { SeedPolicy::Distinct },
        place: PlaceOptions { budget: a.budget.budget(), polish_delay: !a.no_polish, ..PlaceOptions::default() },
        jobs: a.jobs,
    };
    let result = scenarios::run_sweep(&sweep).map_err(|e| match e {
        scenarios::SweepError::Place(..) | scenarios::SweepError::Pool(_) => {
            Failure(ExitContract::InternalBreach, e.to_string())
        }
        other => input(other),
    })?;
    write_file(&a.out.join("runs.csv"), &result.runs_csv(a.timing))?;
    write_file(&a.out.join("summary.csv"), &result.summary_csv())?;

    if let Some(bad) = result.runs.iter().find(|r| r.violations > 0) {
        return Err(Failure(
            ExitContract::InternalBreach,
            format!("axis value {} repetition {}: optimal placement fails validation", bad.axis_value, bad.rep),
        ));
    }
    let text = if a.json {
        let points: Vec<_> = result
            .points
            .iter()
            .map(|p| {
                json!({
                    "axis_value": p.axis_value,
                    "n_repetitions": p.n_repetitions,
                    "n_feasible": p.n_feasible,
                    "infeasible_count": p.infeasible_count,
                    "timed_out_count": p.timed_out_count,
                    "mean_cost": p.mean_cost,
                    "ci95_cost": p.ci95_cost,
                    "mean_delay_ms": p.mean_delay_ms,
                    "ci95_delay_ms": p.ci95_delay_ms,
                })
            })
            .collect();
        format!("{}\n", serde_json::to_string_pretty(&json!({ "axis": result.axis, "points": points })).expect("json"))
    } else {
        result.table()
    };
    stdout.write_all(text.as_bytes()).map_err(input)?;
    Ok(if result.points.iter().any(|p| p.timed_out_count > 0) { ExitContract::Timeout } else { ExitContract::Success })
}

fn cmd_dump_lp(a: &DumpLpArgs, stdout: &mut dyn Write) -> Outcome {
    let scenario = load(&a.scenario)?;
    let m = ilp::build_model(&scenario, &a.model.build_options())
        .map_err(|e| Failure(ExitContract::InternalBreach, e.to_string()))?;
    let text = lp_format::write_lp(&m);
    match &a.out {
        Some(path) => write_file(path, &text)?,
        None => stdout.write_all(text.as_bytes()).map_err(input)?,
    }
    Ok(ExitContract::Success)
}

/// Run the command line and return the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    ExitContract::Success.code()
                }
                _ => ExitContract::InputError.code(),
            };
        }
    };
    let outcome = match &cli.command {
        Command::Solve(a) => cmd_solve(a, stdout),
        Command::Validate(a) => cmd_validate(a, stdout),
        Command::Gen(a) => cmd_gen(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::DumpLp(a) => cmd_dump_lp(a, stdout),
    };
    match outcome {
        Ok(code) => code.code(),
        Err(Failure(code, message)) => {
            let _ = writeln!(stderr, "error: {message}");
            code.code()
        }
    }
}
