//! End-to-end placement: normalize, build, solve, decode, validate.

use crate::ilp::{self, BuildOptions, IlpModel, LinearConstraint, Sense, Tag};
use crate::model::Scenario;
use crate::num::Rational;
use crate::oracle::{self, Checks, Placement, Violation};
use crate::solver::{self, Backend, BnbOptions, Budget, SolveResult, SolveStatus, SolverBackend};

#[derive(Debug, Clone)]
pub struct PlaceOptions {
    pub build: BuildOptions,
    pub budget: Budget,
    pub backend: Backend,
    /// After a cost-optimal solve, search among the cost-optimal placements
    /// for one with the least total hop delay.
    pub polish_delay: bool,
    pub polish_budget: Budget,
}

impl Default for PlaceOptions {
    fn default() -> Self {
        PlaceOptions {
            build: BuildOptions::default(),
            budget: Budget::unlimited(),
            backend: Backend::Bnb,
            polish_delay: true,
            polish_budget: Budget::nodes(20_000),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlaceOutcome {
    pub status: SolveStatus,
    /// The normalized scenario the model was built from.
    pub scenario: Scenario,
    pub model: IlpModel,
    pub result: SolveResult,
    /// Placement for `Optimal`, or the incumbent of a `TimedOut` search.
    pub placement: Option<Placement>,
    pub violations: Vec<Violation>,
}

#[derive(Debug, thiserror::Error)]
pub enum PlaceError {
    #[error(transparent)]
    Build(#[from] ilp::BuildError),
    #[error(transparent)]
    Solve(#[from] solver::SolveError),
    #[error(transparent)]
    Decode(#[from] ilp::DecodeError),
    #[error(transparent)]
    Placement(#[from] oracle::PlacementError),
}

pub fn checks_for(build: &BuildOptions) -> Checks {
    Checks { bandwidth: build.bandwidth, endpoints: build.endpoints }
}

/// Re-solve for minimum total hop delay with the cost capped at `cost`,
/// starting from the given cost-optimal assignment.
pub fn polish_delay(model: &IlpModel, cost: Rational, start: &[Rational], budget: &Budget) -> Option<Vec<Rational>> {
    let layout = model.layout()?;
    if layout.fhop.is_empty() {
        return None;
    }
    let one = Rational::from_integer(1);
    let mut delay = model.with_objective(layout.fhop.iter().map(|&v| (one, v)).collect());
    delay.add(LinearConstraint::new(model.objective.clone(), Sense::Le, cost, Tag::ExtCostcap));
    let options = BnbOptions { initial: Some(start.to_vec()) };
    let polished = solver::solve_with(&delay, budget, &options).ok()?;
    polished.assignment
}

pub fn place(scenario: &Scenario, options: &PlaceOptions) -> Result<PlaceOutcome, PlaceError> {
    let scenario = if scenario.is_normalized() { scenario.clone() } else { scenario.clone().normalize_types() };
    let model = ilp::build_model(&scenario, &options.build)?;
    let mut result = options.backend.solve(&model, &options.budget)?;

    if result.status == SolveStatus::Optimal && options.polish_delay {
        let cost = result.objective.expect("optimal results carry an objective");
        let start = result.assignment.as_deref().expect("optimal results carry an assignment");
        if let Some(better) = polish_delay(&model, cost, start, &options.polish_budget) {
            result.assignment = Some(better);
        }
    }

    let mut placement = None;
    let mut violations = Vec::new();
    if let Some(values) = &result.assignment {
        let p = ilp::decode_placement(&model, &scenario, values)?;
        violations = oracle::validate_solution_with(&scenario, &p, &checks_for(&options.build))?;
        placement = Some(p);
    }
    Ok(PlaceOutcome { status: result.status, scenario, model, result, placement, violations })
}
