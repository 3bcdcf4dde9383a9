//! Name the constraint families responsible for infeasibility.

use super::{solve_bnb, Budget, SolveError, SolveStatus};
use crate::ilp::{IlpModel, Tag};

/// Relaxable families whose removal alone makes the model feasible.
///
/// Each family present in the model is dropped in turn and the remainder is
/// checked for feasibility. An empty result means no single family is to
/// blame (or every check ran out of budget).
pub fn explain_infeasible(model: &IlpModel, budget: &Budget) -> Result<Vec<Tag>, SolveError> {
    let present = model.stats().per_tag;
    let mut culprits = Vec::new();
    for tag in Tag::ALL.iter().copied().filter(|t| t.is_relaxable() && present.contains_key(t)) {
        let relaxed = model.without_tags(&[tag]).with_objective(Vec::new());
        if solve_bnb(&relaxed, budget)?.status == SolveStatus::Optimal {
            culprits.push(tag);
        }
    }
    Ok(culprits)
}
