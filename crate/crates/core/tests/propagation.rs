//! Propagation never removes a feasible completion, and bounds never exceed
//! the optimum.

mod common;

use proptest::prelude::*;
use sfc_placer::ilp::{VarId, VarKind};
use sfc_placer::num::Rational;
use sfc_placer::solver::{lower_bound, propagate, Propagation};
use sfc_placer::{build_model, solve_bnb, BuildOptions, Budget, SolveStatus};

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    /// Fixing any subset of an optimal solution's booleans is consistent,
    /// every implied value matches the solution, and the bound at that
    /// partial assignment does not exceed the optimum.
    #[test]
    fn partial_solutions_stay_consistent(seed in 0u64..5_000, mask in any::<u64>(), stride in 1usize..9) {
        let s = common::tiny(seed);
        let model = build_model(&s, &BuildOptions::default()).unwrap();
        let r = solve_bnb(&model, &Budget::unlimited()).unwrap();
        prop_assume!(r.status == SolveStatus::Optimal);
        let values = r.assignment.unwrap();
        let one = Rational::from_integer(1);
        let binaries: Vec<usize> =
            (0..model.vars.len()).filter(|&i| matches!(model.vars.kinds()[i], VarKind::Binary)).collect();
        let partial: Vec<(VarId, bool)> = binaries
            .iter()
            .enumerate()
            .filter(|(k, _)| (mask >> (k % 64)) & 1 == 1 && k % stride == 0)
            .map(|(_, &i)| (VarId(i), values[i] == one))
            .collect();

        match propagate(&model, &partial).unwrap() {
            Propagation::Conflict => prop_assert!(false, "a sub-assignment of a solution was refuted"),
            Propagation::Consistent(implied) => {
                for (v, bit) in implied {
                    prop_assert_eq!(bit, values[v.0] == one, "{} implied wrongly", model.vars.name(v));
                }
            }
        }
        let bound = lower_bound(&model, &partial).unwrap();
        prop_assert!(bound.is_some());
        prop_assert!(bound.unwrap() <= r.objective.unwrap());
    }

    /// A refuted root means the model is infeasible.
    #[test]
    fn root_conflict_implies_infeasible(seed in 0u64..5_000) {
        let s = common::tiny(seed);
        let model = build_model(&s, &BuildOptions::default()).unwrap();
        if propagate(&model, &[]).unwrap() == Propagation::Conflict {
            prop_assert_eq!(solve_bnb(&model, &Budget::unlimited()).unwrap().status, SolveStatus::Infeasible);
        }
    }
}
