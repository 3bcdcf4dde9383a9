//! Cost-minimal placement of service function chains onto shared VNF
//! instances, clouds and resource flavors under delay and link-security
//! limits.
//!
//! The crate is organized as a pipeline:
//!
//! * [`model`] loads and validates topology, chain and flavor documents.
//! * [`ilp`] turns a scenario into a boolean linear program.
//! * [`solver`] minimizes that program exactly (or hands it to an external solver).
//! * [`oracle`] validates placements independently and brute-forces tiny cases.
//! * [`scenarios`] generates random instances and runs parameter sweeps.
//! * [`cli`] is the command-line front end.
//!
//! [`pipeline::place`] wires the first four together.

pub mod cli;
pub mod ilp;
pub mod model;
pub mod num;
pub mod oracle;
pub mod pipeline;
pub mod scenarios;
pub mod solver;

pub use ilp::{build_model, BuildOptions, IlpModel};
pub use model::{load_scenario, Scenario};
pub use oracle::{brute_force, validate_solution, Placement};
pub use pipeline::{place, PlaceOptions, PlaceOutcome};
pub use solver::{solve_bnb, Budget, SolveResult, SolveStatus};
