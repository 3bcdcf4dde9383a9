//! Solve the same model with the built-in search and with HiGHS through the
//! LP file (requires the `highspy` Python module).

use sfc_placer::scenarios::{generate, GenConfig};
use sfc_placer::solver::{Backend, SolverBackend};
use sfc_placer::{build_model, solve_bnb, BuildOptions, Budget};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let script = concat!(env!("CARGO_MANIFEST_DIR"), "/../../tools/highs_solve.py");
    let highs: Backend = format!("external:python3 {script}").parse()?;
    for seed in 0..5 {
        let s = generate(&GenConfig { seed, n_clouds: 4, n_sfcs: 3, ..GenConfig::default() })?;
        let model = build_model(&s, &BuildOptions::default())?;
        let ours = solve_bnb(&model, &Budget::unlimited())?;
        match highs.solve(&model, &Budget::unlimited()) {
            Ok(theirs) => {
                let show = |o: Option<sfc_placer::num::Rational>| o.map(|x| x.to_string()).unwrap_or("infeasible".into());
                println!("seed {seed}: bnb {} / highs {}", show(ours.objective), show(theirs.objective));
            }
            Err(e) => {
                println!("highs unavailable: {e}");
                return Ok(());
            }
        }
    }
    Ok(())
}
