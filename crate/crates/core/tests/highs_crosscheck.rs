//! Cross-check against HiGHS through the LP file and the external backend.
//! Skipped when the `highspy` Python module is not installed.

mod common;

use std::path::Path;
use std::process::Command;

use sfc_placer::solver::{Backend, SolverBackend};
use sfc_placer::{build_model, solve_bnb, BuildOptions, Budget};

fn highs_available() -> bool {
    Command::new("python3").args(["-c", "import highspy"]).output().is_ok_and(|o| o.status.success())
}

#[test]
fn optimum_matches_highs() {
    if !highs_available() {
        eprintln!("highspy not installed; skipping");
        return;
    }
    let script = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../tools/highs_solve.py");
    let backend: Backend = format!("external:python3 {}", script.display()).parse().unwrap();
    let mut compared = 0;
    for seed in 0..12 {
        let cfg = sfc_placer::scenarios::GenConfig { seed, n_clouds: 3, n_sfcs: 2, ..Default::default() };
        let s = sfc_placer::scenarios::generate(&cfg).unwrap();
        for options in [BuildOptions::default(), BuildOptions { bandwidth: true, endpoints: true, ..Default::default() }] {
            let model = build_model(&s, &options).unwrap();
            let ours = solve_bnb(&model, &Budget::unlimited()).unwrap();
            let theirs = backend.solve(&model, &Budget::unlimited()).unwrap();
            assert_eq!(ours.status, theirs.status, "seed {seed}");
            assert_eq!(ours.objective, theirs.objective, "seed {seed}");
            compared += 1;
        }
    }
    assert_eq!(compared, 24);
}
