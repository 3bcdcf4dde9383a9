//! Compare the branch-and-bound optimum with exhaustive enumeration on a
//! handful of tiny scenarios.

use sfc_placer::oracle::Limits;
use sfc_placer::scenarios::{generate, GenConfig, Span};
use sfc_placer::{brute_force, build_model, solve_bnb, BuildOptions, Budget};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>4} {:>10} {:>8} {:>10} {:>8}", "seed", "oracle", "points", "solver", "nodes");
    for seed in 0..12 {
        let cfg = GenConfig {
            seed,
            n_clouds: 3,
            n_sfcs: 2,
            chain_len: Span::new(1, 3),
            n_flavors: 2,
            n_types: 2,
            ..GenConfig::default()
        };
        let s = generate(&cfg)?;
        let truth = brute_force(&s, &Limits::default())?;
        let r = solve_bnb(&build_model(&s, &BuildOptions::default())?, &Budget::unlimited())?;
        let show = |o: &Option<_>| o.map(|x: sfc_placer::num::Rational| x.to_string()).unwrap_or("-".into());
        println!(
            "{seed:>4} {:>10} {:>8} {:>10} {:>8}",
            show(&truth.objective),
            truth.points,
            show(&r.objective),
            r.stats.nodes_explored
        );
        assert_eq!((truth.status, truth.objective), (r.status, r.objective));
    }
    Ok(())
}
