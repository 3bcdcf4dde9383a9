//! The validator re-checks a placement against the scenario alone. Here a
//! solved placement passes, then three hand-made corruptions are caught.

use sfc_placer::scenarios::{generate, GenConfig};
use sfc_placer::{place, validate_solution, PlaceOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = generate(&GenConfig { seed: 3, n_clouds: 5, ..GenConfig::default() })?;
    let out = place(&scenario, &PlaceOptions::default())?;
    let good = out.placement.ok_or("seed 3 should be feasible")?;
    let s = &out.scenario;
    println!("solved placement: {} violation(s)", validate_solution(s, &good)?.len());

    let mut cheaper = good.clone();
    cheaper.total_cost -= 1;

    let mut crowded = good.clone();
    let target = crowded.vnfs[1].clone();
    crowded.vnfs[0].vnfi = target.vnfi;
    crowded.vnfs[0].cloud = target.cloud;
    crowded.vnfs[0].flavor = target.flavor;

    let mut moved = good.clone();
    let far = s.topology.clouds.last().unwrap().id.clone();
    moved.vnfs[0].cloud = far;

    for (name, p) in [("understated cost", cheaper), ("first two VNFs merged", crowded), ("first VNF moved", moved)] {
        println!("{name}:");
        for v in validate_solution(s, &p)? {
            println!("  - {v}");
        }
    }
    Ok(())
}
