//! Generate a scenario, place its chains at minimum cost and print where
//! everything went.
//!
//! ```text
//! cargo run --release --example place_chains -- 7
//! ```

use sfc_placer::scenarios::{generate, GenConfig};
use sfc_placer::{place, PlaceOptions, SolveStatus};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(7);
    let scenario = generate(&GenConfig { seed, n_clouds: 6, ..GenConfig::default() })?;
    let out = place(&scenario, &PlaceOptions::default())?;

    println!("status: {}", out.status);
    if out.status != SolveStatus::Optimal {
        return Ok(());
    }
    let p = out.placement.expect("optimal outcomes carry a placement");
    println!("cost {} with {} instances, {} nodes", p.total_cost, p.hosted().len(), out.result.stats.nodes_explored);
    for (vnfi, vnfs) in p.hosted() {
        let v = p.vnfs.iter().find(|v| v.vnfi == vnfi).unwrap();
        println!("  instance {vnfi:>2} on {:<3} flavor {:<3} type {}: {}", v.cloud, v.flavor, v.vnf_type, vnfs.join(", "));
    }
    for (sfc, req) in p.sfcs.iter().zip(&out.scenario.sfcs) {
        println!(
            "  {}: {} ms of {} allowed, weakest link {} (needs {})",
            sfc.sfc, sfc.total_delay_ms, req.max_delay_ms, sfc.min_link_security_used, req.min_security
        );
    }
    assert!(out.violations.is_empty());
    Ok(())
}
