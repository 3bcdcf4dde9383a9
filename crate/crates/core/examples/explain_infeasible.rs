//! When no placement exists, find which constraint families are to blame by
//! dropping each relaxable family in turn.

use sfc_placer::model::load_bundle;
use sfc_placer::solver::explain_infeasible;
use sfc_placer::{build_model, solve_bnb, BuildOptions, Budget};

const BUNDLE: &str = r#"{
  "topology": {
    "clouds": [{"id": "edge", "capacity": {"cpu": 2}}, {"id": "core", "capacity": {"cpu": 4}}],
    "links": [{"a": "edge", "b": "core", "delay_ms": 12, "bandwidth_mbps": 100, "security_level": 3}]
  },
  "sfcs": [{
    "id": "camera-feed", "traffic_mbps": 20, "max_delay_ms": 10, "min_security": 6,
    "vnfs": [{"id": "fw", "type": "firewall"}, {"id": "ids", "type": "ids"}, {"id": "nat", "type": "nat"}]
  }],
  "flavors": [{"id": "medium", "price": 3, "demand": {"cpu": 2}}]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = load_bundle(BUNDLE)?.normalize_types();
    let model = build_model(&scenario, &BuildOptions::default())?;
    let result = solve_bnb(&model, &Budget::unlimited())?;
    println!("status: {}", result.status);
    let blamed = explain_infeasible(&model, &Budget::nodes(50_000))?;
    let names: Vec<&str> = blamed.iter().map(|t| t.as_str()).collect();
    println!("families whose removal alone restores feasibility: {}", names.join(", "));
    Ok(())
}
