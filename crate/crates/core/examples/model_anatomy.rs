//! Build the integer program for a small scenario, list how many rows each
//! constraint family contributes, and write the LP file.
//!
//! ```text
//! cargo run --example model_anatomy -- model.lp
//! ```

use sfc_placer::ilp::lp_format::write_lp;
use sfc_placer::scenarios::{generate, GenConfig};
use sfc_placer::{build_model, BuildOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = generate(&GenConfig { n_clouds: 3, n_sfcs: 2, conflict_prob: 0.5, ..GenConfig::default() })?;
    let options = BuildOptions { bandwidth: true, endpoints: true, ..BuildOptions::default() };
    let model = build_model(&scenario, &options)?;
    let stats = model.stats();
    println!("{} variables ({} boolean), {} rows", stats.variables, stats.binaries, stats.constraints);
    for (tag, rows) in &stats.per_tag {
        println!("  {:<14} {rows}", tag.as_str());
    }
    let path = std::env::args().nth(1).unwrap_or_else(|| "model.lp".into());
    std::fs::write(&path, write_lp(&model))?;
    println!("wrote {path}");
    Ok(())
}
