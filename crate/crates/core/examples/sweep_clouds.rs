//! A small edges sweep in nested mode: mean cost and delay per cloud count,
//! with 95% confidence half-widths and the Spearman trend of each column.

use sfc_placer::scenarios::{run_sweep, Axis, GenConfig, SeedPolicy, SweepConfig};
use sfc_placer::PlaceOptions;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sweep = SweepConfig {
        axis: Axis::Edges,
        points: vec![4, 6, 8],
        repetitions: 5,
        base: GenConfig { n_sfcs: 3, ..GenConfig::default() },
        nested: true,
        seeds: SeedPolicy::Distinct,
        place: PlaceOptions::default(),
        jobs: 0,
    };
    let result = run_sweep(&sweep)?;
    print!("{}", result.table());
    println!("cost trend  {:?}", result.trend(|p| p.mean_cost));
    println!("delay trend {:?}", result.trend(|p| p.mean_delay_ms));
    println!();
    print!("{}", result.summary_csv());
    Ok(())
}
