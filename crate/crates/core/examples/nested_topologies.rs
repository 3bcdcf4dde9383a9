//! Nested generation: with one seed, a scenario with more clouds extends the
//! smaller one (same clouds, links and chains, plus new clouds), so the
//! optimal cost can only fall as clouds are added.

use sfc_placer::scenarios::{generate, GenConfig};
use sfc_placer::{place, PlaceOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut previous = None;
    for clouds in [3, 4, 6, 8] {
        let s = generate(&GenConfig { seed: 42, n_clouds: clouds, ..GenConfig::default() })?;
        if let Some(prev) = &previous {
            let prev: &sfc_placer::Scenario = prev;
            assert_eq!(prev.sfcs, s.sfcs);
            assert!(prev.topology.clouds.iter().zip(&s.topology.clouds).all(|(a, b)| a == b));
        }
        let out = place(&s, &PlaceOptions::default())?;
        let cost = out.placement.as_ref().map(|p| p.total_cost.to_string()).unwrap_or("-".into());
        let delay = out.placement.as_ref().and_then(|p| p.mean_delay_ms()).map(|d| format!("{d:.2}")).unwrap_or("-".into());
        println!("{clouds:>2} clouds: {:<10} cost {cost:>4}  mean delay {delay} ms", out.status.to_string());
        previous = Some(s);
    }
    Ok(())
}
