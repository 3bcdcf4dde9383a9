//! Fix a few decisions by hand and watch bound propagation and the lower
//! bound react.

use sfc_placer::ilp::VarId;
use sfc_placer::scenarios::{generate, GenConfig};
use sfc_placer::solver::{lower_bound, propagate, Propagation};
use sfc_placer::{build_model, BuildOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = generate(&GenConfig { seed: 2, n_clouds: 3, n_sfcs: 2, ..GenConfig::default() })?;
    let model = build_model(&scenario, &BuildOptions::default())?;
    let l = model.layout().unwrap();

    let show = |label: &str, partial: &[(VarId, bool)]| -> Result<(), Box<dyn std::error::Error>> {
        let bound = lower_bound(&model, partial)?;
        match propagate(&model, partial)? {
            Propagation::Conflict => println!("{label}: refuted"),
            Propagation::Consistent(implied) => {
                let ones: Vec<String> = implied.iter().filter(|(_, b)| *b).map(|(v, _)| model.vars.name(*v)).collect();
                let bound = bound.map(|b| b.to_string()).unwrap_or_default();
                println!("{label}: {} fixed, bound {bound}, forced true: {}", implied.len(), ones.join(" "));
            }
        }
        Ok(())
    };
    show("root", &[])?;
    show("vnf 0 on its own instance, cloud 0", &[(l.x[0][0], true), (l.u[0][0], true)])?;
    let priciest = (0..l.n_flavors).max_by_key(|&f| l.flavor_prices[f]).unwrap();
    show("... with the priciest flavor", &[(l.x[0][0], true), (l.u[0][0], true), (l.phi[0][priciest], true)])?;
    Ok(())
}
