//! Read a [`Placement`] out of a solved assignment.

use super::IlpModel;
use crate::model::Scenario;
use crate::num::Rational;
use crate::oracle::{Placement, SfcMetrics, VnfPlacement};

#[derive(Debug, thiserror::Error)]
pub enum DecodeError {
    #[error("model has no placement layout")]
    NoLayout,
    #[error("vnf {0} is not assigned to any instance")]
    UnassignedVnf(usize),
    #[error("instance {0} is used but not deployed on a cloud")]
    NoCloud(usize),
    #[error("instance {0} is deployed without a flavor")]
    NoFlavor(usize),
}

fn pick(values: &[Rational], vars: &[super::VarId]) -> Option<usize> {
    let one = Rational::from_integer(1);
    vars.iter().position(|v| values[v.0] == one)
}

/// Decode instance, cloud and flavor of every VNF. Chain delays come from
/// the hop-delay variables, cost from the objective.
pub fn decode_placement(model: &IlpModel, scenario: &Scenario, values: &[Rational]) -> Result<Placement, DecodeError> {
    let l = model.layout().ok_or(DecodeError::NoLayout)?;
    let mut assignment = Vec::with_capacity(l.n_vnfs);
    for v in 0..l.n_vnfs {
        let u = pick(values, &l.x[v]).ok_or(DecodeError::UnassignedVnf(v))?;
        let c = pick(values, &l.u[u]).ok_or(DecodeError::NoCloud(u))?;
        let f = pick(values, &l.phi[u]).ok_or(DecodeError::NoFlavor(u))?;
        assignment.push((u, c, f));
    }

    let clouds = &scenario.topology.clouds;
    let flavors = &scenario.flavors.flavors;
    let vnfs = scenario
        .vnfs()
        .zip(&assignment)
        .map(|(spec, &(u, c, f))| VnfPlacement {
            vnf: spec.id.clone(),
            vnfi: u,
            cloud: clouds[c].id.clone(),
            flavor: flavors[f].id.clone(),
            vnf_type: spec.type_code,
        })
        .collect();

    let mut sfcs = Vec::with_capacity(scenario.sfcs.len());
    let mut offset = 0;
    for (t, sfc) in scenario.sfcs.iter().enumerate() {
        let chain: Vec<usize> = assignment[offset..offset + sfc.vnfs.len()].iter().map(|a| a.1).collect();
        offset += sfc.vnfs.len();
        let delay: Rational = (0..l.pairs.len())
            .filter(|&p| l.vnf_sfc[l.pairs[p].0] == t)
            .map(|p| values[l.fhop[p].0])
            .sum();
        let security = crate::oracle::chain_metrics(scenario, &sfc.id, &chain).min_link_security_used;
        sfcs.push(SfcMetrics { sfc: sfc.id.clone(), total_delay_ms: delay, min_link_security_used: security });
    }

    Ok(Placement { total_cost: model.objective_value(values), vnfs, sfcs })
}
