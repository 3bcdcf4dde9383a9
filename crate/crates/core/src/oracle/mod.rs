//! Ground truth for placements.
//!
//! [`validate_solution`] re-checks a [`Placement`] against the scenario
//! directly: it knows nothing about the integer program and recomputes delay,
//! security and load from the topology. [`brute_force`] enumerates every
//! placement of a tiny scenario and keeps the cheapest valid one.
//!
//! Nothing in this module may depend on [`crate::ilp`].

mod brute;
mod check;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::Scenario;
use crate::num::{serde_decimal, Dec, Rational};

pub use brute::{brute_force, BruteForceError, Limits, OracleResult};
pub use check::{Checker, Checks, IndexedPlacement};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VnfPlacement {
    pub vnf: String,
    /// Instance identifier; VNFs with equal ids share the instance.
    pub vnfi: usize,
    pub cloud: String,
    pub flavor: String,
    /// Dense type code of the instance.
    #[serde(rename = "type")]
    pub vnf_type: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SfcMetrics {
    #[serde(rename = "id")]
    pub sfc: String,
    /// Sum of the propagation delays of the chain's inter-cloud hops.
    #[serde(with = "serde_decimal")]
    pub total_delay_ms: Rational,
    /// Lowest security level among the chain's hops; an all-local chain
    /// reports the topology's maximum level.
    pub min_link_security_used: u32,
}

/// A solved assignment: VNF -> (instance, cloud, flavor) plus chain metrics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    #[serde(with = "serde_decimal")]
    pub total_cost: Rational,
    pub vnfs: Vec<VnfPlacement>,
    pub sfcs: Vec<SfcMetrics>,
}

impl Placement {
    /// Build a placement from per-VNF `(instance, cloud index, flavor index)`
    /// in global VNF order, computing the chain metrics from the topology.
    pub fn assemble(scenario: &Scenario, assignment: &[(usize, usize, usize)]) -> Placement {
        let clouds = &scenario.topology.clouds;
        let flavors = &scenario.flavors.flavors;
        let vnfs: Vec<VnfPlacement> = scenario
            .vnfs()
            .zip(assignment)
            .map(|(v, &(u, c, f))| VnfPlacement {
                vnf: v.id.clone(),
                vnfi: u,
                cloud: clouds[c].id.clone(),
                flavor: flavors[f].id.clone(),
                vnf_type: v.type_code,
            })
            .collect();
        let mut cost = Rational::from_integer(0);
        let mut seen = BTreeSet::new();
        for &(u, _, f) in assignment {
            if seen.insert(u) {
                cost += flavors[f].price;
            }
        }
        let mut sfcs = Vec::new();
        let mut offset = 0;
        for sfc in &scenario.sfcs {
            let cl: Vec<usize> = assignment[offset..offset + sfc.vnfs.len()].iter().map(|a| a.1).collect();
            sfcs.push(chain_metrics(scenario, &sfc.id, &cl));
            offset += sfc.vnfs.len();
        }
        Placement { total_cost: cost, vnfs, sfcs }
    }

    /// VNFs grouped by instance (the inverse of the VNF -> instance map).
    pub fn hosted(&self) -> BTreeMap<usize, Vec<&str>> {
        let mut out: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
        for v in &self.vnfs {
            out.entry(v.vnfi).or_default().push(&v.vnf);
        }
        out
    }

    pub fn mean_delay_ms(&self) -> Option<f64> {
        if self.sfcs.is_empty() {
            return None;
        }
        let total: f64 = self.sfcs.iter().map(|s| crate::num::to_f64(&s.total_delay_ms)).sum();
        Some(total / self.sfcs.len() as f64)
    }
}

pub(crate) fn chain_metrics(scenario: &Scenario, sfc: &str, clouds: &[usize]) -> SfcMetrics {
    let topo = &scenario.topology;
    let mut delay = Rational::from_integer(0);
    let mut level = topo.security_levels;
    for w in clouds.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        if let Some(link) = topo.link(&topo.clouds[w[0]].id, &topo.clouds[w[1]].id) {
            delay += link.delay_ms;
            level = level.min(link.security_level);
        } else {
            level = 0;
        }
    }
    SfcMetrics { sfc: sfc.to_string(), total_delay_ms: delay, min_link_security_used: level }
}

/// A broken placement rule. Ids refer to the scenario.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    UnplacedVnf { vnf: String },
    DuplicateVnf { vnf: String },
    SfcReusesVnfi { sfc: String, vnfi: usize },
    MixedTypes { vnfi: usize },
    TypeMismatch { vnf: String, claimed: u32, actual: u32 },
    Conflict { vnfi: usize, a: String, b: String },
    SplitVnfi { vnfi: usize },
    Capacity { cloud: String, resource: String, load: u64, capacity: u64 },
    Delay { sfc: String, delay_ms: String, max_ms: String },
    Security { sfc: String, from: String, to: String, level: u32, required: u32 },
    Unreachable { sfc: String, from: String, to: String },
    Bandwidth { a: String, b: String, load_mbps: String, capacity_mbps: String },
    EndpointDelay { sfc: String, delay_ms: String, max_ms: String },
    CostMismatch { claimed: String, actual: String },
    MetricMismatch { sfc: String, field: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnplacedVnf { vnf } => write!(f, "vnf {vnf} is not placed"),
            Violation::DuplicateVnf { vnf } => write!(f, "vnf {vnf} is placed more than once"),
            Violation::SfcReusesVnfi { sfc, vnfi } => write!(f, "sfc {sfc} uses instance {vnfi} more than once"),
            Violation::MixedTypes { vnfi } => write!(f, "instance {vnfi} hosts vnfs of different types"),
            Violation::TypeMismatch { vnf, claimed, actual } => {
                write!(f, "vnf {vnf} reported with type {claimed}, actual type {actual}")
            }
            Violation::Conflict { vnfi, a, b } => write!(f, "conflicting vnfs {a} and {b} share instance {vnfi}"),
            Violation::SplitVnfi { vnfi } => write!(f, "instance {vnfi} is split across clouds or flavors"),
            Violation::Capacity { cloud, resource, load, capacity } => {
                write!(f, "cloud {cloud} overloaded on {resource}: {load} > {capacity}")
            }
            Violation::Delay { sfc, delay_ms, max_ms } => {
                write!(f, "sfc {sfc} delay {delay_ms} ms exceeds {max_ms} ms")
            }
            Violation::Security { sfc, from, to, level, required } => {
                write!(f, "sfc {sfc} hop {from}->{to} crosses a level-{level} link, needs {required}")
            }
            Violation::Unreachable { sfc, from, to } => write!(f, "sfc {sfc} hop {from}->{to} has no link"),
            Violation::Bandwidth { a, b, load_mbps, capacity_mbps } => {
                write!(f, "link {a}-{b} carries {load_mbps} Mbps over its {capacity_mbps} Mbps")
            }
            Violation::EndpointDelay { sfc, delay_ms, max_ms } => {
                write!(f, "sfc {sfc} end-to-end delay with endpoints {delay_ms} ms exceeds {max_ms} ms")
            }
            Violation::CostMismatch { claimed, actual } => write!(f, "reported cost {claimed}, actual {actual}"),
            Violation::MetricMismatch { sfc, field } => write!(f, "sfc {sfc} reports a wrong {field}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlacementError {
    #[error("placement references unknown vnf `{0}`")]
    UnknownVnf(String),
    #[error("placement references unknown cloud `{0}`")]
    UnknownCloud(String),
    #[error("placement references unknown flavor `{0}`")]
    UnknownFlavor(String),
    #[error("placement references unknown sfc `{0}`")]
    UnknownSfc(String),
}

pub fn validate_solution(scenario: &Scenario, placement: &Placement) -> Result<Vec<Violation>, PlacementError> {
    validate_solution_with(scenario, placement, &Checks::default())
}

/// Check every placement rule; an empty list means the placement is valid.
pub fn validate_solution_with(
    scenario: &Scenario,
    placement: &Placement,
    checks: &Checks,
) -> Result<Vec<Violation>, PlacementError> {
    let topo = &scenario.topology;
    let vnf_ids: Vec<&str> = scenario.vnfs().map(|v| v.id.as_str()).collect();
    let mut slots: Vec<Option<&VnfPlacement>> = vec![None; vnf_ids.len()];
    let mut violations = Vec::new();
    for p in &placement.vnfs {
        let i = vnf_ids.iter().position(|v| *v == p.vnf).ok_or_else(|| PlacementError::UnknownVnf(p.vnf.clone()))?;
        topo.cloud_index(&p.cloud).ok_or_else(|| PlacementError::UnknownCloud(p.cloud.clone()))?;
        scenario.flavors.get(&p.flavor).ok_or_else(|| PlacementError::UnknownFlavor(p.flavor.clone()))?;
        if slots[i].is_some() {
            violations.push(Violation::DuplicateVnf { vnf: p.vnf.clone() });
        } else {
            slots[i] = Some(p);
        }
    }
    for m in &placement.sfcs {
        if !scenario.sfcs.iter().any(|s| s.id == m.sfc) {
            return Err(PlacementError::UnknownSfc(m.sfc.clone()));
        }
    }
    for (i, slot) in slots.iter().enumerate() {
        if slot.is_none() {
            violations.push(Violation::UnplacedVnf { vnf: vnf_ids[i].to_string() });
        }
    }
    if !violations.is_empty() {
        return Ok(violations);
    }

    let slots: Vec<&VnfPlacement> = slots.into_iter().map(|s| s.expect("checked above")).collect();
    for (v, p) in scenario.vnfs().zip(&slots) {
        if p.vnf_type != v.type_code {
            violations.push(Violation::TypeMismatch { vnf: v.id.clone(), claimed: p.vnf_type, actual: v.type_code });
        }
    }
    let indexed = IndexedPlacement {
        vnfs: slots
            .iter()
            .map(|p| {
                let c = topo.cloud_index(&p.cloud).expect("checked above");
                let f = scenario.flavors.flavors.iter().position(|f| f.id == p.flavor).expect("checked above");
                (p.vnfi, c, f)
            })
            .collect(),
    };
    let checker = Checker::new(scenario, *checks);
    violations.extend(checker.violations(&indexed));

    let actual = checker.cost(&indexed);
    if actual != placement.total_cost {
        violations.push(Violation::CostMismatch {
            claimed: Dec(&placement.total_cost).to_string(),
            actual: Dec(&actual).to_string(),
        });
    }
    let mut offset = 0;
    for sfc in &scenario.sfcs {
        let clouds: Vec<usize> = indexed.vnfs[offset..offset + sfc.vnfs.len()].iter().map(|a| a.1).collect();
        offset += sfc.vnfs.len();
        let truth = chain_metrics(scenario, &sfc.id, &clouds);
        if let Some(claim) = placement.sfcs.iter().find(|m| m.sfc == sfc.id) {
            if claim.total_delay_ms != truth.total_delay_ms {
                violations.push(Violation::MetricMismatch { sfc: sfc.id.clone(), field: "total_delay_ms".into() });
            }
            if claim.min_link_security_used != truth.min_link_security_used {
                violations.push(Violation::MetricMismatch {
                    sfc: sfc.id.clone(),
                    field: "min_link_security_used".into(),
                });
            }
        }
    }
    Ok(violations)
}

#[cfg(test)]
mod tests;
