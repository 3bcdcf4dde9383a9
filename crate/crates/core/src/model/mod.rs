//! Domain model: clouds and links, chain requests, and the flavor catalog.
//!
//! A [`Scenario`] bundles the three administrative inputs. Once loaded it is
//! never mutated except by [`Scenario::normalize_types`], which assigns the
//! dense type codes used by the integer program.

mod json;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::num::Rational;

pub use json::{
    load_bundle, load_scenario, save_bundle, save_scenario, FlavorDoc, LinkDoc, ScenarioDocs,
    SfcDoc, TopologyDoc, VnfDoc,
};

/// Number of link security levels when a topology does not say otherwise.
pub const DEFAULT_SECURITY_LEVELS: u32 = 15;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("{doc}: invalid document at `{path}`: {message}")]
    Schema {
        doc: &'static str,
        path: String,
        message: String,
    },
    #[error("dangling id: {what} `{id}` does not exist")]
    DanglingId { what: &'static str, id: String },
    #[error("duplicate {what} id `{id}`")]
    DuplicateId { what: &'static str, id: String },
    #[error("negative value at `{path}`")]
    Negative { path: String },
    #[error("sfc `{sfc}` requires security level {level}, above the maximum {max}")]
    SecurityAboveMax { sfc: String, level: u32, max: u32 },
    #[error("invalid value at `{path}`: {message}")]
    Invalid { path: String, message: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CloudNode {
    pub id: String,
    /// Units of each resource kind available on the cloud.
    pub capacity: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkProps {
    pub delay_ms: Rational,
    pub bandwidth_mbps: Rational,
    pub security_level: u32,
}

/// What an SFC hop between two endpoints sees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Hop<'a> {
    /// Both ends on the same cloud: no delay, highest security level.
    Local,
    Link(&'a LinkProps),
    Unreachable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    pub clouds: Vec<CloudNode>,
    pub access_nodes: Vec<String>,
    pub iot_domains: Vec<String>,
    /// Undirected overlay links keyed by the lexicographically ordered pair.
    pub links: BTreeMap<(String, String), LinkProps>,
    pub security_levels: u32,
}

impl Topology {
    pub fn link_key(a: &str, b: &str) -> (String, String) {
        if a <= b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        }
    }

    pub fn link(&self, a: &str, b: &str) -> Option<&LinkProps> {
        self.links.get(&Self::link_key(a, b))
    }

    pub fn hop(&self, a: &str, b: &str) -> Hop<'_> {
        if a == b {
            return Hop::Local;
        }
        match self.link(a, b) {
            Some(p) => Hop::Link(p),
            None => Hop::Unreachable,
        }
    }

    pub fn cloud_index(&self, id: &str) -> Option<usize> {
        self.clouds.iter().position(|c| c.id == id)
    }

    fn has_node(&self, id: &str) -> bool {
        self.clouds.iter().any(|c| c.id == id)
            || self.access_nodes.iter().any(|n| n == id)
            || self.iot_domains.iter().any(|n| n == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VnfSpec {
    pub id: String,
    /// Type label as given in the input (`firewall`, `3`, ...).
    pub kind: String,
    /// Dense code in `1..=|types|`, `0` until [`Scenario::normalize_types`] runs.
    pub type_code: u32,
    pub conflicts: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SfcRequest {
    pub id: String,
    pub vnfs: Vec<VnfSpec>,
    pub traffic_mbps: Rational,
    pub max_delay_ms: Rational,
    pub min_security: u32,
    /// Access nodes the chain's users attach through.
    pub users: Vec<String>,
    /// IoT domains at the far end of the chain.
    pub iot_domains: Vec<String>,
    pub bandwidth_mbps: Rational,
}

impl SfcRequest {
    /// Consecutive VNF pairs `(i, i+1)` as positions in `vnfs`.
    pub fn hops(&self) -> impl Iterator<Item = (&VnfSpec, &VnfSpec)> {
        self.vnfs.windows(2).map(|w| (&w[0], &w[1]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flavor {
    pub id: String,
    pub demand: BTreeMap<String, u64>,
    pub price: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlavorCatalog {
    pub flavors: Vec<Flavor>,
}

impl FlavorCatalog {
    pub fn resource_kinds(&self) -> BTreeSet<String> {
        self.flavors.iter().flat_map(|f| f.demand.keys().cloned()).collect()
    }

    pub fn get(&self, id: &str) -> Option<&Flavor> {
        self.flavors.iter().find(|f| f.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub topology: Topology,
    pub sfcs: Vec<SfcRequest>,
    pub flavors: FlavorCatalog,
    /// `|types|` once normalized.
    pub type_count: u32,
}

impl Scenario {
    /// Validate cross-document references and close conflict sets under symmetry.
    pub fn new(
        topology: Topology,
        sfcs: Vec<SfcRequest>,
        flavors: FlavorCatalog,
    ) -> Result<Self, ModelError> {
        let mut scenario = Scenario { topology, sfcs, flavors, type_count: 0 };
        scenario.validate()?;
        scenario.close_conflicts();
        Ok(scenario)
    }

    fn validate(&self) -> Result<(), ModelError> {
        let topo = &self.topology;
        if topo.security_levels == 0 {
            return Err(ModelError::Invalid {
                path: "security_levels".into(),
                message: "must be at least 1".into(),
            });
        }
        let mut nodes = BTreeSet::new();
        for id in topo
            .clouds
            .iter()
            .map(|c| &c.id)
            .chain(&topo.access_nodes)
            .chain(&topo.iot_domains)
        {
            if !nodes.insert(id.as_str()) {
                return Err(ModelError::DuplicateId { what: "node", id: id.clone() });
            }
        }
        for ((a, b), props) in &topo.links {
            for end in [a, b] {
                if !topo.has_node(end) {
                    return Err(ModelError::DanglingId { what: "link endpoint", id: end.clone() });
                }
            }
            if a == b {
                return Err(ModelError::Invalid {
                    path: format!("links[{a},{b}]"),
                    message: "self loop".into(),
                });
            }
            if props.security_level < 1 || props.security_level > topo.security_levels {
                return Err(ModelError::Invalid {
                    path: format!("links[{a},{b}].security_level"),
                    message: format!("must lie in [1, {}]", topo.security_levels),
                });
            }
        }

        if self.flavors.flavors.is_empty() {
            return Err(ModelError::Invalid {
                path: "flavors".into(),
                message: "catalog must contain at least one flavor".into(),
            });
        }
        let mut flavor_ids = BTreeSet::new();
        for f in &self.flavors.flavors {
            if !flavor_ids.insert(f.id.as_str()) {
                return Err(ModelError::DuplicateId { what: "flavor", id: f.id.clone() });
            }
        }
        let kinds = self.flavors.resource_kinds();
        for (i, f) in self.flavors.flavors.iter().enumerate() {
            if f.demand.keys().cloned().collect::<BTreeSet<_>>() != kinds {
                return Err(ModelError::Invalid {
                    path: format!("flavors[{i}].demand"),
                    message: format!("resource kinds must be {kinds:?}"),
                });
            }
        }
        for (i, c) in topo.clouds.iter().enumerate() {
            if c.capacity.keys().cloned().collect::<BTreeSet<_>>() != kinds {
                return Err(ModelError::Invalid {
                    path: format!("clouds[{i}].capacity"),
                    message: format!("resource kinds must match the flavor catalog {kinds:?}"),
                });
            }
        }

        let mut sfc_ids = BTreeSet::new();
        let mut vnf_ids = BTreeSet::new();
        for sfc in &self.sfcs {
            if !sfc_ids.insert(sfc.id.as_str()) {
                return Err(ModelError::DuplicateId { what: "sfc", id: sfc.id.clone() });
            }
            for v in &sfc.vnfs {
                if !vnf_ids.insert(v.id.as_str()) {
                    return Err(ModelError::DuplicateId { what: "vnf", id: v.id.clone() });
                }
            }
        }
        for (i, sfc) in self.sfcs.iter().enumerate() {
            if sfc.vnfs.is_empty() {
                return Err(ModelError::Invalid {
                    path: format!("sfcs[{i}].vnfs"),
                    message: "a chain needs at least one vnf".into(),
                });
            }
            if sfc.max_delay_ms <= Rational::from_integer(0) {
                return Err(ModelError::Invalid {
                    path: format!("sfcs[{i}].max_delay_ms"),
                    message: "must be positive".into(),
                });
            }
            if sfc.min_security < 1 {
                return Err(ModelError::Invalid {
                    path: format!("sfcs[{i}].min_security"),
                    message: "must be at least 1".into(),
                });
            }
            if sfc.min_security > topo.security_levels {
                return Err(ModelError::SecurityAboveMax {
                    sfc: sfc.id.clone(),
                    level: sfc.min_security,
                    max: topo.security_levels,
                });
            }
            for u in &sfc.users {
                if !topo.access_nodes.contains(u) {
                    return Err(ModelError::DanglingId { what: "access node", id: u.clone() });
                }
            }
            for d in &sfc.iot_domains {
                if !topo.iot_domains.contains(d) {
                    return Err(ModelError::DanglingId { what: "iot domain", id: d.clone() });
                }
            }
            for v in &sfc.vnfs {
                for c in &v.conflicts {
                    if c == &v.id {
                        return Err(ModelError::Invalid {
                            path: format!("sfcs[{i}].vnfs.{}.conflicts", v.id),
                            message: "a vnf cannot conflict with itself".into(),
                        });
                    }
                    if !vnf_ids.contains(c.as_str()) {
                        return Err(ModelError::DanglingId { what: "conflicting vnf", id: c.clone() });
                    }
                }
            }
        }
        Ok(())
    }

    fn close_conflicts(&mut self) {
        let mut extra: Vec<(String, String)> = Vec::new();
        for v in self.vnfs() {
            for c in &v.conflicts {
                extra.push((c.clone(), v.id.clone()));
            }
        }
        for sfc in &mut self.sfcs {
            for v in &mut sfc.vnfs {
                for (target, other) in &extra {
                    if target == &v.id {
                        v.conflicts.insert(other.clone());
                    }
                }
            }
        }
    }

    /// All VNFs in chain order, chains in input order.
    pub fn vnfs(&self) -> impl Iterator<Item = &VnfSpec> {
        self.sfcs.iter().flat_map(|s| s.vnfs.iter())
    }

    pub fn vnf_count(&self) -> usize {
        self.sfcs.iter().map(|s| s.vnfs.len()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.vnfs().all(|v| v.type_code >= 1 && v.type_code <= self.type_count)
    }

    /// Re-encode type labels as dense codes `1..=|types|` in order of first
    /// appearance. Equal labels get equal codes.
    pub fn normalize_types(mut self) -> Self {
        let mut codes: HashMap<String, u32> = HashMap::new();
        for sfc in &mut self.sfcs {
            for v in &mut sfc.vnfs {
                let next = codes.len() as u32 + 1;
                v.type_code = *codes.entry(v.kind.clone()).or_insert(next);
            }
        }
        self.type_count = codes.len() as u32;
        self
    }

    /// Type labels indexed by `code - 1`.
    pub fn type_labels(&self) -> Vec<String> {
        let mut labels = vec![String::new(); self.type_count as usize];
        for v in self.vnfs() {
            if v.type_code >= 1 && (v.type_code as usize) <= labels.len() {
                labels[v.type_code as usize - 1] = v.kind.clone();
            }
        }
        labels
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vnf(id: &str, kind: &str, conflicts: &[&str]) -> VnfSpec {
        VnfSpec {
            id: id.into(),
            kind: kind.into(),
            type_code: 0,
            conflicts: conflicts.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn sfc(id: &str, vnfs: Vec<VnfSpec>) -> SfcRequest {
        SfcRequest {
            id: id.into(),
            vnfs,
            traffic_mbps: Rational::from_integer(1),
            max_delay_ms: Rational::from_integer(10),
            min_security: 1,
            users: vec![],
            iot_domains: vec![],
            bandwidth_mbps: Rational::from_integer(0),
        }
    }

    fn one_cloud() -> (Topology, FlavorCatalog) {
        let cap: BTreeMap<String, u64> = [("cpu".to_string(), 4)].into();
        let topo = Topology {
            clouds: vec![CloudNode { id: "c0".into(), capacity: cap.clone() }],
            access_nodes: vec![],
            iot_domains: vec![],
            links: BTreeMap::new(),
            security_levels: DEFAULT_SECURITY_LEVELS,
        };
        let flavors = FlavorCatalog {
            flavors: vec![Flavor { id: "f".into(), demand: cap, price: Rational::from_integer(1) }],
        };
        (topo, flavors)
    }

    #[test]
    fn empty_sfc_list_is_valid() {
        let (t, f) = one_cloud();
        let s = Scenario::new(t, vec![], f).unwrap();
        assert_eq!(s.vnf_count(), 0);
        assert!(s.normalize_types().is_normalized());
    }

    #[test]
    fn dangling_conflict_is_rejected() {
        let (t, f) = one_cloud();
        let err = Scenario::new(t, vec![sfc("s", vec![vnf("a", "fw", &["ghost"])])], f).unwrap_err();
        assert!(matches!(err, ModelError::DanglingId { .. }), "{err}");
        assert!(err.to_string().contains("dangling id"));
    }

    #[test]
    fn conflicts_are_closed_symmetrically() {
        let (t, f) = one_cloud();
        let s = Scenario::new(
            t,
            vec![sfc("s1", vec![vnf("a", "fw", &["b"])]), sfc("s2", vec![vnf("b", "fw", &[])])],
            f,
        )
        .unwrap();
        let b = s.vnfs().find(|v| v.id == "b").unwrap();
        assert!(b.conflicts.contains("a"));
    }

    #[test]
    fn self_conflict_is_rejected() {
        let (t, f) = one_cloud();
        assert!(Scenario::new(t, vec![sfc("s", vec![vnf("a", "fw", &["a"])])], f).is_err());
    }

    #[test]
    fn security_above_max_is_rejected() {
        let (t, f) = one_cloud();
        let mut s = sfc("s", vec![vnf("a", "fw", &[])]);
        s.min_security = 16;
        assert!(matches!(Scenario::new(t, vec![s], f), Err(ModelError::SecurityAboveMax { .. })));
    }

    #[test]
    fn normalize_assigns_dense_codes_by_first_appearance() {
        let (t, f) = one_cloud();
        let s = Scenario::new(
            t,
            vec![sfc("s", vec![vnf("a", "firewall", &[]), vnf("b", "lb", &[]), vnf("c", "firewall", &[])])],
            f,
        )
        .unwrap()
        .normalize_types();
        let codes: Vec<u32> = s.vnfs().map(|v| v.type_code).collect();
        assert_eq!(codes, vec![1, 2, 1]);
        assert_eq!(s.type_count, 2);
        assert_eq!(s.type_labels(), vec!["firewall", "lb"]);
    }

    #[test]
    fn single_type_maps_to_one() {
        let (t, f) = one_cloud();
        let s = Scenario::new(t, vec![sfc("s", vec![vnf("a", "x", &[]), vnf("b", "x", &[])])], f)
            .unwrap()
            .normalize_types();
        assert!(s.vnfs().all(|v| v.type_code == 1));
        assert_eq!(s.type_count, 1);
    }

    #[test]
    fn intra_cloud_hop_is_local() {
        let (t, _) = one_cloud();
        assert_eq!(t.hop("c0", "c0"), Hop::Local);
        assert_eq!(t.hop("c0", "c1"), Hop::Unreachable);
    }
}
