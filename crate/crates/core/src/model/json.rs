//! JSON documents: `topology.json`, `sfcs.json`, `flavors.json`, and the
//! single-file bundle that nests all three.

use std::collections::{BTreeMap, BTreeSet};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};

use super::{
    CloudNode, Flavor, FlavorCatalog, LinkProps, ModelError, Scenario, SfcRequest, Topology,
    VnfSpec, DEFAULT_SECURITY_LEVELS,
};
use crate::num::{parse_decimal, serde_decimal, Rational};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyDoc {
    pub clouds: Vec<CloudDoc>,
    #[serde(default)]
    pub access_nodes: Vec<String>,
    #[serde(default)]
    pub iot_domains: Vec<String>,
    #[serde(default)]
    pub links: Vec<LinkDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub security_levels: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CloudDoc {
    pub id: String,
    pub capacity: BTreeMap<String, Number>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkDoc {
    pub a: String,
    pub b: String,
    pub delay_ms: Number,
    pub bandwidth_mbps: Number,
    pub security_level: Number,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SfcDoc {
    pub id: String,
    pub traffic_mbps: Number,
    pub max_delay_ms: Number,
    pub min_security: Number,
    #[serde(default)]
    pub users: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub iot_domains: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandwidth_mbps: Option<Number>,
    pub vnfs: Vec<VnfDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VnfDoc {
    pub id: String,
    /// Either a label (`"firewall"`) or an integer code.
    #[serde(rename = "type")]
    pub kind: Value,
    #[serde(default)]
    pub conflicts: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlavorDoc {
    pub id: String,
    pub price: Number,
    pub demand: BTreeMap<String, Number>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleDoc {
    topology: TopologyDoc,
    sfcs: Vec<SfcDoc>,
    flavors: Vec<FlavorDoc>,
}

/// Serialized form of a scenario, one string per document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioDocs {
    pub topology: String,
    pub sfcs: String,
    pub flavors: String,
}

fn parse_doc<T: DeserializeOwned>(doc: &'static str, text: &str) -> Result<T, ModelError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| ModelError::Schema {
        doc,
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

fn rational(n: &Number, path: impl Fn() -> String) -> Result<Rational, ModelError> {
    let value = parse_decimal(&n.to_string())
        .map_err(|e| ModelError::Invalid { path: path(), message: e.to_string() })?;
    if value < Rational::from_integer(0) {
        return Err(ModelError::Negative { path: path() });
    }
    Ok(value)
}

fn units(n: &Number, path: impl Fn() -> String) -> Result<u64, ModelError> {
    let value = rational(n, &path)?;
    if !value.is_integer() {
        return Err(ModelError::Invalid { path: path(), message: "expected whole units".into() });
    }
    Ok(value.to_integer() as u64)
}

fn level(n: &Number, path: impl Fn() -> String) -> Result<u32, ModelError> {
    let value = units(n, &path)?;
    u32::try_from(value)
        .map_err(|_| ModelError::Invalid { path: path(), message: "level out of range".into() })
}

fn kind_label(v: &Value, path: impl Fn() -> String) -> Result<String, ModelError> {
    match v {
        Value::String(s) if !s.is_empty() => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(ModelError::Invalid { path: path(), message: "type must be a label or a number".into() }),
    }
}

fn topology_from_doc(doc: TopologyDoc) -> Result<Topology, ModelError> {
    let mut clouds = Vec::with_capacity(doc.clouds.len());
    for (i, c) in doc.clouds.iter().enumerate() {
        let mut capacity = BTreeMap::new();
        for (k, v) in &c.capacity {
            capacity.insert(k.clone(), units(v, || format!("clouds[{i}].capacity.{k}"))?);
        }
        clouds.push(CloudNode { id: c.id.clone(), capacity });
    }
    let mut links = BTreeMap::new();
    for (i, l) in doc.links.iter().enumerate() {
        let props = LinkProps {
            delay_ms: rational(&l.delay_ms, || format!("links[{i}].delay_ms"))?,
            bandwidth_mbps: rational(&l.bandwidth_mbps, || format!("links[{i}].bandwidth_mbps"))?,
            security_level: level(&l.security_level, || format!("links[{i}].security_level"))?,
        };
        if links.insert(Topology::link_key(&l.a, &l.b), props).is_some() {
            return Err(ModelError::DuplicateId { what: "link", id: format!("{}-{}", l.a, l.b) });
        }
    }
    Ok(Topology {
        clouds,
        access_nodes: doc.access_nodes,
        iot_domains: doc.iot_domains,
        links,
        security_levels: doc.security_levels.unwrap_or(DEFAULT_SECURITY_LEVELS),
    })
}

fn sfcs_from_doc(docs: Vec<SfcDoc>) -> Result<Vec<SfcRequest>, ModelError> {
    docs.into_iter()
        .enumerate()
        .map(|(i, d)| {
            let vnfs = d
                .vnfs
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    Ok(VnfSpec {
                        id: v.id.clone(),
                        kind: kind_label(&v.kind, || format!("[{i}].vnfs[{j}].type"))?,
                        type_code: 0,
                        conflicts: v.conflicts.iter().cloned().collect(),
                    })
                })
                .collect::<Result<Vec<_>, ModelError>>()?;
            Ok(SfcRequest {
                id: d.id,
                vnfs,
                traffic_mbps: rational(&d.traffic_mbps, || format!("[{i}].traffic_mbps"))?,
                max_delay_ms: rational(&d.max_delay_ms, || format!("[{i}].max_delay_ms"))?,
                min_security: level(&d.min_security, || format!("[{i}].min_security"))?,
                users: d.users,
                iot_domains: d.iot_domains,
                bandwidth_mbps: match &d.bandwidth_mbps {
                    Some(n) => rational(n, || format!("[{i}].bandwidth_mbps"))?,
                    None => Rational::from_integer(0),
                },
            })
        })
        .collect()
}

fn flavors_from_doc(docs: Vec<FlavorDoc>) -> Result<FlavorCatalog, ModelError> {
    let flavors = docs
        .into_iter()
        .enumerate()
        .map(|(i, d)| {
            let mut demand = BTreeMap::new();
            for (k, v) in &d.demand {
                demand.insert(k.clone(), units(v, || format!("[{i}].demand.{k}"))?);
            }
            Ok(Flavor { id: d.id, demand, price: rational(&d.price, || format!("[{i}].price"))? })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    Ok(FlavorCatalog { flavors })
}

/// Parse and validate the three scenario documents.
pub fn load_scenario(topology: &str, sfcs: &str, flavors: &str) -> Result<Scenario, ModelError> {
    let topology = topology_from_doc(parse_doc("topology.json", topology)?)?;
    let sfcs = sfcs_from_doc(parse_doc("sfcs.json", sfcs)?)?;
    let flavors = flavors_from_doc(parse_doc("flavors.json", flavors)?)?;
    Scenario::new(topology, sfcs, flavors)
}

/// Parse a bundle `{topology, sfcs, flavors}` holding all three documents.
pub fn load_bundle(text: &str) -> Result<Scenario, ModelError> {
    let doc: BundleDoc = parse_doc("bundle", text)?;
    Scenario::new(
        topology_from_doc(doc.topology)?,
        sfcs_from_doc(doc.sfcs)?,
        flavors_from_doc(doc.flavors)?,
    )
}

fn num(value: &Rational) -> Number {
    match serde_decimal::to_json(value) {
        Value::Number(n) => n,
        // Inputs are decimal, so every stored value renders as a number.
        other => unreachable!("non-decimal value {other} in a scenario"),
    }
}

fn int(value: u64) -> Number {
    Number::from(value)
}

fn kind_value(kind: &str) -> Value {
    match kind.parse::<u64>() {
        Ok(n) if n.to_string() == kind => Value::Number(Number::from(n)),
        _ => Value::String(kind.to_string()),
    }
}

fn topology_to_doc(t: &Topology) -> TopologyDoc {
    TopologyDoc {
        clouds: t
            .clouds
            .iter()
            .map(|c| CloudDoc {
                id: c.id.clone(),
                capacity: c.capacity.iter().map(|(k, v)| (k.clone(), int(*v))).collect(),
            })
            .collect(),
        access_nodes: t.access_nodes.clone(),
        iot_domains: t.iot_domains.clone(),
        links: t
            .links
            .iter()
            .map(|((a, b), p)| LinkDoc {
                a: a.clone(),
                b: b.clone(),
                delay_ms: num(&p.delay_ms),
                bandwidth_mbps: num(&p.bandwidth_mbps),
                security_level: int(p.security_level as u64),
            })
            .collect(),
        security_levels: (t.security_levels != DEFAULT_SECURITY_LEVELS).then_some(t.security_levels),
    }
}

fn sfcs_to_doc(sfcs: &[SfcRequest]) -> Vec<SfcDoc> {
    sfcs.iter()
        .map(|s| SfcDoc {
            id: s.id.clone(),
            traffic_mbps: num(&s.traffic_mbps),
            max_delay_ms: num(&s.max_delay_ms),
            min_security: int(s.min_security as u64),
            users: s.users.clone(),
            iot_domains: s.iot_domains.clone(),
            bandwidth_mbps: (s.bandwidth_mbps != Rational::from_integer(0)).then(|| num(&s.bandwidth_mbps)),
            vnfs: s
                .vnfs
                .iter()
                .map(|v| VnfDoc {
                    id: v.id.clone(),
                    kind: kind_value(&v.kind),
                    conflicts: v.conflicts.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect(),
                })
                .collect(),
        })
        .collect()
}

fn flavors_to_doc(c: &FlavorCatalog) -> Vec<FlavorDoc> {
    c.flavors
        .iter()
        .map(|f| FlavorDoc {
            id: f.id.clone(),
            price: num(&f.price),
            demand: f.demand.iter().map(|(k, v)| (k.clone(), int(*v))).collect(),
        })
        .collect()
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

/// Canonical serialization: links sorted by endpoint pair, conflict sets sorted.
pub fn save_scenario(s: &Scenario) -> ScenarioDocs {
    ScenarioDocs {
        topology: pretty(&topology_to_doc(&s.topology)),
        sfcs: pretty(&sfcs_to_doc(&s.sfcs)),
        flavors: pretty(&flavors_to_doc(&s.flavors)),
    }
}

pub fn save_bundle(s: &Scenario) -> String {
    pretty(&BundleDoc {
        topology: topology_to_doc(&s.topology),
        sfcs: sfcs_to_doc(&s.sfcs),
        flavors: flavors_to_doc(&s.flavors),
    })
}
