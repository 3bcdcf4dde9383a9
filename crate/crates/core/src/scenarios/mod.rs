//! Random scenarios and parameter sweeps.
//!
//! Every entity (cloud, link, flavor, chain, endpoint link) draws from its
//! own random stream keyed by the seed and the entity's position. A scenario
//! with more clouds or more chains therefore extends a smaller one generated
//! from the same seed instead of reshuffling it.

pub mod stats;
mod sweep;

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{
    CloudNode, Flavor, FlavorCatalog, LinkProps, Scenario, SfcRequest, Topology, VnfSpec, DEFAULT_SECURITY_LEVELS,
};
use crate::num::Rational;

pub use sweep::{run_sweep, Axis, PointSummary, RunRecord, SeedPolicy, SweepConfig, SweepError, SweepResult};

pub const RESOURCES: [&str; 3] = ["cpu", "ram", "storage"];

/// Inclusive integer range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub min: u64,
    pub max: u64,
}

impl Span {
    pub const fn new(min: u64, max: u64) -> Self {
        Span { min, max }
    }

    fn draw(self, rng: &mut ChaCha8Rng) -> u64 {
        rng.random_range(self.min..=self.max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GenConfig {
    pub n_clouds: usize,
    pub n_sfcs: usize,
    pub chain_len: Span,
    pub n_types: u32,
    pub n_flavors: usize,
    pub security_levels: u32,
    pub conflict_prob: f64,
    pub seed: u64,
    pub n_access_nodes: usize,
    pub n_iot_domains: usize,
    /// Units per resource kind on each cloud.
    pub capacity: Span,
    /// Units per resource kind of each flavor.
    pub demand: Span,
    pub price: Span,
    pub link_delay_ms: Span,
    pub bandwidth_mbps: Span,
    pub traffic_mbps: Span,
    pub max_delay_ms: Span,
    pub min_security: Span,
}

/// Defaults were calibrated on seeds 0..100 at the tightest sweep point
/// (4 clouds, 4 chains): 93 of 100 instances are feasible. With the
/// capacity range at 2..=6 only 70 were, capacity being the usual culprit.
impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n_clouds: 4,
            n_sfcs: 4,
            chain_len: Span::new(2, 3),
            n_types: 3,
            n_flavors: 3,
            security_levels: DEFAULT_SECURITY_LEVELS,
            conflict_prob: 0.1,
            seed: 1,
            n_access_nodes: 2,
            n_iot_domains: 2,
            capacity: Span::new(3, 8),
            demand: Span::new(1, 3),
            price: Span::new(1, 10),
            link_delay_ms: Span::new(1, 20),
            bandwidth_mbps: Span::new(100, 1000),
            traffic_mbps: Span::new(1, 20),
            max_delay_ms: Span::new(10, 40),
            min_security: Span::new(1, 10),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid generator config: {0}")]
pub struct ConfigError(String);

impl GenConfig {
    pub fn check(&self) -> Result<(), ConfigError> {
        let spans = [
            ("chain_len", self.chain_len),
            ("capacity", self.capacity),
            ("demand", self.demand),
            ("price", self.price),
            ("link_delay_ms", self.link_delay_ms),
            ("bandwidth_mbps", self.bandwidth_mbps),
            ("traffic_mbps", self.traffic_mbps),
            ("max_delay_ms", self.max_delay_ms),
            ("min_security", self.min_security),
        ];
        for (name, s) in spans {
            if s.min > s.max {
                return Err(ConfigError(format!("{name}: empty range {}..={}", s.min, s.max)));
            }
        }
        let bad = |m: &str| Err(ConfigError(m.into()));
        if self.chain_len.min == 0 {
            return bad("chain_len must be at least 1");
        }
        if self.n_types == 0 || self.n_flavors == 0 || self.security_levels == 0 {
            return bad("n_types, n_flavors and security_levels must be positive");
        }
        if self.max_delay_ms.min == 0 {
            return bad("max_delay_ms must be positive");
        }
        if self.min_security.min == 0 || self.min_security.max > self.security_levels as u64 {
            return bad("min_security must lie within [1, security_levels]");
        }
        if !(0.0..=1.0).contains(&self.conflict_prob) {
            return bad("conflict_prob must lie in [0, 1]");
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum Entity {
    Cloud = 1,
    Link = 2,
    Flavor = 3,
    Sfc = 4,
    Endpoint = 5,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic 64-bit mix of a seed with a sequence of keys.
pub fn derive_seed(seed: u64, keys: &[u64]) -> u64 {
    keys.iter().fold(splitmix(seed), |acc, &k| splitmix(acc ^ splitmix(k)))
}

fn stream(seed: u64, entity: Entity, a: usize, b: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, &[entity as u64, a as u64, b as u64]))
}

fn rational(v: u64) -> Rational {
    Rational::from_integer(v as i64)
}

fn link(rng: &mut ChaCha8Rng, config: &GenConfig) -> LinkProps {
    LinkProps {
        delay_ms: rational(config.link_delay_ms.draw(rng)),
        bandwidth_mbps: rational(config.bandwidth_mbps.draw(rng)),
        security_level: rng.random_range(1..=config.security_levels),
    }
}

/// Generate a scenario. Same config, same scenario.
pub fn generate(config: &GenConfig) -> Result<Scenario, ConfigError> {
    config.check()?;
    let seed = config.seed;
    let clouds: Vec<CloudNode> = (0..config.n_clouds)
        .map(|i| {
            let mut rng = stream(seed, Entity::Cloud, i, 0);
            CloudNode {
                id: format!("c{i}"),
                capacity: RESOURCES.iter().map(|r| (r.to_string(), config.capacity.draw(&mut rng))).collect(),
            }
        })
        .collect();
    let access_nodes: Vec<String> = (0..config.n_access_nodes).map(|i| format!("ran{i}")).collect();
    let iot_domains: Vec<String> = (0..config.n_iot_domains).map(|i| format!("iot{i}")).collect();

    let mut links = BTreeMap::new();
    for j in 0..clouds.len() {
        for i in 0..j {
            let props = link(&mut stream(seed, Entity::Link, i, j), config);
            links.insert(Topology::link_key(&clouds[i].id, &clouds[j].id), props);
        }
    }
    for (k, endpoint) in access_nodes.iter().chain(&iot_domains).enumerate() {
        for (i, cloud) in clouds.iter().enumerate() {
            let props = link(&mut stream(seed, Entity::Endpoint, k, i), config);
            links.insert(Topology::link_key(endpoint, &cloud.id), props);
        }
    }
    let topology = Topology { clouds, access_nodes, iot_domains, links, security_levels: config.security_levels };

    let flavors = (0..config.n_flavors)
        .map(|f| {
            let mut rng = stream(seed, Entity::Flavor, f, 0);
            Flavor {
                id: format!("f{f}"),
                demand: RESOURCES.iter().map(|r| (r.to_string(), config.demand.draw(&mut rng))).collect(),
                price: rational(config.price.draw(&mut rng)),
            }
        })
        .collect();

    let mut sfcs: Vec<SfcRequest> = Vec::with_capacity(config.n_sfcs);
    for t in 0..config.n_sfcs {
        let mut rng = stream(seed, Entity::Sfc, t, 0);
        let len = config.chain_len.draw(&mut rng) as usize;
        let mut vnfs: Vec<VnfSpec> = Vec::with_capacity(len);
        for j in 0..len {
            let kind = format!("t{}", rng.random_range(1..=config.n_types));
            // Conflicts only point backwards, so earlier chains never change.
            let mut conflicts = BTreeSet::new();
            for other in sfcs.iter().flat_map(|s| &s.vnfs).chain(&vnfs) {
                if rng.random_bool(config.conflict_prob) {
                    conflicts.insert(other.id.clone());
                }
            }
            vnfs.push(VnfSpec { id: format!("s{t}v{j}"), kind, type_code: 0, conflicts });
        }
        let users = if topology.access_nodes.is_empty() {
            Vec::new()
        } else {
            vec![topology.access_nodes[rng.random_range(0..topology.access_nodes.len())].clone()]
        };
        let iot = if topology.iot_domains.is_empty() {
            Vec::new()
        } else {
            vec![topology.iot_domains[rng.random_range(0..topology.iot_domains.len())].clone()]
        };
        let traffic = rational(config.traffic_mbps.draw(&mut rng));
        sfcs.push(SfcRequest {
            id: format!("sfc{t}"),
            vnfs,
            traffic_mbps: traffic,
            max_delay_ms: rational(config.max_delay_ms.draw(&mut rng)),
            min_security: config.min_security.draw(&mut rng) as u32,
            users,
            iot_domains: iot,
            bandwidth_mbps: traffic,
        });
    }

    let scenario = Scenario::new(topology, sfcs, FlavorCatalog { flavors })
        .map_err(|e| ConfigError(format!("generated an invalid scenario: {e}")))?;
    Ok(scenario.normalize_types())
}
