use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::Scenario;
use crate::num::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VarId(pub usize);

/// Identity of a variable. Indices are positions: VNFs in global chain
/// order, candidate instances `0..|VNFs|`, clouds and flavors in input order,
/// types by dense code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarKey {
    /// VNF uses candidate instance.
    X { vnf: usize, vnfi: usize },
    /// Chain touches instance.
    B { sfc: usize, vnfi: usize },
    /// VNF is hosted on cloud.
    Yc { vnf: usize, cloud: usize },
    /// Instance has type.
    A { vnfi: usize, ty: u32 },
    /// Instance is deployed on cloud.
    U { vnfi: usize, cloud: usize },
    /// Instance uses flavor.
    Phi { vnfi: usize, flavor: usize },
    /// `X[vnf,vnfi] * U[vnfi,cloud]`.
    Yvuc { vnf: usize, vnfi: usize, cloud: usize },
    /// `U[vnfi,cloud] * Phi[vnfi,flavor]`.
    Cucf { vnfi: usize, cloud: usize, flavor: usize },
    /// `Yc[v1,c1] * Yc[v2,c2]` for a consecutive pair on distinct clouds.
    Ypair { v1: usize, c1: usize, v2: usize, c2: usize },
    /// Propagation delay between consecutive VNFs, milliseconds.
    Fhop { v1: usize, v2: usize },
    /// Free-form variable for hand-built models.
    Named(String),
}

impl fmt::Display for VarKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarKey::X { vnf, vnfi } => write!(f, "x_{vnf}_{vnfi}"),
            VarKey::B { sfc, vnfi } => write!(f, "b_{sfc}_{vnfi}"),
            VarKey::Yc { vnf, cloud } => write!(f, "yc_{vnf}_{cloud}"),
            VarKey::A { vnfi, ty } => write!(f, "a_{vnfi}_{ty}"),
            VarKey::U { vnfi, cloud } => write!(f, "u_{vnfi}_{cloud}"),
            VarKey::Phi { vnfi, flavor } => write!(f, "phi_{vnfi}_{flavor}"),
            VarKey::Yvuc { vnf, vnfi, cloud } => write!(f, "yvuc_{vnf}_{vnfi}_{cloud}"),
            VarKey::Cucf { vnfi, cloud, flavor } => write!(f, "cucf_{vnfi}_{cloud}_{flavor}"),
            VarKey::Ypair { v1, c1, v2, c2 } => write!(f, "ypair_{v1}_{c1}_{v2}_{c2}"),
            VarKey::Fhop { v1, v2 } => write!(f, "fhop_{v1}_{v2}"),
            VarKey::Named(name) => f.write_str(name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarKind {
    Binary,
    Continuous { lower: Rational },
}

/// Dense lookup tables for the placement variable families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub n_vnfs: usize,
    pub n_vnfis: usize,
    pub n_clouds: usize,
    pub n_flavors: usize,
    pub n_types: usize,
    /// Chain index of each VNF.
    pub vnf_sfc: Vec<usize>,
    /// Dense type code of each VNF.
    pub vnf_type: Vec<u32>,
    /// Conflicting VNF pairs `(a, b)` with `a < b`.
    pub conflicts: Vec<(usize, usize)>,
    /// Consecutive VNF pairs of every chain, chain by chain.
    pub pairs: Vec<(usize, usize)>,
    pub flavor_prices: Vec<Rational>,
    /// `flavor_demand[f][r]` over the catalog's resource kinds in order.
    pub flavor_demand: Vec<Vec<u64>>,
    /// `cloud_capacity[c][r]`, same resource order.
    pub cloud_capacity: Vec<Vec<u64>>,
    pub x: Vec<Vec<VarId>>,
    pub b: Vec<Vec<VarId>>,
    pub yc: Vec<Vec<VarId>>,
    /// `a[u][code - 1]`.
    pub a: Vec<Vec<VarId>>,
    pub u: Vec<Vec<VarId>>,
    pub phi: Vec<Vec<VarId>>,
    pub yvuc: Vec<Vec<Vec<VarId>>>,
    pub cucf: Vec<Vec<Vec<VarId>>>,
    /// `ypair[p][c1 * n_clouds + c2]`, `None` on the diagonal.
    pub ypair: Vec<Vec<Option<VarId>>>,
    pub fhop: Vec<VarId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "RegistryRepr", into = "RegistryRepr")]
pub struct VarRegistry {
    keys: Vec<VarKey>,
    kinds: Vec<VarKind>,
    index: HashMap<VarKey, VarId>,
    pub layout: Option<Layout>,
}

#[derive(Serialize, Deserialize)]
struct RegistryRepr {
    keys: Vec<VarKey>,
    kinds: Vec<VarKind>,
    layout: Option<Layout>,
}

impl From<RegistryRepr> for VarRegistry {
    fn from(r: RegistryRepr) -> Self {
        let index = r.keys.iter().enumerate().map(|(i, k)| (k.clone(), VarId(i))).collect();
        Self { keys: r.keys, kinds: r.kinds, index, layout: r.layout }
    }
}

impl From<VarRegistry> for RegistryRepr {
    fn from(r: VarRegistry) -> Self {
        Self { keys: r.keys, kinds: r.kinds, layout: r.layout }
    }
}

impl Default for VarRegistry {
    fn default() -> Self {
        Self::new()
    }
}

impl VarRegistry {
    pub fn new() -> Self {
        Self { keys: Vec::new(), kinds: Vec::new(), index: HashMap::new(), layout: None }
    }

    /// Register a variable. Panics if the key is already present.
    pub fn add(&mut self, key: VarKey, kind: VarKind) -> VarId {
        let id = VarId(self.keys.len());
        let previous = self.index.insert(key.clone(), id);
        assert!(previous.is_none(), "variable {key} registered twice");
        self.keys.push(key);
        self.kinds.push(kind);
        id
    }

    pub fn binary(&mut self, key: VarKey) -> VarId {
        self.add(key, VarKind::Binary)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn key(&self, id: VarId) -> &VarKey {
        &self.keys[id.0]
    }

    pub fn kind(&self, id: VarId) -> &VarKind {
        &self.kinds[id.0]
    }

    pub fn kinds(&self) -> &[VarKind] {
        &self.kinds
    }

    pub fn keys(&self) -> &[VarKey] {
        &self.keys
    }

    pub fn get(&self, key: &VarKey) -> Option<VarId> {
        self.index.get(key).copied()
    }

    pub fn name(&self, id: VarId) -> String {
        self.keys[id.0].to_string()
    }

    /// Register every placement variable. The candidate instance pool has one
    /// slot per VNF, the most instances any placement can need.
    pub fn for_scenario(scenario: &Scenario) -> Self {
        let mut reg = Self::new();
        let n = scenario.vnf_count();
        let n_clouds = scenario.topology.clouds.len();
        let n_flavors = scenario.flavors.flavors.len();
        let n_types = scenario.type_count as usize;
        let n_sfcs = scenario.sfcs.len();

        let ids: Vec<&str> = scenario.vnfs().map(|v| v.id.as_str()).collect();
        let pos = |id: &str| ids.iter().position(|x| *x == id).expect("validated id");
        let mut vnf_sfc = Vec::with_capacity(n);
        let mut pairs = Vec::new();
        let mut offset = 0;
        for (t, sfc) in scenario.sfcs.iter().enumerate() {
            vnf_sfc.extend(std::iter::repeat_n(t, sfc.vnfs.len()));
            for i in 1..sfc.vnfs.len() {
                pairs.push((offset + i - 1, offset + i));
            }
            offset += sfc.vnfs.len();
        }
        let vnf_type: Vec<u32> = scenario.vnfs().map(|v| v.type_code).collect();
        let mut conflicts = Vec::new();
        for (a, v) in scenario.vnfs().enumerate() {
            for c in &v.conflicts {
                let b = pos(c);
                if a < b {
                    conflicts.push((a, b));
                }
            }
        }
        conflicts.sort_unstable();

        let x = (0..n)
            .map(|v| (0..n).map(|u| reg.binary(VarKey::X { vnf: v, vnfi: u })).collect())
            .collect();
        let b = (0..n_sfcs)
            .map(|t| (0..n).map(|u| reg.binary(VarKey::B { sfc: t, vnfi: u })).collect())
            .collect();
        let yc = (0..n)
            .map(|v| (0..n_clouds).map(|c| reg.binary(VarKey::Yc { vnf: v, cloud: c })).collect())
            .collect();
        let a = (0..n)
            .map(|u| (1..=n_types as u32).map(|ty| reg.binary(VarKey::A { vnfi: u, ty })).collect())
            .collect();
        let u = (0..n)
            .map(|u| (0..n_clouds).map(|c| reg.binary(VarKey::U { vnfi: u, cloud: c })).collect())
            .collect();
        let phi = (0..n)
            .map(|u| (0..n_flavors).map(|f| reg.binary(VarKey::Phi { vnfi: u, flavor: f })).collect())
            .collect();
        let yvuc = (0..n)
            .map(|v| {
                (0..n)
                    .map(|u| {
                        (0..n_clouds)
                            .map(|c| reg.binary(VarKey::Yvuc { vnf: v, vnfi: u, cloud: c }))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let cucf = (0..n)
            .map(|u| {
                (0..n_clouds)
                    .map(|c| {
                        (0..n_flavors)
                            .map(|f| reg.binary(VarKey::Cucf { vnfi: u, cloud: c, flavor: f }))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let resources: Vec<String> = scenario.flavors.resource_kinds().into_iter().collect();
        let ypair = pairs
            .iter()
            .map(|&(v1, v2)| {
                let mut row = vec![None; n_clouds * n_clouds];
                for c1 in 0..n_clouds {
                    for c2 in 0..n_clouds {
                        if c1 != c2 {
                            row[c1 * n_clouds + c2] = Some(reg.binary(VarKey::Ypair { v1, c1, v2, c2 }));
                        }
                    }
                }
                row
            })
            .collect();
        let fhop = pairs
            .iter()
            .map(|&(v1, v2)| {
                reg.add(VarKey::Fhop { v1, v2 }, VarKind::Continuous { lower: Rational::from_integer(0) })
            })
            .collect();

        reg.layout = Some(Layout {
            n_vnfs: n,
            n_vnfis: n,
            n_clouds,
            n_flavors,
            n_types,
            vnf_sfc,
            vnf_type,
            conflicts,
            pairs,
            flavor_prices: scenario.flavors.flavors.iter().map(|f| f.price).collect(),
            flavor_demand: scenario
                .flavors
                .flavors
                .iter()
                .map(|f| resources.iter().map(|r| f.demand[r]).collect())
                .collect(),
            cloud_capacity: scenario
                .topology
                .clouds
                .iter()
                .map(|c| resources.iter().map(|r| c.capacity.get(r).copied().unwrap_or(0)).collect())
                .collect(),
            x,
            b,
            yc,
            a,
            u,
            phi,
            yvuc,
            cucf,
            ypair,
            fhop,
        });
        reg
    }
}
