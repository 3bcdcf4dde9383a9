use std::collections::BTreeMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::Violation;
use crate::model::Scenario;
use crate::num::{Dec, Rational};

/// Rules beyond the default set, matching the optional program extensions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub bandwidth: bool,
    pub endpoints: bool,
}

/// Placement in index space: per VNF (global order) the instance id, cloud
/// index and flavor index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedPlacement {
    pub vnfs: Vec<(usize, usize, usize)>,
}

#[derive(Debug, Clone)]
enum Issue {
    SfcReuse { sfc: usize, vnfi: usize },
    Mixed { vnfi: usize },
    Conflict { vnfi: usize, a: usize, b: usize },
    Split { vnfi: usize },
    Capacity { cloud: usize, resource: usize, load: u64 },
    Delay { sfc: usize, delay: Rational },
    Security { sfc: usize, a: usize, b: usize, level: u32 },
    Unreachable { sfc: usize, from: String, to: String },
    Bandwidth { c1: usize, c2: usize, load: Rational },
    EndpointDelay { sfc: usize, delay: Rational },
}

/// Scenario compiled into dense tables for repeated checks.
pub struct Checker<'a> {
    scenario: &'a Scenario,
    checks: Checks,
    vnf_ids: Vec<&'a str>,
    vnf_sfc: Vec<usize>,
    vnf_type: Vec<u32>,
    conflict: Vec<bool>,
    sfc_ranges: Vec<Range<usize>>,
    n_clouds: usize,
    /// `None` when two distinct clouds have no link.
    delay: Vec<Option<Rational>>,
    security: Vec<u32>,
    bandwidth: Vec<Option<Rational>>,
    resources: Vec<String>,
    demand: Vec<Vec<u64>>,
    capacity: Vec<Vec<u64>>,
    price: Vec<Rational>,
}

impl<'a> Checker<'a> {
    pub fn new(scenario: &'a Scenario, checks: Checks) -> Self {
        let topo = &scenario.topology;
        let vnf_ids: Vec<&str> = scenario.vnfs().map(|v| v.id.as_str()).collect();
        let n = vnf_ids.len();
        let mut conflict = vec![false; n * n];
        for (i, v) in scenario.vnfs().enumerate() {
            for c in &v.conflicts {
                if let Some(j) = vnf_ids.iter().position(|x| x == c) {
                    conflict[i * n + j] = true;
                    conflict[j * n + i] = true;
                }
            }
        }
        let mut vnf_sfc = Vec::with_capacity(n);
        let mut sfc_ranges = Vec::new();
        for (t, s) in scenario.sfcs.iter().enumerate() {
            let start = vnf_sfc.len();
            vnf_sfc.extend(std::iter::repeat_n(t, s.vnfs.len()));
            sfc_ranges.push(start..vnf_sfc.len());
        }
        let nc = topo.clouds.len();
        let mut delay = vec![None; nc * nc];
        let mut security = vec![0; nc * nc];
        let mut bandwidth = vec![None; nc * nc];
        for i in 0..nc {
            for j in 0..nc {
                if i == j {
                    delay[i * nc + j] = Some(Rational::from_integer(0));
                    security[i * nc + j] = topo.security_levels;
                } else if let Some(l) = topo.link(&topo.clouds[i].id, &topo.clouds[j].id) {
                    delay[i * nc + j] = Some(l.delay_ms);
                    security[i * nc + j] = l.security_level;
                    bandwidth[i * nc + j] = Some(l.bandwidth_mbps);
                }
            }
        }
        let resources: Vec<String> = scenario.flavors.resource_kinds().into_iter().collect();
        Checker {
            scenario,
            checks,
            vnf_ids,
            vnf_sfc,
            vnf_type: scenario.vnfs().map(|v| v.type_code).collect(),
            conflict,
            sfc_ranges,
            n_clouds: nc,
            delay,
            security,
            bandwidth,
            demand: scenario
                .flavors
                .flavors
                .iter()
                .map(|f| resources.iter().map(|r| f.demand[r]).collect())
                .collect(),
            capacity: topo.clouds.iter().map(|c| resources.iter().map(|r| c.capacity[r]).collect()).collect(),
            price: scenario.flavors.flavors.iter().map(|f| f.price).collect(),
            resources,
        }
    }

    /// Members of each instance, instances in ascending id order.
    fn groups(p: &IndexedPlacement) -> Vec<(usize, Vec<usize>)> {
        let mut order: Vec<usize> = (0..p.vnfs.len()).collect();
        order.sort_by_key(|&i| (p.vnfs[i].0, i));
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for i in order {
            let u = p.vnfs[i].0;
            match groups.last_mut() {
                Some((id, members)) if *id == u => members.push(i),
                _ => groups.push((u, vec![i])),
            }
        }
        groups
    }

    pub fn cost(&self, p: &IndexedPlacement) -> Rational {
        Self::groups(p).iter().map(|(_, m)| self.price[p.vnfs[m[0]].2]).sum()
    }

    fn scan(&self, p: &IndexedPlacement, stop_first: bool, out: &mut Vec<Issue>) {
        macro_rules! report {
            ($issue:expr) => {{
                out.push($issue);
                if stop_first {
                    return;
                }
            }};
        }
        let n = self.vnf_ids.len();
        let groups = Self::groups(p);
        let mut load = vec![vec![0u64; self.resources.len()]; self.n_clouds];
        for (u, members) in &groups {
            let (_, cloud, flavor) = p.vnfs[members[0]];
            if members.iter().any(|&m| p.vnfs[m].1 != cloud || p.vnfs[m].2 != flavor) {
                report!(Issue::Split { vnfi: *u });
            }
            if members.iter().any(|&m| self.vnf_type[m] != self.vnf_type[members[0]]) {
                report!(Issue::Mixed { vnfi: *u });
            }
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    if self.vnf_sfc[a] == self.vnf_sfc[b] {
                        report!(Issue::SfcReuse { sfc: self.vnf_sfc[a], vnfi: *u });
                    }
                    if self.conflict[a * n + b] {
                        report!(Issue::Conflict { vnfi: *u, a, b });
                    }
                }
            }
            for (r, d) in self.demand[flavor].iter().enumerate() {
                load[cloud][r] += d;
            }
        }
        for (c, per_resource) in load.iter().enumerate() {
            for (r, &l) in per_resource.iter().enumerate() {
                if l > self.capacity[c][r] {
                    report!(Issue::Capacity { cloud: c, resource: r, load: l });
                }
            }
        }

        let nc = self.n_clouds;
        let mut link_load: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (t, range) in self.sfc_ranges.iter().enumerate() {
            let sfc = &self.scenario.sfcs[t];
            let mut total = Rational::from_integer(0);
            for v in range.start..range.end.saturating_sub(1) {
                let (c1, c2) = (p.vnfs[v].1, p.vnfs[v + 1].1);
                if c1 == c2 {
                    continue;
                }
                match self.delay[c1 * nc + c2] {
                    None => {
                        let clouds = &self.scenario.topology.clouds;
                        report!(Issue::Unreachable { sfc: t, from: clouds[c1].id.clone(), to: clouds[c2].id.clone() });
                    }
                    Some(d) => {
                        total += d;
                        let level = self.security[c1 * nc + c2];
                        if level < sfc.min_security {
                            report!(Issue::Security { sfc: t, a: v, b: v + 1, level });
                        }
                        *link_load.entry((c1.min(c2), c1.max(c2))).or_insert_with(|| Rational::from_integer(0)) +=
                            sfc.traffic_mbps;
                    }
                }
            }
            if total > sfc.max_delay_ms {
                report!(Issue::Delay { sfc: t, delay: total });
            }
            if self.checks.endpoints && !range.is_empty() {
                let topo = &self.scenario.topology;
                let first = &topo.clouds[p.vnfs[range.start].1].id;
                let last = &topo.clouds[p.vnfs[range.end - 1].1].id;
                let mut worst = total;
                let mut ingress = vec![Rational::from_integer(0)];
                let mut egress = vec![Rational::from_integer(0)];
                if !sfc.users.is_empty() {
                    ingress.clear();
                    for u in &sfc.users {
                        match topo.link(u, first) {
                            Some(l) => ingress.push(l.delay_ms),
                            None => report!(Issue::Unreachable { sfc: t, from: u.clone(), to: first.clone() }),
                        }
                    }
                }
                if !sfc.iot_domains.is_empty() {
                    egress.clear();
                    for d in &sfc.iot_domains {
                        match topo.link(last, d) {
                            Some(l) => egress.push(l.delay_ms),
                            None => report!(Issue::Unreachable { sfc: t, from: last.clone(), to: d.clone() }),
                        }
                    }
                }
                for i in &ingress {
                    for e in &egress {
                        worst = worst.max(total + i + e);
                    }
                }
                if worst > sfc.max_delay_ms {
                    report!(Issue::EndpointDelay { sfc: t, delay: worst });
                }
            }
        }
        if self.checks.bandwidth {
            for ((c1, c2), l) in link_load {
                let cap = self.bandwidth[c1 * nc + c2].expect("loaded links exist");
                if l > cap {
                    report!(Issue::Bandwidth { c1, c2, load: l });
                }
            }
        }
    }

    pub fn is_feasible(&self, p: &IndexedPlacement) -> bool {
        let mut out = Vec::new();
        self.scan(p, true, &mut out);
        out.is_empty()
    }

    pub fn violations(&self, p: &IndexedPlacement) -> Vec<Violation> {
        let mut issues = Vec::new();
        self.scan(p, false, &mut issues);
        let sfcs = &self.scenario.sfcs;
        let clouds = &self.scenario.topology.clouds;
        issues
            .into_iter()
            .map(|issue| match issue {
                Issue::SfcReuse { sfc, vnfi } => Violation::SfcReusesVnfi { sfc: sfcs[sfc].id.clone(), vnfi },
                Issue::Mixed { vnfi } => Violation::MixedTypes { vnfi },
                Issue::Conflict { vnfi, a, b } => Violation::Conflict {
                    vnfi,
                    a: self.vnf_ids[a].to_string(),
                    b: self.vnf_ids[b].to_string(),
                },
                Issue::Split { vnfi } => Violation::SplitVnfi { vnfi },
                Issue::Capacity { cloud, resource, load } => Violation::Capacity {
                    cloud: clouds[cloud].id.clone(),
                    resource: self.resources[resource].clone(),
                    load,
                    capacity: self.capacity[cloud][resource],
                },
                Issue::Delay { sfc, delay } => Violation::Delay {
                    sfc: sfcs[sfc].id.clone(),
                    delay_ms: Dec(&delay).to_string(),
                    max_ms: Dec(&sfcs[sfc].max_delay_ms).to_string(),
                },
                Issue::Security { sfc, a, b, level } => Violation::Security {
                    sfc: sfcs[sfc].id.clone(),
                    from: self.vnf_ids[a].to_string(),
                    to: self.vnf_ids[b].to_string(),
                    level,
                    required: sfcs[sfc].min_security,
                },
                Issue::Unreachable { sfc, from, to } => Violation::Unreachable { sfc: sfcs[sfc].id.clone(), from, to },
                Issue::Bandwidth { c1, c2, load } => Violation::Bandwidth {
                    a: clouds[c1].id.clone(),
                    b: clouds[c2].id.clone(),
                    load_mbps: Dec(&load).to_string(),
                    capacity_mbps: Dec(&self.bandwidth[c1 * self.n_clouds + c2].expect("link")).to_string(),
                },
                Issue::EndpointDelay { sfc, delay } => Violation::EndpointDelay {
                    sfc: sfcs[sfc].id.clone(),
                    delay_ms: Dec(&delay).to_string(),
                    max_ms: Dec(&sfcs[sfc].max_delay_ms).to_string(),
                },
            })
            .collect()
    }
}
