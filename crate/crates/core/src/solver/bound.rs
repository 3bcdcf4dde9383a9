//! Lower bounds on the objective of any completion of a partial assignment.

use super::presolve::Compiled;
use super::propagate::FREE;
use crate::ilp::Layout;

/// Sum of fixed objective terms plus every negative coefficient of a free
/// variable. Valid for any objective.
pub(crate) fn generic(c: &Compiled, val: &[i8]) -> i64 {
    let mut total = c.obj_const;
    for &(a, v) in &c.obj {
        total += match val[v] {
            FREE => a.min(0),
            x => a * x as i64,
        };
    }
    total
}

/// Per-variable objective coefficients, indexed by variable.
pub(crate) fn coefficient_table(c: &Compiled) -> Vec<i64> {
    let mut out = vec![0; c.n];
    for &(a, v) in &c.obj {
        out[v] += a;
    }
    out
}

/// Bound for the deployment-cost objective.
///
/// Instances already in use pay at least their cheapest still-possible
/// flavor. VNFs that cannot join any instance in use need fresh instances:
/// one chain never shares an instance, so per type at least the largest
/// per-chain count of such VNFs must be opened, each at the cheapest price.
///
/// All instances in use, old and fresh, must also fit on the clouds at the
/// same time, which `packing` prices. `None` means no completion exists.
pub(crate) fn deployment(c: &Compiled, l: &Layout, cost: &[i64], packing: &Packing, val: &[i8]) -> Option<i64> {
    let n = l.n_vnfs;
    let fixed_one = |v: crate::ilp::VarId| val[v.0] == 1;
    let possible = |v: crate::ilp::VarId| val[v.0] != 0;

    let mut total = c.obj_const;
    let mut open = vec![false; l.n_vnfis];
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); l.n_vnfis];
    for v in 0..n {
        for (u, group) in members.iter_mut().enumerate() {
            if fixed_one(l.x[v][u]) {
                group.push(v);
            }
        }
    }
    let mut fresh_price = i64::MAX;
    for u in 0..l.n_vnfis {
        open[u] = !members[u].is_empty()
            || l.u[u].iter().any(|&x| fixed_one(x))
            || l.phi[u].iter().any(|&x| fixed_one(x));
        let paid: i64 = l.phi[u].iter().filter(|&&x| fixed_one(x)).map(|x| cost[x.0]).sum();
        if l.phi[u].iter().any(|&x| fixed_one(x)) {
            total += paid;
        } else if open[u] {
            total += l.phi[u].iter().filter(|&&x| possible(x)).map(|x| cost[x.0]).min().unwrap_or(0);
        } else if let Some(m) = l.phi[u].iter().filter(|&&x| possible(x)).map(|x| cost[x.0]).min() {
            fresh_price = fresh_price.min(m);
        }
    }
    // An open instance takes at most one VNF of each chain, so per (type,
    // chain) the open instances that could still accept such a VNF absorb at
    // most that many; the rest need fresh instances of that type.
    let n_sfcs = l.vnf_sfc.iter().max().map_or(0, |m| m + 1);
    let width = n_sfcs.max(1);
    let mut waiting = vec![0i64; (l.n_types + 1) * width];
    let mut absorb = vec![0i64; (l.n_types + 1) * width];
    let mut seen = vec![false; (l.n_types + 1) * width * l.n_vnfis];
    for v in 0..n {
        if l.x[v].iter().any(|&x| fixed_one(x)) {
            continue;
        }
        let key = l.vnf_type[v] as usize * width + l.vnf_sfc[v];
        waiting[key] += 1;
        for u in 0..l.n_vnfis {
            if !seen[key * l.n_vnfis + u]
                && open[u]
                && possible(l.x[v][u])
                && members[u].iter().all(|&m| l.vnf_type[m] == l.vnf_type[v] && l.vnf_sfc[m] != l.vnf_sfc[v])
            {
                absorb[key] += 1;
                seen[key * l.n_vnfis + u] = true;
            }
        }
    }
    let mut fresh = 0;
    for ty in 0..=l.n_types {
        fresh += (0..width).map(|t| (waiting[ty * width + t] - absorb[ty * width + t]).max(0)).max().unwrap_or(0);
    }
    if fresh > 0 && fresh_price == i64::MAX {
        return None;
    }
    let in_use = open.iter().filter(|&&o| o).count() + fresh as usize;
    let packed = match packing {
        Packing::Table(g) => c.obj_const + (*g.get(in_use)?)?,
        Packing::Unknown => i64::MIN,
    };
    Some((total + fresh * fresh_price.max(0)).max(packed))
}

/// Least total price of `k` instances that fit on the clouds together.
pub(crate) enum Packing {
    /// `g[k]`, `None` where `k` instances cannot fit.
    Table(Vec<Option<i64>>),
    /// The enumeration was too large to tabulate.
    Unknown,
}

const PACKING_WORK: usize = 200_000;

impl Packing {
    pub fn new(l: &Layout, cost: &[i64]) -> Packing {
        let kmax = l.n_vnfis;
        if kmax == 0 {
            return Packing::Unknown;
        }
        let price: Vec<i64> = l.phi[0].iter().map(|v| cost[v.0]).collect();
        let mut work = PACKING_WORK;
        let mut g: Vec<Option<i64>> = vec![None; kmax + 1];
        g[0] = Some(0);
        for cap in &l.cloud_capacity {
            let Some(h) = cloud_table(&l.flavor_demand, cap, &price, kmax, &mut work) else {
                return Packing::Unknown;
            };
            let mut next = vec![None; kmax + 1];
            for (a, ga) in g.iter().enumerate() {
                let Some(ga) = ga else { continue };
                for (b, hb) in h.iter().enumerate().take(kmax + 1 - a) {
                    if let Some(hb) = hb {
                        let t = ga + hb;
                        next[a + b] = Some(next[a + b].map_or(t, |x: i64| x.min(t)));
                    }
                }
            }
            g = next;
        }
        Packing::Table(g)
    }
}

/// `h[k]`: cheapest multiset of `k` flavors fitting within `cap`.
fn cloud_table(demand: &[Vec<u64>], cap: &[u64], price: &[i64], kmax: usize, work: &mut usize) -> Option<Vec<Option<i64>>> {
    #[allow(clippy::too_many_arguments)]
    fn walk(
        demand: &[Vec<u64>],
        price: &[i64],
        from: usize,
        left: &mut Vec<u64>,
        k: usize,
        cost: i64,
        h: &mut Vec<Option<i64>>,
        work: &mut usize,
    ) -> bool {
        if *work == 0 {
            return false;
        }
        *work -= 1;
        h[k] = Some(h[k].map_or(cost, |x| x.min(cost)));
        if k + 1 >= h.len() {
            return true;
        }
        for f in from..demand.len() {
            if demand[f].iter().zip(left.iter()).all(|(d, l)| d <= l) {
                for (l, d) in left.iter_mut().zip(&demand[f]) {
                    *l -= d;
                }
                let ok = walk(demand, price, f, left, k + 1, cost + price[f], h, work);
                for (l, d) in left.iter_mut().zip(&demand[f]) {
                    *l += d;
                }
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    let mut h = vec![None; kmax + 1];
    let mut left = cap.to_vec();
    walk(demand, price, 0, &mut left, 0, 0, &mut h, work).then_some(h)
}
