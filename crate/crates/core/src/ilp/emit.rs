//! Constraint families. Each `emit_*` appends its rows to the model; row
//! order is fixed so that serialized models are reproducible.

use super::{BuildOptions, IlpModel, Layout, LinearConstraint, Sense, Tag, VarId};
use crate::model::{Hop, Scenario};
use crate::num::Rational;

fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

fn one() -> Rational {
    int(1)
}

fn sum(vars: impl IntoIterator<Item = VarId>, coeff: Rational) -> Vec<(Rational, VarId)> {
    vars.into_iter().map(|v| (coeff, v)).collect()
}

fn parts(model: &mut IlpModel) -> (&Layout, &mut Vec<LinearConstraint>) {
    let layout = model.vars.layout.as_ref().expect("placement model carries a layout");
    (layout, &mut model.constraints)
}

fn push(rows: &mut Vec<LinearConstraint>, terms: Vec<(Rational, VarId)>, sense: Sense, rhs: Rational, tag: Tag) {
    rows.push(LinearConstraint::new(terms, sense, rhs, tag));
}

/// VNF-to-instance assignment, type agreement, and conflict exclusion.
pub fn emit_vnf_vnfi_constraints(model: &mut IlpModel, _scenario: &Scenario) {
    let (l, rows) = parts(model);
    let n = l.n_vnfs;

    for v in 0..n {
        push(rows, sum(l.x[v].iter().copied(), one()), Sense::Eq, one(), Tag::Eq1);
    }
    for (t, b_row) in l.b.iter().enumerate() {
        for (u, &b) in b_row.iter().enumerate() {
            let mut terms: Vec<_> = (0..n).filter(|&v| l.vnf_sfc[v] == t).map(|v| (one(), l.x[v][u])).collect();
            terms.push((-one(), b));
            push(rows, terms, Sense::Eq, int(0), Tag::Eq2);
        }
    }

    // Big-M over dense type codes: |code difference| < |types| + 1.
    let big_m = int(l.n_types as i64 + 1);
    for tag in [Tag::Eq5, Tag::Eq6] {
        for v in 0..n {
            let pv = int(l.vnf_type[v] as i64);
            for u in 0..l.n_vnfis {
                for ty in 1..=l.n_types {
                    let p = int(ty as i64);
                    let diff = if tag == Tag::Eq5 { p - pv } else { pv - p };
                    let terms = vec![(big_m, l.x[v][u]), (big_m, l.a[u][ty - 1])];
                    push(rows, terms, Sense::Le, diff + big_m * int(2), tag);
                }
            }
        }
    }

    for u in 0..l.n_vnfis {
        let mut terms = sum(l.a[u].iter().copied(), one());
        terms.extend(sum(l.u[u].iter().copied(), -one()));
        push(rows, terms, Sense::Eq, int(0), Tag::Eq7);
    }

    for &(a, b) in &l.conflicts {
        for u in 0..l.n_vnfis {
            push(rows, vec![(one(), l.x[a][u]), (one(), l.x[b][u])], Sense::Le, one(), Tag::Conflict);
        }
    }
}

/// Instance deployment and the linearized VNF-on-cloud indicator.
pub fn emit_vnfi_cloud_constraints(model: &mut IlpModel, _scenario: &Scenario) {
    let (l, rows) = parts(model);
    let n = l.n_vnfs;
    let clouds = l.n_clouds;

    for u in 0..l.n_vnfis {
        for v in 0..n {
            let mut terms = sum(l.u[u].iter().copied(), one());
            terms.push((-one(), l.x[v][u]));
            push(rows, terms, Sense::Ge, int(0), Tag::Eq8);
        }
    }
    for u in 0..l.n_vnfis {
        let mut terms = sum(l.u[u].iter().copied(), one());
        terms.extend((0..n).map(|v| (-one(), l.x[v][u])));
        push(rows, terms, Sense::Le, int(0), Tag::Eq9);
    }
    for u in 0..l.n_vnfis {
        push(rows, sum(l.u[u].iter().copied(), one()), Sense::Le, one(), Tag::Eq10);
    }

    let each = |f: &mut dyn FnMut(usize, usize, usize)| {
        for c in 0..clouds {
            for u in 0..l.n_vnfis {
                for v in 0..n {
                    f(c, u, v);
                }
            }
        }
    };
    each(&mut |c, u, v| push(rows, vec![(one(), l.yvuc[v][u][c]), (-one(), l.u[u][c])], Sense::Le, int(0), Tag::Eq13));
    each(&mut |c, u, v| push(rows, vec![(one(), l.yvuc[v][u][c]), (-one(), l.x[v][u])], Sense::Le, int(0), Tag::Eq14));
    each(&mut |c, u, v| {
        let terms = vec![(one(), l.yvuc[v][u][c]), (-one(), l.x[v][u]), (-one(), l.u[u][c])];
        push(rows, terms, Sense::Ge, -one(), Tag::Eq15)
    });
    each(&mut |c, u, v| push(rows, vec![(one(), l.yc[v][c]), (-one(), l.yvuc[v][u][c])], Sense::Ge, int(0), Tag::Eq16));

    for c in 0..clouds {
        for v in 0..n {
            let mut terms = vec![(one(), l.yc[v][c])];
            terms.extend((0..l.n_vnfis).map(|u| (-one(), l.yvuc[v][u][c])));
            push(rows, terms, Sense::Le, int(0), Tag::Eq17);
        }
    }
    for tag in [Tag::Eq18, Tag::Eq3] {
        for v in 0..n {
            push(rows, sum(l.yc[v].iter().copied(), one()), Sense::Eq, one(), tag);
        }
    }
}

/// One flavor per deployed instance and per-cloud capacity.
pub fn emit_resource_constraints(model: &mut IlpModel, scenario: &Scenario) {
    let (l, rows) = parts(model);
    for u in 0..l.n_vnfis {
        let mut terms = sum(l.phi[u].iter().copied(), one());
        terms.extend(sum(l.u[u].iter().copied(), -one()));
        push(rows, terms, Sense::Eq, int(0), Tag::Eq19);
    }
    let each = |f: &mut dyn FnMut(usize, usize, usize)| {
        for c in 0..l.n_clouds {
            for fl in 0..l.n_flavors {
                for u in 0..l.n_vnfis {
                    f(c, fl, u);
                }
            }
        }
    };
    each(&mut |c, f, u| push(rows, vec![(one(), l.cucf[u][c][f]), (-one(), l.u[u][c])], Sense::Le, int(0), Tag::Eq21));
    each(&mut |c, f, u| push(rows, vec![(one(), l.cucf[u][c][f]), (-one(), l.phi[u][f])], Sense::Le, int(0), Tag::Eq22));
    each(&mut |c, f, u| {
        let terms = vec![(one(), l.cucf[u][c][f]), (-one(), l.u[u][c]), (-one(), l.phi[u][f])];
        push(rows, terms, Sense::Ge, -one(), Tag::Eq23)
    });

    for r in scenario.flavors.resource_kinds() {
        for (c, cloud) in scenario.topology.clouds.iter().enumerate() {
            let mut terms = Vec::new();
            for (f, flavor) in scenario.flavors.flavors.iter().enumerate() {
                let demand = flavor.demand[&r];
                if demand == 0 {
                    continue;
                }
                terms.extend((0..l.n_vnfis).map(|u| (int(demand as i64), l.cucf[u][c][f])));
            }
            push(rows, terms, Sense::Le, int(cloud.capacity[&r] as i64), Tag::Eq24);
        }
    }
}

fn pair_cells(l: &Layout) -> impl Iterator<Item = (usize, usize, usize, VarId)> + '_ {
    l.ypair.iter().enumerate().flat_map(move |(p, row)| {
        row.iter().enumerate().filter_map(move |(cell, var)| {
            var.map(|id| (p, cell / l.n_clouds, cell % l.n_clouds, id))
        })
    })
}

/// Linearized cloud-pair indicator, hop delays, and the per-chain delay budget.
pub fn emit_delay_constraints(model: &mut IlpModel, scenario: &Scenario) {
    let (l, rows) = parts(model);
    let clouds = &scenario.topology.clouds;
    for (p, c1, _, y) in pair_cells(l) {
        push(rows, vec![(one(), y), (-one(), l.yc[l.pairs[p].0][c1])], Sense::Le, int(0), Tag::Eq26);
    }
    for (p, _, c2, y) in pair_cells(l) {
        push(rows, vec![(one(), y), (-one(), l.yc[l.pairs[p].1][c2])], Sense::Le, int(0), Tag::Eq27);
    }
    for (p, c1, c2, y) in pair_cells(l) {
        let (v1, v2) = l.pairs[p];
        let terms = vec![(one(), y), (-one(), l.yc[v1][c1]), (-one(), l.yc[v2][c2])];
        push(rows, terms, Sense::Ge, -one(), Tag::Eq28);
    }

    // Hop delay is the delay of the link the pair straddles; same-cloud pairs add nothing.
    for (p, row) in l.ypair.iter().enumerate() {
        let mut terms = vec![(one(), l.fhop[p])];
        for (cell, var) in row.iter().enumerate() {
            let Some(y) = var else { continue };
            let (c1, c2) = (cell / l.n_clouds, cell % l.n_clouds);
            if let Hop::Link(link) = scenario.topology.hop(&clouds[c1].id, &clouds[c2].id) {
                if link.delay_ms != int(0) {
                    terms.push((-link.delay_ms, *y));
                }
            }
        }
        push(rows, terms, Sense::Eq, int(0), Tag::Hopdef);
    }

    for (t, sfc) in scenario.sfcs.iter().enumerate() {
        let terms: Vec<_> =
            (0..l.pairs.len()).filter(|&p| l.vnf_sfc[l.pairs[p].0] == t).map(|p| (one(), l.fhop[p])).collect();
        if !terms.is_empty() {
            push(rows, terms, Sense::Le, sfc.max_delay_ms, Tag::Eq32);
        }
    }
}

/// Every inter-cloud hop of a chain must meet the chain's minimum security level.
pub fn emit_security_constraints(model: &mut IlpModel, scenario: &Scenario) {
    let (l, rows) = parts(model);
    let clouds = &scenario.topology.clouds;
    for (p, c1, c2, y) in pair_cells(l) {
        let sfc = &scenario.sfcs[l.vnf_sfc[l.pairs[p].0]];
        let level = match scenario.topology.hop(&clouds[c1].id, &clouds[c2].id) {
            Hop::Link(link) => link.security_level,
            Hop::Local => scenario.topology.security_levels,
            Hop::Unreachable => 0,
        };
        push(rows, vec![(int(sfc.min_security as i64), y)], Sense::Le, int(level as i64), Tag::Eq33);
    }
}

/// Optional families: symmetry breaking, link bandwidth, endpoint delays.
pub fn emit_extensions(model: &mut IlpModel, scenario: &Scenario, options: &BuildOptions) {
    let (l, rows) = parts(model);
    if options.symmetry_breaking {
        // Canonical relabeling: instances open in index order and a VNF only
        // uses an instance whose index does not exceed its own.
        for v in 0..l.n_vnfs {
            for u in (v + 1)..l.n_vnfis {
                push(rows, vec![(one(), l.x[v][u])], Sense::Le, int(0), Tag::ExtSymbreak);
            }
        }
        for u in 1..l.n_vnfis {
            let mut terms = sum(l.u[u].iter().copied(), one());
            terms.extend(sum(l.u[u - 1].iter().copied(), -one()));
            push(rows, terms, Sense::Le, int(0), Tag::ExtSymbreak);
        }
    }

    let clouds = &scenario.topology.clouds;
    if options.bandwidth && !l.pairs.is_empty() {
        for c1 in 0..l.n_clouds {
            for c2 in (c1 + 1)..l.n_clouds {
                let Some(link) = scenario.topology.link(&clouds[c1].id, &clouds[c2].id) else { continue };
                let mut terms = Vec::new();
                for (p, row) in l.ypair.iter().enumerate() {
                    let traffic = scenario.sfcs[l.vnf_sfc[l.pairs[p].0]].traffic_mbps;
                    if traffic == int(0) {
                        continue;
                    }
                    for cell in [c1 * l.n_clouds + c2, c2 * l.n_clouds + c1] {
                        terms.push((traffic, row[cell].expect("off-diagonal cell")));
                    }
                }
                if !terms.is_empty() {
                    push(rows, terms, Sense::Le, link.bandwidth_mbps, Tag::ExtBandwidth);
                }
            }
        }
    }

    if options.endpoints {
        let mut first = 0;
        for (t, sfc) in scenario.sfcs.iter().enumerate() {
            let last = first + sfc.vnfs.len() - 1;
            let users: Vec<Option<&String>> =
                if sfc.users.is_empty() { vec![None] } else { sfc.users.iter().map(Some).collect() };
            let sinks: Vec<Option<&String>> =
                if sfc.iot_domains.is_empty() { vec![None] } else { sfc.iot_domains.iter().map(Some).collect() };
            let hops: Vec<_> =
                (0..l.pairs.len()).filter(|&p| l.vnf_sfc[l.pairs[p].0] == t).map(|p| (one(), l.fhop[p])).collect();

            let mut unreachable = Vec::new();
            for user in users.iter().flatten() {
                for (c, cloud) in clouds.iter().enumerate() {
                    if scenario.topology.link(user, &cloud.id).is_none() {
                        unreachable.push(l.yc[first][c]);
                    }
                }
            }
            for sink in sinks.iter().flatten() {
                for (c, cloud) in clouds.iter().enumerate() {
                    if scenario.topology.link(&cloud.id, sink).is_none() {
                        unreachable.push(l.yc[last][c]);
                    }
                }
            }
            unreachable.sort_unstable();
            unreachable.dedup();
            for y in unreachable {
                push(rows, vec![(one(), y)], Sense::Le, int(0), Tag::ExtEndpoints);
            }

            for user in &users {
                for sink in &sinks {
                    if user.is_none() && sink.is_none() {
                        continue;
                    }
                    let mut terms = hops.clone();
                    for (c, cloud) in clouds.iter().enumerate() {
                        if let Some(link) = user.and_then(|u| scenario.topology.link(u, &cloud.id)) {
                            if link.delay_ms != int(0) {
                                terms.push((link.delay_ms, l.yc[first][c]));
                            }
                        }
                        if let Some(link) = sink.and_then(|s| scenario.topology.link(&cloud.id, s)) {
                            if link.delay_ms != int(0) {
                                terms.push((link.delay_ms, l.yc[last][c]));
                            }
                        }
                    }
                    push(rows, terms, Sense::Le, sfc.max_delay_ms, Tag::ExtEndpoints);
                }
            }
            first = last + 1;
        }
    }
}

/// Minimize the summed price of the flavors of deployed instances.
pub fn emit_objective(model: &mut IlpModel, scenario: &Scenario) {
    let l = model.vars.layout.as_ref().expect("placement model carries a layout");
    let mut objective = Vec::with_capacity(l.n_vnfis * l.n_flavors);
    for u in 0..l.n_vnfis {
        for (f, flavor) in scenario.flavors.flavors.iter().enumerate() {
            objective.push((flavor.price, l.phi[u][f]));
        }
    }
    model.objective = objective;
    model.cost_objective = true;
}
