//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use sfc_placer::ilp::{Sense, VarKind};
use sfc_placer::num::Rational;
use sfc_placer::scenarios::{generate, GenConfig, Span};
use sfc_placer::{IlpModel, Scenario};

/// Tiny instance shapes: up to 3 clouds, 2 chains of up to 3 VNFs, 2 flavors
/// and 2 types, cycling through every combination as the seed grows. The
/// capacity range leaves about half of the instances feasible.
pub fn tiny_config(seed: u64) -> GenConfig {
    GenConfig {
        seed,
        n_clouds: 1 + (seed % 3) as usize,
        n_sfcs: 1 + ((seed / 3) % 2) as usize,
        chain_len: Span::new(1, 3),
        n_flavors: 1 + ((seed / 6) % 2) as usize,
        n_types: 1 + ((seed / 12) % 2) as u32,
        conflict_prob: 0.3,
        capacity: Span::new(2, 6),
        ..GenConfig::default()
    }
}

pub fn tiny(seed: u64) -> Scenario {
    generate(&tiny_config(seed)).expect("tiny config is valid")
}

/// Path of the compiled command-line binary.
pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_sfc-placer")
}

// Exhaustive enumeration of 0/1 feasible points by depth-first search with
// its own row check, independent of the solver. Continuous hop delays are
// read off their defining rows once all booleans are fixed.

/// Could the row still hold once the free booleans are set? Rows touching a
/// continuous variable are deferred to the leaves.
fn may_hold(model: &IlpModel, row: usize, vals: &[Option<bool>]) -> bool {
    let c = &model.constraints[row];
    let (mut lo, mut hi) = (Rational::from_integer(0), Rational::from_integer(0));
    for (a, v) in &c.terms {
        if !matches!(model.vars.kind(*v), VarKind::Binary) {
            return true;
        }
        match vals[v.0] {
            Some(true) => {
                lo += a;
                hi += a;
            }
            Some(false) => {}
            None if *a > Rational::from_integer(0) => hi += a,
            None => lo += a,
        }
    }
    match c.sense {
        Sense::Le => lo <= c.rhs,
        Sense::Ge => hi >= c.rhs,
        Sense::Eq => lo <= c.rhs && hi >= c.rhs,
    }
}

/// Complete a 0/1 point with the continuous values implied by their
/// single-continuous-variable equality rows.
fn complete(model: &IlpModel, bits: &[bool]) -> Vec<Rational> {
    let mut values: Vec<Rational> = bits.iter().map(|&b| Rational::from_integer(b as i64)).collect();
    for c in model.constraints.iter().filter(|c| c.sense == Sense::Eq) {
        let cont: Vec<_> = c.terms.iter().filter(|(_, v)| !matches!(model.vars.kind(*v), VarKind::Binary)).collect();
        if let [(a, v)] = cont[..] {
            let rest: Rational = c.terms.iter().filter(|(_, w)| w != v).map(|(b, w)| b * values[w.0]).sum();
            values[v.0] = (c.rhs - rest) / a;
        }
    }
    values
}

pub fn feasible_points(model: &IlpModel) -> Vec<Vec<Rational>> {
    let binaries: Vec<usize> =
        (0..model.vars.len()).filter(|&i| matches!(model.vars.kinds()[i], VarKind::Binary)).collect();
    let mut rows_of = vec![Vec::new(); model.vars.len()];
    for (r, c) in model.constraints.iter().enumerate() {
        for (_, v) in &c.terms {
            rows_of[v.0].push(r);
        }
    }
    let mut vals: Vec<Option<bool>> = vec![None; model.vars.len()];
    let mut out = Vec::new();
    fn go(
        model: &IlpModel,
        binaries: &[usize],
        rows_of: &[Vec<usize>],
        depth: usize,
        vals: &mut Vec<Option<bool>>,
        out: &mut Vec<Vec<Rational>>,
    ) {
        if depth == binaries.len() {
            let bits: Vec<bool> = vals.iter().map(|v| v.unwrap_or(false)).collect();
            let point = complete(model, &bits);
            if model.violated_rows(&point).is_empty() {
                out.push(point);
            }
            return;
        }
        let var = binaries[depth];
        for value in [false, true] {
            vals[var] = Some(value);
            if rows_of[var].iter().all(|&r| may_hold(model, r, vals)) {
                go(model, binaries, rows_of, depth + 1, vals, out);
            }
        }
        vals[var] = None;
    }
    go(model, &binaries, &rows_of, 0, &mut vals, &mut out);
    out
}

pub fn check_products(model: &IlpModel, point: &[Rational]) {
    let l = model.layout().unwrap();
    let b = |v: sfc_placer::ilp::VarId| point[v.0] == Rational::from_integer(1);
    for v in 0..l.n_vnfs {
        for u in 0..l.n_vnfis {
            for c in 0..l.n_clouds {
                assert_eq!(b(l.yvuc[v][u][c]), b(l.x[v][u]) && b(l.u[u][c]), "Yvuc[{v},{u},{c}]");
            }
        }
        for c in 0..l.n_clouds {
            let hosted = (0..l.n_vnfis).any(|u| b(l.x[v][u]) && b(l.u[u][c]));
            assert_eq!(b(l.yc[v][c]), hosted, "Yc[{v},{c}]");
        }
    }
    for u in 0..l.n_vnfis {
        for c in 0..l.n_clouds {
            for f in 0..l.n_flavors {
                assert_eq!(b(l.cucf[u][c][f]), b(l.u[u][c]) && b(l.phi[u][f]), "Cucf[{u},{c},{f}]");
            }
        }
    }
    for (p, &(v1, v2)) in l.pairs.iter().enumerate() {
        for c1 in 0..l.n_clouds {
            for c2 in (0..l.n_clouds).filter(|&c2| c2 != c1) {
                let y = l.ypair[p][c1 * l.n_clouds + c2].unwrap();
                assert_eq!(b(y), b(l.yc[v1][c1]) && b(l.yc[v2][c2]), "Ypair[{v1},{c1},{v2},{c2}]");
            }
        }
    }
}
