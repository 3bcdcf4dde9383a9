//! Exhaustive search over placements of tiny scenarios.
//!
//! VNFs are grouped into instances with restricted growth strings, only
//! admitting groups that are type-homogeneous, conflict-free and hold at most
//! one VNF per chain. Every group then takes every (cloud, flavor) pair.

use rayon::prelude::*;

use super::{Checker, Checks, IndexedPlacement, Placement};
use crate::model::Scenario;
use crate::num::Rational;
use crate::solver::SolveStatus;

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    /// Upper bound on enumerated (partition, clouds, flavors) points.
    pub max_points: u64,
    pub checks: Checks,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_points: 10_000_000, checks: Checks::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BruteForceError {
    #[error("search space exceeds {limit} points")]
    SpaceTooLarge { limit: u64 },
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    /// `Optimal` or `Infeasible`; enumeration always completes.
    pub status: SolveStatus,
    pub objective: Option<Rational>,
    pub placement: Option<Placement>,
    /// Size of the enumerated space.
    pub points: u64,
    pub partitions: usize,
}

fn enumerate_partitions(
    scenario: &Scenario,
    per_group: u64,
    limit: u64,
) -> Result<(Vec<Vec<usize>>, u64), BruteForceError> {
    let vnfs: Vec<_> = scenario.vnfs().collect();
    let sfc_of: Vec<usize> =
        scenario.sfcs.iter().enumerate().flat_map(|(t, s)| std::iter::repeat_n(t, s.vnfs.len())).collect();
    let n = vnfs.len();

    struct State<'s> {
        vnfs: &'s [&'s crate::model::VnfSpec],
        sfc_of: &'s [usize],
        labels: Vec<usize>,
        groups: Vec<Vec<usize>>,
        out: Vec<Vec<usize>>,
        points: u64,
        per_group: u64,
        limit: u64,
    }

    fn fits(s: &State<'_>, v: usize, g: usize) -> bool {
        s.groups[g].iter().all(|&m| {
            s.vnfs[m].type_code == s.vnfs[v].type_code
                && s.sfc_of[m] != s.sfc_of[v]
                && !s.vnfs[v].conflicts.contains(&s.vnfs[m].id)
        })
    }

    fn recurse(s: &mut State<'_>, v: usize) -> Result<(), BruteForceError> {
        if v == s.vnfs.len() {
            let pts = s.per_group.checked_pow(s.groups.len() as u32).unwrap_or(u64::MAX);
            s.points = s.points.saturating_add(pts);
            if s.points > s.limit {
                return Err(BruteForceError::SpaceTooLarge { limit: s.limit });
            }
            s.out.push(s.labels.clone());
            return Ok(());
        }
        for g in 0..s.groups.len() {
            if fits(s, v, g) {
                s.labels.push(g);
                s.groups[g].push(v);
                recurse(s, v + 1)?;
                s.groups[g].pop();
                s.labels.pop();
            }
        }
        s.labels.push(s.groups.len());
        s.groups.push(vec![v]);
        recurse(s, v + 1)?;
        s.groups.pop();
        s.labels.pop();
        Ok(())
    }

    let mut state = State {
        vnfs: &vnfs,
        sfc_of: &sfc_of,
        labels: Vec::with_capacity(n),
        groups: Vec::new(),
        out: Vec::new(),
        points: 0,
        per_group,
        limit,
    };
    recurse(&mut state, 0)?;
    Ok((state.out, state.points))
}

/// Advance a mixed-radix counter; false once it wraps.
fn next_tuple(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Cheapest valid placement of one partition, if any.
fn best_for_partition(
    checker: &Checker<'_>,
    prices: &[Rational],
    labels: &[usize],
    n_clouds: usize,
) -> Option<(Rational, IndexedPlacement)> {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut best: Option<(Rational, IndexedPlacement)> = None;
    let mut flavors = vec![0usize; k];
    loop {
        let cost: Rational = flavors.iter().map(|&f| prices[f]).sum();
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            let mut clouds = vec![0usize; k];
            loop {
                let p = IndexedPlacement {
                    vnfs: labels.iter().map(|&g| (g, clouds[g], flavors[g])).collect(),
                };
                if checker.is_feasible(&p) {
                    best = Some((cost, p));
                    break;
                }
                if !next_tuple(&mut clouds, n_clouds) {
                    break;
                }
            }
        }
        if !next_tuple(&mut flavors, prices.len()) {
            break;
        }
    }
    best
}

/// Exact minimum-cost placement by enumeration.
pub fn brute_force(scenario: &Scenario, limits: &Limits) -> Result<OracleResult, BruteForceError> {
    let normalized;
    let scenario = if scenario.is_normalized() {
        scenario
    } else {
        normalized = scenario.clone().normalize_types();
        &normalized
    };
    let n_clouds = scenario.topology.clouds.len();
    let prices: Vec<Rational> = scenario.flavors.flavors.iter().map(|f| f.price).collect();
    let per_group = (n_clouds * prices.len()) as u64;
    let (partitions, points) = enumerate_partitions(scenario, per_group, limits.max_points)?;

    if n_clouds == 0 && scenario.vnf_count() > 0 {
        return Ok(OracleResult { status: SolveStatus::Infeasible, objective: None, placement: None, points, partitions: partitions.len() });
    }
    let checker = Checker::new(scenario, limits.checks);
    let best = partitions
        .par_iter()
        .enumerate()
        .filter_map(|(i, labels)| best_for_partition(&checker, &prices, labels, n_clouds).map(|b| (b, i)))
        .min_by(|((a, _), i), ((b, _), j)| a.cmp(b).then(i.cmp(j)));

    Ok(match best {
        Some(((cost, p), _)) => OracleResult {
            status: SolveStatus::Optimal,
            objective: Some(cost),
            placement: Some(Placement::assemble(scenario, &p.vnfs)),
            points,
            partitions: partitions.len(),
        },
        None => OracleResult { status: SolveStatus::Infeasible, objective: None, placement: None, points, partitions: partitions.len() },
    })
}
