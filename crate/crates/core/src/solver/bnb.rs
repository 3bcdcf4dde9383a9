//! Depth-first branch and bound over the boolean variables.

use std::time::Instant;

use super::bound;
use super::presolve::Compiled;
use super::propagate::{Engine, FREE};
use super::{Budget, SolveError, SolveResult, SolveStats, SolveStatus};
use crate::ilp::{IlpModel, Layout};
use crate::num::Rational;

/// Extra controls for [`solve_with`].
#[derive(Debug, Clone, Default)]
pub struct BnbOptions {
    /// A known feasible assignment used as the starting incumbent.
    pub initial: Option<Vec<Rational>>,
}

/// Static branching order. With a placement layout, all instance choices
/// come first, VNF by VNF, with candidates from the highest index down so
/// the 0-branch reaches the lowest instance first. Then each instance's
/// clouds (same direction) and flavors follow. Remaining booleans come last,
/// by index.
fn static_order(model: &IlpModel, c: &Compiled, flavors: &[usize]) -> Vec<usize> {
    let mut order = Vec::with_capacity(c.n);
    let mut seen = vec![false; c.n];
    let mut take = |v: usize, order: &mut Vec<usize>| {
        if c.binary[v] && !seen[v] {
            seen[v] = true;
            order.push(v);
        }
    };
    if let Some(l) = model.layout() {
        for row in &l.x {
            for x in row.iter().rev() {
                take(x.0, &mut order);
            }
        }
        for u in 0..l.n_vnfis {
            for x in l.u[u].iter().rev() {
                take(x.0, &mut order);
            }
            for &f in flavors {
                take(l.phi[u][f].0, &mut order);
            }
        }
    }
    for v in 0..c.n {
        take(v, &mut order);
    }
    order
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Order {
    /// The static order: the whole sharing structure first.
    Static,
    /// One VNF at a time: instance, cloud, flavor.
    VnfMajor,
}

enum Outcome {
    Complete,
    Restart,
    OutOfBudget,
}

/// Flavors from the most to the least expensive, so the 0-branch reaches the
/// cheapest one first.
fn flavor_order(l: &Layout) -> Vec<usize> {
    let mut flavors: Vec<usize> = (0..l.n_flavors).collect();
    flavors.sort_by(|&a, &b| l.flavor_prices[b].cmp(&l.flavor_prices[a]).then(a.cmp(&b)));
    flavors
}

struct Frame {
    var: usize,
    mark: usize,
    cursor: usize,
    tried_one: bool,
}

struct Search<'c, 'm> {
    engine: Engine<'c>,
    order: Vec<usize>,
    /// Layout for VNF-major branching, if the model has one.
    place: Option<&'m Layout>,
    mode: Order,
    flavors: Vec<usize>,
    layout: Option<&'m Layout>,
    cost: Vec<i64>,
    packing: bound::Packing,
    incumbent: Option<(i64, Vec<i8>)>,
    nodes: u64,
    start: Instant,
    budget: Budget,
}

impl Search<'_, '_> {
    /// `None` when no completion of the current node can be feasible.
    fn bound(&self) -> Option<i64> {
        let g = bound::generic(self.engine.c, &self.engine.val);
        match self.layout {
            Some(l) => Some(g.max(bound::deployment(self.engine.c, l, &self.cost, &self.packing, &self.engine.val)?)),
            None => Some(g),
        }
    }

    /// Next variable to branch on at or after `from`, with the cursor to
    /// resume from below it.
    ///
    /// With a placement layout, cursors `0..n_vnfs` name VNFs: each VNF gets
    /// its instance, then that instance's cloud, then its flavor, before the
    /// next VNF. Instance and cloud candidates are scanned from the highest
    /// index down so the 0-branch reaches the lowest one first. Cursors past
    /// the VNFs index the fallback order.
    fn next_free(&self, from: usize) -> Option<(usize, usize)> {
        let val = &self.engine.val;
        let free = |v: crate::ilp::VarId| val[v.0] == FREE;
        let skip = match self.place.filter(|_| self.mode == Order::VnfMajor) {
            Some(l) => {
                for v in from.min(l.n_vnfs)..l.n_vnfs {
                    if let Some(x) = l.x[v].iter().rev().find(|&&x| free(x)) {
                        return Some((x.0, v));
                    }
                    let Some(u) = l.x[v].iter().position(|x| val[x.0] == 1) else { continue };
                    if let Some(x) = l.u[u].iter().rev().find(|&&x| free(x)) {
                        return Some((x.0, v));
                    }
                    if let Some(&f) = self.flavors.iter().find(|&&f| free(l.phi[u][f])) {
                        return Some((l.phi[u][f].0, v));
                    }
                }
                l.n_vnfs
            }
            None => 0,
        };
        let start = from.max(skip) - skip;
        (start..self.order.len()).find(|&i| val[self.order[i]] == FREE).map(|i| (self.order[i], i + skip))
    }

    fn out_of_budget(&self) -> bool {
        if self.budget.max_nodes.is_some_and(|m| self.nodes >= m) {
            return true;
        }
        match self.budget.max_wall_ms {
            Some(ms) if self.nodes.is_multiple_of(64) => self.start.elapsed().as_millis() as u64 >= ms,
            _ => false,
        }
    }

    fn offer(&mut self) {
        let value = bound::generic(self.engine.c, &self.engine.val);
        if self.incumbent.as_ref().is_none_or(|(best, _)| value < *best) {
            self.incumbent = Some((value, self.engine.val.clone()));
        }
    }

    /// Greedy descent without backtracking. `own_instance` prefers putting
    /// every VNF on its own instance; otherwise the search order's 0-first
    /// preference applies, which packs VNFs first-fit.
    fn dive(&mut self, own_instance: bool) {
        let mark = self.engine.mark();
        let own: Vec<bool> = {
            let mut own = vec![false; self.engine.c.n];
            if let Some(l) = self.layout {
                for (v, row) in l.x.iter().enumerate() {
                    if v < row.len() {
                        own[row[v].0] = true;
                    }
                }
            }
            own
        };
        let mut cursor = 0;
        let ok = loop {
            let Some((var, next)) = self.next_free(cursor) else { break true };
            cursor = next;
            let first = own_instance && own[var];
            let m = self.engine.mark();
            self.engine.assign(var, first);
            if self.engine.propagate() {
                continue;
            }
            self.engine.undo_to(m);
            self.engine.assign(var, !first);
            if !self.engine.propagate() {
                break false;
            }
        };
        if ok && self.engine.is_complete() {
            self.offer();
        }
        self.engine.undo_to(mark);
    }

    /// Alternate the two branching orders with doubling node limits, keeping
    /// the incumbent across restarts. The schedule does not depend on the
    /// budget, so a larger budget replays a smaller one's search first.
    /// Returns true when some run explored its whole tree.
    fn run(&mut self) -> bool {
        if self.place.is_none() {
            return matches!(self.run_tree(u64::MAX), Outcome::Complete);
        }
        let mut limit = 2_000u64;
        loop {
            for mode in [Order::Static, Order::VnfMajor] {
                self.mode = mode;
                match self.run_tree(limit) {
                    Outcome::Complete => return true,
                    Outcome::OutOfBudget => return false,
                    Outcome::Restart => {}
                }
            }
            limit = limit.saturating_mul(2);
        }
    }

    fn run_tree(&mut self, limit: u64) -> Outcome {
        let root = self.engine.mark();
        let outcome = self.search(limit);
        self.engine.undo_to(root);
        outcome
    }

    fn search(&mut self, limit: u64) -> Outcome {
        let mut frames: Vec<Frame> = Vec::new();
        let mut cursor = 0;
        let mut local = 0u64;
        'node: loop {
            // Evaluate the current node.
            self.nodes += 1;
            local += 1;
            let mut descend = None;
            let pruned = match self.bound() {
                None => true,
                Some(b) => self.incumbent.as_ref().is_some_and(|(best, _)| b >= *best),
            };
            if !pruned {
                match self.next_free(cursor) {
                    Some(pick) => descend = Some(pick),
                    None => self.offer(),
                }
            }
            if self.out_of_budget() {
                return Outcome::OutOfBudget;
            }
            if local >= limit {
                return Outcome::Restart;
            }
            if let Some((var, next)) = descend {
                frames.push(Frame { var, mark: self.engine.mark(), cursor: next, tried_one: false });
                self.engine.assign(var, false);
                if self.engine.propagate() {
                    cursor = next;
                    continue 'node;
                }
            }
            // Backtrack to the next open 1-branch.
            loop {
                let Some(frame) = frames.last_mut() else { return Outcome::Complete };
                self.engine.undo_to(frame.mark);
                if frame.tried_one {
                    frames.pop();
                    continue;
                }
                frame.tried_one = true;
                let (var, next) = (frame.var, frame.cursor);
                self.engine.assign(var, true);
                if self.engine.propagate() {
                    cursor = next;
                    continue 'node;
                }
            }
        }
    }
}

fn bits_of(c: &Compiled, values: &[Rational]) -> Option<Vec<i8>> {
    if values.len() != c.n {
        return None;
    }
    let one = Rational::from_integer(1);
    let bits: Vec<i8> = values
        .iter()
        .zip(&c.binary)
        .map(|(v, &b)| if !b { FREE } else if *v == one { 1 } else { 0 })
        .collect();
    let feasible = c.rows.iter().all(|r| {
        r.terms.iter().map(|&(a, v)| a * bits[v].max(0) as i64).sum::<i64>() <= r.rhs
    });
    feasible.then_some(bits)
}

/// Solve `model` to optimality within `budget`.
pub fn solve_with(model: &IlpModel, budget: &Budget, options: &BnbOptions) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    let compiled = Compiled::new(model)?;
    let c = &compiled;
    let mut engine = Engine::new(c);
    let stats = |nodes, propagations| SolveStats {
        nodes_explored: nodes,
        propagations,
        wall_ms: start.elapsed().as_millis() as u64,
    };
    if c.trivially_infeasible || !engine.propagate_all() {
        let propagations = engine.propagations;
        return Ok(SolveResult::infeasible(stats(1, propagations)));
    }

    let layout = if model.cost_objective { model.layout() } else { None };
    let flavors = model.layout().map(flavor_order).unwrap_or_default();
    let cost = bound::coefficient_table(c);
    let mut search = Search {
        order: static_order(model, c, &flavors),
        place: model.layout(),
        mode: Order::Static,
        flavors,
        layout,
        packing: match layout {
            Some(l) => bound::Packing::new(l, &cost),
            None => bound::Packing::Unknown,
        },
        cost,
        engine,
        incumbent: None,
        nodes: 0,
        start,
        budget: *budget,
    };
    let Some(root_bound) = search.bound() else {
        return Ok(SolveResult::infeasible(stats(1, search.engine.propagations)));
    };

    if let Some(bits) = options.initial.as_deref().and_then(|v| bits_of(c, v)) {
        let value = bound::generic(c, &bits);
        search.incumbent = Some((value, bits));
    }
    if model.layout().is_some() {
        search.mode = Order::VnfMajor;
        search.dive(true);
        search.dive(false);
    }
    let complete = search.run();

    let stats = stats(search.nodes, search.engine.propagations);
    let result = match (complete, search.incumbent) {
        (true, None) => SolveResult::infeasible(stats),
        (true, Some((value, bits))) => {
            let values = c.expand(&bits);
            let objective = c.objective_of(value);
            if !model.violated_rows(&values).is_empty() || model.objective_value(&values) != objective {
                return Err(SolveError::Internal("optimal assignment fails an emitted row".into()));
            }
            SolveResult {
                status: SolveStatus::Optimal,
                objective: Some(objective),
                assignment: Some(values),
                incumbent_objective: Some(objective),
                bound: Some(objective),
                stats,
            }
        }
        (false, incumbent) => {
            let (assignment, incumbent_objective) = match incumbent {
                Some((value, bits)) => (Some(c.expand(&bits)), Some(c.objective_of(value))),
                None => (None, None),
            };
            SolveResult {
                status: SolveStatus::TimedOut,
                objective: None,
                assignment,
                incumbent_objective,
                bound: Some(c.objective_of(root_bound)),
                stats,
            }
        }
    };
    Ok(result)
}
