//! Activity-based bound propagation over `sum(a * x) <= b` rows.
//!
//! Each row tracks its minimum activity: the sum of fixed contributions plus
//! every negative coefficient of an unfixed variable. A row whose minimum
//! activity exceeds `b` is a conflict. An unfixed variable whose coefficient
//! magnitude exceeds the slack `b - minact` is forced to the value that keeps
//! its contribution at the minimum.

use super::presolve::Compiled;

pub(crate) const FREE: i8 = -1;

pub(crate) struct Engine<'c> {
    pub c: &'c Compiled,
    /// Row terms sorted by decreasing magnitude, so a scan can stop at the
    /// first coefficient the slack absorbs.
    rows: Vec<Vec<(i64, u32)>>,
    var_rows: Vec<Vec<(u32, i64)>>,
    pub val: Vec<i8>,
    minact: Vec<i64>,
    maxabs: Vec<i64>,
    trail: Vec<u32>,
    queue: Vec<u32>,
    queued: Vec<bool>,
    pub propagations: u64,
}

impl<'c> Engine<'c> {
    pub fn new(c: &'c Compiled) -> Self {
        let mut var_rows = vec![Vec::new(); c.n];
        let mut minact = Vec::with_capacity(c.rows.len());
        let mut maxabs = Vec::with_capacity(c.rows.len());
        let mut rows = Vec::with_capacity(c.rows.len());
        for (r, row) in c.rows.iter().enumerate() {
            let mut m = 0i64;
            for &(a, v) in &row.terms {
                var_rows[v].push((r as u32, a));
                m += a.min(0);
            }
            let mut terms: Vec<(i64, u32)> = row.terms.iter().map(|&(a, v)| (a, v as u32)).collect();
            terms.sort_by_key(|&(a, v)| (std::cmp::Reverse(a.abs()), v));
            minact.push(m);
            maxabs.push(terms.first().map_or(0, |t| t.0.abs()));
            rows.push(terms);
        }
        Engine {
            c,
            rows,
            var_rows,
            val: vec![FREE; c.n],
            minact,
            maxabs,
            trail: Vec::new(),
            queue: Vec::new(),
            queued: vec![false; c.rows.len()],
            propagations: 0,
        }
    }

    fn enqueue(&mut self, r: u32) {
        if !self.queued[r as usize] {
            self.queued[r as usize] = true;
            self.queue.push(r);
        }
    }

    /// Fix an unfixed variable. Propagation is deferred to [`Self::propagate`].
    pub fn assign(&mut self, v: usize, value: bool) {
        debug_assert_eq!(self.val[v], FREE);
        self.val[v] = value as i8;
        self.trail.push(v as u32);
        for i in 0..self.var_rows[v].len() {
            let (r, a) = self.var_rows[v][i];
            // Contribution moves from min(a, 0) to a * value.
            let delta = if value { a - a.min(0) } else { -a.min(0) };
            if delta != 0 {
                self.minact[r as usize] += delta;
                self.enqueue(r);
            }
        }
    }

    /// Run to fixpoint. Returns false on conflict.
    pub fn propagate(&mut self) -> bool {
        while let Some(r) = self.queue.pop() {
            let r = r as usize;
            self.queued[r] = false;
            let slack = self.c.rows[r].rhs - self.minact[r];
            if slack < 0 {
                self.clear_queue();
                return false;
            }
            if slack >= self.maxabs[r] {
                continue;
            }
            for i in 0..self.rows[r].len() {
                let (a, v) = self.rows[r][i];
                if a.abs() <= slack {
                    break;
                }
                if self.val[v as usize] == FREE {
                    self.propagations += 1;
                    self.assign(v as usize, a < 0);
                }
            }
        }
        true
    }

    pub fn propagate_all(&mut self) -> bool {
        for r in 0..self.c.rows.len() {
            self.enqueue(r as u32);
        }
        self.propagate()
    }

    fn clear_queue(&mut self) {
        for r in self.queue.drain(..) {
            self.queued[r as usize] = false;
        }
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn undo_to(&mut self, mark: usize) {
        self.clear_queue();
        while self.trail.len() > mark {
            let v = self.trail.pop().expect("trail") as usize;
            let value = self.val[v] == 1;
            for &(r, a) in &self.var_rows[v] {
                let delta = if value { a - a.min(0) } else { -a.min(0) };
                self.minact[r as usize] -= delta;
            }
            self.val[v] = FREE;
        }
    }

    pub fn is_complete(&self) -> bool {
        self.val.iter().zip(&self.c.binary).all(|(&x, &b)| !b || x != FREE)
    }
}
