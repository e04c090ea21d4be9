//! Exact joint order histograms by pruned search over jet prefixes.
//!
//! Every jet of `A^n` at level `N` over `F_q` is assigned the tuple of its
//! orders along a list of ideals. Rather than visiting all `q^(n(N+1))` jets,
//! the search branches on the coefficients `gamma_0, ..., gamma_h` with
//! `h = floor(N/2)`:
//!
//! * for `k >= 1` the `t^k` coefficient of `g(gamma)` is affine in `gamma_k`,
//!   with linear part the Jacobian at `gamma_0`, so the children that settle
//!   an order at `k` are counted in bulk and only the affine solution sets
//!   are visited;
//! * once `gamma_0..gamma_h` are fixed, the coefficients of degrees
//!   `h+1..N` are jointly affine in the remaining unknowns, since a product of
//!   two of them has degree above `N`. Cumulative counts are then powers of
//!   `q` read off from ranks, and exact cells follow by inclusion-exclusion.

use alloc::vec;
use alloc::vec::Vec;

use super::compiled::{max_exponents, CompiledIdeal, Powers};
use super::ideal::IdealGens;
use super::jet::DEFAULT_BUDGET;
use super::modq::{self, Echelon};
use crate::algebra::{Field, SeriesOrder};
use crate::error::{Error, Result};

/// Fixed shard count; results do not depend on how shards are scheduled.
pub const SHARDS: usize = 64;

/// Partial histogram produced by one shard.
#[derive(Clone, Debug, Default)]
pub struct ShardTally {
    cells: Vec<u128>,
    nodes: u64,
    aborted: bool,
}

/// Executes independent shard jobs. Implementations may run them in
/// parallel but must return results indexed by shard.
pub trait ShardRunner: Sync {
    fn run(&self, shards: usize, job: &(dyn Fn(usize) -> ShardTally + Sync)) -> Vec<ShardTally>;
}

/// Runs shards one after another on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl ShardRunner for Sequential {
    fn run(&self, shards: usize, job: &(dyn Fn(usize) -> ShardTally + Sync)) -> Vec<ShardTally> {
        (0..shards).map(job).collect()
    }
}

/// Work limit and executor for exact counting.
#[derive(Clone, Copy)]
pub struct Engine<'r> {
    /// Maximum number of visited search nodes (jet prefixes).
    pub budget: u64,
    pub runner: &'r dyn ShardRunner,
}

impl Default for Engine<'static> {
    fn default() -> Self {
        Engine {
            budget: DEFAULT_BUDGET,
            runner: &Sequential,
        }
    }
}

impl core::fmt::Debug for Engine<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Engine").field("budget", &self.budget).finish()
    }
}

/// Number of jets for every tuple of orders along a list of ideals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointHistogram {
    q: u32,
    n: usize,
    level: u32,
    ideals: usize,
    cells: Vec<u128>,
    nodes: u64,
}

impl JointHistogram {
    pub fn prime(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn num_ideals(&self) -> usize {
        self.ideals
    }

    /// Search nodes visited to produce the histogram.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    fn radix(&self) -> usize {
        self.level as usize + 2
    }

    fn slot(&self, o: SeriesOrder) -> usize {
        match o {
            SeriesOrder::Finite(k) if k <= self.level => k as usize,
            _ => self.level as usize + 1,
        }
    }

    fn decode(&self, mut index: usize) -> Vec<SeriesOrder> {
        let r = self.radix();
        (0..self.ideals)
            .map(|_| {
                let d = index % r;
                index /= r;
                if d == r - 1 {
                    SeriesOrder::Truncated
                } else {
                    SeriesOrder::Finite(d as u32)
                }
            })
            .collect()
    }

    /// Count of jets with exactly these orders (`Truncated` = order above `N`).
    pub fn cell(&self, orders: &[SeriesOrder]) -> u128 {
        let r = self.radix();
        let mut index = 0;
        for o in orders.iter().rev() {
            index = index * r + self.slot(*o);
        }
        self.cells[index]
    }

    /// Nonzero cells with their order tuples.
    pub fn nonzero_cells(&self) -> Vec<(Vec<SeriesOrder>, u128)> {
        self.cells
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .map(|(i, &c)| (self.decode(i), c))
            .collect()
    }

    /// Sum of the cells whose order tuple satisfies `pred`.
    pub fn sum_where(&self, mut pred: impl FnMut(&[SeriesOrder]) -> bool) -> u128 {
        self.cells
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .filter(|&(i, _)| pred(&self.decode(i)))
            .map(|(_, &c)| c)
            .sum()
    }

    /// Distribution of the order along one ideal; the last entry is `Truncated`.
    pub fn marginal(&self, ideal: usize) -> Vec<u128> {
        let mut out = vec![0u128; self.radix()];
        for (i, &c) in self.cells.iter().enumerate() {
            if c > 0 {
                let slot = (i / self.radix().pow(ideal as u32)) % self.radix();
                out[slot] += c;
            }
        }
        out
    }

    pub fn total(&self) -> u128 {
        self.cells.iter().sum()
    }
}

/// `q^(n(N+1))`, or an error when it does not fit in 128 bits.
pub fn space_size(q: u32, n: usize, level: u32) -> Result<u128> {
    u32::try_from(n * (level as usize + 1))
        .ok()
        .and_then(|e| u128::from(q).checked_pow(e))
        .ok_or_else(|| {
            Error::Precondition(alloc::format!(
                "q^(n(N+1)) with q = {q}, n = {n}, N = {level} exceeds 128 bits"
            ))
        })
}

/// Joint order histogram of all jets of `A^n` over `F_q` at `level`.
pub fn joint_histogram(
    ideals: &[IdealGens],
    level: u32,
    q: u32,
    engine: &Engine<'_>,
) -> Result<JointHistogram> {
    Field::prime(u64::from(q))?;
    let Some(first) = ideals.first() else {
        return Err(Error::Precondition("no ideals to count along".into()));
    };
    let n = first.nvars();
    if let Some(bad) = ideals.iter().find(|i| i.vars() != first.vars()) {
        return Err(Error::VariableMismatch(alloc::format!(
            "ideals over ({}) and ({})",
            first.vars().join(","),
            bad.vars().join(",")
        )));
    }
    if ideals.len() > 8 {
        return Err(Error::OutOfRange {
            what: "number of ideals",
            value: ideals.len(),
            range: "1..=8".into(),
        });
    }
    space_size(q, n, level)?;
    let compiled = ideals
        .iter()
        .map(|i| CompiledIdeal::new(i, q))
        .collect::<Result<Vec<_>>>()?;
    let radix = level as usize + 2;
    let ncells = radix.pow(ideals.len() as u32);
    let points = u64::from(q)
        .checked_pow(n as u32)
        .filter(|&p| p <= engine.budget)
        .ok_or(Error::BudgetExceeded {
            budget: engine.budget,
            unit: "search nodes",
        })?;
    let shards = SHARDS.min(points as usize).max(1);

    let job = |shard: usize| -> ShardTally {
        let mut s = Search::new(&compiled, n, level, q, engine.budget, ncells);
        let mut index = shard as u64;
        while index < points && !s.aborted {
            s.root(index);
            index += shards as u64;
        }
        ShardTally {
            cells: s.cells,
            nodes: s.nodes,
            aborted: s.aborted,
        }
    };
    let tallies = engine.runner.run(shards, &job);

    let mut cells = vec![0u128; ncells];
    let mut nodes = 0u64;
    let mut aborted = false;
    for t in &tallies {
        aborted |= t.aborted;
        nodes = nodes.saturating_add(t.nodes);
        if t.cells.len() == ncells {
            for (c, &x) in cells.iter_mut().zip(&t.cells) {
                *c += x;
            }
        } else {
            aborted = true;
        }
    }
    if aborted || tallies.len() != shards || nodes > engine.budget {
        return Err(Error::BudgetExceeded {
            budget: engine.budget,
            unit: "search nodes",
        });
    }
    let hist = JointHistogram {
        q,
        n,
        level,
        ideals: ideals.len(),
        cells,
        nodes,
    };
    let total = space_size(q, n, level)?;
    if hist.total() != total {
        return Err(Error::InvariantViolation(alloc::format!(
            "histogram covers {} of {total} jets",
            hist.total()
        )));
    }
    Ok(hist)
}

const UNDET: u8 = u8::MAX;

struct Search<'a> {
    ideals: &'a [CompiledIdeal],
    n: usize,
    level: usize,
    h: usize,
    q: u32,
    /// `weights[j] = q^(n j)`
    weights: Vec<u128>,
    budget: u64,
    nodes: u64,
    aborted: bool,
    cells: Vec<u128>,
    /// Jacobian rows at `gamma_0`, per ideal and generator.
    jac: Vec<Vec<Vec<u32>>>,
    /// Coefficients, `prefix[v * (N+1) + k]`.
    prefix: Vec<u32>,
    powers: Powers,
    scratch: Vec<u32>,
    value: Vec<u32>,
}

impl<'a> Search<'a> {
    fn new(ideals: &'a [CompiledIdeal], n: usize, level: u32, q: u32, budget: u64, ncells: usize) -> Self {
        let level = level as usize;
        let weights = (0..=level + 1)
            .map(|j| u128::from(q).pow((n * j) as u32))
            .collect();
        let maxe = max_exponents(ideals, n);
        Search {
            ideals,
            n,
            level,
            h: level / 2,
            q,
            weights,
            budget,
            nodes: 0,
            aborted: false,
            cells: vec![0; ncells],
            jac: ideals.iter().map(|i| vec![Vec::new(); i.gens.len()]).collect(),
            prefix: vec![0; n * (level + 1)],
            powers: Powers::new(q, &maxe),
            scratch: vec![0; level + 1],
            value: vec![0; level + 1],
        }
    }

    fn visit(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
        }
        !self.aborted
    }

    fn add_cell(&mut self, orders: &[u8], count: u128) {
        if count == 0 {
            return;
        }
        let radix = self.level + 2;
        let mut index = 0;
        for &o in orders.iter().rev() {
            let slot = if o == UNDET { self.level + 1 } else { o as usize };
            index = index * radix + slot;
        }
        self.cells[index] += count;
    }

    fn stride(&self) -> usize {
        self.level + 1
    }

    /// Level-0 point with the given index in base `q`.
    fn root(&mut self, mut index: u64) {
        if !self.visit() {
            return;
        }
        self.prefix.fill(0);
        let stride = self.stride();
        let mut x = vec![0u32; self.n];
        for v in 0..self.n {
            x[v] = (index % u64::from(self.q)) as u32;
            index /= u64::from(self.q);
            self.prefix[v * stride] = x[v];
        }
        let mut orders = vec![0u8; self.ideals.len()];
        let mut pending = false;
        for (i, ideal) in self.ideals.iter().enumerate() {
            if ideal.gens.is_empty() {
                orders[i] = (self.level + 1) as u8;
            } else if ideal.gens.iter().any(|g| g.eval_point(&x, self.q) != 0) {
                orders[i] = 0;
            } else {
                orders[i] = UNDET;
                pending = true;
            }
        }
        if !pending {
            let w = self.weights[self.level];
            self.add_cell(&orders, w);
            return;
        }
        for (i, ideal) in self.ideals.iter().enumerate() {
            if orders[i] == UNDET {
                for (g, parts) in ideal.partials.iter().enumerate() {
                    self.jac[i][g] = parts.iter().map(|p| p.eval_point(&x, self.q)).collect();
                }
            }
        }
        if self.h == 0 {
            self.linear_stage(&orders);
        } else {
            self.branch(1, &orders);
        }
    }

    /// `[t^k] g(gamma_0 + ... + gamma_(k-1) t^(k-1))` for every generator of the pending ideals.
    fn next_coefficients(&mut self, k: usize, orders: &[u8]) -> Vec<Vec<u32>> {
        let stride = self.stride();
        self.powers.load(&self.prefix, stride, k + 1);
        let mut out = vec![Vec::new(); self.ideals.len()];
        for (i, ideal) in self.ideals.iter().enumerate() {
            if orders[i] != UNDET {
                continue;
            }
            for g in &ideal.gens {
                g.eval_series(&self.powers, &mut self.value[..k + 1], &mut self.scratch[..k + 1]);
                out[i].push(self.value[k]);
            }
        }
        out
    }

    fn in_space(&self, ideal: usize, b: &[u32], x: &[u32]) -> bool {
        let q = self.q;
        self.jac[ideal].iter().zip(b).all(|(row, &bg)| {
            let mut acc = bg;
            for (&a, &xv) in row.iter().zip(x) {
                if a != 0 && xv != 0 {
                    acc = modq::add(acc, modq::mul(a, xv, q), q);
                }
            }
            acc == 0
        })
    }

    fn branch(&mut self, k: usize, orders: &[u8]) {
        let q = self.q;
        let n = self.n;
        let pending: Vec<usize> = (0..orders.len()).filter(|&i| orders[i] == UNDET).collect();
        let b = self.next_coefficients(k, orders);
        let spaces: Vec<_> = pending
            .iter()
            .map(|&i| {
                let mut e = Echelon::new(q);
                for (row, &bg) in self.jac[i].iter().zip(&b[i]) {
                    e.insert(row.clone(), modq::neg(bg, q));
                }
                e.solution(n)
            })
            .collect();

        let stride = self.stride();
        let mut explicit: u128 = 0;
        for (pos, space) in spaces.iter().enumerate() {
            let Some(space) = space else { continue };
            let mut children: Vec<Vec<u32>> = Vec::new();
            space.for_each_point(|x| children.push(x.to_vec()));
            for x in children {
                if self.aborted {
                    return;
                }
                if pending[..pos]
                    .iter()
                    .any(|&j| self.in_space(j, &b[j], &x))
                {
                    continue;
                }
                explicit += 1;
                let mut child = orders.to_vec();
                for &j in &pending {
                    if j != pending[pos] && !self.in_space(j, &b[j], &x) {
                        child[j] = k as u8;
                    }
                }
                if !self.visit() {
                    return;
                }
                for v in 0..n {
                    self.prefix[v * stride + k] = x[v];
                }
                if child.iter().all(|&o| o != UNDET) {
                    let w = self.weights[self.level - k];
                    self.add_cell(&child, w);
                } else if k == self.h {
                    self.linear_stage(&child);
                } else {
                    self.branch(k + 1, &child);
                }
                for v in 0..n {
                    self.prefix[v * stride + k] = 0;
                }
            }
        }
        let bulk = self.weights[1] - explicit;
        let mut settled = orders.to_vec();
        for &j in &pending {
            settled[j] = k as u8;
        }
        let w = self.weights[self.level - k];
        self.add_cell(&settled, bulk * w);
    }

    /// `gamma_0..gamma_h` fixed; resolves all remaining coefficients by linear algebra.
    fn linear_stage(&mut self, orders: &[u8]) {
        let (q, n, level, h) = (self.q, self.n, self.level, self.h);
        let stride = self.stride();
        let pending: Vec<usize> = (0..orders.len()).filter(|&i| orders[i] == UNDET).collect();
        let tail = level - h;
        let unknowns = n * tail;

        // blocks[p][d - h - 1] = rows (coefficients, rhs) for degree d of pending ideal p
        let mut blocks: Vec<Vec<Vec<(Vec<u32>, u32)>>> = Vec::with_capacity(pending.len());
        if tail > 0 {
            self.powers.load(&self.prefix, stride, level + 1);
        }
        let mut gval = vec![0u32; level + 1];
        let mut dval = vec![0u32; level + 1];
        for &i in &pending {
            let ideal = &self.ideals[i];
            let mut per_degree = vec![Vec::new(); tail];
            for (g, gen) in ideal.gens.iter().enumerate() {
                if tail == 0 {
                    break;
                }
                gen.eval_series(&self.powers, &mut gval, &mut self.scratch);
                let mut partial_vals: Vec<Vec<u32>> = Vec::with_capacity(n);
                for p in &ideal.partials[g] {
                    p.eval_series(&self.powers, &mut dval, &mut self.scratch);
                    partial_vals.push(dval[..tail].to_vec());
                }
                for d in h + 1..=level {
                    let mut row = vec![0u32; unknowns];
                    for j in h + 1..=d {
                        for v in 0..n {
                            row[(j - h - 1) * n + v] = partial_vals[v][d - j];
                        }
                    }
                    per_degree[d - h - 1].push((row, modq::neg(gval[d], q)));
                }
            }
            blocks.push(per_degree);
        }

        // cumulative[a] = #completions with ord_p >= a_p for each pending p,
        // a_p in h+1..=N+1, stored mixed-radix with digit a_p - h - 1.
        let r = tail + 1;
        let mut cumulative = vec![0u128; r.pow(pending.len() as u32)];
        #[allow(clippy::too_many_arguments)]
        fn fill(
            p: usize,
            index: usize,
            scale: usize,
            e: &Echelon,
            blocks: &[Vec<Vec<(Vec<u32>, u32)>>],
            r: usize,
            unknowns: usize,
            q: u32,
            out: &mut [u128],
        ) {
            if p == blocks.len() {
                if e.consistent() {
                    out[index] = u128::from(q).pow((unknowns - e.rank()) as u32);
                }
                return;
            }
            let mut e = e.clone();
            for digit in 0..r {
                if digit > 0 {
                    for (row, rhs) in &blocks[p][digit - 1] {
                        e.insert(row.clone(), *rhs);
                    }
                }
                if !e.consistent() {
                    // every larger threshold is empty too; out is zero-initialised
                    return;
                }
                fill(p + 1, index + digit * scale, scale * r, &e, blocks, r, unknowns, q, out);
            }
        }
        fill(0, 0, 1, &Echelon::new(q), &blocks, r, unknowns, q, &mut cumulative);

        // exact cells by inclusion-exclusion over the pending coordinates
        let np = pending.len();
        let mut child = orders.to_vec();
        for index in 0..cumulative.len() {
            let mut total: i128 = 0;
            for mask in 0..(1usize << np) {
                let mut at = 0usize;
                let mut scale = 1usize;
                let mut valid = true;
                let mut rest = index;
                for p in 0..np {
                    let mut digit = rest % r;
                    rest /= r;
                    if mask >> p & 1 == 1 {
                        digit += 1;
                    }
                    if digit >= r {
                        valid = false;
                        break;
                    }
                    at += digit * scale;
                    scale *= r;
                }
                if !valid {
                    continue;
                }
                let v = cumulative[at] as i128;
                if mask.count_ones() % 2 == 0 {
                    total += v;
                } else {
                    total -= v;
                }
            }
            debug_assert!(total >= 0);
            let mut rest = index;
            for &p in &pending {
                let digit = rest % r;
                rest /= r;
                child[p] = if digit == tail { UNDET } else { (h + 1 + digit) as u8 };
            }
            let c = child.clone();
            self.add_cell(&c, total.max(0) as u128);
        }
    }
}
