//! Multiplicative weights over ranges and per-element insertion costs for
//! the part under construction.
//!
//! Range weights are kept as integer exponents `c(F)` (the number of
//! finished parts `F` crosses) and materialized as `π(F) = 2^{c(F) - shift}`.
//! Selection only ever compares weights against each other or against a
//! budget proportional to `Σπ`, so the common factor `2^{-shift}` is free to
//! choose; it is reset to the largest exponent after every part.

use std::collections::VecDeque;

use rand::distr::weighted::WeightedIndex;
use rand::Rng as _;
use rayon::prelude::*;
use rayon::ThreadPool;

use super::potential::{potential_threshold, PotentialConfig, PotentialMode};
use crate::bitset::{for_each_bit, BitSet};
use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::system::SetSystem;

/// Elements per work unit when accumulating sampled weights in parallel.
/// Fixed so the result does not depend on the worker count.
const CHUNK: usize = 4096;

/// Outcome of adding one element to the current part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub element: usize,
    /// Insertion cost `ω` of the element at the time it was chosen.
    pub omega: f64,
    /// Accumulated cost of the part after the insertion.
    pub cost: f64,
    pub violates_practical: bool,
    pub violates_theoretical: bool,
}

pub struct WeightState<'a> {
    system: &'a SetSystem,
    exponents: Vec<u32>,
    shift: i64,
    pi: Vec<f64>,
    sum_pi: f64,
    omega: Vec<f64>,
    remaining: BitSet,
    remaining_count: usize,
    part: Vec<usize>,
    /// Members of the current part inside each range.
    inside: Vec<u32>,
    crossed: Vec<bool>,
    cost: f64,
    n0: usize,
    /// Ranges that became crossed but whose deduction from `omega` is deferred.
    pending: VecDeque<usize>,
    parts_done: usize,
}

impl<'a> WeightState<'a> {
    pub fn new(system: &'a SetSystem) -> Self {
        let (n, m) = (system.n(), system.m());
        WeightState {
            system,
            exponents: vec![0; m],
            shift: 0,
            pi: vec![1.0; m],
            sum_pi: m as f64,
            omega: vec![0.0; n],
            remaining: BitSet::full(n),
            remaining_count: n,
            part: Vec::new(),
            inside: vec![0; m],
            crossed: vec![false; m],
            cost: 0.0,
            n0: n,
            pending: VecDeque::new(),
            parts_done: 0,
        }
    }

    pub fn system(&self) -> &'a SetSystem {
        self.system
    }

    /// `c(F)` for every range.
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Scaled weight `π(F)`.
    pub fn pi(&self, f: usize) -> f64 {
        self.pi[f]
    }

    pub fn sum_pi(&self) -> f64 {
        self.sum_pi
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn remaining(&self) -> &BitSet {
        &self.remaining
    }

    pub fn remaining_count(&self) -> usize {
        self.remaining_count
    }

    /// Members of the part under construction, starting element first.
    pub fn part(&self) -> &[usize] {
        &self.part
    }

    pub fn x0(&self) -> Option<usize> {
        self.part.first().copied()
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    /// Unassigned count when the current part was started.
    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn parts_done(&self) -> usize {
        self.parts_done
    }

    pub fn inside_count(&self, f: usize) -> u32 {
        self.inside[f]
    }

    pub fn crossed(&self, f: usize) -> bool {
        self.crossed[f]
    }

    pub fn pending_len(&self) -> usize {
        self.pending.len()
    }

    /// Changes the common scale to `π(F) = 2^{c(F) - shift}`, rescaling the
    /// element costs and the part cost with it.
    pub fn rescale(&mut self, shift: i64) {
        let factor = pow2(self.shift - shift);
        self.shift = shift;
        for (p, &c) in self.pi.iter_mut().zip(&self.exponents) {
            *p = pow2(c as i64 - shift);
        }
        self.sum_pi = self.pi.iter().sum();
        self.omega.iter_mut().for_each(|w| *w *= factor);
        self.cost *= factor;
    }

    /// Recomputes `π` from the exponents with the largest weight at 1.
    fn renormalize(&mut self) {
        let top = self.exponents.iter().copied().max().unwrap_or(0) as i64;
        self.rescale(top);
    }

    fn pick_uniform(&self, rng: &mut Rng) -> Result<usize> {
        if self.remaining_count == 0 {
            return Err(Error::State("no unassigned elements left".into()));
        }
        let k = rng.random_range(0..self.remaining_count);
        Ok(self.remaining.iter().nth(k).expect("remaining count out of sync"))
    }

    /// Starts a new part at a uniformly random unassigned element.
    pub fn begin_part(&mut self, rng: &mut Rng) -> Result<usize> {
        let x0 = self.pick_uniform(rng)?;
        self.begin_part_with(x0)?;
        Ok(x0)
    }

    /// Starts a new part at `x0` and sets `ω(x)` to the weight of the ranges
    /// separating `x0` from `x`.
    pub fn begin_part_with(&mut self, x0: usize) -> Result<()> {
        if !self.part.is_empty() {
            return Err(Error::State("previous part has not been finished".into()));
        }
        if x0 >= self.system.n() || !self.remaining.contains(x0) {
            return Err(Error::State(format!("element {x0} is not unassigned")));
        }
        self.n0 = self.remaining_count;
        self.take(x0);
        self.part.push(x0);
        self.cost = 0.0;
        self.pending.clear();
        for e in self.remaining.iter() {
            self.omega[e] = 0.0;
        }
        for (f, range) in self.system.ranges().iter().enumerate() {
            let has_x0 = range.contains(x0);
            self.inside[f] = has_x0 as u32;
            self.crossed[f] = false;
            accumulate(&mut self.omega, range, has_x0, &self.remaining, self.pi[f]);
        }
        Ok(())
    }

    fn take(&mut self, x: usize) {
        self.remaining.remove(x);
        self.remaining_count -= 1;
    }

    fn x0_required(&self) -> Result<usize> {
        self.x0().ok_or_else(|| Error::State("no part under construction".into()))
    }

    /// Current insertion cost of `x`, including deductions still queued.
    pub fn omega_of(&self, x: usize) -> f64 {
        let Some(x0) = self.x0() else { return self.omega[x] };
        let mut w = self.omega[x];
        for &f in &self.pending {
            let range = self.system.range(f);
            if range.contains(x0) != range.contains(x) {
                w -= self.pi[f];
            }
        }
        w
    }

    /// Insertion costs of all unassigned elements, in index order.
    pub fn omega_snapshot(&self) -> Vec<(usize, f64)> {
        self.remaining.iter().map(|x| (x, self.omega_of(x))).collect()
    }

    fn deduct(&mut self, f: usize) {
        let x0 = self.part[0];
        let range = self.system.range(f);
        accumulate(&mut self.omega, range, range.contains(x0), &self.remaining, -self.pi[f]);
    }

    /// Moves `y` into the current part, charging its cost. Ranges that
    /// start crossing the part are deducted from `ω` now, or queued when
    /// `lazy` is set.
    fn add(&mut self, y: usize, lazy: bool) -> f64 {
        let w = self.omega_of(y);
        self.take(y);
        self.cost += w;
        self.part.push(y);
        let size = self.part.len() as u32;
        for (f, range) in self.system.ranges().iter().enumerate() {
            if range.contains(y) {
                self.inside[f] += 1;
            }
            if !self.crossed[f] && self.inside[f] > 0 && self.inside[f] < size {
                self.crossed[f] = true;
                if lazy {
                    self.pending.push_back(f);
                } else {
                    self.deduct(f);
                }
            }
        }
        w
    }

    fn budgets(&self, cfg: &PotentialConfig) -> (f64, f64) {
        let k = self.part.len() + 1;
        let part_index = self.parts_done + 1;
        let practical = PotentialConfig { mode: PotentialMode::Practical, ..*cfg };
        let p = potential_threshold(k, &practical, self.sum_pi, self.n0, part_index);
        (p, part_index as f64 * p)
    }

    fn argmin_omega(&self) -> usize {
        let mut best = usize::MAX;
        let mut best_w = f64::INFINITY;
        for x in self.remaining.iter() {
            let w = self.omega[x];
            if best == usize::MAX || w < best_w {
                best = x;
                best_w = w;
            }
        }
        best
    }

    fn check_extendable(&self) -> Result<()> {
        self.x0_required()?;
        if self.remaining_count == 0 {
            return Err(Error::State("no unassigned elements left".into()));
        }
        Ok(())
    }

    fn record(&mut self, y: usize, cfg: &PotentialConfig, lazy: bool) -> Step {
        let (practical, theoretical) = self.budgets(cfg);
        let before = self.cost;
        let omega = self.add(y, lazy);
        let total = before + omega;
        Step {
            element: y,
            omega,
            cost: self.cost,
            violates_practical: total > practical,
            violates_theoretical: total > theoretical,
        }
    }

    /// Adds the unassigned element of smallest `ω` (smallest index on ties).
    pub fn extend_minweight(&mut self, cfg: &PotentialConfig) -> Result<Step> {
        self.check_extendable()?;
        while let Some(f) = self.pending.pop_front() {
            self.deduct(f);
        }
        let y = self.argmin_omega();
        Ok(self.record(y, cfg, false))
    }

    /// Adds the first unassigned element, in index order, whose cost keeps
    /// the part within budget.
    ///
    /// Deductions for newly crossed ranges are queued and only applied,
    /// one range at a time, while no element fits the budget. If none fits
    /// once the queue is empty, the element of smallest `ω` is taken and the
    /// step counts as a violation.
    pub fn extend_greedy(&mut self, cfg: &PotentialConfig) -> Result<Step> {
        self.check_extendable()?;
        let k = self.part.len() + 1;
        let budget = potential_threshold(k, cfg, self.sum_pi, self.n0, self.parts_done + 1);
        let cost = self.cost;
        // Queued deductions only lower ω, so a stale value within budget is
        // a true value within budget.
        let mut chosen = self.remaining.iter().find(|&x| cost + self.omega[x] <= budget);
        while chosen.is_none() {
            let Some(f) = self.pending.pop_front() else { break };
            let x0 = self.part[0];
            let range = self.system.range(f);
            let delta = self.pi[f];
            let omega = &mut self.omega;
            let mut first = usize::MAX;
            for_each_crosser(range, range.contains(x0), &self.remaining, |x| {
                omega[x] -= delta;
                if cost + omega[x] <= budget && x < first {
                    first = x;
                }
            });
            if first != usize::MAX {
                chosen = Some(first);
            }
        }
        let y = chosen.unwrap_or_else(|| self.argmin_omega());
        Ok(self.record(y, cfg, true))
    }

    /// Moves every unassigned element into the current part without
    /// updating costs.
    pub fn absorb_remaining(&mut self) -> Result<()> {
        self.x0_required()?;
        let rest: Vec<usize> = self.remaining.iter().collect();
        for x in rest {
            self.take(x);
            self.part.push(x);
        }
        self.pending.clear();
        Ok(())
    }

    /// Builds a whole part at once: a random start `x0` plus the `size - 1`
    /// unassigned elements of smallest sampled cost.
    ///
    /// The cost of `x` is accumulated over `w` ranges drawn with probability
    /// proportional to `π`, each adding its own `π` when it separates `x`
    /// from `x0`. When `pool` is given the accumulation is spread over its
    /// workers; the result is the same for any worker count.
    pub fn build_part_at_once(
        &mut self,
        size: usize,
        w: usize,
        rng: &mut Rng,
        pool: Option<&ThreadPool>,
    ) -> Result<Vec<usize>> {
        if w == 0 {
            return Err(Error::arg("part-at-once needs at least one range sample"));
        }
        if !self.part.is_empty() {
            return Err(Error::State("previous part has not been finished".into()));
        }
        if size == 0 || size > self.remaining_count {
            return Err(Error::State(format!(
                "cannot build a part of {size} from {} unassigned elements",
                self.remaining_count
            )));
        }
        self.n0 = self.remaining_count;
        if size == self.remaining_count {
            self.part = self.remaining.iter().collect();
            return Ok(self.part.clone());
        }
        let x0 = self.pick_uniform(rng)?;
        self.take(x0);

        let samples: Vec<(usize, bool, f64)> = self
            .sample_ranges(w, rng)?
            .iter()
            .enumerate()
            .filter(|(_, &h)| h > 0)
            .map(|(f, &h)| (f, self.system.range(f).contains(x0), h as f64 * self.pi[f]))
            .collect();

        let system = self.system;
        let remaining = &self.remaining;
        let fill = |(chunk, omega): (usize, &mut [f64])| {
            omega.iter_mut().for_each(|v| *v = 0.0);
            let first_word = chunk * CHUNK / 64;
            let words = omega.len().div_ceil(64);
            for &(f, flip, delta) in &samples {
                let range = system.range(f).words();
                let live = &remaining.words()[first_word..first_word + words];
                for (j, (&r, &l)) in range[first_word..first_word + words].iter().zip(live).enumerate() {
                    for_each_bit(j, (r ^ flip_mask(flip)) & l, |i| omega[i] += delta);
                }
            }
        };
        match pool {
            Some(pool) => pool.install(|| self.omega.par_chunks_mut(CHUNK).enumerate().for_each(fill)),
            None => self.omega.chunks_mut(CHUNK).enumerate().for_each(fill),
        }

        let mut candidates: Vec<(f64, usize)> = self.remaining.iter().map(|x| (self.omega[x], x)).collect();
        let by_cost = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if size - 1 < candidates.len() {
            candidates.select_nth_unstable_by(size - 1, by_cost);
            candidates.truncate(size - 1);
        }
        candidates.sort_unstable_by(by_cost);
        self.part.push(x0);
        self.part.extend(candidates.iter().map(|&(_, x)| x));
        self.part[1..].iter().for_each(|&x| self.remaining.remove(x));
        self.remaining_count -= size - 1;
        Ok(self.part.clone())
    }

    /// Draws `w` ranges with probability proportional to `π` and returns how
    /// often each range was drawn. Empty when there are no ranges.
    pub fn sample_ranges(&self, w: usize, rng: &mut Rng) -> Result<Vec<u32>> {
        let mut hits = vec![0u32; self.system.m()];
        if self.system.m() > 0 {
            let law = WeightedIndex::new(&self.pi).map_err(|e| Error::State(format!("range weights: {e}")))?;
            for _ in 0..w {
                hits[rng.sample(&law)] += 1;
            }
        }
        Ok(hits)
    }

    /// Doubles the weight of every range crossing `part` and retires the
    /// part's elements.
    pub fn mwu_update(&mut self, part: &[usize]) -> Result<()> {
        if part.is_empty() {
            return Err(Error::State("cannot finish an empty part".into()));
        }
        let n = self.system.n();
        let mut members = BitSet::new(n);
        for &x in part {
            if x >= n {
                return Err(Error::arg(format!("element {x} out of bounds")));
            }
            members.insert(x);
        }
        let size = members.count();
        for (f, range) in self.system.ranges().iter().enumerate() {
            let inside = range.intersection_count(&members);
            if inside > 0 && inside < size {
                self.exponents[f] += 1;
            }
        }
        for x in members.iter() {
            if self.remaining.contains(x) {
                self.take(x);
            }
        }
        self.part.clear();
        self.pending.clear();
        self.cost = 0.0;
        self.parts_done += 1;
        self.renormalize();
        Ok(())
    }

    /// Finishes the current part built by the extend methods.
    pub fn finish_part(&mut self) -> Result<Vec<usize>> {
        let part = std::mem::take(&mut self.part);
        self.mwu_update(&part)?;
        Ok(part)
    }
}

#[inline]
fn flip_mask(flip: bool) -> u64 {
    if flip {
        !0
    } else {
        0
    }
}

/// Calls `f` for every `x` in `remaining` such that `range` separates `x`
/// from an element whose membership in `range` is `flip`.
#[inline]
fn for_each_crosser(range: &BitSet, flip: bool, remaining: &BitSet, mut f: impl FnMut(usize)) {
    let mask = flip_mask(flip);
    for (j, (&r, &alive)) in range.words().iter().zip(remaining.words()).enumerate() {
        for_each_bit(j, (r ^ mask) & alive, &mut f);
    }
}

#[inline]
fn accumulate(omega: &mut [f64], range: &BitSet, flip: bool, remaining: &BitSet, delta: f64) {
    for_each_crosser(range, flip, remaining, |x| omega[x] += delta);
}

fn pow2(e: i64) -> f64 {
    2f64.powi(e.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}
