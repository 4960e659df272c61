//! Exact optimization over the assignment space: branch-and-bound on
//! type bitsets, an exhaustive oracle, and independent verification.

mod bitset;
mod brute;
mod search;
mod verify;

use std::fmt;
use std::time::{Duration, Instant};

pub use bitset::TypeSet;
pub use brute::{brute_force, brute_force_capped, DEFAULT_BRUTE_CAP};
pub use search::{Bound, SearchState, Searcher};
pub use verify::{verify, Issue, VerifyReport};

use crate::error::Result;
use crate::eval::{Assignment, Metrics};
use crate::instance::{Instance, Setting};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    LimitReached,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::LimitReached => "limit-reached",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An exact non-negative objective value `numerator / denominator`:
/// the weighted sum for Setting 1, cost for Setting 2, `obj1` for Setting 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Objective {
    pub numerator: u128,
    pub denominator: u128,
}

impl Objective {
    fn reduced(numerator: u128, denominator: u128) -> Self {
        let g = gcd(numerator, denominator).max(1);
        Self { numerator: numerator / g, denominator: denominator / g }
    }

    /// Objective of `setting` at `m`.
    pub fn of(inst: &Instance, setting: Setting, m: &Metrics) -> Self {
        Self::from_score(inst, setting, inst.score(setting, m))
    }

    /// Converts a score (larger is better) back to the objective's own sign.
    pub fn from_score(inst: &Instance, setting: Setting, score: i128) -> Self {
        match setting {
            Setting::WeightedSum => Self::reduced(score.max(0) as u128, inst.targets.product().max(1)),
            Setting::MinCost => Self::reduced((-score).max(0) as u128, 1),
            Setting::MaxSimilarity => Self::reduced(score.max(0) as u128, 1),
        }
    }

    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == 1 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{} (~{:.6})", self.numerator, self.denominator, self.value())
        }
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Limits {
    pub nodes: Option<u64>,
    pub time: Option<Duration>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub nodes: u64,
    pub wall_time: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub setting: Setting,
    pub status: Status,
    pub assignment: Option<Assignment>,
    pub metrics: Option<Metrics>,
    pub objective: Option<Objective>,
    /// Proven bound on the optimum: equal to `objective` when optimal,
    /// the root bound when a limit stopped the search.
    pub bound: Option<Objective>,
    pub stats: Stats,
}

impl Solution {
    /// Relative distance between incumbent and bound.
    pub fn gap(&self) -> Option<f64> {
        let (o, b) = (self.objective?.value(), self.bound?.value());
        Some((b - o).abs() / o.abs().max(1.0))
    }

    fn finish(inst: &Instance, setting: Setting, best: Option<Vec<usize>>, status: Status, bound: Option<Objective>, stats: Stats) -> Result<Self> {
        let assignment = best.map(|idx| inst.assignment_from_indices(&idx));
        let metrics = assignment.as_ref().map(|phi| inst.evaluate(phi)).transpose()?;
        let objective = metrics.map(|m| Objective::of(inst, setting, &m));
        let bound = if status == Status::Optimal { objective } else { bound };
        Ok(Self { setting, status, assignment, metrics, objective, bound, stats })
    }
}

/// Best assignment for `setting`, ties broken by the lexicographically
/// smallest choice-index vector in pinned vertex order.
pub fn solve(inst: &Instance, setting: Setting, limits: Limits) -> Result<Solution> {
    let start = Instant::now();
    let searcher = Searcher::new(inst, setting)?;
    let root = searcher.root();
    let root_bound = searcher.bound(&root);
    let mut dfs = Dfs { s: &searcher, limits, start, nodes: 0, best: None, stopped: false };
    if root_bound != Bound::Infeasible {
        dfs.visit(&root);
    }
    let status = match (dfs.stopped, &dfs.best) {
        (true, _) => Status::LimitReached,
        (false, Some(_)) => Status::Optimal,
        (false, None) => Status::Infeasible,
    };
    let bound = match root_bound {
        Bound::Score(b) => Some(Objective::from_score(inst, setting, b)),
        Bound::Infeasible => None,
    };
    let stats = Stats { nodes: dfs.nodes.max(1), wall_time: start.elapsed() };
    Solution::finish(inst, setting, dfs.best.map(|b| b.1), status, bound, stats)
}

struct Dfs<'s, 'a> {
    s: &'s Searcher<'a>,
    limits: Limits,
    start: Instant,
    nodes: u64,
    best: Option<(i128, Vec<usize>)>,
    stopped: bool,
}

impl Dfs<'_, '_> {
    fn out_of_budget(&mut self) -> bool {
        if self.limits.nodes.is_some_and(|cap| self.nodes >= cap) {
            return true;
        }
        self.nodes.is_multiple_of(256) && self.limits.time.is_some_and(|cap| self.start.elapsed() >= cap)
    }

    /// Whether a subtree with this bound can still hold a better or
    /// tie-winning completion.
    fn promising(&self, bound: Bound, prefix: &[usize]) -> bool {
        match (bound, &self.best) {
            (Bound::Infeasible, _) => false,
            (Bound::Score(_), None) => true,
            (Bound::Score(b), Some((score, idx))) => b > *score || (b == *score && prefix <= &idx[..prefix.len()]),
        }
    }

    fn visit(&mut self, state: &SearchState) {
        if self.stopped {
            return;
        }
        if self.out_of_budget() {
            self.stopped = true;
            return;
        }
        self.nodes += 1;
        let s = self.s;
        if state.depth() == s.depth_limit() {
            let m = s.metrics(state);
            if s.inst.satisfies(s.setting, &m) {
                let score = s.inst.score(s.setting, &m);
                let better = match &self.best {
                    None => true,
                    Some((b, idx)) => score > *b || (score == *b && state.prefix() < idx.as_slice()),
                };
                if better {
                    self.best = Some((score, state.prefix().to_vec()));
                }
            }
            return;
        }
        if !self.promising(s.bound(state), state.prefix()) {
            return;
        }
        for &k in &s.branch[state.depth()] {
            let child = s.push(state, k);
            self.visit(&child);
        }
    }
}

#[cfg(test)]
mod tests;
