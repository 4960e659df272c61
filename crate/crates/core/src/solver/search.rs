//! Search state over the pinned vertex order and its admissible bound.

use std::cmp::Ordering;

use crate::diagram::VertexId;
use crate::error::{Error, Result};
use crate::eval::Metrics;
use crate::instance::{Instance, Setting};

use super::bitset::TypeSet;

/// Bound on the best completion of a partial assignment, in score units
/// (larger is better: scaled weighted sum, `-cost`, or `obj1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    /// No completion satisfies the side constraints.
    Infeasible,
    Score(i128),
}

/// Read-only precomputation shared by every node of one search.
#[derive(Debug)]
pub struct Searcher<'a> {
    pub(crate) inst: &'a Instance,
    pub(crate) setting: Setting,
    pub(crate) order: Vec<VertexId>,
    pub(crate) n_internal: usize,
    /// Per internal depth: successor on the 0-arc and on the 1-arc.
    succ: Vec<[VertexId; 2]>,
    /// Per internal depth and candidate index: types whose indicator is 1.
    ind: Vec<Vec<TypeSet>>,
    /// Per internal depth: types with indicator 1 (resp. 0) under some candidate.
    any1: Vec<TypeSet>,
    any0: Vec<TypeSet>,
    /// Per depth: child indices in branching order.
    pub(crate) branch: Vec<Vec<usize>>,
    /// Per depth: index of the initial label.
    init: Vec<usize>,
    weights: Vec<u64>,
    costs: Vec<u64>,
    resp: Vec<TypeSet>,
    resp_improve: Vec<TypeSet>,
    improves: TypeSet,
}

/// A prefix of fixed choices along the pinned order, with the types known
/// to reach each vertex so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchState {
    prefix: Vec<usize>,
    /// Exact for every vertex whose predecessors are all fixed.
    reach: Vec<TypeSet>,
    /// Fixed vertices whose label equals the initial one.
    matches: u64,
}

impl SearchState {
    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn depth(&self) -> usize {
        self.prefix.len()
    }

    pub fn reach(&self, v: VertexId) -> &TypeSet {
        &self.reach[v]
    }
}

impl<'a> Searcher<'a> {
    pub fn new(inst: &'a Instance, setting: Setting) -> Result<Self> {
        let d = &inst.diagram;
        let pop = &inst.population;
        let n = pop.len();
        let order = d.pinned_order();
        let n_internal = d.internal().len();
        let n_methods = pop.methods().len();

        let mut succ = Vec::with_capacity(n_internal);
        let mut ind = Vec::with_capacity(n_internal);
        let mut any1 = Vec::with_capacity(n_internal);
        let mut any0 = Vec::with_capacity(n_internal);
        let mut branch = Vec::with_capacity(order.len());
        let mut init = Vec::with_capacity(order.len());
        for &u in &order[..n_internal] {
            succ.push([d.successor(u, false).expect("internal"), d.successor(u, true).expect("internal")]);
            let fam = inst.family(u);
            let mut sets = Vec::with_capacity(fam.len());
            let mut a1 = TypeSet::empty(n);
            let mut a0 = TypeSet::empty(n);
            for c in fam.candidates() {
                let mut bits = TypeSet::empty(n);
                for (t, ty) in pop.types().iter().enumerate() {
                    if pop.indicator(c, ty)? {
                        bits.insert(t);
                    }
                }
                a1.or(&bits);
                a0.or_and_not(&TypeSet::full(n), &bits);
                sets.push(bits);
            }
            ind.push(sets);
            any1.push(a1);
            any0.push(a0);

            let base = inst.initial.items(u);
            let mut ks: Vec<usize> = (0..fam.len()).collect();
            ks.sort_by_key(|&k| (std::cmp::Reverse(fam.candidates()[k].intersection_len(base)), k));
            branch.push(ks);
            init.push(fam.index_of(base).unwrap_or(usize::MAX));
        }
        for &s in &order[n_internal..] {
            let first = pop.methods().position(inst.initial.method(s))?;
            let mut ms = vec![first];
            ms.extend((0..n_methods).filter(|&m| m != first));
            branch.push(ms);
            init.push(first);
        }

        let weights = pop.types().iter().map(|t| t.weight).collect();
        let costs = (0..n_methods).map(|m| pop.methods().cost_at(m)).collect();
        let improves = TypeSet::from_fn(n, |t| pop.types()[t].improves);
        let resp: Vec<TypeSet> = (0..n_methods).map(|m| TypeSet::from_fn(n, |t| pop.types()[t].responses[m])).collect();
        let resp_improve = resp.iter().map(|r| TypeSet::from_fn(n, |t| r.contains(t) && improves.contains(t))).collect();
        Ok(Self {
            inst,
            setting,
            order,
            n_internal,
            succ,
            ind,
            any1,
            any0,
            branch,
            init,
            weights,
            costs,
            resp,
            resp_improve,
            improves,
        })
    }

    /// Number of vertices, i.e. the depth of a complete state.
    pub fn depth_limit(&self) -> usize {
        self.order.len()
    }

    /// Number of choices at `depth`.
    pub fn arity(&self, depth: usize) -> usize {
        self.branch[depth].len()
    }

    pub fn root(&self) -> SearchState {
        let n = self.inst.population.len();
        let mut reach = vec![TypeSet::empty(n); self.order.len()];
        reach[self.inst.diagram.source()] = TypeSet::full(n);
        SearchState { prefix: Vec::new(), reach, matches: 0 }
    }

    /// State after fixing the next vertex to choice `k`.
    pub fn push(&self, state: &SearchState, k: usize) -> SearchState {
        let depth = state.prefix.len();
        let mut next = state.clone();
        next.prefix.push(k);
        if k == self.init[depth] {
            next.matches += 1;
        }
        if depth < self.n_internal {
            let u = self.order[depth];
            let [s0, s1] = self.succ[depth];
            let from = state.reach[u].clone();
            next.reach[s1].or_and(&from, &self.ind[depth][k]);
            next.reach[s0].or_and_not(&from, &self.ind[depth][k]);
        }
        next
    }

    /// State for an explicit prefix of choice indices.
    pub fn state(&self, prefix: &[usize]) -> Result<SearchState> {
        let mut s = self.root();
        for (depth, &k) in prefix.iter().enumerate() {
            if depth >= self.order.len() || k >= self.arity(depth) {
                return Err(Error::InvalidInstance(format!("choice {k} out of range at depth {depth}")));
            }
            s = self.push(&s, k);
        }
        Ok(s)
    }

    /// Exact metrics of a complete state.
    pub fn metrics(&self, state: &SearchState) -> Metrics {
        assert_eq!(state.prefix.len(), self.order.len(), "state is not complete");
        let mut m = Metrics { obj1: state.matches, ..Metrics::default() };
        for (j, &s) in self.order[self.n_internal..].iter().enumerate() {
            let k = state.prefix[self.n_internal + j];
            let r = &state.reach[s];
            m.cost += self.costs[k] * r.weight(&self.weights);
            m.obj2 += r.weight_and(&self.resp[k], &self.weights);
            m.obj3 += r.weight_and(&self.resp_improve[k], &self.weights);
        }
        m
    }

    /// Admissible bound over all completions of `state`.
    ///
    /// Each type may take any method offered at a sink it can still reach,
    /// independently of other types. Under that relaxation a type either
    /// pays its cheapest offered method or pays extra for the cheapest
    /// method it responds to; budget and target rows are then relaxed to a
    /// fractional knapsack or cover over those upgrades.
    pub fn bound(&self, state: &SearchState) -> Bound {
        let n = self.weights.len();
        let depth = state.prefix.len();
        let mut poss = state.reach.clone();
        for d in depth.min(self.n_internal)..self.n_internal {
            let u = self.order[d];
            let [s0, s1] = self.succ[d];
            let from = poss[u].clone();
            poss[s1].or_and(&from, &self.any1[d]);
            poss[s0].or_and(&from, &self.any0[d]);
        }
        let n_methods = self.costs.len();
        let mut offered = vec![TypeSet::empty(n); n_methods];
        for (j, &s) in self.order[self.n_internal..].iter().enumerate() {
            let d = self.n_internal + j;
            if d < depth {
                offered[state.prefix[d]].or(&poss[s]);
            } else {
                offered.iter_mut().for_each(|o| o.or(&poss[s]));
            }
        }

        let obj1_ub = state.matches + (self.order.len() - depth) as u64;
        let mut base: u128 = 0;
        // (extra cost, weight, improves) of each type's cheapest responding method.
        let mut upgrades: Vec<(u128, u128, bool)> = Vec::new();
        for t in 0..n {
            let mut cmin = u64::MAX;
            let mut cy = u64::MAX;
            for (m, set) in offered.iter().enumerate().take(n_methods) {
                if set.contains(t) {
                    cmin = cmin.min(self.costs[m]);
                    if self.resp[m].contains(t) {
                        cy = cy.min(self.costs[m]);
                    }
                }
            }
            let w = self.weights[t] as u128;
            base += w * cmin as u128;
            if cy != u64::MAX {
                upgrades.push((w * (cy - cmin) as u128, w, self.improves.contains(t)));
            }
        }

        let inst = self.inst;
        let th = inst.targets;
        let (t1, t2, t3) = (th.similarity as u128, th.response as u128, th.improvement as u128);
        let budget = inst.budget as u128;
        let covers = || {
            let c2 = fractional_cover(upgrades.iter().map(|&(dc, w, _)| (dc, w)).collect(), t2)?;
            let c3 = fractional_cover(upgrades.iter().filter(|u| u.2).map(|&(dc, w, _)| (dc, w)).collect(), t3)?;
            Some(c2.max(c3))
        };
        match self.setting {
            Setting::WeightedSum => {
                if base > budget {
                    return Bound::Infeasible;
                }
                let items = upgrades.iter().map(|&(dc, w, z)| (dc, w * (t1 * t3 + if z { t1 * t2 } else { 0 }))).collect();
                let gain = fractional_knapsack(items, budget - base);
                Bound::Score((obj1_ub as u128 * t2 * t3 + gain) as i128)
            }
            Setting::MinCost => {
                if 2 * obj1_ub < th.similarity {
                    return Bound::Infeasible;
                }
                match covers() {
                    Some(extra) => Bound::Score(-((base + extra) as i128)),
                    None => Bound::Infeasible,
                }
            }
            Setting::MaxSimilarity => match covers() {
                Some(extra) if base + extra <= budget => Bound::Score(obj1_ub as i128),
                _ => Bound::Infeasible,
            },
        }
    }
}

/// Largest gain of a fractional knapsack, floored. Items are `(cost, gain)`.
fn fractional_knapsack(mut items: Vec<(u128, u128)>, capacity: u128) -> u128 {
    items.sort_by(|a, b| match (a.0 == 0, b.0 == 0) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (false, false) => (b.1 * a.0).cmp(&(a.1 * b.0)),
    });
    let mut left = capacity;
    let mut gain = 0;
    for (cost, g) in items {
        if cost <= left {
            left -= cost;
            gain += g;
        } else {
            gain += g * left / cost;
            break;
        }
    }
    gain
}

/// Least cost of covering `demand` fractionally, ceiled; `None` if the
/// items cannot cover it at all. Items are `(cost, amount)`.
fn fractional_cover(mut items: Vec<(u128, u128)>, demand: u128) -> Option<u128> {
    if items.iter().map(|i| i.1).sum::<u128>() < demand {
        return None;
    }
    items.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    let mut left = demand;
    let mut cost = 0;
    for (c, amount) in items {
        if left == 0 {
            break;
        }
        if amount <= left {
            left -= amount;
            cost += c;
        } else {
            cost += (c * left).div_ceil(amount);
            left = 0;
        }
    }
    Some(cost)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knapsack_relaxation() {
        assert_eq!(fractional_knapsack(vec![(10, 60), (20, 100), (30, 120)], 50), 240);
        assert_eq!(fractional_knapsack(vec![(0, 5), (4, 4)], 2), 7);
        assert_eq!(fractional_knapsack(vec![], 9), 0);
    }

    #[test]
    fn cover_relaxation() {
        assert_eq!(fractional_cover(vec![(10, 1), (3, 3)], 4), Some(13));
        assert_eq!(fractional_cover(vec![(10, 4)], 3), Some(8));
        assert_eq!(fractional_cover(vec![(1, 1)], 2), None);
        assert_eq!(fractional_cover(vec![], 0), Some(0));
    }
}
