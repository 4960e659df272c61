//! Exhaustive enumeration, used as ground truth.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::instance::{Instance, Setting};

use super::{Solution, Stats, Status};

/// Largest assignment space [`brute_force`] will enumerate.
pub const DEFAULT_BRUTE_CAP: u128 = 5_000_000;

pub fn brute_force(inst: &Instance, setting: Setting) -> Result<Solution> {
    brute_force_capped(inst, setting, DEFAULT_BRUTE_CAP)
}

/// Evaluates every assignment with [`Instance::evaluate`] in increasing
/// index-vector order and keeps the first strictly best one.
pub fn brute_force_capped(inst: &Instance, setting: Setting, cap: u128) -> Result<Solution> {
    let size = inst.space_size();
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    let start = Instant::now();
    let radices: Vec<usize> = inst
        .diagram
        .pinned_order()
        .into_iter()
        .map(|v| if inst.diagram.is_sink(v) { inst.population.methods().len() } else { inst.family(v).len() })
        .collect();
    let mut idx = vec![0; radices.len()];
    let mut best: Option<(i128, Vec<usize>)> = None;
    let mut nodes = 0;
    'outer: loop {
        nodes += 1;
        let phi = inst.assignment_from_indices(&idx);
        let m = inst.evaluate(&phi)?;
        if inst.satisfies(setting, &m) {
            let score = inst.score(setting, &m);
            if best.as_ref().is_none_or(|(b, _)| score > *b) {
                best = Some((score, idx.clone()));
            }
        }
        let mut k = idx.len();
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < radices[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    let status = if best.is_some() { Status::Optimal } else { Status::Infeasible };
    Solution::finish(inst, setting, best.map(|b| b.1), status, None, Stats { nodes, wall_time: start.elapsed() })
}
