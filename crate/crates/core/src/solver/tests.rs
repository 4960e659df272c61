use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::candidates::CandidateFamily;
use crate::diagram::{ArcSpec, Diagram, DiagramSpec};
use crate::error::Error;
use crate::eval::Label;
use crate::instance::Targets;
use crate::instances::{random_toy, ToyParams};
use crate::population::{ExamineeType, Population};
use crate::universe::{ItemSet, ItemUniverse, MethodUniverse};

fn one_step(family: Vec<ItemSet>, types: Vec<ExamineeType>, budget: u64, targets: [u64; 3]) -> Instance {
    let diagram = Diagram::try_from(DiagramSpec {
        vertices: vec!["r".into(), "s1".into(), "s2".into()],
        arcs: vec![
            ArcSpec { tail: "r".into(), head: "s1".into(), label: 1 },
            ArcSpec { tail: "r".into(), head: "s2".into(), label: 0 },
        ],
    })
    .unwrap();
    let pop = Population::new(ItemUniverse::range(2), MethodUniverse::health_guidance(), types).unwrap();
    let initial =
        Assignment::new(&diagram, vec![Label::Items(family[0].clone()), Label::Method(1), Label::Method(0)]).unwrap();
    let fam = CandidateFamily::explicit(0, family);
    Instance::new(diagram, pop, vec![fam], initial, budget, Targets::from(targets)).unwrap()
}

fn ty(id: u32, weight: u64, items: [bool; 2], responses: [bool; 4], improves: bool) -> ExamineeType {
    ExamineeType { id, weight, items: items.to_vec(), responses: responses.to_vec(), improves }
}

fn toys(seed: u64, count: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_toy(&mut rng, &ToyParams::default())).collect()
}

/// Best score over every completion of `prefix`, via the core evaluator.
fn best_completion(inst: &Instance, setting: Setting, searcher: &Searcher, prefix: &[usize]) -> Option<i128> {
    let mut idx = prefix.to_vec();
    let mut best = None;
    fn rec(inst: &Instance, setting: Setting, s: &Searcher, idx: &mut Vec<usize>, best: &mut Option<i128>) {
        if idx.len() == s.depth_limit() {
            let m = inst.evaluate(&inst.assignment_from_indices(idx)).unwrap();
            if inst.satisfies(setting, &m) {
                let sc = inst.score(setting, &m);
                *best = Some(best.map_or(sc, |b: i128| b.max(sc)));
            }
            return;
        }
        for k in 0..s.arity(idx.len()) {
            idx.push(k);
            rec(inst, setting, s, idx, best);
            idx.pop();
        }
    }
    rec(inst, setting, searcher, &mut idx, &mut best);
    best
}

#[test]
fn matches_brute_force_on_toys() {
    let mut feasible = 0;
    for inst in toys(17, 60) {
        for setting in Setting::ALL {
            let native = solve(&inst, setting, Limits::default()).unwrap();
            let oracle = brute_force(&inst, setting).unwrap();
            assert_eq!(native.status, oracle.status);
            assert_eq!(native.objective, oracle.objective);
            assert_eq!(native.assignment, oracle.assignment);
            assert_eq!(native.metrics, oracle.metrics);
            assert!(verify(&native, &inst, setting).is_clean());
            feasible += (native.status == Status::Optimal) as usize;
        }
    }
    // The generator must exercise both outcomes.
    assert!(feasible > 30 && feasible < 170, "{feasible} feasible runs");
}

#[test]
fn optimal_branch_is_never_pruned() {
    for inst in toys(23, 40) {
        for setting in Setting::ALL {
            let oracle = brute_force(&inst, setting).unwrap();
            let Some(phi) = &oracle.assignment else { continue };
            let best = inst.score(setting, oracle.metrics.as_ref().unwrap());
            let searcher = Searcher::new(&inst, setting).unwrap();
            let idx = inst.index_vector(phi).unwrap();
            for d in 0..=idx.len() {
                match searcher.bound(&searcher.state(&idx[..d]).unwrap()) {
                    Bound::Score(b) => assert!(b >= best, "depth {d}: bound {b} < optimum {best}"),
                    Bound::Infeasible => panic!("optimal prefix of depth {d} declared infeasible"),
                }
            }
        }
    }
}

#[test]
fn bound_dominates_completions_of_random_prefixes() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for inst in toys(31, 40) {
        for setting in Setting::ALL {
            let searcher = Searcher::new(&inst, setting).unwrap();
            for _ in 0..5 {
                let depth = rng.random_range(0..=searcher.depth_limit());
                let prefix: Vec<usize> = (0..depth).map(|d| rng.random_range(0..searcher.arity(d))).collect();
                let bound = searcher.bound(&searcher.state(&prefix).unwrap());
                match (bound, best_completion(&inst, setting, &searcher, &prefix)) {
                    (Bound::Score(b), Some(best)) => assert!(b >= best),
                    (Bound::Infeasible, Some(best)) => panic!("feasible completion {best} declared infeasible"),
                    (_, None) => {}
                }
            }
        }
    }
}

#[test]
fn bound_is_exact_on_complete_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for inst in toys(41, 30) {
        for setting in Setting::ALL {
            let searcher = Searcher::new(&inst, setting).unwrap();
            let idx: Vec<usize> = (0..searcher.depth_limit()).map(|d| rng.random_range(0..searcher.arity(d))).collect();
            let state = searcher.state(&idx).unwrap();
            let m = inst.evaluate(&inst.assignment_from_indices(&idx)).unwrap();
            assert_eq!(searcher.metrics(&state), m);
            let expected = if inst.satisfies(setting, &m) { Bound::Score(inst.score(setting, &m)) } else { Bound::Infeasible };
            assert_eq!(searcher.bound(&state), expected);
        }
    }
}

#[test]
fn repeated_solves_are_identical() {
    for inst in toys(43, 10) {
        for setting in Setting::ALL {
            let a = solve(&inst, setting, Limits::default()).unwrap();
            let b = solve(&inst, setting, Limits::default()).unwrap();
            assert_eq!(a.assignment, b.assignment);
            assert_eq!(a.objective, b.objective);
            assert_eq!(a.stats.nodes, b.stats.nodes);
        }
    }
}

#[test]
fn singleton_space() {
    let inst = one_step(vec![ItemSet::from([0])], vec![ty(0, 1, [true, false], [false, true, false, false], true)], 0, [3, 1, 1]);
    // Only s1 is reached; Setting 2 needs a response, so s1 must carry method 1.
    let sol = solve(&inst, Setting::MinCost, Limits::default()).unwrap();
    assert_eq!(sol.status, Status::Optimal);
    let phi = sol.assignment.unwrap();
    assert_eq!(phi.method(1), 1);
    assert_eq!(phi.method(2), 0);
    assert_eq!(sol.objective.unwrap(), Objective { numerator: 200, denominator: 1 });
}

#[test]
fn unreachable_response_target_is_infeasible() {
    let inst = one_step(
        vec![ItemSet::from([0]), ItemSet::from([1])],
        vec![ty(0, 2, [true, false], [false, true, true, true], true), ty(1, 3, [false, true], [false; 4], false)],
        10_000,
        [3, 6, 1],
    );
    for setting in [Setting::MinCost, Setting::MaxSimilarity] {
        let sol = solve(&inst, setting, Limits::default()).unwrap();
        assert_eq!(sol.status, Status::Infeasible);
        assert!(sol.assignment.is_none());
        assert!(verify(&sol, &inst, setting).is_clean());
    }
}

#[test]
fn brute_force_counts_and_cap() {
    let inst = one_step(
        vec![ItemSet::from([0]), ItemSet::from([1])],
        vec![ty(0, 1, [true, false], [false; 4], false)],
        0,
        [3, 1, 1],
    );
    assert_eq!(inst.space_size(), 32);
    let sol = brute_force(&inst, Setting::WeightedSum).unwrap();
    assert_eq!(sol.stats.nodes, 32);
    assert!(matches!(brute_force_capped(&inst, Setting::WeightedSum, 31), Err(Error::CapExceeded { size: 32, cap: 31 })));
    // Nothing is affordable at B = 0 except method 0 everywhere, and obj2 = 0 < 1.
    assert_eq!(brute_force(&inst, Setting::MaxSimilarity).unwrap().status, Status::Infeasible);
}

#[test]
fn verify_flags_corruption() {
    let inst = toys(47, 1).pop().unwrap();
    let sol = solve(&inst, Setting::WeightedSum, Limits::default()).unwrap();
    assert!(verify(&sol, &inst, Setting::WeightedSum).is_clean());

    let mut bad = sol.clone();
    let mut phi = bad.assignment.take().unwrap();
    let s = inst.diagram.sinks()[0];
    phi.set(s, Label::Method(9));
    bad.assignment = Some(phi);
    let report = verify(&bad, &inst, Setting::WeightedSum);
    assert!(report.to_string().contains("candidate/constraint violation"), "{report}");

    let mut off = sol.clone();
    off.objective = Some(Objective { numerator: 1, denominator: 7 });
    let report = verify(&off, &inst, Setting::WeightedSum);
    assert!(report.issues.iter().any(|i| matches!(i, Issue::ObjectiveMismatch { .. })));
    assert!(report.to_string().contains("objective mismatch"));

    assert!(!verify(&sol, &inst, Setting::MinCost).is_clean());
}

#[test]
fn node_limit_returns_incumbent_with_gap() {
    let inst = toys(53, 8).into_iter().max_by_key(|i| i.space_size()).unwrap();
    let sol = solve(&inst, Setting::WeightedSum, Limits { nodes: Some(3), time: None }).unwrap();
    assert_eq!(sol.status, Status::LimitReached);
    assert!(sol.stats.nodes <= 3);
    assert!(sol.bound.is_some());
    if sol.assignment.is_some() {
        assert!(sol.gap().unwrap() >= 0.0);
    }
    let full = solve(&inst, Setting::WeightedSum, Limits::default()).unwrap();
    assert!(full.bound.unwrap().value() <= sol.bound.unwrap().value() + 1e-12);
}

#[test]
fn objective_display() {
    let o = Objective::reduced(10, 4);
    assert_eq!(o, Objective { numerator: 5, denominator: 2 });
    assert_eq!(o.to_string(), "5/2 (~2.500000)");
    assert_eq!(Objective::reduced(7, 1).to_string(), "7");
}
