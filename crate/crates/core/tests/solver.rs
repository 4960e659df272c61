//! Branch-and-bound against exhaustive search on realistic instances.

use std::time::{Duration, Instant};

use ddguide::candidates::CandidateFamily;
use ddguide::datagen::{generate_population, GenConfig};
use ddguide::instance::{Instance, Setting};
use ddguide::instances::build_instance;
use ddguide::solver::{brute_force, solve, verify, Limits, Status};

/// Instance 1 with every family cut to at most four members, keeping the initial label.
fn truncated(records: usize, seed: u64) -> Instance {
    let pop = generate_population(&GenConfig::health_checkup(records, seed)).unwrap();
    let inst = build_instance(1, pop).unwrap();
    let families: Vec<CandidateFamily> = inst
        .families()
        .map(|f| {
            let init = inst.initial.items(f.vertex).clone();
            let mut keep: Vec<_> = f.candidates().iter().filter(|c| **c != init).take(3).cloned().collect();
            keep.push(init);
            CandidateFamily::explicit(f.vertex, keep)
        })
        .collect();
    Instance::new(inst.diagram.clone(), inst.population.clone(), families, inst.initial.clone(), inst.budget, inst.targets)
        .unwrap()
}

#[test]
fn truncated_instance_one_matches_brute_force() {
    for seed in [1, 2, 3] {
        let inst = truncated(600, seed);
        assert!(inst.space_size() <= 2 * 4 * 4 * 4 * 16);
        for setting in Setting::ALL {
            let start = Instant::now();
            let native = solve(&inst, setting, Limits::default()).unwrap();
            assert!(start.elapsed() < Duration::from_secs(1));
            let brute = brute_force(&inst, setting).unwrap();
            assert_eq!(native.status, brute.status, "seed {seed} {setting}");
            assert_eq!(native.objective, brute.objective, "seed {seed} {setting}");
            assert_eq!(native.assignment, brute.assignment, "seed {seed} {setting}");
            assert!(verify(&native, &inst, setting).is_clean());
        }
    }
}

#[test]
fn time_limit_is_reported() {
    let pop = generate_population(&GenConfig::health_checkup(400, 1)).unwrap();
    let inst = build_instance(3, pop).unwrap();
    let sol = solve(&inst, Setting::WeightedSum, Limits { nodes: None, time: Some(Duration::ZERO) }).unwrap();
    assert_eq!(sol.status, Status::LimitReached);
    assert!(verify(&sol, &inst, Setting::WeightedSum).is_clean());
}
