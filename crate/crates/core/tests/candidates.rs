//! Shipped candidate families against a brute-force enumeration over role
//! subsets using an explicit edit distance.

use std::collections::BTreeSet;

use ddguide::instances::build_instance;
use ddguide::population::Population;
use ddguide::universe::{ItemSet, ItemUniverse, MethodUniverse};

const CATEGORIES: [(u32, u32); 7] = [(1, 2), (3, 4), (5, 11), (12, 14), (15, 17), (18, 24), (25, 35)];

/// Single-item insertions, deletions and substitutions needed to turn `a` into `b`.
fn edit_distance(a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> usize {
    let only_a = a.difference(b).count();
    let only_b = b.difference(a).count();
    only_a.max(only_b)
}

fn admissible(c: &BTreeSet<u32>) -> bool {
    CATEGORIES.iter().all(|&(lo, hi)| c.iter().filter(|&&i| (lo..=hi).contains(&i)).count() <= 1)
}

fn oracle(base: &ItemSet, role: &[u32]) -> BTreeSet<Vec<u32>> {
    let base: BTreeSet<u32> = base.iter().collect();
    let mut out = BTreeSet::new();
    for mask in 0u64..1 << role.len() {
        let c: BTreeSet<u32> = role.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &i)| i).collect();
        if edit_distance(&base, &c) <= 1 && admissible(&c) {
            out.insert(c.into_iter().collect());
        }
    }
    out
}

fn empty_pop() -> Population {
    Population::new(ItemUniverse::range(49), MethodUniverse::health_guidance(), vec![]).unwrap()
}

fn roles(id: u8) -> Vec<Vec<u32>> {
    let r = vec![0];
    let v1: Vec<u32> = (1..=17).collect();
    let diab = vec![38, 39, 42, 44, 46, 47, 48];
    let hyp = vec![36, 40, 43];
    let visits: Vec<u32> = (36..=45).collect();
    match id {
        1 => vec![r, v1, diab, hyp],
        2 => vec![r, v1, (18..=35).collect(), visits],
        3 => vec![r, v1, visits.clone(), visits, diab, hyp],
        _ => unreachable!(),
    }
}

#[test]
fn families_match_edit_distance_enumeration() {
    for id in 1..=3 {
        let inst = build_instance(id, empty_pop()).unwrap();
        for (fam, role) in inst.families().zip(roles(id)) {
            let got: BTreeSet<Vec<u32>> = fam.candidates().iter().map(|c| c.as_slice().to_vec()).collect();
            assert_eq!(got, oracle(inst.initial.items(fam.vertex), &role), "instance {id}, vertex {}", fam.vertex);
        }
    }
}

#[test]
fn instance_one_literal_families() {
    let inst = build_instance(1, empty_pop()).unwrap();
    let v3 = inst.diagram.vertex("v3").unwrap();
    let expected: Vec<ItemSet> =
        vec![vec![], vec![36], vec![36, 40], vec![40], vec![40, 43], vec![43]].into_iter().map(ItemSet::from).collect();
    assert_eq!(inst.family(v3).candidates(), expected.as_slice());
    let r = inst.diagram.source();
    assert_eq!(inst.family(r).candidates(), &[ItemSet::empty(), ItemSet::from([0])]);
    let product: u128 = roles(1).iter().zip(inst.families()).map(|(role, f)| oracle(inst.initial.items(f.vertex), role).len() as u128).product();
    assert_eq!(inst.space_size(), product * 4 * 4);
}
