//! Per-vertex candidate families: the one-edit neighborhood of the initial
//! label, filtered by item categories and the vertex's role.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::diagram::VertexId;
use crate::error::Result;
use crate::population::{item_indicator, ExamineeType};
use crate::universe::{ItemSet, ItemUniverse};

/// Groups of mutually exclusive items; a candidate may hold at most one
/// item of each group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CategoryFamily {
    pub categories: Vec<ItemSet>,
}

impl CategoryFamily {
    /// The seven checkup-value categories: fasting glucose, casual glucose,
    /// HbA1c, diastolic and systolic pressure, urine protein, eGFR.
    pub fn health_checkup() -> Self {
        let cats: [Vec<u32>; 7] = [
            vec![1, 2],
            vec![3, 4],
            (5..=11).collect(),
            vec![12, 13, 14],
            vec![15, 16, 17],
            (18..=24).collect(),
            (25..=35).collect(),
        ];
        Self { categories: cats.into_iter().map(ItemSet::from).collect() }
    }

    pub fn admits(&self, c: &ItemSet) -> bool {
        self.categories.iter().all(|cat| c.intersection_len(cat) <= 1)
    }
}

/// `𝔻_u`: `base` itself plus every set obtained by removing one item,
/// adding one item, or swapping one item for another.
pub fn neighborhood(base: &ItemSet, universe: &ItemUniverse) -> BTreeSet<ItemSet> {
    let mut out = BTreeSet::new();
    out.insert(base.clone());
    let outside: Vec<u32> = universe.ids().iter().copied().filter(|&i| !base.contains(i)).collect();
    for i in base.iter() {
        let removed = base.without(i);
        for &j in &outside {
            out.insert(removed.with(j));
        }
        out.insert(removed);
    }
    for &j in &outside {
        out.insert(base.with(j));
    }
    out
}

pub fn category_filter(family: BTreeSet<ItemSet>, categories: &CategoryFamily) -> BTreeSet<ItemSet> {
    family.into_iter().filter(|c| categories.admits(c)).collect()
}

/// Permitted item subsets `ℂ_u` at one internal vertex, in canonical
/// (lexicographic) order. Candidate indices refer to this order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateFamily {
    pub vertex: VertexId,
    candidates: Vec<ItemSet>,
    pub role: Option<ItemSet>,
}

impl CandidateFamily {
    /// Family from an explicit list; sorted and deduplicated.
    pub fn explicit(vertex: VertexId, candidates: impl IntoIterator<Item = ItemSet>) -> Self {
        let set: BTreeSet<ItemSet> = candidates.into_iter().collect();
        Self { vertex, candidates: set.into_iter().collect(), role: None }
    }

    pub fn candidates(&self) -> &[ItemSet] {
        &self.candidates
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn index_of(&self, c: &ItemSet) -> Option<usize> {
        self.candidates.binary_search(c).ok()
    }

    pub fn contains(&self, c: &ItemSet) -> bool {
        self.index_of(c).is_some()
    }
}

pub fn role_restrict(vertex: VertexId, family: BTreeSet<ItemSet>, role: &ItemSet) -> CandidateFamily {
    CandidateFamily {
        vertex,
        candidates: family.into_iter().filter(|c| c.is_subset(role)).collect(),
        role: Some(role.clone()),
    }
}

/// `ℂ_u` from the initial label: neighborhood, category filter, role restriction.
pub fn build_family(
    vertex: VertexId,
    base: &ItemSet,
    universe: &ItemUniverse,
    categories: &CategoryFamily,
    role: &ItemSet,
) -> CandidateFamily {
    role_restrict(vertex, category_filter(neighborhood(base, universe), categories), role)
}

/// Candidate indices split by the value of `c(t)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypePartition {
    pub negative: Vec<usize>,
    pub positive: Vec<usize>,
}

impl TypePartition {
    pub fn part(&self, label: bool) -> &[usize] {
        if label {
            &self.positive
        } else {
            &self.negative
        }
    }
}

pub fn partition_by_type(fam: &CandidateFamily, t: &ExamineeType, universe: &ItemUniverse) -> Result<TypePartition> {
    let mut p = TypePartition::default();
    for (k, c) in fam.candidates.iter().enumerate() {
        if item_indicator(universe, c, t)? {
            p.positive.push(k);
        } else {
            p.negative.push(k);
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(v: &[&[u32]]) -> Vec<ItemSet> {
        v.iter().map(|s| ItemSet::from(s.to_vec())).collect()
    }

    #[test]
    fn neighborhood_sizes() {
        let u = ItemUniverse::range(49);
        let n = neighborhood(&ItemSet::from([40]), &u);
        assert_eq!(n.len(), 98);
        assert!(n.contains(&ItemSet::empty()));
        assert!(n.contains(&ItemSet::from([40])));
        assert!(n.contains(&ItemSet::from([3, 40])));
        assert!(n.contains(&ItemSet::from([3])));

        let n = neighborhood(&ItemSet::empty(), &u);
        assert_eq!(n.len(), 50);
        assert!(n.iter().all(|c| c.len() <= 1));

        assert_eq!(neighborhood(&ItemSet::from([1, 4, 8]), &u).len(), 188);
    }

    #[test]
    fn category_filter_examples() {
        let cats = CategoryFamily::health_checkup();
        assert!(!cats.admits(&ItemSet::from([5, 6])));
        assert!(cats.admits(&ItemSet::from([1, 4, 8])));
        assert!(cats.admits(&ItemSet::from([40, 43])));
    }

    #[test]
    fn instance_one_families() {
        let u = ItemUniverse::range(49);
        let cats = CategoryFamily::health_checkup();
        let v3 = build_family(3, &ItemSet::from([40]), &u, &cats, &ItemSet::from([36, 40, 43]));
        assert_eq!(v3.candidates(), sets(&[&[], &[36], &[36, 40], &[40], &[40, 43], &[43]]).as_slice());
        let r = build_family(0, &ItemSet::from([0]), &u, &cats, &ItemSet::from([0]));
        assert_eq!(r.candidates(), sets(&[&[], &[0]]).as_slice());
    }

    #[test]
    fn role_universe_is_identity() {
        let u = ItemUniverse::range(12);
        let fam = neighborhood(&ItemSet::from([2, 7]), &u);
        let all = ItemSet::from(u.ids().to_vec());
        let restricted = role_restrict(0, fam.clone(), &all);
        assert_eq!(restricted.candidates(), fam.into_iter().collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn partition_examples() {
        let u = ItemUniverse::range(49);
        let cats = CategoryFamily::health_checkup();
        let v3 = build_family(3, &ItemSet::from([40]), &u, &cats, &ItemSet::from([36, 40, 43]));
        let mut items = vec![false; 49];
        items[36] = true;
        let t = ExamineeType { id: 0, weight: 1, items, responses: vec![false; 4], improves: false };
        let p = partition_by_type(&v3, &t, &u).unwrap();
        let pos: Vec<&ItemSet> = p.positive.iter().map(|&k| &v3.candidates()[k]).collect();
        assert_eq!(pos, vec![&ItemSet::from([36]), &ItemSet::from([36, 40])]);
        assert_eq!(p.negative.len() + p.positive.len(), v3.len());

        let zero = ExamineeType { items: vec![false; 49], ..t };
        let p = partition_by_type(&v3, &zero, &u).unwrap();
        assert!(p.positive.is_empty());
        assert_eq!(p.negative.len(), 6);
    }
}
