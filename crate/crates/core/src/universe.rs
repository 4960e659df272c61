//! Item and notification-method universes, and the `ItemSet` label type.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ItemId = u32;
pub type MethodId = u32;

/// A finite set of checkup items, kept sorted and deduplicated.
///
/// The derived ordering is lexicographic over the sorted members, so the
/// empty set sorts first and `{0}` < `{0, 1}` < `{1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<ItemId>", into = "Vec<ItemId>")]
pub struct ItemSet(Vec<ItemId>);

impl ItemSet {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[ItemId] {
        &self.0
    }

    pub fn is_subset(&self, other: &ItemSet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    pub fn with(&self, item: ItemId) -> ItemSet {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&item) {
            v.insert(pos, item);
        }
        ItemSet(v)
    }

    pub fn without(&self, item: ItemId) -> ItemSet {
        ItemSet(self.0.iter().copied().filter(|&i| i != item).collect())
    }

    pub fn intersection_len(&self, other: &ItemSet) -> usize {
        self.0.iter().filter(|&&i| other.contains(i)).count()
    }

    /// Items in `self` but not in `other`.
    pub fn difference_len(&self, other: &ItemSet) -> usize {
        self.0.iter().filter(|&&i| !other.contains(i)).count()
    }
}

impl From<Vec<ItemId>> for ItemSet {
    fn from(mut v: Vec<ItemId>) -> Self {
        v.sort_unstable();
        v.dedup();
        ItemSet(v)
    }
}

impl From<ItemSet> for Vec<ItemId> {
    fn from(s: ItemSet) -> Self {
        s.0
    }
}

impl<const N: usize> From<[ItemId; N]> for ItemSet {
    fn from(a: [ItemId; N]) -> Self {
        ItemSet::from(a.to_vec())
    }
}

impl FromIterator<ItemId> for ItemSet {
    fn from_iter<T: IntoIterator<Item = ItemId>>(iter: T) -> Self {
        ItemSet::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl fmt::Display for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// Ordered set of checkup item identifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItemUniverse {
    ids: Vec<ItemId>,
    position: HashMap<ItemId, usize>,
}

impl ItemUniverse {
    pub fn new(ids: Vec<ItemId>) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::InvalidUniverse("item universe is empty".into()));
        }
        let mut position = HashMap::with_capacity(ids.len());
        for (k, &id) in ids.iter().enumerate() {
            if position.insert(id, k).is_some() {
                return Err(Error::InvalidUniverse(format!("duplicate item id {id}")));
            }
        }
        Ok(Self { ids, position })
    }

    /// Items `0..n`.
    pub fn range(n: u32) -> Self {
        Self::new((0..n).collect()).expect("non-empty contiguous range")
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[ItemId] {
        &self.ids
    }

    pub fn position(&self, item: ItemId) -> Result<usize> {
        self.position.get(&item).copied().ok_or(Error::UnknownItem(item))
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.position.contains_key(&item)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Method {
    pub id: MethodId,
    pub cost: u64,
}

/// Ordered set of notification methods with their per-examinee costs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MethodUniverse {
    methods: Vec<Method>,
    position: HashMap<MethodId, usize>,
}

impl MethodUniverse {
    pub fn new(methods: Vec<Method>) -> Result<Self> {
        if methods.is_empty() {
            return Err(Error::InvalidUniverse("method universe is empty".into()));
        }
        let mut position = HashMap::with_capacity(methods.len());
        for (k, m) in methods.iter().enumerate() {
            if position.insert(m.id, k).is_some() {
                return Err(Error::InvalidUniverse(format!("duplicate method id {}", m.id)));
            }
        }
        Ok(Self { methods, position })
    }

    /// The four methods used for health guidance: none, mail, telephone,
    /// mail and telephone, costing 0/200/500/700 per examinee.
    pub fn health_guidance() -> Self {
        Self::new(
            [(0, 0), (1, 200), (2, 500), (3, 700)]
                .into_iter()
                .map(|(id, cost)| Method { id, cost })
                .collect(),
        )
        .expect("static table is valid")
    }

    pub fn len(&self) -> usize {
        self.methods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.methods.is_empty()
    }

    pub fn methods(&self) -> &[Method] {
        &self.methods
    }

    pub fn position(&self, id: MethodId) -> Result<usize> {
        self.position.get(&id).copied().ok_or(Error::UnknownMethod(id))
    }

    pub fn cost(&self, id: MethodId) -> Result<u64> {
        Ok(self.methods[self.position(id)?].cost)
    }

    pub fn cost_at(&self, position: usize) -> u64 {
        self.methods[position].cost
    }

    pub fn id_at(&self, position: usize) -> MethodId {
        self.methods[position].id
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn item_set_order_and_display() {
        let mut v = [ItemSet::from([1]), ItemSet::from([0, 1]), ItemSet::empty(), ItemSet::from([0])];
        v.sort();
        let shown: Vec<String> = v.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["{}", "{0}", "{0,1}", "{1}"]);
    }

    #[test]
    fn item_set_dedups() {
        assert_eq!(ItemSet::from(vec![8, 1, 4, 1]).as_slice(), &[1, 4, 8]);
        assert_eq!(ItemSet::from([1, 4]).with(2).as_slice(), &[1, 2, 4]);
        assert_eq!(ItemSet::from([1, 4]).without(1).as_slice(), &[4]);
    }

    #[test]
    fn universes_reject_duplicates() {
        assert!(ItemUniverse::new(vec![0, 1, 1]).is_err());
        assert!(ItemUniverse::new(vec![]).is_err());
        let dup = vec![Method { id: 0, cost: 0 }, Method { id: 0, cost: 1 }];
        assert!(MethodUniverse::new(dup).is_err());
    }

    #[test]
    fn shipped_costs() {
        let m = MethodUniverse::health_guidance();
        let costs: Vec<u64> = m.methods().iter().map(|m| m.cost).collect();
        assert_eq!(costs, [0, 200, 500, 700]);
    }
}
