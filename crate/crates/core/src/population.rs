//! Examinee types and the weighted population they form.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::universe::{ItemSet, ItemUniverse, MethodId, MethodUniverse};

/// One row of the population.
///
/// `items` is indexed by item-universe position, `responses` by
/// method-universe position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExamineeType {
    pub id: u32,
    pub weight: u64,
    pub items: Vec<bool>,
    pub responses: Vec<bool>,
    pub improves: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Population {
    items: ItemUniverse,
    methods: MethodUniverse,
    types: Vec<ExamineeType>,
}

impl Population {
    pub fn new(items: ItemUniverse, methods: MethodUniverse, types: Vec<ExamineeType>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(types.len());
        for t in &types {
            if !seen.insert(t.id) {
                return Err(Error::InvalidPopulation(format!("duplicate type id {}", t.id)));
            }
            if t.weight == 0 {
                return Err(Error::InvalidPopulation(format!("type {} has weight 0", t.id)));
            }
            if t.items.len() != items.len() {
                return Err(Error::InvalidPopulation(format!(
                    "type {} has {} item bits, universe has {}",
                    t.id,
                    t.items.len(),
                    items.len()
                )));
            }
            if t.responses.len() != methods.len() {
                return Err(Error::InvalidPopulation(format!(
                    "type {} has {} response bits, universe has {}",
                    t.id,
                    t.responses.len(),
                    methods.len()
                )));
            }
        }
        Ok(Self { items, methods, types })
    }

    pub fn items(&self) -> &ItemUniverse {
        &self.items
    }

    pub fn methods(&self) -> &MethodUniverse {
        &self.methods
    }

    pub fn types(&self) -> &[ExamineeType] {
        &self.types
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn total_weight(&self) -> u64 {
        self.types.iter().map(|t| t.weight).sum()
    }

    /// `c(t)`: whether `t` is positive for at least one item of `c`.
    pub fn indicator(&self, c: &ItemSet, t: &ExamineeType) -> Result<bool> {
        item_indicator(&self.items, c, t)
    }

    pub fn responds(&self, t: &ExamineeType, method: MethodId) -> Result<bool> {
        Ok(t.responses[self.methods.position(method)?])
    }
}

/// Returns true iff some item of `c` is positive for `t`; false for the empty set.
pub fn item_indicator(universe: &ItemUniverse, c: &ItemSet, t: &ExamineeType) -> Result<bool> {
    let mut hit = false;
    for i in c.iter() {
        hit |= t.items[universe.position(i)?];
    }
    Ok(hit)
}
