//! Assignments on a diagram, routing of examinee types, and the cost and
//! objective functions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{Diagram, VertexId};
use crate::error::{Error, Result};
use crate::population::{item_indicator, ExamineeType, Population};
use crate::universe::{ItemSet, ItemUniverse, MethodId};

/// The label attached to one vertex: an item subset on internal vertices,
/// a single method on sinks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Items(ItemSet),
    Method(MethodId),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Items(c) => write!(f, "{c}"),
            Label::Method(m) => write!(f, "{{{m}}}"),
        }
    }
}

/// A total labeling of a diagram, indexed by vertex id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    labels: Vec<Label>,
}

impl Assignment {
    /// Checks that internal vertices carry item sets and sinks carry methods.
    pub fn new(diagram: &Diagram, labels: Vec<Label>) -> Result<Self> {
        if labels.len() != diagram.len() {
            return Err(Error::IncompleteAssignment(format!(
                "{} labels for {} vertices",
                labels.len(),
                diagram.len()
            )));
        }
        for (v, label) in labels.iter().enumerate() {
            match (diagram.is_sink(v), label) {
                (false, Label::Items(_)) | (true, Label::Method(_)) => {}
                (false, Label::Method(_)) => {
                    return Err(Error::IncompleteAssignment(format!(
                        "internal vertex `{}` needs an item set",
                        diagram.name(v)
                    )))
                }
                (true, Label::Items(_)) => {
                    return Err(Error::IncompleteAssignment(format!("sink `{}` needs a method", diagram.name(v))))
                }
            }
        }
        Ok(Self { labels })
    }

    /// Unchecked constructor for labels already known to match the diagram.
    pub(crate) fn from_labels(labels: Vec<Label>) -> Self {
        Self { labels }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &Label {
        &self.labels[v]
    }

    /// Item set at an internal vertex.
    pub fn items(&self, u: VertexId) -> &ItemSet {
        match &self.labels[u] {
            Label::Items(c) => c,
            Label::Method(_) => panic!("vertex {u} is a sink"),
        }
    }

    /// Method at a sink.
    pub fn method(&self, s: VertexId) -> MethodId {
        match &self.labels[s] {
            Label::Method(m) => *m,
            Label::Items(_) => panic!("vertex {s} is internal"),
        }
    }

    pub fn set(&mut self, v: VertexId, label: Label) {
        assert_eq!(
            matches!(label, Label::Method(_)),
            matches!(self.labels[v], Label::Method(_)),
            "label kind must match the vertex kind"
        );
        self.labels[v] = label;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    pub sink: VertexId,
    pub method: MethodId,
    /// Vertices passed through, from the source to the reached sink inclusive.
    pub visited: Vec<VertexId>,
}

/// Walks `t` from the source, taking the arc labeled `φ(u)(t)` at each
/// internal vertex, until a sink is reached.
pub fn route(diagram: &Diagram, phi: &Assignment, items: &ItemUniverse, t: &ExamineeType) -> Result<Route> {
    let mut v = diagram.source();
    let mut visited = vec![v];
    while !diagram.is_sink(v) {
        let bit = item_indicator(items, phi.items(v), t)?;
        v = diagram.successor(v, bit).expect("internal vertex");
        visited.push(v);
        debug_assert!(visited.len() <= diagram.len());
    }
    Ok(Route { sink: v, method: phi.method(v), visited })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Metrics {
    pub cost: u64,
    pub obj1: u64,
    pub obj2: u64,
    pub obj3: u64,
}

impl fmt::Display for Metrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cost={} obj1={} obj2={} obj3={}", self.cost, self.obj1, self.obj2, self.obj3)
    }
}

/// Number of vertices whose label is unchanged from `initial`.
pub fn similarity(phi: &Assignment, initial: &Assignment) -> u64 {
    phi.labels.iter().zip(&initial.labels).filter(|(a, b)| a == b).count() as u64
}

/// Cost and the three objectives of `phi` against `initial` over `pop`.
pub fn evaluate(diagram: &Diagram, phi: &Assignment, initial: &Assignment, pop: &Population) -> Result<Metrics> {
    let mut m = Metrics { obj1: similarity(phi, initial), ..Metrics::default() };
    for t in pop.types() {
        let r = route(diagram, phi, pop.items(), t)?;
        let pos = pop.methods().position(r.method)?;
        m.cost += pop.methods().cost_at(pos) * t.weight;
        if t.responses[pos] {
            m.obj2 += t.weight;
            if t.improves {
                m.obj3 += t.weight;
            }
        }
    }
    Ok(m)
}
