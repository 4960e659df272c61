//! Decision-diagram skeletons: validation, topology queries and the
//! `Γ_ℓ(v)` predecessor sets.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcSpec {
    pub tail: String,
    pub head: String,
    pub label: u8,
}

/// Unchecked diagram as it appears in instance files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramSpec {
    pub vertices: Vec<String>,
    pub arcs: Vec<ArcSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Empty,
    DuplicateVertex(String),
    UnknownEndpoint { tail: String, head: String },
    BadLabel { vertex: String, label: u8 },
    Cycle(Vec<String>),
    NoSource,
    MultipleSources(Vec<String>),
    BadOutDegree { vertex: String, degree: usize },
    DuplicateLabel { vertex: String, label: u8 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "diagram has no vertices"),
            Violation::DuplicateVertex(v) => write!(f, "duplicate vertex name {v}"),
            Violation::UnknownEndpoint { tail, head } => write!(f, "arc {tail}->{head} has an unknown endpoint"),
            Violation::BadLabel { vertex, label } => write!(f, "arc label {label} at {vertex} is not 0 or 1"),
            Violation::Cycle(vs) => write!(f, "cycle through {}", vs.join(", ")),
            Violation::NoSource => write!(f, "no source vertex"),
            Violation::MultipleSources(vs) => write!(f, "multiple sources: {}", vs.join(", ")),
            Violation::BadOutDegree { vertex, degree } => {
                write!(f, "vertex {vertex} has {degree} out-arcs (expected 0 or 2)")
            }
            Violation::DuplicateLabel { vertex, label } => write!(f, "duplicate arc label {label} at {vertex}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, pred: impl Fn(&Violation) -> bool) -> bool {
        self.violations.iter().any(pred)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "OK");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl DiagramSpec {
    /// Checks acyclicity, a unique source, and the two-labeled-out-arcs rule.
    pub fn validate(&self) -> ValidationReport {
        let mut out = Vec::new();
        let n = self.vertices.len();
        if n == 0 {
            out.push(Violation::Empty);
            return ValidationReport { violations: out };
        }
        let mut index = HashMap::with_capacity(n);
        for (k, name) in self.vertices.iter().enumerate() {
            if index.insert(name.as_str(), k).is_some() {
                out.push(Violation::DuplicateVertex(name.clone()));
            }
        }
        let mut outgoing: Vec<Vec<(usize, u8)>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for a in &self.arcs {
            let (Some(&t), Some(&h)) = (index.get(a.tail.as_str()), index.get(a.head.as_str())) else {
                out.push(Violation::UnknownEndpoint { tail: a.tail.clone(), head: a.head.clone() });
                continue;
            };
            if a.label > 1 {
                out.push(Violation::BadLabel { vertex: a.tail.clone(), label: a.label });
            }
            outgoing[t].push((h, a.label));
            indeg[h] += 1;
        }

        for (v, arcs) in outgoing.iter().enumerate() {
            match arcs.len() {
                0 => {}
                2 => {
                    if arcs[0].1 == arcs[1].1 {
                        out.push(Violation::DuplicateLabel { vertex: self.vertices[v].clone(), label: arcs[0].1 });
                    }
                }
                d => out.push(Violation::BadOutDegree { vertex: self.vertices[v].clone(), degree: d }),
            }
        }

        let sources: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        match sources.len() {
            0 => out.push(Violation::NoSource),
            1 => {}
            _ => out.push(Violation::MultipleSources(
                sources.iter().map(|&v| self.vertices[v].clone()).collect(),
            )),
        }

        let order = kahn(&outgoing, &indeg);
        if order.len() < n {
            let placed: BTreeSet<usize> = order.into_iter().collect();
            let rest = (0..n).filter(|v| !placed.contains(v)).map(|v| self.vertices[v].clone()).collect();
            out.push(Violation::Cycle(rest));
        }
        ValidationReport { violations: out }
    }
}

/// Deterministic topological order (smallest ready index first). Returns a
/// partial order when the graph has a cycle.
fn kahn(outgoing: &[Vec<(usize, u8)>], indeg: &[usize]) -> Vec<usize> {
    let mut indeg = indeg.to_vec();
    let mut ready: BTreeSet<usize> = (0..indeg.len()).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(indeg.len());
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &(h, _) in &outgoing[v] {
            indeg[h] -= 1;
            if indeg[h] == 0 {
                ready.insert(h);
            }
        }
    }
    order
}

/// A validated decision diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    spec: DiagramSpec,
    index: HashMap<String, VertexId>,
    /// `succ[v] = Some([head via 0, head via 1])` for internal vertices.
    succ: Vec<Option<[VertexId; 2]>>,
    /// `gamma[v][ℓ]`: internal vertices with an ℓ-labeled arc into `v`.
    gamma: Vec<[Vec<VertexId>; 2]>,
    source: VertexId,
    internal: Vec<VertexId>,
    sinks: Vec<VertexId>,
}

impl TryFrom<DiagramSpec> for Diagram {
    type Error = Error;

    fn try_from(spec: DiagramSpec) -> Result<Self> {
        let report = spec.validate();
        if !report.is_ok() {
            return Err(Error::InvalidDiagram(report));
        }
        let n = spec.vertices.len();
        let index: HashMap<String, VertexId> =
            spec.vertices.iter().enumerate().map(|(k, v)| (v.clone(), k)).collect();
        let mut outgoing: Vec<Vec<(usize, u8)>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        let mut succ = vec![None; n];
        let mut gamma = vec![[Vec::new(), Vec::new()]; n];
        for a in &spec.arcs {
            let (t, h) = (index[&a.tail], index[&a.head]);
            outgoing[t].push((h, a.label));
            indeg[h] += 1;
            let slot = succ[t].get_or_insert([usize::MAX; 2]);
            slot[a.label as usize] = h;
            gamma[h][a.label as usize].push(t);
        }
        for g in &mut gamma {
            g[0].sort_unstable();
            g[0].dedup();
            g[1].sort_unstable();
            g[1].dedup();
        }
        let order = kahn(&outgoing, &indeg);
        let source = order[0];
        let internal = order.iter().copied().filter(|&v| succ[v].is_some()).collect();
        let sinks = (0..n).filter(|&v| succ[v].is_none()).collect();
        Ok(Self { spec, index, succ, gamma, source, internal, sinks })
    }
}

impl Diagram {
    pub fn spec(&self) -> &DiagramSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.spec.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spec.vertices.is_empty()
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    /// Internal vertices `U` in topological order.
    pub fn internal(&self) -> &[VertexId] {
        &self.internal
    }

    /// Sinks `S` in vertex-index order.
    pub fn sinks(&self) -> &[VertexId] {
        &self.sinks
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.succ[v].is_none()
    }

    /// Pinned vertex order: `U` in topological order, then `S`.
    pub fn pinned_order(&self) -> Vec<VertexId> {
        self.internal.iter().chain(self.sinks.iter()).copied().collect()
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.spec.vertices[v]
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Head of the `label`-arc leaving `u`, or `None` if `u` is a sink.
    pub fn successor(&self, u: VertexId, label: bool) -> Option<VertexId> {
        self.succ[u].map(|s| s[label as usize])
    }

    /// `Γ_ℓ(v)`: the internal vertices with an arc into `v` labeled `label`.
    pub fn gamma(&self, v: VertexId, label: bool) -> Result<&[VertexId]> {
        self.gamma
            .get(v)
            .map(|g| g[label as usize].as_slice())
            .ok_or_else(|| Error::UnknownVertex(format!("#{v}")))
    }
}
