//! A complete optimization instance and the three objective settings.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::candidates::CandidateFamily;
use crate::diagram::{Diagram, VertexId};
use crate::error::{Error, Result};
use crate::eval::{evaluate, Assignment, Label, Metrics};
use crate::population::Population;

/// Which optimization problem to solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Setting {
    /// Maximize `Σ obj_i / Θ_i` subject to `cost ≤ B`.
    WeightedSum,
    /// Minimize cost subject to `obj1 ≥ Θ1/2`, `obj2 ≥ Θ2`, `obj3 ≥ Θ3`.
    MinCost,
    /// Maximize `obj1` subject to `cost ≤ B`, `obj2 ≥ Θ2`, `obj3 ≥ Θ3`.
    MaxSimilarity,
}

impl Setting {
    pub const ALL: [Setting; 3] = [Setting::WeightedSum, Setting::MinCost, Setting::MaxSimilarity];

    pub fn id(self) -> u8 {
        match self {
            Setting::WeightedSum => 1,
            Setting::MinCost => 2,
            Setting::MaxSimilarity => 3,
        }
    }

    pub fn maximizes(self) -> bool {
        !matches!(self, Setting::MinCost)
    }
}

impl TryFrom<u8> for Setting {
    type Error = Error;

    fn try_from(id: u8) -> Result<Self> {
        match id {
            1 => Ok(Setting::WeightedSum),
            2 => Ok(Setting::MinCost),
            3 => Ok(Setting::MaxSimilarity),
            other => Err(Error::InvalidSetting(other)),
        }
    }
}

impl From<Setting> for u8 {
    fn from(s: Setting) -> u8 {
        s.id()
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Setting {}", self.id())
    }
}

/// Target values `Θ1, Θ2, Θ3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[u64; 3]", into = "[u64; 3]")]
pub struct Targets {
    pub similarity: u64,
    pub response: u64,
    pub improvement: u64,
}

impl From<[u64; 3]> for Targets {
    fn from(t: [u64; 3]) -> Self {
        Self { similarity: t[0], response: t[1], improvement: t[2] }
    }
}

impl From<Targets> for [u64; 3] {
    fn from(t: Targets) -> Self {
        [t.similarity, t.response, t.improvement]
    }
}

impl Targets {
    /// `Θ1·Θ2·Θ3`, the common denominator of the weighted-sum objective.
    pub fn product(&self) -> u128 {
        self.similarity as u128 * self.response as u128 * self.improvement as u128
    }

    /// `Σ obj_i/Θ_i` scaled by `Θ1Θ2Θ3`.
    pub fn scaled_sum(&self, m: &Metrics) -> u128 {
        let (t1, t2, t3) = (self.similarity as u128, self.response as u128, self.improvement as u128);
        m.obj1 as u128 * t2 * t3 + m.obj2 as u128 * t1 * t3 + m.obj3 as u128 * t1 * t2
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub diagram: Diagram,
    pub population: Population,
    /// One family per internal vertex, indexed by vertex id (`None` on sinks).
    families: Vec<Option<CandidateFamily>>,
    pub initial: Assignment,
    pub budget: u64,
    pub targets: Targets,
}

impl Instance {
    pub fn new(
        diagram: Diagram,
        population: Population,
        families: Vec<CandidateFamily>,
        initial: Assignment,
        budget: u64,
        targets: Targets,
    ) -> Result<Self> {
        let mut slots: Vec<Option<CandidateFamily>> = vec![None; diagram.len()];
        for fam in families {
            if fam.vertex >= diagram.len() || diagram.is_sink(fam.vertex) {
                return Err(Error::InvalidInstance(format!("candidate family for non-internal vertex #{}", fam.vertex)));
            }
            if slots[fam.vertex].is_some() {
                return Err(Error::InvalidInstance(format!(
                    "two candidate families for `{}`",
                    diagram.name(fam.vertex)
                )));
            }
            if fam.is_empty() {
                return Err(Error::InvalidInstance(format!("empty candidate family at `{}`", diagram.name(fam.vertex))));
            }
            for c in fam.candidates() {
                for i in c.iter() {
                    population.items().position(i)?;
                }
            }
            let v = fam.vertex;
            slots[v] = Some(fam);
        }
        for &u in diagram.internal() {
            if slots[u].is_none() {
                return Err(Error::InvalidInstance(format!("no candidate family for `{}`", diagram.name(u))));
            }
        }
        for &s in diagram.sinks() {
            population.methods().position(initial.method(s))?;
        }
        if initial.labels().len() != diagram.len() {
            return Err(Error::IncompleteAssignment("initial assignment size mismatch".into()));
        }
        Ok(Self { diagram, population, families: slots, initial, budget, targets })
    }

    pub fn family(&self, u: VertexId) -> &CandidateFamily {
        self.families[u].as_ref().expect("internal vertex")
    }

    pub fn families(&self) -> impl Iterator<Item = &CandidateFamily> {
        self.diagram.internal().iter().map(|&u| self.family(u))
    }

    /// `|V|`, the natural value of `Θ1`.
    pub fn vertex_count(&self) -> usize {
        self.diagram.len()
    }

    /// Number of assignments in the feasible space (ignoring side constraints).
    pub fn space_size(&self) -> u128 {
        let internal: u128 = self.families().map(|f| f.len() as u128).product();
        let m = self.population.methods().len() as u128;
        self.diagram.sinks().iter().fold(internal, |acc, _| acc.saturating_mul(m))
    }

    pub fn evaluate(&self, phi: &Assignment) -> Result<Metrics> {
        evaluate(&self.diagram, phi, &self.initial, &self.population)
    }

    /// Every internal label is a candidate and every sink method exists.
    pub fn check_feasible(&self, phi: &Assignment) -> Result<()> {
        for &u in self.diagram.internal() {
            let c = phi.items(u);
            if !self.family(u).contains(c) {
                return Err(Error::InfeasibleAssignment {
                    vertex: self.diagram.name(u).to_string(),
                    detail: format!("{c} is not a candidate"),
                });
            }
        }
        for &s in self.diagram.sinks() {
            let m = phi.method(s);
            if self.population.methods().position(m).is_err() {
                return Err(Error::InfeasibleAssignment {
                    vertex: self.diagram.name(s).to_string(),
                    detail: format!("unknown method {m}"),
                });
            }
        }
        Ok(())
    }

    /// Whether `m` satisfies the side constraints of `setting`.
    pub fn satisfies(&self, setting: Setting, m: &Metrics) -> bool {
        let t = &self.targets;
        match setting {
            Setting::WeightedSum => m.cost <= self.budget,
            Setting::MinCost => 2 * m.obj1 >= t.similarity && m.obj2 >= t.response && m.obj3 >= t.improvement,
            Setting::MaxSimilarity => m.cost <= self.budget && m.obj2 >= t.response && m.obj3 >= t.improvement,
        }
    }

    /// Objective of `setting` as a score where larger is better:
    /// the scaled weighted sum, `-cost`, or `obj1`.
    pub fn score(&self, setting: Setting, m: &Metrics) -> i128 {
        match setting {
            Setting::WeightedSum => self.targets.scaled_sum(m) as i128,
            Setting::MinCost => -(m.cost as i128),
            Setting::MaxSimilarity => m.obj1 as i128,
        }
    }

    /// Candidate/method index vector in pinned vertex order.
    pub fn index_vector(&self, phi: &Assignment) -> Result<Vec<usize>> {
        self.diagram
            .pinned_order()
            .into_iter()
            .map(|v| match phi.label(v) {
                Label::Items(c) => self.family(v).index_of(c).ok_or_else(|| Error::InfeasibleAssignment {
                    vertex: self.diagram.name(v).to_string(),
                    detail: format!("{c} is not a candidate"),
                }),
                Label::Method(m) => self.population.methods().position(*m),
            })
            .collect()
    }

    /// Inverse of [`Instance::index_vector`].
    pub fn assignment_from_indices(&self, indices: &[usize]) -> Assignment {
        let mut labels = self.initial.labels().to_vec();
        for (v, &k) in self.diagram.pinned_order().into_iter().zip(indices) {
            labels[v] = if self.diagram.is_sink(v) {
                Label::Method(self.population.methods().id_at(k))
            } else {
                Label::Items(self.family(v).candidates()[k].clone())
            };
        }
        Assignment::new(&self.diagram, labels).expect("kinds preserved")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn setting_ids() {
        for s in Setting::ALL {
            assert_eq!(Setting::try_from(s.id()).unwrap(), s);
        }
        assert!(matches!(Setting::try_from(4), Err(Error::InvalidSetting(4))));
        assert!(Setting::try_from(0).is_err());
    }

    #[test]
    fn scaled_sum_matches_rational() {
        let t = Targets::from([6, 15, 9]);
        let m = Metrics { cost: 0, obj1: 4, obj2: 43, obj3: 27 };
        let exact = 4.0 / 6.0 + 43.0 / 15.0 + 27.0 / 9.0;
        assert!((t.scaled_sum(&m) as f64 / t.product() as f64 - exact).abs() < 1e-12);
    }
}
