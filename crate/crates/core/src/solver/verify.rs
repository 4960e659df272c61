//! Independent re-check of a reported solution.

use std::fmt;

use crate::eval::Metrics;
use crate::instance::{Instance, Setting};

use super::{Objective, Solution, Status};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Issue {
    /// The solution was produced for another setting.
    SettingMismatch { reported: Setting, expected: Setting },
    /// Status and presence of an assignment disagree.
    Status(String),
    /// A label outside its candidate family or method universe, or a
    /// violated side constraint.
    Violation(String),
    MetricsMismatch { reported: Option<Metrics>, recomputed: Metrics },
    ObjectiveMismatch { reported: Option<Objective>, recomputed: Objective },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::SettingMismatch { reported, expected } => {
                write!(f, "setting mismatch: solution is for {reported}, checked against {expected}")
            }
            Issue::Status(s) => write!(f, "status mismatch: {s}"),
            Issue::Violation(s) => write!(f, "candidate/constraint violation: {s}"),
            Issue::MetricsMismatch { reported, recomputed } => match reported {
                Some(r) => write!(f, "metrics mismatch: reported {r}, recomputed {recomputed}"),
                None => write!(f, "metrics mismatch: none reported, recomputed {recomputed}"),
            },
            Issue::ObjectiveMismatch { reported, recomputed } => match reported {
                Some(r) => write!(f, "objective mismatch: reported {r}, recomputed {recomputed}"),
                None => write!(f, "objective mismatch: none reported, recomputed {recomputed}"),
            },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub issues: Vec<Issue>,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return f.write_str("ok");
        }
        for (k, issue) in self.issues.iter().enumerate() {
            if k > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

/// Recomputes metrics with [`Instance::evaluate`] and flags every
/// disagreement with what `sol` reports.
pub fn verify(sol: &Solution, inst: &Instance, setting: Setting) -> VerifyReport {
    let mut issues = Vec::new();
    if sol.setting != setting {
        issues.push(Issue::SettingMismatch { reported: sol.setting, expected: setting });
    }
    let Some(phi) = &sol.assignment else {
        if sol.status == Status::Optimal {
            issues.push(Issue::Status("optimal without an assignment".into()));
        }
        return VerifyReport { issues };
    };
    if sol.status == Status::Infeasible {
        issues.push(Issue::Status("infeasible but an assignment is attached".into()));
    }
    if phi.labels().len() != inst.diagram.len() {
        issues.push(Issue::Violation(format!(
            "{} labels for {} vertices",
            phi.labels().len(),
            inst.diagram.len()
        )));
        return VerifyReport { issues };
    }
    if let Err(e) = inst.check_feasible(phi) {
        issues.push(Issue::Violation(e.to_string()));
        return VerifyReport { issues };
    }
    let m = match inst.evaluate(phi) {
        Ok(m) => m,
        Err(e) => {
            issues.push(Issue::Violation(e.to_string()));
            return VerifyReport { issues };
        }
    };
    if !inst.satisfies(setting, &m) {
        let t = inst.targets;
        issues.push(Issue::Violation(format!(
            "{setting} side constraints fail: {m} with B={} Θ=({}, {}, {})",
            inst.budget, t.similarity, t.response, t.improvement
        )));
    }
    if sol.metrics != Some(m) {
        issues.push(Issue::MetricsMismatch { reported: sol.metrics, recomputed: m });
    }
    let objective = Objective::of(inst, setting, &m);
    if sol.objective != Some(objective) {
        issues.push(Issue::ObjectiveMismatch { reported: sol.objective, recomputed: objective });
    }
    VerifyReport { issues }
}
