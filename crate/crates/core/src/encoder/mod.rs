//! The 0/1 integer program over `p, q, α, β, γ, z`, plus the maps between
//! assignments and variable points.
//!
//! Variables are laid out in blocks: `p` (internal vertices in topological
//! order, candidates in canonical order), `q` (sinks × methods), `α`
//! (types × vertices), `β` (types × internal vertices × label), `γ`
//! (types × sinks × methods) and `z` (types × methods). Rows come in the
//! fixed family order assignment, routing, linking, sink, aggregation,
//! followed by the setting's side constraints.

mod lp;

pub use lp::export_lp;

use crate::candidates::partition_by_type;
use crate::diagram::VertexId;
use crate::error::{Error, Result};
use crate::eval::{route, Assignment, Label};
use crate::instance::{Instance, Setting};
use crate::universe::{ItemSet, MethodId};

pub type VarId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    P { u: VertexId, c: usize },
    Q { s: VertexId, m: usize },
    Alpha { t: usize, v: VertexId },
    Beta { t: usize, u: VertexId, label: bool },
    Gamma { t: usize, s: VertexId, m: usize },
    Z { t: usize, m: usize },
}

impl VarKind {
    pub fn name(&self) -> String {
        match *self {
            VarKind::P { u, c } => format!("p_u{u}_c{c}"),
            VarKind::Q { s, m } => format!("q_s{s}_m{m}"),
            VarKind::Alpha { t, v } => format!("a_t{t}_v{v}"),
            VarKind::Beta { t, u, label } => format!("b_t{t}_u{u}_l{}", label as u8),
            VarKind::Gamma { t, s, m } => format!("g_t{t}_s{s}_m{m}"),
            VarKind::Z { t, m } => format!("z_t{t}_m{m}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Le => "<=",
            Cmp::Ge => ">=",
            Cmp::Eq => "=",
        }
    }

    fn holds(self, lhs: f64, rhs: f64) -> bool {
        const EPS: f64 = 1e-9;
        match self {
            Cmp::Le => lhs <= rhs + EPS,
            Cmp::Ge => lhs >= rhs - EPS,
            Cmp::Eq => (lhs - rhs).abs() <= EPS,
        }
    }
}

/// Identifies a row; also determines its exported name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    AssignInternal { u: VertexId },
    AssignSink { s: VertexId },
    Root { t: usize },
    ReachUpper { t: usize, v: VertexId },
    ReachLower { t: usize, v: VertexId, w: VertexId, label: bool },
    LinkAlpha { t: usize, u: VertexId, label: bool },
    LinkChoice { t: usize, u: VertexId, label: bool },
    LinkLower { t: usize, u: VertexId, label: bool },
    SinkChoice { t: usize, s: VertexId, m: usize },
    SinkReach { t: usize, s: VertexId, m: usize },
    SinkLower { t: usize, s: VertexId, m: usize },
    MethodUpper { t: usize, m: usize },
    MethodLower { t: usize, s: VertexId, m: usize },
    Budget,
    Similarity,
    Response,
    Improvement,
}

/// Constraint family a row belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowFamily {
    Assignment,
    Routing,
    Linking,
    Sink,
    Aggregation,
    Objective,
}

impl RowKind {
    pub fn family(&self) -> RowFamily {
        use RowKind::*;
        match self {
            AssignInternal { .. } | AssignSink { .. } => RowFamily::Assignment,
            Root { .. } | ReachUpper { .. } | ReachLower { .. } => RowFamily::Routing,
            LinkAlpha { .. } | LinkChoice { .. } | LinkLower { .. } => RowFamily::Linking,
            SinkChoice { .. } | SinkReach { .. } | SinkLower { .. } => RowFamily::Sink,
            MethodUpper { .. } | MethodLower { .. } => RowFamily::Aggregation,
            Budget | Similarity | Response | Improvement => RowFamily::Objective,
        }
    }

    pub fn name(&self) -> String {
        use RowKind::*;
        match *self {
            AssignInternal { u } => format!("assign_u{u}"),
            AssignSink { s } => format!("assign_s{s}"),
            Root { t } => format!("root_t{t}"),
            ReachUpper { t, v } => format!("reach_t{t}_v{v}"),
            ReachLower { t, v, w, label } => format!("enter_t{t}_v{v}_w{w}_l{}", label as u8),
            LinkAlpha { t, u, label } => format!("link_a_t{t}_u{u}_l{}", label as u8),
            LinkChoice { t, u, label } => format!("link_p_t{t}_u{u}_l{}", label as u8),
            LinkLower { t, u, label } => format!("link_lo_t{t}_u{u}_l{}", label as u8),
            SinkChoice { t, s, m } => format!("sink_q_t{t}_s{s}_m{m}"),
            SinkReach { t, s, m } => format!("sink_a_t{t}_s{s}_m{m}"),
            SinkLower { t, s, m } => format!("sink_lo_t{t}_s{s}_m{m}"),
            MethodUpper { t, m } => format!("method_t{t}_m{m}"),
            MethodLower { t, s, m } => format!("method_lo_t{t}_s{s}_m{m}"),
            Budget => "budget".into(),
            Similarity => "target_obj1".into(),
            Response => "target_obj2".into(),
            Improvement => "target_obj3".into(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinExpr {
    pub terms: Vec<(VarId, f64)>,
}

impl LinExpr {
    fn add(&mut self, var: VarId, coef: f64) {
        if coef != 0.0 {
            self.terms.push((var, coef));
        }
    }

    pub fn eval(&self, point: &VariablePoint) -> f64 {
        self.terms.iter().filter(|(v, _)| point.get(*v)).map(|(_, c)| c).sum()
    }

    /// Merges repeated variables, keeping first-occurrence order.
    fn merged(self) -> LinExpr {
        let mut out: Vec<(VarId, f64)> = Vec::with_capacity(self.terms.len());
        let mut seen: std::collections::HashMap<VarId, usize> = std::collections::HashMap::new();
        for (v, c) in self.terms {
            match seen.get(&v) {
                Some(&k) => out[k].1 += c,
                None => {
                    seen.insert(v, out.len());
                    out.push((v, c));
                }
            }
        }
        out.retain(|(_, c)| *c != 0.0);
        LinExpr { terms: out }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub kind: RowKind,
    pub expr: LinExpr,
    pub cmp: Cmp,
    pub rhs: f64,
}

impl Row {
    pub fn holds(&self, point: &VariablePoint) -> bool {
        self.cmp.holds(self.expr.eval(point), self.rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// Per-kind variable counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VarCounts {
    pub p: usize,
    pub q: usize,
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    pub z: usize,
}

impl VarCounts {
    pub fn total(&self) -> usize {
        self.p + self.q + self.alpha + self.beta + self.gamma + self.z
    }
}

/// A 0/1 valuation of every model variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariablePoint(Vec<bool>);

impl VariablePoint {
    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn get(&self, v: VarId) -> bool {
        self.0[v]
    }

    pub fn set(&mut self, v: VarId, value: bool) {
        self.0[v] = value;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Objective and constraint expressions as linear forms over the variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Expressions {
    pub cost: LinExpr,
    pub obj1: LinExpr,
    pub obj2: LinExpr,
    pub obj3: LinExpr,
}

#[derive(Clone, Debug)]
pub struct IpModel {
    pub setting: Setting,
    pub sense: Sense,
    pub objective: LinExpr,
    pub rows: Vec<Row>,
    pub expressions: Expressions,
    vars: Vec<VarKind>,
    layout: Layout,
    /// For each p-variable its label; for each q-variable its method id.
    p_labels: Vec<ItemSet>,
    q_methods: Vec<MethodId>,
}

#[derive(Clone, Debug)]
struct Layout {
    n_vertices: usize,
    n_methods: usize,
    internal: Vec<VertexId>,
    sinks: Vec<VertexId>,
    /// Vertex id -> position within `internal` / `sinks`.
    u_pos: Vec<usize>,
    s_pos: Vec<usize>,
    /// Start of each internal vertex's p block, plus block lengths.
    p_start: Vec<usize>,
    p_len: Vec<usize>,
    q0: usize,
    alpha0: usize,
    beta0: usize,
    gamma0: usize,
    z0: usize,
    end: usize,
}

impl Layout {
    fn p(&self, u: VertexId, c: usize) -> VarId {
        debug_assert!(c < self.p_len[self.u_pos[u]]);
        self.p_start[self.u_pos[u]] + c
    }
    fn q(&self, s: VertexId, m: usize) -> VarId {
        self.q0 + self.s_pos[s] * self.n_methods + m
    }
    fn alpha(&self, t: usize, v: VertexId) -> VarId {
        self.alpha0 + t * self.n_vertices + v
    }
    fn beta(&self, t: usize, u: VertexId, label: bool) -> VarId {
        self.beta0 + (t * self.internal.len() + self.u_pos[u]) * 2 + label as usize
    }
    fn gamma(&self, t: usize, s: VertexId, m: usize) -> VarId {
        self.gamma0 + (t * self.sinks.len() + self.s_pos[s]) * self.n_methods + m
    }
    fn z(&self, t: usize, m: usize) -> VarId {
        self.z0 + t * self.n_methods + m
    }
}

impl IpModel {
    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn var(&self, v: VarId) -> VarKind {
        self.vars[v]
    }

    pub fn var_name(&self, v: VarId) -> String {
        self.vars[v].name()
    }

    pub fn counts(&self) -> VarCounts {
        let l = &self.layout;
        VarCounts {
            p: l.q0,
            q: l.alpha0 - l.q0,
            alpha: l.beta0 - l.alpha0,
            beta: l.gamma0 - l.beta0,
            gamma: l.z0 - l.gamma0,
            z: l.end - l.z0,
        }
    }

    pub fn p(&self, u: VertexId, c: usize) -> VarId {
        self.layout.p(u, c)
    }
    pub fn q(&self, s: VertexId, m: usize) -> VarId {
        self.layout.q(s, m)
    }
    pub fn alpha(&self, t: usize, v: VertexId) -> VarId {
        self.layout.alpha(t, v)
    }
    pub fn beta(&self, t: usize, u: VertexId, label: bool) -> VarId {
        self.layout.beta(t, u, label)
    }
    pub fn gamma(&self, t: usize, s: VertexId, m: usize) -> VarId {
        self.layout.gamma(t, s, m)
    }
    pub fn z(&self, t: usize, m: usize) -> VarId {
        self.layout.z(t, m)
    }

    /// Rows violated by `point`.
    pub fn violations(&self, point: &VariablePoint) -> Vec<&Row> {
        self.rows.iter().filter(|r| !r.holds(point)).collect()
    }

    pub fn is_feasible(&self, point: &VariablePoint) -> bool {
        self.rows.iter().all(|r| r.holds(point))
    }

    pub fn objective_value(&self, point: &VariablePoint) -> f64 {
        self.objective.eval(point)
    }

    /// Point corresponding to `phi`: choice variables from the labels,
    /// routing variables from the walk of every type.
    pub fn encode(&self, inst: &Instance, phi: &Assignment) -> Result<VariablePoint> {
        inst.check_feasible(phi)?;
        let l = &self.layout;
        let d = &inst.diagram;
        let pop = &inst.population;
        let mut x = VariablePoint::zeros(self.vars.len());
        for &u in &l.internal {
            let c = inst.family(u).index_of(phi.items(u)).expect("feasible");
            x.set(l.p(u, c), true);
        }
        for &s in &l.sinks {
            x.set(l.q(s, pop.methods().position(phi.method(s))?), true);
        }
        for (t, ty) in pop.types().iter().enumerate() {
            let r = route(d, phi, pop.items(), ty)?;
            for &v in &r.visited {
                x.set(l.alpha(t, v), true);
            }
            for w in r.visited.windows(2) {
                let label = pop.indicator(phi.items(w[0]), ty)?;
                x.set(l.beta(t, w[0], label), true);
            }
            let m = pop.methods().position(r.method)?;
            x.set(l.gamma(t, r.sink, m), true);
            x.set(l.z(t, m), true);
        }
        Ok(x)
    }

    /// Assignment selected by the `p` and `q` blocks of `point`.
    pub fn decode(&self, point: &VariablePoint) -> Result<Assignment> {
        if point.len() != self.vars.len() {
            return Err(Error::Decode(format!("point has {} values, model has {} variables", point.len(), self.vars.len())));
        }
        let l = &self.layout;
        let mut labels = vec![None; l.n_vertices];
        for (k, &u) in l.internal.iter().enumerate() {
            let block = l.p_start[k]..l.p_start[k] + l.p_len[k];
            let on: Vec<VarId> = block.filter(|&v| point.get(v)).collect();
            match on.as_slice() {
                [v] => labels[u] = Some(Label::Items(self.p_labels[*v].clone())),
                [] => return Err(Error::Decode(format!("no candidate selected at vertex #{u}"))),
                _ => return Err(Error::Decode(format!("{} candidates selected at vertex #{u}", on.len()))),
            }
        }
        for &s in &l.sinks {
            let on: Vec<usize> = (0..l.n_methods).filter(|&m| point.get(l.q(s, m))).collect();
            match on.as_slice() {
                [m] => labels[s] = Some(Label::Method(self.q_methods[*m])),
                [] => return Err(Error::Decode(format!("no method selected at sink #{s}"))),
                _ => return Err(Error::Decode(format!("{} methods selected at sink #{s}", on.len()))),
            }
        }
        Ok(Assignment::from_labels(labels.into_iter().map(|l| l.expect("every vertex decoded")).collect()))
    }
}

/// Builds the integer program of `setting` for `inst`.
pub fn build_model(inst: &Instance, setting: Setting) -> Result<IpModel> {
    let d = &inst.diagram;
    let pop = &inst.population;
    let n_types = pop.len();
    let n_methods = pop.methods().len();
    let internal = d.internal().to_vec();
    let sinks = d.sinks().to_vec();

    let mut u_pos = vec![usize::MAX; d.len()];
    let mut s_pos = vec![usize::MAX; d.len()];
    for (k, &u) in internal.iter().enumerate() {
        u_pos[u] = k;
    }
    for (k, &s) in sinks.iter().enumerate() {
        s_pos[s] = k;
    }

    let mut vars = Vec::new();
    let mut p_labels = Vec::new();
    let mut p_start = Vec::with_capacity(internal.len());
    let mut p_len = Vec::with_capacity(internal.len());
    for &u in &internal {
        let fam = inst.family(u);
        if !fam.contains(inst.initial.items(u)) {
            return Err(Error::InitialAssignmentInfeasible(d.name(u).to_string()));
        }
        p_start.push(vars.len());
        p_len.push(fam.len());
        for (c, set) in fam.candidates().iter().enumerate() {
            vars.push(VarKind::P { u, c });
            p_labels.push(set.clone());
        }
    }
    let q0 = vars.len();
    for &s in &sinks {
        for m in 0..n_methods {
            vars.push(VarKind::Q { s, m });
        }
    }
    let alpha0 = vars.len();
    for t in 0..n_types {
        for v in 0..d.len() {
            vars.push(VarKind::Alpha { t, v });
        }
    }
    let beta0 = vars.len();
    for t in 0..n_types {
        for &u in &internal {
            for label in [false, true] {
                vars.push(VarKind::Beta { t, u, label });
            }
        }
    }
    let gamma0 = vars.len();
    for t in 0..n_types {
        for &s in &sinks {
            for m in 0..n_methods {
                vars.push(VarKind::Gamma { t, s, m });
            }
        }
    }
    let z0 = vars.len();
    for t in 0..n_types {
        for m in 0..n_methods {
            vars.push(VarKind::Z { t, m });
        }
    }
    let layout = Layout {
        n_vertices: d.len(),
        n_methods,
        internal,
        sinks,
        u_pos,
        s_pos,
        p_start,
        p_len,
        q0,
        alpha0,
        beta0,
        gamma0,
        z0,
        end: vars.len(),
    };
    let l = &layout;
    let q_methods: Vec<MethodId> = (0..n_methods).map(|m| pop.methods().id_at(m)).collect();

    let mut rows = Vec::new();
    let mut push = |kind: RowKind, terms: Vec<(VarId, f64)>, cmp: Cmp, rhs: f64| {
        rows.push(Row { kind, expr: LinExpr { terms }, cmp, rhs });
    };

    // Assignment.
    for (k, &u) in l.internal.iter().enumerate() {
        let terms = (0..l.p_len[k]).map(|c| (l.p(u, c), 1.0)).collect();
        push(RowKind::AssignInternal { u }, terms, Cmp::Eq, 1.0);
    }
    for &s in &l.sinks {
        let terms = (0..n_methods).map(|m| (l.q(s, m), 1.0)).collect();
        push(RowKind::AssignSink { s }, terms, Cmp::Eq, 1.0);
    }

    // Routing.
    let root = d.source();
    for t in 0..n_types {
        push(RowKind::Root { t }, vec![(l.alpha(t, root), 1.0)], Cmp::Eq, 1.0);
        for v in (0..d.len()).filter(|&v| v != root) {
            let mut upper = vec![(l.alpha(t, v), 1.0)];
            for label in [false, true] {
                for &w in d.gamma(v, label)? {
                    upper.push((l.beta(t, w, label), -1.0));
                }
            }
            push(RowKind::ReachUpper { t, v }, upper, Cmp::Le, 0.0);
            for label in [false, true] {
                for &w in d.gamma(v, label)? {
                    push(
                        RowKind::ReachLower { t, v, w, label },
                        vec![(l.alpha(t, v), 1.0), (l.beta(t, w, label), -1.0)],
                        Cmp::Ge,
                        0.0,
                    );
                }
            }
        }
    }

    // Linking β to α and the chosen candidate.
    for (t, ty) in pop.types().iter().enumerate() {
        for &u in &l.internal {
            let part = partition_by_type(inst.family(u), ty, pop.items())?;
            for label in [false, true] {
                let b = l.beta(t, u, label);
                let a = l.alpha(t, u);
                push(RowKind::LinkAlpha { t, u, label }, vec![(b, 1.0), (a, -1.0)], Cmp::Le, 0.0);
                let mut choice = vec![(b, 1.0)];
                choice.extend(part.part(label).iter().map(|&c| (l.p(u, c), -1.0)));
                push(RowKind::LinkChoice { t, u, label }, choice, Cmp::Le, 0.0);
                let mut lower = vec![(b, 1.0), (a, -1.0)];
                lower.extend(part.part(label).iter().map(|&c| (l.p(u, c), -1.0)));
                push(RowKind::LinkLower { t, u, label }, lower, Cmp::Ge, -1.0);
            }
        }
    }

    // Sinks.
    for t in 0..n_types {
        for &s in &l.sinks {
            for m in 0..n_methods {
                let (g, q, a) = (l.gamma(t, s, m), l.q(s, m), l.alpha(t, s));
                push(RowKind::SinkChoice { t, s, m }, vec![(g, 1.0), (q, -1.0)], Cmp::Le, 0.0);
                push(RowKind::SinkReach { t, s, m }, vec![(g, 1.0), (a, -1.0)], Cmp::Le, 0.0);
                push(RowKind::SinkLower { t, s, m }, vec![(g, 1.0), (q, -1.0), (a, -1.0)], Cmp::Ge, -1.0);
            }
        }
    }

    // Aggregation to z.
    for t in 0..n_types {
        for m in 0..n_methods {
            let mut upper = vec![(l.z(t, m), 1.0)];
            upper.extend(l.sinks.iter().map(|&s| (l.gamma(t, s, m), -1.0)));
            push(RowKind::MethodUpper { t, m }, upper, Cmp::Le, 0.0);
            for &s in &l.sinks {
                push(RowKind::MethodLower { t, s, m }, vec![(l.z(t, m), 1.0), (l.gamma(t, s, m), -1.0)], Cmp::Ge, 0.0);
            }
        }
    }

    // Linearized cost and objectives.
    let mut cost = LinExpr::default();
    let mut obj2 = LinExpr::default();
    let mut obj3 = LinExpr::default();
    for (t, ty) in pop.types().iter().enumerate() {
        let w = ty.weight as f64;
        for m in 0..n_methods {
            cost.add(l.z(t, m), pop.methods().cost_at(m) as f64 * w);
            if ty.responses[m] {
                obj2.add(l.z(t, m), w);
                if ty.improves {
                    obj3.add(l.z(t, m), w);
                }
            }
        }
    }
    let mut obj1 = LinExpr::default();
    for &u in &l.internal {
        let c = inst.family(u).index_of(inst.initial.items(u)).expect("checked above");
        obj1.add(l.p(u, c), 1.0);
    }
    for &s in &l.sinks {
        obj1.add(l.q(s, pop.methods().position(inst.initial.method(s))?), 1.0);
    }

    let t = inst.targets;
    let budget = inst.budget as f64;
    let (sense, objective) = match setting {
        Setting::WeightedSum => {
            let mut e = LinExpr::default();
            for (expr, theta) in [(&obj1, t.similarity), (&obj2, t.response), (&obj3, t.improvement)] {
                if theta == 0 {
                    return Err(Error::InvalidInstance("targets must be positive".into()));
                }
                for &(v, c) in &expr.terms {
                    e.add(v, c / theta as f64);
                }
            }
            push(RowKind::Budget, cost.terms.clone(), Cmp::Le, budget);
            (Sense::Maximize, e.merged())
        }
        Setting::MinCost => {
            push(RowKind::Similarity, obj1.terms.clone(), Cmp::Ge, t.similarity as f64 / 2.0);
            push(RowKind::Response, obj2.terms.clone(), Cmp::Ge, t.response as f64);
            push(RowKind::Improvement, obj3.terms.clone(), Cmp::Ge, t.improvement as f64);
            (Sense::Minimize, cost.clone())
        }
        Setting::MaxSimilarity => {
            push(RowKind::Budget, cost.terms.clone(), Cmp::Le, budget);
            push(RowKind::Response, obj2.terms.clone(), Cmp::Ge, t.response as f64);
            push(RowKind::Improvement, obj3.terms.clone(), Cmp::Ge, t.improvement as f64);
            (Sense::Maximize, obj1.clone())
        }
    };

    Ok(IpModel {
        setting,
        sense,
        objective,
        rows,
        expressions: Expressions { cost, obj1, obj2, obj3 },
        vars,
        layout,
        p_labels,
        q_methods,
    })
}
