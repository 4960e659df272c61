//! The three shipped instance templates and a random toy-instance generator.
//!
//! Template topologies are reconstructions: a chain `r → v1 → … → vk`
//! where each internal vertex's 1-arc continues down the chain (the last
//! one into `s1`) and its 0-arc exits to `s2`. They are plain data and can
//! be replaced through the instance file.

use std::collections::BTreeMap;

use rand::Rng;

use crate::candidates::{build_family, CandidateFamily, CategoryFamily};
use crate::diagram::{ArcSpec, Diagram, DiagramSpec};
use crate::error::{Error, Result};
use crate::eval::{Assignment, Label};
use crate::instance::{Instance, Targets};
use crate::population::{ExamineeType, Population};
use crate::universe::{ItemSet, ItemUniverse, MethodUniverse};

/// Everything about an instance except its population.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceTemplate {
    pub id: Option<u8>,
    pub diagram: DiagramSpec,
    pub roles: BTreeMap<String, ItemSet>,
    pub categories: CategoryFamily,
    pub initial: BTreeMap<String, Label>,
    pub budget: u64,
    pub targets: Targets,
}

/// Chain topology over `internal` with exits to `s1` (1-arc of the last
/// vertex) and `s2` (every 0-arc).
pub fn chain_topology(internal: &[&str]) -> DiagramSpec {
    let mut vertices: Vec<String> = internal.iter().map(|s| s.to_string()).collect();
    vertices.push("s1".into());
    vertices.push("s2".into());
    let mut arcs = Vec::new();
    for (k, &u) in internal.iter().enumerate() {
        let next = internal.get(k + 1).copied().unwrap_or("s1");
        arcs.push(ArcSpec { tail: u.into(), head: next.into(), label: 1 });
        arcs.push(ArcSpec { tail: u.into(), head: "s2".into(), label: 0 });
    }
    DiagramSpec { vertices, arcs }
}

fn items(v: &[u32]) -> Label {
    Label::Items(ItemSet::from(v.to_vec()))
}

fn range(lo: u32, hi: u32) -> ItemSet {
    (lo..=hi).collect()
}

/// Template `id` ∈ {1, 2, 3}.
pub fn template(id: u8) -> Result<InstanceTemplate> {
    let glucose_pressure = range(1, 17);
    let visits = range(36, 45);
    let diabetes_history = ItemSet::from([38, 39, 42, 44, 46, 47, 48]);
    let hypertension = ItemSet::from([36, 40, 43]);
    let (names, roles, initial, budget, targets): (Vec<&str>, Vec<ItemSet>, Vec<Label>, u64, [u64; 3]) = match id {
        1 => (
            vec!["r", "v1", "v2", "v3"],
            vec![ItemSet::from([0]), glucose_pressure, diabetes_history, hypertension],
            vec![items(&[0]), items(&[1, 4, 8]), items(&[44]), items(&[40]), Label::Method(1), Label::Method(0)],
            35_000,
            [6, 15, 9],
        ),
        2 => (
            vec!["r", "v1", "v2", "v3"],
            vec![ItemSet::from([0]), glucose_pressure, range(18, 35), visits],
            vec![items(&[0]), items(&[8]), items(&[23]), items(&[45]), Label::Method(0), Label::Method(1)],
            373_333,
            [6, 160, 96],
        ),
        3 => (
            vec!["r", "v1", "v2", "v3", "v4", "v5"],
            vec![ItemSet::from([0]), glucose_pressure, visits.clone(), visits, diabetes_history, hypertension],
            vec![
                items(&[0]),
                items(&[1, 8]),
                items(&[44]),
                items(&[45]),
                items(&[39]),
                items(&[36]),
                Label::Method(1),
                Label::Method(0),
            ],
            483_000,
            [8, 207, 124],
        ),
        other => return Err(Error::UnknownTemplate(other)),
    };
    let diagram = chain_topology(&names);
    let roles = names.iter().map(|n| n.to_string()).zip(roles).collect();
    let initial = diagram.vertices.iter().cloned().zip(initial).collect();
    Ok(InstanceTemplate {
        id: Some(id),
        diagram,
        roles,
        categories: CategoryFamily::health_checkup(),
        initial,
        budget,
        targets: Targets::from(targets),
    })
}

impl InstanceTemplate {
    /// Resolves names, builds candidate families from roles, and attaches `pop`.
    pub fn build(&self, pop: Population) -> Result<Instance> {
        let diagram = Diagram::try_from(self.diagram.clone())?;
        let initial = resolve_assignment(&diagram, &self.initial)?;
        let mut families = Vec::new();
        for &u in diagram.internal() {
            let name = diagram.name(u);
            let role = self
                .roles
                .get(name)
                .ok_or_else(|| Error::InvalidInstance(format!("no role for `{name}`")))?;
            families.push(build_family(u, initial.items(u), pop.items(), &self.categories, role));
        }
        for name in self.roles.keys() {
            let v = diagram.vertex(name)?;
            if diagram.is_sink(v) {
                return Err(Error::InvalidInstance(format!("role given for sink `{name}`")));
            }
        }
        Instance::new(diagram, pop, families, initial, self.budget, self.targets)
    }
}

/// Builds an assignment from a vertex-name map; every vertex must be present.
pub fn resolve_assignment(diagram: &Diagram, labels: &BTreeMap<String, Label>) -> Result<Assignment> {
    let mut out = Vec::with_capacity(diagram.len());
    for v in 0..diagram.len() {
        let name = diagram.name(v);
        let label = labels
            .get(name)
            .ok_or_else(|| Error::IncompleteAssignment(format!("no label for `{name}`")))?;
        out.push(label.clone());
    }
    for name in labels.keys() {
        diagram.vertex(name)?;
    }
    Assignment::new(diagram, out)
}

/// Vertex-name map of an assignment.
pub fn named_assignment(diagram: &Diagram, phi: &Assignment) -> BTreeMap<String, Label> {
    (0..diagram.len()).map(|v| (diagram.name(v).to_string(), phi.label(v).clone())).collect()
}

/// Builds shipped instance `id` over `pop`.
pub fn build_instance(id: u8, pop: Population) -> Result<Instance> {
    template(id)?.build(pop)
}

/// Shape of randomly generated toy instances.
#[derive(Clone, Debug)]
pub struct ToyParams {
    pub max_internal: usize,
    pub max_sinks: usize,
    pub max_family: usize,
    pub max_types: usize,
    pub n_items: u32,
}

impl Default for ToyParams {
    fn default() -> Self {
        Self { max_internal: 4, max_sinks: 3, max_family: 5, max_types: 50, n_items: 6 }
    }
}

/// A random valid instance with explicit candidate families.
///
/// Budgets and targets are drawn so that the side constraints bind in some
/// instances and are infeasible in others.
pub fn random_toy(rng: &mut impl Rng, params: &ToyParams) -> Instance {
    let n_int = rng.random_range(1..=params.max_internal);
    // 2·n_int arcs must reach every non-source vertex.
    let n_sinks = rng.random_range(2..=params.max_sinks.clamp(2, n_int + 1));
    let diagram = random_diagram(rng, n_int, n_sinks);
    let universe = ItemUniverse::range(params.n_items);
    let methods = MethodUniverse::health_guidance();

    let n_types = rng.random_range(1..=params.max_types);
    let types: Vec<ExamineeType> = (0..n_types)
        .map(|id| ExamineeType {
            id: id as u32,
            weight: rng.random_range(1..=5),
            items: (0..params.n_items).map(|_| rng.random_bool(0.4)).collect(),
            responses: (0..methods.len()).map(|m| m > 0 && rng.random_bool(0.5)).collect(),
            improves: rng.random_bool(0.5),
        })
        .collect();
    let pop = Population::new(universe, methods, types).expect("generated population is valid");

    let mut labels = Vec::with_capacity(diagram.len());
    let mut families = Vec::new();
    for v in 0..diagram.len() {
        if diagram.is_sink(v) {
            labels.push(Label::Method(rng.random_range(0..pop.methods().len()) as u32));
            continue;
        }
        let size = rng.random_range(1..=params.max_family);
        let mut fam: Vec<ItemSet> = Vec::with_capacity(size);
        while fam.len() < size {
            let c: ItemSet = (0..params.n_items).filter(|_| rng.random_bool(0.3)).collect();
            if !fam.contains(&c) {
                fam.push(c);
            }
        }
        labels.push(Label::Items(fam[0].clone()));
        families.push(CandidateFamily::explicit(v, fam));
    }
    let initial = Assignment::new(&diagram, labels).expect("kinds match");

    let total = pop.total_weight();
    let max_cost = total * 700;
    let budget = rng.random_range(0..=max_cost);
    let response = rng.random_range(1..=(total * 7 / 10).max(1));
    let improvement = rng.random_range(1..=response.div_ceil(2).max(1));
    let targets = Targets { similarity: diagram.len() as u64, response, improvement };
    Instance::new(diagram, pop, families, initial, budget, targets).expect("generated instance is valid")
}

fn random_diagram(rng: &mut impl Rng, n_int: usize, n_sinks: usize) -> Diagram {
    let n = n_int + n_sinks;
    let mut vertices: Vec<String> = vec!["r".into()];
    vertices.extend((1..n_int).map(|k| format!("v{k}")));
    vertices.extend((1..=n_sinks).map(|k| format!("s{k}")));
    loop {
        let mut arcs = Vec::new();
        let mut indeg = vec![0; n];
        for u in 0..n_int {
            let a = rng.random_range(u + 1..n);
            let mut b = rng.random_range(u + 1..n);
            while b == a {
                b = rng.random_range(u + 1..n);
            }
            let flip = rng.random_bool(0.5);
            for (head, label) in [(a, flip as u8), (b, !flip as u8)] {
                indeg[head] += 1;
                arcs.push(ArcSpec { tail: vertices[u].clone(), head: vertices[head].clone(), label });
            }
        }
        if indeg[1..].iter().all(|&d| d > 0) {
            let spec = DiagramSpec { vertices: vertices.clone(), arcs };
            return Diagram::try_from(spec).expect("single-source DAG by construction");
        }
    }
}
