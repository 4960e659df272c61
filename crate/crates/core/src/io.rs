//! JSON file formats: instances, populations, assignments and solve reports.
//!
//! Writers emit pretty-printed JSON with a trailing newline; every writer
//! is deterministic, so read-then-write reproduces a written file exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::candidates::{build_family, CandidateFamily, CategoryFamily};
use crate::datagen::GenConfig;
use crate::diagram::{Diagram, DiagramSpec};
use crate::error::{Error, Result};
use crate::eval::{Assignment, Label, Metrics};
use crate::instance::{Instance, Setting, Targets};
use crate::instances::{named_assignment, resolve_assignment, InstanceTemplate};
use crate::population::{ExamineeType, Population};
use crate::solver::{Objective, Solution};
use crate::universe::{ItemId, ItemSet, ItemUniverse, Method, MethodUniverse};

/// Pretty JSON plus a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)?)?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn parse_bits(s: &str, what: &str, id: u32) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Format(format!("type {id}: invalid {what} bit `{other}`"))),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeRecord {
    pub id: u32,
    pub weight: u64,
    /// Item bits in item-universe order.
    pub x: String,
    /// Response bits in method-universe order.
    pub y: String,
    pub z: bool,
}

/// A population as stored on disk. Universes may be omitted when the
/// population is inlined in an instance file that declares them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PopulationFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub items: Option<Vec<ItemId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub methods: Option<Vec<Method>>,
    pub types: Vec<TypeRecord>,
}

impl PopulationFile {
    pub fn from_population(pop: &Population) -> Self {
        Self {
            items: Some(pop.items().ids().to_vec()),
            methods: Some(pop.methods().methods().to_vec()),
            types: pop
                .types()
                .iter()
                .map(|t| TypeRecord { id: t.id, weight: t.weight, x: bits(&t.items), y: bits(&t.responses), z: t.improves })
                .collect(),
        }
    }

    /// Builds the population, taking missing universes from `defaults`.
    pub fn to_population(&self, defaults: Option<(&ItemUniverse, &MethodUniverse)>) -> Result<Population> {
        let items = match (&self.items, defaults) {
            (Some(ids), Some((u, _))) if ids.as_slice() != u.ids() => {
                return Err(Error::InvalidPopulation("item universe differs from the instance's".into()))
            }
            (Some(ids), _) => ItemUniverse::new(ids.clone())?,
            (None, Some((u, _))) => u.clone(),
            (None, None) => return Err(Error::Format("population file has no item universe".into())),
        };
        let methods = match (&self.methods, defaults) {
            (Some(ms), Some((_, u))) if ms.as_slice() != u.methods() => {
                return Err(Error::InvalidPopulation("method universe differs from the instance's".into()))
            }
            (Some(ms), _) => MethodUniverse::new(ms.clone())?,
            (None, Some((_, u))) => u.clone(),
            (None, None) => return Err(Error::Format("population file has no method universe".into())),
        };
        let types = self
            .types
            .iter()
            .map(|r| {
                Ok(ExamineeType {
                    id: r.id,
                    weight: r.weight,
                    items: parse_bits(&r.x, "item", r.id)?,
                    responses: parse_bits(&r.y, "response", r.id)?,
                    improves: r.z,
                })
            })
            .collect::<Result<_>>()?;
        Population::new(items, methods, types)
    }

    pub fn load(path: &Path) -> Result<Self> {
        read_json(path)
    }
}

/// Population given inline or as a path relative to the instance file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PopulationSource {
    Path(String),
    Inline(PopulationFile),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template: Option<u8>,
    pub items: Vec<ItemId>,
    pub methods: Vec<Method>,
    pub diagram: DiagramSpec,
    #[serde(default)]
    pub roles: BTreeMap<String, ItemSet>,
    #[serde(default)]
    pub categories: CategoryFamily,
    /// Explicit candidate families; they take precedence over roles.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub candidates: BTreeMap<String, Vec<ItemSet>>,
    pub initial: BTreeMap<String, Label>,
    pub budget: u64,
    pub targets: Targets,
    pub population: PopulationSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GenConfig>,
}

impl InstanceFile {
    /// File for a shipped template with the 49-item and 4-method universes.
    pub fn from_template(t: &InstanceTemplate, population: PopulationSource) -> Self {
        Self {
            template: t.id,
            items: (0..49).collect(),
            methods: MethodUniverse::health_guidance().methods().to_vec(),
            diagram: t.diagram.clone(),
            roles: t.roles.clone(),
            categories: t.categories.clone(),
            candidates: BTreeMap::new(),
            initial: t.initial.clone(),
            budget: t.budget,
            targets: t.targets,
            population,
            generator: None,
        }
    }

    /// File for an in-memory instance, with explicit families and inline population.
    pub fn from_instance(inst: &Instance) -> Self {
        let d = &inst.diagram;
        let mut pop = PopulationFile::from_population(&inst.population);
        pop.items = None;
        pop.methods = None;
        Self {
            template: None,
            items: inst.population.items().ids().to_vec(),
            methods: inst.population.methods().methods().to_vec(),
            diagram: d.spec().clone(),
            roles: BTreeMap::new(),
            categories: CategoryFamily::default(),
            candidates: inst.families().map(|f| (d.name(f.vertex).to_string(), f.candidates().to_vec())).collect(),
            initial: named_assignment(d, &inst.initial),
            budget: inst.budget,
            targets: inst.targets,
            population: PopulationSource::Inline(pop),
            generator: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        read_json(path)
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    /// Resolves everything into an [`Instance`]; relative population paths
    /// are taken from `base_dir`.
    pub fn resolve(&self, base_dir: &Path) -> Result<Instance> {
        let items = ItemUniverse::new(self.items.clone())?;
        let methods = MethodUniverse::new(self.methods.clone())?;
        let pop_file = match &self.population {
            PopulationSource::Inline(p) => p.clone(),
            PopulationSource::Path(p) => {
                let path = PathBuf::from(p);
                PopulationFile::load(&if path.is_absolute() { path } else { base_dir.join(path) })?
            }
        };
        let pop = pop_file.to_population(Some((&items, &methods)))?;
        let diagram = Diagram::try_from(self.diagram.clone())?;
        let initial = resolve_assignment(&diagram, &self.initial)?;
        for name in self.roles.keys().chain(self.candidates.keys()) {
            let v = diagram.vertex(name)?;
            if diagram.is_sink(v) {
                return Err(Error::InvalidInstance(format!("candidates or role given for sink `{name}`")));
            }
        }
        let mut families = Vec::new();
        for &u in diagram.internal() {
            let name = diagram.name(u);
            let fam = if let Some(list) = self.candidates.get(name) {
                CandidateFamily::explicit(u, list.iter().cloned())
            } else if let Some(role) = self.roles.get(name) {
                build_family(u, initial.items(u), &items, &self.categories, role)
            } else {
                return Err(Error::InvalidInstance(format!("no role or candidates for `{name}`")));
            };
            families.push(fam);
        }
        Instance::new(diagram, pop, families, initial, self.budget, self.targets)
    }
}

/// Loads and resolves an instance file.
pub fn load_instance(path: &Path) -> Result<Instance> {
    let file = InstanceFile::load(path)?;
    file.resolve(path.parent().unwrap_or(Path::new(".")))
}

/// Vertex-name → label map, as written by `solve` reports and read by `eval`.
pub type AssignmentFile = BTreeMap<String, Label>;

/// Reads either a bare assignment map or a report carrying an `assignment` key.
pub fn load_assignment(path: &Path, diagram: &Diagram) -> Result<Assignment> {
    parse_assignment(read_json(path)?, diagram).map_err(|e| match e {
        Error::Format(msg) => Error::Format(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// [`load_assignment`] on an already parsed JSON value.
pub fn parse_assignment(value: serde_json::Value, diagram: &Diagram) -> Result<Assignment> {
    let map = match value.get("assignment") {
        Some(serde_json::Value::Null) => return Err(Error::Format("report carries no assignment".into())),
        Some(a) => a.clone(),
        None => value,
    };
    let labels: AssignmentFile = serde_json::from_value(map).map_err(|e| Error::Format(e.to_string()))?;
    resolve_assignment(diagram, &labels)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveRecord {
    pub numerator: u128,
    pub denominator: u128,
    pub value: f64,
}

impl From<Objective> for ObjectiveRecord {
    fn from(o: Objective) -> Self {
        Self { numerator: o.numerator, denominator: o.denominator, value: o.value() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsRecord {
    pub nodes: u64,
    pub wall_time_ms: f64,
}

/// Result table: one column per vertex, then cost and the three objectives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(diagram: &Diagram) -> Self {
        let mut columns = vec![String::new()];
        columns.extend((0..diagram.len()).map(|v| format!("φ({})", diagram.name(v))));
        columns.extend(["cost", "obj1", "obj2", "obj3"].map(String::from));
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, title: &str, phi: &Assignment, m: &Metrics) {
        let mut row = vec![title.to_string()];
        row.extend(phi.labels().iter().map(|l| l.to_string()));
        row.extend([m.cost, m.obj1, m.obj2, m.obj3].map(|x| x.to_string()));
        self.rows.push(row);
    }

    /// Column-aligned plain text.
    pub fn render(&self) -> String {
        let width = |k: usize| {
            std::iter::once(&self.columns[k]).chain(self.rows.iter().map(|r| &r[k])).map(|s| s.chars().count()).max().unwrap_or(0)
        };
        let widths: Vec<usize> = (0..self.columns.len()).map(width).collect();
        let mut out = String::new();
        for line in std::iter::once(&self.columns).chain(&self.rows) {
            let cells: Vec<String> =
                line.iter().zip(&widths).map(|(s, &w)| format!("{s}{}", " ".repeat(w - s.chars().count()))).collect();
            writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub setting: Setting,
    pub solver: String,
    pub status: String,
    pub metrics: Option<Metrics>,
    pub objective: Option<ObjectiveRecord>,
    pub bound: Option<ObjectiveRecord>,
    pub gap: Option<f64>,
    pub assignment: Option<AssignmentFile>,
    pub table: Table,
    pub stats: StatsRecord,
}

impl Report {
    pub fn new(inst: &Instance, sol: &Solution, solver: &str) -> Result<Self> {
        let mut table = Table::new(&inst.diagram);
        table.push("Input", &inst.initial, &inst.evaluate(&inst.initial)?);
        if let (Some(phi), Some(m)) = (&sol.assignment, &sol.metrics) {
            table.push(&sol.setting.to_string(), phi, m);
        }
        Ok(Self {
            setting: sol.setting,
            solver: solver.into(),
            status: sol.status.to_string(),
            metrics: sol.metrics,
            objective: sol.objective.map(Into::into),
            bound: sol.bound.map(Into::into),
            gap: sol.gap(),
            assignment: sol.assignment.as_ref().map(|phi| named_assignment(&inst.diagram, phi)),
            table,
            stats: StatsRecord { nodes: sol.stats.nodes, wall_time_ms: sol.stats.wall_time.as_secs_f64() * 1e3 },
        })
    }
}
