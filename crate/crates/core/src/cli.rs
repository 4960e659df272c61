//! Command-line front end.
//!
//! Exit codes: 0 success or optimal, 1 usage or I/O error, 2 infeasible,
//! 3 node or time limit reached.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use crate::datagen::{generate_population, GenConfig};
use crate::encoder::{build_model, export_lp};
use crate::instance::Setting;
use crate::instances::template;
use crate::io::{load_assignment, load_instance, read_json, to_json, InstanceFile, PopulationFile, PopulationSource, Report, Table};
use crate::solver::{brute_force, solve, verify, Limits, Status};

/// Directory searched for `generator.json` when `--config` is not given.
pub const CONFIG_DIR_ENV: &str = "DDGUIDE_CONFIG_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ddguide", version, about = "Optimize label assignments on fixed decision-diagram skeletons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a synthetic population and write it as JSON.
    Generate {
        /// Generator config; defaults to $DDGUIDE_CONFIG_DIR/generator.json, then the built-in table.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of records; defaults to the config's value.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the instance file of a shipped template.
    Template {
        #[arg(long)]
        id: u8,
        /// Population file, referenced by path from the instance.
        #[arg(long)]
        population: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Export the integer program in LP format.
    Encode {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_parser = parse_setting)]
        setting: Setting,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one setting and write a report.
    Solve(SolveArgs),
    /// Evaluate an assignment or a report's assignment.
    Eval {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
    },
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_parser = parse_setting)]
    setting: Setting,
    /// Branch-and-bound (the default).
    #[arg(long, conflicts_with = "brute")]
    native: bool,
    /// Exhaustive enumeration.
    #[arg(long)]
    brute: bool,
    /// Seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    node_limit: Option<u64>,
    /// Report path; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_setting(s: &str) -> Result<Setting, String> {
    let id: u8 = s.parse().map_err(|_| format!("`{s}` is not a setting id"))?;
    Setting::try_from(id).map_err(|e| e.to_string())
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    match cmd {
        Command::Generate { config, seed, n, out: path } => {
            let mut cfg = load_config(config.as_deref())?;
            cfg.seed = seed;
            if let Some(n) = n {
                cfg.records = n;
            }
            let pop = generate_population(&cfg)?;
            if cfg.records == 0 {
                writeln!(err, "warning: zero records requested; the population is empty")?;
            }
            std::fs::write(&path, to_json(&PopulationFile::from_population(&pop))?)
                .with_context(|| format!("writing {}", path.display()))?;
            writeln!(out, "types: {}", pop.len())?;
            writeln!(out, "total weight: {}", pop.total_weight())?;
            Ok(EXIT_OK)
        }
        Command::Template { id, population, out: path } => {
            let file = InstanceFile::from_template(&template(id)?, PopulationSource::Path(population));
            std::fs::write(&path, file.to_json()?).with_context(|| format!("writing {}", path.display()))?;
            writeln!(out, "wrote instance {id} to {}", path.display())?;
            Ok(EXIT_OK)
        }
        Command::Encode { instance, setting, out: path } => {
            let inst = load(&instance)?;
            let model = build_model(&inst, setting)?;
            std::fs::write(&path, export_lp(&model)).with_context(|| format!("writing {}", path.display()))?;
            let c = model.counts();
            writeln!(
                out,
                "variables: {} (p={} q={} alpha={} beta={} gamma={} z={})",
                c.total(),
                c.p,
                c.q,
                c.alpha,
                c.beta,
                c.gamma,
                c.z
            )?;
            writeln!(out, "constraints: {}", model.rows.len())?;
            Ok(EXIT_OK)
        }
        Command::Solve(args) => cmd_solve(args, out, err),
        Command::Eval { instance, assignment } => {
            let inst = load(&instance)?;
            let phi = load_assignment(&assignment, &inst.diagram)
                .with_context(|| format!("reading {}", assignment.display()))?;
            if let Err(e) = inst.check_feasible(&phi) {
                writeln!(err, "warning: {e}; evaluating anyway")?;
            }
            let m = inst.evaluate(&phi)?;
            let mut table = Table::new(&inst.diagram);
            table.push("Input", &inst.initial, &inst.evaluate(&inst.initial)?);
            table.push("Assignment", &phi, &m);
            write!(out, "{}", table.render())?;
            for s in Setting::ALL {
                let ok = if inst.satisfies(s, &m) { "satisfied" } else { "violated" };
                writeln!(out, "{s} constraints: {ok}")?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn cmd_solve(args: SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    let inst = load(&args.instance)?;
    let (sol, solver) = if args.brute {
        (brute_force(&inst, args.setting)?, "brute")
    } else {
        if let Some(t) = args.time_limit {
            if !(t >= 0.0 && t.is_finite()) {
                bail!("--time-limit must be a non-negative number of seconds");
            }
        }
        let limits = Limits { nodes: args.node_limit, time: args.time_limit.map(Duration::from_secs_f64) };
        (solve(&inst, args.setting, limits)?, "native")
    };
    let report = verify(&sol, &inst, args.setting);
    if !report.is_clean() {
        writeln!(err, "warning: verification failed:\n{report}")?;
    }
    let text = to_json(&Report::new(&inst, &sol, solver)?)?;
    match &args.out {
        Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None => write!(out, "{text}")?,
    }
    let objective = sol.objective.map_or("-".to_string(), |o| o.to_string());
    writeln!(err, "{}: {} objective {} ({} nodes)", args.setting, sol.status, objective, sol.stats.nodes)?;
    Ok(match sol.status {
        Status::Optimal => EXIT_OK,
        Status::Infeasible => EXIT_INFEASIBLE,
        Status::LimitReached => EXIT_LIMIT,
    })
}

fn load(path: &Path) -> anyhow::Result<crate::instance::Instance> {
    load_instance(path).with_context(|| format!("loading {}", path.display()))
}

fn load_config(explicit: Option<&Path>) -> anyhow::Result<GenConfig> {
    if let Some(p) = explicit {
        return read_json(p).with_context(|| format!("reading {}", p.display()));
    }
    if let Some(dir) = std::env::var_os(CONFIG_DIR_ENV) {
        let p = Path::new(&dir).join("generator.json");
        if p.exists() {
            return read_json(&p).with_context(|| format!("reading {}", p.display()));
        }
    }
    Ok(GenConfig::health_checkup(0, 0))
}
