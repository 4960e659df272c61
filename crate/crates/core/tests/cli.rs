//! End-to-end runs of the `ddguide` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

use ddguide::instances::{random_toy, ToyParams};
use ddguide::io::InstanceFile;

fn ddguide(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddguide")).args(args).env_remove("DDGUIDE_CONFIG_DIR").output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Generates a population and writes the Instance 1 file next to it.
fn instance_one(dir: &TempDir, n: &str, seed: &str) -> PathBuf {
    let pop = dir.path().join("pop.json");
    let inst = dir.path().join("inst.json");
    assert_eq!(ddguide(&["generate", "--seed", seed, "--n", n, "--out", p(&pop)]).status.code(), Some(0));
    let o = ddguide(&["template", "--id", "1", "--population", "pop.json", "--out", p(&inst)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    inst
}

fn toy_file(dir: &TempDir, seed: u64) -> PathBuf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = random_toy(&mut rng, &ToyParams::default());
    let path = dir.path().join(format!("toy{seed}.json"));
    std::fs::write(&path, InstanceFile::from_instance(&inst).to_json().unwrap()).unwrap();
    path
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn generate_is_deterministic_per_seed() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let c = dir.path().join("c.json");
    for (path, seed) in [(&a, "4"), (&b, "4"), (&c, "5")] {
        let o = ddguide(&["generate", "--seed", seed, "--n", "500", "--out", p(path)]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("total weight: 500"));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn generate_zero_records_warns() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("empty.json");
    let o = ddguide(&["generate", "--n", "0", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
    let v: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["types"].as_array().unwrap().len(), 0);
}

#[test]
fn generate_reads_config_dir() {
    let dir = TempDir::new().unwrap();
    let mut cfg = ddguide::datagen::GenConfig::health_checkup(0, 0);
    cfg.improvement = 0.0;
    std::fs::write(dir.path().join("generator.json"), serde_json::to_string(&cfg).unwrap()).unwrap();
    let out = dir.path().join("pop.json");
    let o = Command::new(env!("CARGO_BIN_EXE_ddguide"))
        .args(["generate", "--n", "300", "--out", p(&out)])
        .env("DDGUIDE_CONFIG_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert!(v["types"].as_array().unwrap().iter().all(|t| t["z"] == false));
}

#[test]
fn encode_is_byte_identical_and_reports_counts() {
    let dir = TempDir::new().unwrap();
    let inst = instance_one(&dir, "200", "1");
    let a = dir.path().join("a.lp");
    let b = dir.path().join("b.lp");
    for setting in ["1", "2", "3"] {
        let o = ddguide(&["encode", "--instance", p(&inst), "--setting", setting, "--out", p(&a)]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(stdout(&o).starts_with("variables: "));
        assert!(stdout(&o).contains("constraints: "));
        ddguide(&["encode", "--instance", p(&inst), "--setting", setting, "--out", p(&b)]);
        let text = std::fs::read_to_string(&a).unwrap();
        assert_eq!(text, std::fs::read_to_string(&b).unwrap());
        let first = if setting == "2" { "Minimize" } else { "Maximize" };
        assert!(text.starts_with(first));
    }
}

#[test]
fn native_and_brute_agree_on_toys() {
    let dir = TempDir::new().unwrap();
    for seed in 0..4 {
        let toy = toy_file(&dir, seed);
        for setting in ["1", "2", "3"] {
            let native = ddguide(&["solve", "--instance", p(&toy), "--setting", setting, "--native"]);
            let brute = ddguide(&["solve", "--instance", p(&toy), "--setting", setting, "--brute"]);
            assert_eq!(native.status.code(), brute.status.code());
            let (n, b) = (report(&native), report(&brute));
            assert_eq!(n["status"], b["status"]);
            assert_eq!(n["objective"], b["objective"]);
            assert_eq!(n["assignment"], b["assignment"]);
            assert_eq!(n["solver"], "native");
            assert_eq!(b["solver"], "brute");
        }
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let toy = toy_file(&dir, 1);
    // Unreachable targets make Setting 2 infeasible.
    let mut file: Value = serde_json::from_str(&std::fs::read_to_string(&toy).unwrap()).unwrap();
    file["targets"] = serde_json::json!([1, 1_000_000, 1_000_000]);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, file.to_string()).unwrap();
    let o = ddguide(&["solve", "--instance", p(&bad), "--setting", "2"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert_eq!(report(&o)["status"], "infeasible");

    let o = ddguide(&["solve", "--instance", p(&toy), "--setting", "1", "--node-limit", "1"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert_eq!(report(&o)["status"], "limit-reached");

    assert_eq!(ddguide(&["solve", "--instance", p(&toy), "--setting", "4"]).status.code(), Some(1));
    assert_eq!(ddguide(&["solve", "--instance", p(&toy), "--setting", "1", "--native", "--brute"]).status.code(), Some(1));
    assert_eq!(ddguide(&["solve", "--instance", "/nonexistent.json", "--setting", "1"]).status.code(), Some(1));
    assert_eq!(ddguide(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(ddguide(&["--help"]).status.code(), Some(0));
}

#[test]
fn solve_writes_report_and_eval_reads_it() {
    let dir = TempDir::new().unwrap();
    let inst = instance_one(&dir, "300", "2");
    let out = dir.path().join("report.json");
    let o = ddguide(&["solve", "--instance", p(&inst), "--setting", "1", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rep: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(rep["status"], "optimal");
    assert_eq!(rep["gap"], 0.0);

    let o = ddguide(&["eval", "--instance", p(&inst), "--assignment", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("Input") && text.contains("Assignment"));
    assert!(text.contains("Setting 1 constraints: satisfied"), "{text}");
}

#[test]
fn eval_of_initial_and_of_free_methods() {
    let dir = TempDir::new().unwrap();
    let inst = instance_one(&dir, "300", "3");
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&inst).unwrap()).unwrap();

    // The initial assignment keeps every label: similarity equals |V| = 6.
    let phi = dir.path().join("phi.json");
    std::fs::write(&phi, file["initial"].to_string()).unwrap();
    let o = ddguide(&["eval", "--instance", p(&inst), "--assignment", p(&phi)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let row = stdout(&o).lines().find(|l| l.starts_with("Assignment")).unwrap().to_string();
    let cells: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(cells[cells.len() - 3], "6", "{row}");

    // Method 0 at both sinks costs nothing.
    let mut free = file["initial"].clone();
    free["s1"] = serde_json::json!(0);
    free["s2"] = serde_json::json!(0);
    std::fs::write(&phi, free.to_string()).unwrap();
    let o = ddguide(&["eval", "--instance", p(&inst), "--assignment", p(&phi)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let row = stdout(&o).lines().find(|l| l.starts_with("Assignment")).unwrap().to_string();
    let cells: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(cells[cells.len() - 4], "0", "{row}");
}

#[test]
fn instance_file_round_trips() {
    let dir = TempDir::new().unwrap();
    let toy = toy_file(&dir, 9);
    let inst = ddguide::io::load_instance(&toy).unwrap();
    let again = InstanceFile::from_instance(&inst).to_json().unwrap();
    assert_eq!(again, std::fs::read_to_string(&toy).unwrap());
}
