use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sparsehard"));
    c.env_remove("SPARSEHARD_CAP_MB");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn ratio(v: &Value) -> (i64, i64) {
    (v["num"].as_i64().unwrap(), v["den"].as_i64().unwrap())
}

struct Scratch(TempDir);

impl Scratch {
    fn new() -> Self {
        Scratch(tempfile::tempdir().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn s(&self, name: &str) -> String {
        self.path(name).to_string_lossy().into_owned()
    }
}

#[test]
fn generation_is_deterministic_per_seed() {
    let d = Scratch::new();
    for name in ["a.json", "b.json"] {
        let out = run(&["--seed", "7", "--out", &d.s(name), "generate", "--family", "random-unique", "--reduction", "unique", "--ell", "4"]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    assert_eq!(std::fs::read(d.path("a.json")).unwrap(), std::fs::read(d.path("b.json")).unwrap());

    let other = run(&["--seed", "8", "--out", &d.s("c.json"), "generate", "--family", "random-unique", "--reduction", "unique", "--ell", "4"]);
    assert_eq!(code(&other), 0);
    assert_ne!(std::fs::read(d.path("a.json")).unwrap(), std::fs::read(d.path("c.json")).unwrap());
}

#[test]
fn too_few_layers_is_a_validation_error() {
    let out = run(&["generate", "--family", "planted-unique", "--labels", "5", "--reduction", "unique", "--ell", "2"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("exceed"), "{}", stderr(&out));
}

#[test]
fn two_clause_formula_has_two_left_vertices() {
    let d = Scratch::new();
    let out = run(&["--out", &d.s("f.json"), "generate", "--family", "formula", "--clauses", "1,-2,3;2,3,-4"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc = json(&d.path("f.json"));
    assert_eq!(doc["kind"], "label_cover");
    assert_eq!(doc["num_v"], 2);
    assert_eq!(doc["num_w"], 4);
    assert_eq!(doc["sigma_v"], 7);
}

#[test]
fn reducing_a_saved_instance_matches_direct_generation() {
    let d = Scratch::new();
    let lc = run(&["--seed", "5", "--out", &d.s("lc.json"), "generate", "--family", "planted-projection"]);
    assert_eq!(code(&lc), 0);
    let direct = run(&["--seed", "5", "--out", &d.s("direct.json"), "generate", "--family", "planted-projection", "--reduction", "smooth", "--ell", "4"]);
    assert_eq!(code(&direct), 0);
    let reloaded = run(&["--out", &d.s("reloaded.json"), "reduce", &d.s("lc.json"), "--reduction", "smooth", "--ell", "4"]);
    assert_eq!(code(&reloaded), 0, "{}", stderr(&reloaded));
    assert_eq!(std::fs::read(d.path("direct.json")).unwrap(), std::fs::read(d.path("reloaded.json")).unwrap());
    assert_eq!(code(&run(&["verify", "instance", &d.s("reloaded.json")])), 0);
}

#[test]
fn exhaustive_search_over_the_cap_is_a_budget_error() {
    let d = Scratch::new();
    assert_eq!(code(&run(&["--out", &d.s("lc.json"), "generate", "--family", "anti-satisfiable"])), 0);
    let out = run(&["--cap-supports", "5", "solve", &d.s("lc.json"), "--reduction", "two-layered", "--solvers", "oracle"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("cap"), "{}", stderr(&out));
    // Without the oracle the same cap is irrelevant.
    let cheap = run(&["--cap-supports", "5", "solve", &d.s("lc.json"), "--reduction", "two-layered", "--solvers", "omp"]);
    assert_eq!(code(&cheap), 0, "{}", stderr(&cheap));
}

#[test]
fn memory_cap_from_the_environment_is_a_budget_error() {
    let out = bin()
        .args(["generate", "--family", "planted-unique", "--reduction", "unique", "--ell", "4"])
        .env("SPARSEHARD_CAP_MB", "0")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("SPARSEHARD_CAP_MB"));
}

#[test]
fn dimension_cap_is_a_budget_error() {
    let out = run(&["--cap-dim", "10", "verify", "system", "--ell", "4", "--d", "3"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
}

#[test]
fn corrupted_instance_fails_verification_with_the_column() {
    let d = Scratch::new();
    let gen = run(&["--seed", "7", "--out", &d.s("si.json"), "generate", "--family", "planted-unique", "--labels", "2", "--reduction", "unique", "--ell", "2"]);
    assert_eq!(code(&gen), 0);
    assert_eq!(code(&run(&["verify", "instance", &d.s("si.json")])), 0);

    let mut doc = json(&d.path("si.json"));
    let columns = doc["columns"].as_array_mut().unwrap();
    let right = columns.iter().position(|c| c["origin"]["label"]["layer"] == 1).unwrap();
    columns[right]["support"] = columns[0]["support"].clone();
    std::fs::write(d.path("bad.json"), serde_json::to_string(&doc).unwrap()).unwrap();

    let out = run(&["verify", "instance", &d.s("bad.json")]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains(&format!("column {right}:")), "{}", stdout(&out));
}

#[test]
fn unknown_format_version_is_rejected() {
    let d = Scratch::new();
    assert_eq!(code(&run(&["--out", &d.s("lc.json"), "generate", "--family", "planted-unique"])), 0);
    let mut doc = json(&d.path("lc.json"));
    doc["format_version"] = 9.into();
    std::fs::write(d.path("v9.json"), serde_json::to_string(&doc).unwrap()).unwrap();
    let out = run(&["verify", "instance", &d.s("v9.json")]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("format_version"));

    std::fs::write(d.path("junk.json"), "{ not json").unwrap();
    assert_eq!(code(&run(&["verify", "instance", &d.s("junk.json")])), 1);
    assert_eq!(code(&run(&["verify", "instance", &d.s("missing.json")])), 1);
}

#[test]
fn satisfiable_instance_has_zero_completeness_residual() {
    let d = Scratch::new();
    assert_eq!(code(&run(&["--seed", "2", "--out", &d.s("lc.json"), "generate", "--family", "planted-projection"])), 0);
    let out = run(&["--seed", "2", "--out", &d.s("rep.json"), "solve", &d.s("lc.json"), "--reduction", "two-layered", "--solvers", "omp,ols"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rep = json(&d.path("rep.json"));
    assert_eq!(rep["kind"], "gap_report");
    assert_eq!(rep["reference"]["kind"], "perfect");
    assert!(rep["reference"]["normalized"].as_f64().unwrap() < 1e-10);
    assert_eq!(ratio(&rep["reference"]["coverage"]), (1, 1));
    assert!(rep["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));

    let check = run(&["verify", "report", &d.s("rep.json")]);
    assert_eq!(code(&check), 0, "{}", stdout(&check));
}

#[test]
fn anti_satisfiable_instance_keeps_a_positive_optimum() {
    let d = Scratch::new();
    assert_eq!(code(&run(&["--out", &d.s("lc.json"), "generate", "--family", "anti-satisfiable", "--labels", "3"])), 0);
    let out = run(&["--out", &d.s("rep.json"), "solve", &d.s("lc.json"), "--reduction", "two-layered"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rep = json(&d.path("rep.json"));
    let oracle = rep["solvers"].as_array().unwrap().iter().find(|r| r["solver"] == "oracle").unwrap();
    assert!(oracle["residual"].as_f64().unwrap() > 1e-6);
    for row in rep["solvers"].as_array().unwrap() {
        assert!(row["residual"].as_f64().unwrap() >= oracle["residual"].as_f64().unwrap() - 1e-9);
    }
}

#[test]
fn zero_satisfied_reference_misses_a_quarter() {
    let d = Scratch::new();
    assert_eq!(code(&run(&["--out", &d.s("lc.json"), "generate", "--family", "anti-satisfiable", "--labels", "3"])), 0);
    let out = run(&["--out", &d.s("rep.json"), "solve", &d.s("lc.json"), "--reduction", "unique", "--ell", "4", "--solvers", "omp"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rep = json(&d.path("rep.json"));
    let reference = &rep["reference"];
    assert_eq!(reference["kind"], "zero_satisfying");
    assert_eq!(ratio(&reference["coverage_deficit"]), (1, 4));
    assert!(reference["normalized_squared"].as_f64().unwrap() >= 0.25 - 1e-9);
}

#[test]
fn record_output_is_one_json_object_per_line() {
    let out = run(&["--format", "record", "verify", "hadamard", "--m", "3"]);
    assert_eq!(code(&out), 0);
    for line in stdout(&out).lines() {
        serde_json::from_str::<Value>(line).unwrap();
    }
}

#[test]
fn bench_runs_its_suite() {
    let out = run(&["bench", "--trials", "1"]);
    assert_eq!(code(&out), 0, "{}{}", stdout(&out), stderr(&out));
    assert!(stdout(&out).contains("unique zero-satisfied"));
}
