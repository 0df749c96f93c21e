use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use symmatch::count::falling_factorial;
use symmatch::fixtures::{self, TOY_TEMPLATE_LAD, TOY_WORLD_LAD};
use symmatch::Graph;
use symmatch_cli::{parse_manifest, run_entries, write_suite_csv, Format, RunConfig, SUITE_HEADER};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_symmatch"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn toy_files(dir: &Path) -> (PathBuf, PathBuf) {
    (write(dir, "toy_t.lad", TOY_TEMPLATE_LAD), write(dir, "toy_w.lad", TOY_WORLD_LAD))
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON object")
}

fn run_toy(dir: &Path, extra: &[&str]) -> Output {
    let (t, w) = toy_files(dir);
    bin().arg("--template").arg(&t).arg("--world").arg(&w).arg("--directed").args(extra).output().unwrap()
}

#[test]
fn toy_fe_report() {
    let dir = TempDir::new().unwrap();
    let v = json(&run_toy(dir.path(), &["--mode", "fe"]));
    assert_eq!(v["representatives"], 2);
    assert_eq!(v["total"], "18");
    assert_eq!(v["status"], "completed");
    assert!((v["compression_rate"].as_f64().unwrap() - 2.0 / 18.0).abs() < 1e-12);
    assert!(v["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn every_mode_on_the_toy() {
    let dir = TempDir::new().unwrap();
    for (mode, reps) in [("ne", 18), ("te", 9), ("we", 10), ("tewe", 6), ("ce", 5), ("fe", 2), ("nc", 2)] {
        let v = json(&run_toy(dir.path(), &["--mode", mode]));
        assert_eq!(v["representatives"], reps, "{mode}");
        assert_eq!(v["total"], "18", "{mode}");
    }
}

#[test]
fn unsatisfiable_is_not_an_error() {
    let dir = TempDir::new().unwrap();
    let t = write(dir.path(), "t.lad", &fixtures::star(4).to_lad());
    let w = write(dir.path(), "w.lad", &fixtures::star(3).to_lad());
    let out = bin().arg("--template").arg(&t).arg("--world").arg(&w).output().unwrap();
    let v = json(&out);
    assert_eq!(v["representatives"], 0);
    assert_eq!(v["total"], "0");
    assert_eq!(v["status"], "completed");
    assert!(v["compression_rate"].is_null());
}

#[test]
fn tiny_timeout_undercounts() {
    let dir = TempDir::new().unwrap();
    let t = write(dir.path(), "t.lad", &fixtures::star(8).to_lad());
    let w = write(dir.path(), "w.lad", &fixtures::star(16).to_lad());
    let out = bin()
        .arg("--template")
        .arg(&t)
        .arg("--world")
        .arg(&w)
        .args(["--directed", "--mode", "ne", "--timeout", "0.001"])
        .output()
        .unwrap();
    let v = json(&out);
    assert_eq!(v["status"], "timed_out");
    let partial: symmatch::BigCount = v["total"].as_str().unwrap().parse().unwrap();
    assert!(partial < falling_factorial(16, 8));
}

#[test]
fn solutions_stream_adds_up() {
    let dir = TempDir::new().unwrap();
    let sol = dir.path().join("sol.jsonl");
    let v = json(&run_toy(dir.path(), &["--mode", "ce", "--solutions", sol.to_str().unwrap()]));
    let text = fs::read_to_string(&sol).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len() as u64, v["representatives"].as_u64().unwrap());
    let sum: u64 = lines.iter().map(|l| l["count"].as_str().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(sum, 18);
    assert!(lines.iter().all(|l| l["assignments"].as_array().unwrap().len() == 3));
}

#[test]
fn dump_classes_and_structure() {
    let dir = TempDir::new().unwrap();
    let dot = dir.path().join("cs.dot");
    let v = json(&run_toy(dir.path(), &["--dump-classes", "--dump-candidate-structure", dot.to_str().unwrap()]));
    assert_eq!(v["template_classes"], serde_json::json!([[0], [1, 2]]));
    assert_eq!(v["world_classes"], serde_json::json!([[0], [1, 2], [3], [4], [5, 6]]));
    assert_eq!(v["candidate_structure"]["written"], true);
    assert!(fs::read_to_string(&dot).unwrap().starts_with("digraph G {"));

    let capped = dir.path().join("capped.dot");
    let v =
        json(&run_toy(dir.path(), &["--dump-candidate-structure", capped.to_str().unwrap(), "--structure-cap", "3"]));
    assert_eq!(v["candidate_structure"]["written"], false);
    assert!(!capped.exists());
}

#[test]
fn dot_of_first_class() {
    let dir = TempDir::new().unwrap();
    let dot = dir.path().join("first.dot");
    json(&run_toy(dir.path(), &["--mode", "fe", "--dot", dot.to_str().unwrap()]));
    let text = fs::read_to_string(&dot).unwrap();
    // A -> 1, B and C -> {2, 3, 4, 5}
    assert!(text.contains("label=\"1\""));
    assert!(text.contains("label=\"4\""));
    assert_eq!(text.matches(" -> ").count(), 1);
}

#[test]
fn multiplex_input() {
    let dir = TempDir::new().unwrap();
    let t = write(dir.path(), "t.txt", "2 2\n0 1 1 1\n0 1 2 2\n");
    let w = write(dir.path(), "w.txt", "3 2\n0 1 1 1\n0 1 2 3\n0 2 1 1\n0 2 2 1\n");
    let out = bin()
        .arg("--template")
        .arg(&t)
        .arg("--world")
        .arg(&w)
        .args(["--format", "multiplex", "--mode", "ne"])
        .output()
        .unwrap();
    let v = json(&out);
    assert_eq!(v["total"], "1");
}

#[test]
fn bad_input_exits_nonzero() {
    let dir = TempDir::new().unwrap();
    let t = write(dir.path(), "t.lad", "2\n1 5\n0\n");
    let (_, w) = toy_files(dir.path());
    let out = bin().arg("--template").arg(&t).arg("--world").arg(&w).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");

    let out = run_toy(dir.path(), &["--mode", "xyz"]);
    assert!(!out.status.success());
    let out = run_toy(dir.path(), &["--timeout", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin().arg("--template").arg(dir.path().join("missing.lad")).arg("--world").arg(&w).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn deterministic_reports() {
    let dir = TempDir::new().unwrap();
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("wall_time_s");
        v
    };
    for mode in ["ne", "ce", "nc"] {
        let a = strip(json(&run_toy(dir.path(), &["--mode", mode])));
        let b = strip(json(&run_toy(dir.path(), &["--mode", mode])));
        assert_eq!(a, b);
    }
}

#[test]
fn run_config_rejects_nonpositive_timeout() {
    let mut cfg = RunConfig::new("t", "w", symmatch::EquivalenceMode::NE);
    cfg.timeout_secs = -1.0;
    assert!(cfg.validate().is_err());
    cfg.timeout_secs = 5.0;
    assert!(cfg.validate().is_ok());
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect()
}

#[test]
fn suite_of_the_toy() {
    let dir = TempDir::new().unwrap();
    toy_files(dir.path());
    let manifest = write(dir.path(), "manifest.txt", "# toy only\ntoy toy_t.lad toy_w.lad lad directed\n");
    let out_csv = dir.path().join("out.csv");
    let status = bin()
        .arg("--suite")
        .arg(dir.path())
        .arg("--manifest")
        .arg(&manifest)
        .arg("--out")
        .arg(&out_csv)
        .args(["--jobs", "2"])
        .status()
        .unwrap();
    assert!(status.success());
    let rows = read_csv(&out_csv);
    assert_eq!(rows[0], SUITE_HEADER);
    let data: Vec<_> = rows[1..].iter().filter(|r| r[0] == "toy").collect();
    assert_eq!(data.len(), 7);
    assert!(data.iter().all(|r| r[3] == "18" && r[5] == "completed"));
    let agg: Vec<_> = rows[1..].iter().filter(|r| r[0] == "ALL").collect();
    assert_eq!(agg.len(), 7);
    assert!(agg.iter().all(|r| r[5] == "aggregate" && r[7] == "1"));
}

#[test]
fn empty_suite_is_header_only() {
    let dir = TempDir::new().unwrap();
    let manifest = write(dir.path(), "manifest.txt", "\n# nothing\n");
    let out_csv = dir.path().join("out.csv");
    let status = bin()
        .arg("--suite")
        .arg(dir.path())
        .arg("--manifest")
        .arg(&manifest)
        .arg("--out")
        .arg(&out_csv)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(read_csv(&out_csv), vec![SUITE_HEADER.map(String::from).to_vec()]);
}

#[test]
fn missing_suite_files_become_error_rows() {
    let dir = TempDir::new().unwrap();
    toy_files(dir.path());
    let text = "gone nope.lad toy_w.lad\ntoy toy_t.lad toy_w.lad directed\n";
    let entries = parse_manifest(text, dir.path()).unwrap();
    assert_eq!(entries[1].format, Format::Lad);
    assert!(entries[1].directed);
    let modes = [symmatch::EquivalenceMode::FE];
    let rows = run_entries(&entries, &modes, 10.0, Some(1)).unwrap();
    assert!(rows[0].outcome.is_err());
    assert_eq!(rows[1].outcome.as_ref().unwrap().total_count, 18u32.into());
    let mut buf = Vec::new();
    write_suite_csv(&mut buf, &rows, &modes).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[1].starts_with("gone,FE,,,,error,"));
    assert!(lines[3].starts_with("ALL,FE,2,18,"));
    assert!(parse_manifest("just two", dir.path()).is_err());
    assert!(parse_manifest("a b c weird", dir.path()).is_err());
}

fn random_lad(rng: &mut impl Rng, n: usize, density: f64) -> String {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_undirected_edges(n, &edges).to_lad()
}

#[test]
fn random_suite_totals_agree_across_modes() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let mut manifest = String::new();
    for i in 0..50 {
        let tn = rng.gen_range(2..=4);
        let wn = rng.gen_range(4..=8);
        let t = random_lad(&mut rng, tn, 0.5);
        let w = random_lad(&mut rng, wn, 0.5);
        write(dir.path(), &format!("t{i}.lad"), &t);
        write(dir.path(), &format!("w{i}.lad"), &w);
        manifest.push_str(&format!("r{i} t{i}.lad w{i}.lad\n"));
    }
    let entries = parse_manifest(&manifest, dir.path()).unwrap();
    let modes = symmatch::EquivalenceMode::ALL;
    let rows = run_entries(&entries, &modes, 60.0, None).unwrap();
    assert_eq!(rows.len(), 50 * 7);
    for chunk in rows.chunks(7) {
        let totals: Vec<_> = chunk.iter().map(|r| r.outcome.as_ref().unwrap().total_count.clone()).collect();
        assert!(totals.windows(2).all(|w| w[0] == w[1]), "{}: {totals:?}", chunk[0].instance);
    }
}
