use std::path::Path;

use groupapprox_cli::{run_with, Env, EXIT_LIMIT, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};
use serde_json::Value;

struct Run {
    status: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn run_env(args: &[&str], env: &Env) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("groupapprox").chain(args.iter().copied());
    let status = run_with(argv, env, &mut out, &mut err);
    Run {
        status,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn run(args: &[&str]) -> Run {
    run_env(args, &Env::default())
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(doc: &Value) {
    let v = schema();
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{errors:#?}\n{doc:#}");
}

#[test]
fn compute_trivial_group() {
    let r = run(&["compute", "--group", "cyclic:1", "--metric", "affapp"]);
    assert_eq!(r.status, EXIT_OK, "{}", r.stderr);
    let doc = r.json();
    assert_eq!(doc["certificate"]["value"], 1);
    assert_eq!(doc["certificate"]["exact"], true);
    assert_eq!(doc["group"], "cyclic(1)");
    assert_valid(&doc);
}

#[test]
fn compute_reports_witness_and_evidence() {
    let r = run(&["compute", "--group", "dihedral(6)", "--metric", "enapp"]);
    let doc = r.json();
    assert_eq!(doc["certificate"]["value"], 0);
    let r = run(&["compute", "--group", "alt(4)", "--metric", "affapp", "--bounds-only"]);
    assert_eq!(r.status, EXIT_OK);
    let doc = r.json();
    assert_eq!(doc["certificate"]["exact"], false);
    assert_eq!(doc["certificate"]["lower"], 2);
    assert_eq!(doc["certificate"]["lower_bound"]["evidence"]["kind"], "dominating-orbit");
    assert_valid(&doc);
}

#[test]
fn budget_exhaustion_exits_with_limit_status() {
    let r = run(&["compute", "--group", "cyclic:7", "--metric", "affapp", "--budget", "5"]);
    assert_eq!(r.status, EXIT_LIMIT);
    let doc = r.json();
    assert_eq!(doc["certificate"]["exact"], false);
    assert!(doc["certificate"]["value"].is_null());
    assert!(doc["certificate"]["lower"].as_u64() <= doc["certificate"]["upper"].as_u64());
    assert_valid(&doc);
}

#[test]
fn enumeration_capacity_gives_bounds_document() {
    let r = run(&["compute", "--group", "jk(3,0,1)", "--metric", "enapp"]);
    assert_eq!(r.status, EXIT_LIMIT);
    let doc = r.json();
    assert_eq!(doc["order"], 6561);
    assert!(doc["note"].as_str().unwrap().contains("exceeds"));
    assert_valid(&doc);
    let r = run(&["compute", "--group", "jk(5,0,1)", "--metric", "enapp"]);
    assert_eq!(r.status, EXIT_LIMIT);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["compute", "--group", "frob(3)", "--metric", "enapp"]).status, EXIT_USAGE);
    assert_eq!(run(&["compute", "--group", "cyclic:3", "--metric", "both"]).status, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).status, EXIT_USAGE);
    assert_eq!(run(&["table", "--max-order", "16"]).status, EXIT_USAGE);
    assert_eq!(run(&["verify-jk", "--p", "3", "--lambda", "0"]).status, EXIT_USAGE);
    assert_eq!(run(&["witness", "--name", "nope"]).status, EXIT_USAGE);
    assert_eq!(run(&["compute", "--group", "file:/nonexistent/x.txt", "--metric", "enapp"]).status, EXIT_USAGE);
    assert_eq!(run(&["--help"]).status, EXIT_OK);
}

#[test]
fn cache_hit_bypass_and_version() {
    let dir = tempfile::tempdir().unwrap();
    let env = Env {
        cache_dir: Some(dir.path().to_path_buf()),
    };
    let args = ["compute", "--group", "cyclic(6)", "--metric", "affapp"];
    let first = run_env(&args, &env).json();
    assert_eq!(first["cached"], false);
    let second = run_env(&args, &env).json();
    assert_eq!(second["cached"], true);
    assert_eq!(second["certificate"], first["certificate"]);
    assert_valid(&second);
    let bypass = run_env(&["compute", "--group", "cyclic(6)", "--metric", "affapp", "--no-cache"], &env).json();
    assert_eq!(bypass["cached"], false);
    // Spec strings are canonicalized before keying.
    let colon = run_env(&["compute", "--group", "cyclic:6", "--metric", "affapp"], &env).json();
    assert_eq!(colon["cached"], true);
    let other = groupapprox_cli::Cache::new(dir.path(), "999.0.0");
    assert!(other.get("cyclic(6)", "affapp").is_none());
}

#[test]
fn table_is_deterministic_and_valid() {
    let a = run(&["table", "--max-order", "7"]);
    let b = run(&["table", "--max-order", "7"]);
    assert_eq!(a.status, EXIT_OK);
    assert_eq!(a.stdout, b.stdout);
    let doc = a.json();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 9);
    assert_valid(&doc);
}

#[test]
fn table_out_file_and_human_view() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let r = run(&["table", "--max-order", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(r.status, EXIT_OK);
    assert!(r.stdout.contains("(Z/2)^2"));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc["rows"][4]["affapp"]["value"], 3);
}

#[test]
fn verify_jk_sampled_and_custom_sigma() {
    let r = run(&["verify-jk", "--p", "3", "--lambda", "1,1", "--mode", "sampled", "--samples", "20000"]);
    assert_eq!(r.status, EXIT_OK, "{}", r.stderr);
    let doc = r.json();
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["sigma"]["order"], 80);
    assert_valid(&doc);

    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    std::fs::write(&good, "2 0 0 0\n0 2 0 0\n0 0 2 0\n0 0 0 2\n").unwrap();
    let r = run(&["verify-jk", "--p", "3", "--lambda", "0,1", "--mode", "sampled", "--samples", "20000", "--sigma", good.to_str().unwrap()]);
    assert_eq!(r.status, EXIT_OK, "{}", r.stderr);
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n").unwrap();
    let r = run(&["verify-jk", "--p", "3", "--lambda", "0,1", "--sigma", bad.to_str().unwrap()]);
    assert_eq!(r.status, EXIT_USAGE);
    assert_eq!(run(&["verify-jk", "--p", "3", "--lambda", "1,0"]).status, EXIT_USAGE);
    assert_eq!(run(&["verify-jk", "--p", "5", "--lambda", "0,1", "--mode", "sampled"]).status, EXIT_LIMIT);
}

#[test]
fn bounds_command() {
    let r = run(&["bounds", "--m1", "8", "--m2", "8", "--f", "log2"]);
    assert_eq!(r.status, EXIT_OK);
    let doc = r.json();
    assert!((doc["upper"].as_f64().unwrap() - 8.3177).abs() < 1e-4);
    assert_eq!(doc["nu"][8], "16777216");
    assert_valid(&doc);
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.txt");
    std::fs::write(&f, "1.5\n").unwrap();
    let doc = run(&["bounds", "--m1", "8", "--m2", "2", "--f", f.to_str().unwrap()]).json();
    assert_eq!(doc["fval"], 1.5);
    assert_eq!(doc["lower_exact"], "4");
    assert_eq!(run(&["bounds", "--m1", "1", "--m2", "2", "--f", "1"]).status, EXIT_USAGE);
}

#[test]
fn partition_command() {
    let doc = run(&["partition-avoid", "--classes", "3,2"]).json();
    assert_eq!(doc["exists"], false);
    assert_valid(&doc);
    let doc = run(&["partition-avoid", "--classes", "3,3,2"]).json();
    assert_eq!(doc["exists"], true);
    assert_eq!(doc["permutation"].as_array().unwrap().len(), 8);
    assert_valid(&doc);
}

#[test]
fn witness_command_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("w.csv");
    let r = run(&["witness", "--name", "sym3", "--csv", csv.to_str().unwrap()]);
    assert_eq!(r.status, EXIT_OK);
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), "index,image\n0,0\n1,1\n2,1\n3,0\n4,2\n5,2\n");
    assert_valid(&r.json());
    for name in ["cyclic-enapp:9", "prime-square:7", "rem-quot:2,3", "z6-swap", "klein"] {
        let r = run(&["witness", "--name", name]);
        assert_eq!(r.status, EXIT_OK, "{name}");
        assert_valid(&r.json());
    }
    let doc = run(&["witness", "--name", "rem-quot:3,2"]).json();
    assert_eq!(doc["measured"], 3);
    assert_eq!(run(&["witness", "--name", "prime-square:9"]).status, EXIT_USAGE);
}

#[test]
fn cayley_file_groups() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c3.txt");
    std::fs::write(&path, "3\n0 1 2\n1 2 0\n2 0 1\n").unwrap();
    let spec = format!("file:{}", path.display());
    let doc = run(&["compute", "--group", &spec, "--metric", "affapp"]).json();
    assert_eq!(doc["certificate"]["value"], 2);
    std::fs::write(&path, "2\n0 1\n1 1\n").unwrap();
    assert_eq!(run(&["compute", "--group", &spec, "--metric", "affapp"]).status, EXIT_USAGE);
}

#[test]
fn violation_status_is_distinct() {
    assert_ne!(EXIT_VIOLATION, EXIT_LIMIT);
    assert_ne!(EXIT_VIOLATION, EXIT_USAGE);
}
