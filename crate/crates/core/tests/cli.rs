//! The command line: subcommands, files and exit codes.

mod common;

use std::path::Path;
use std::process::Command;

use sfc_placer::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("sfc-placer").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn gen_bundle(dir: &Path, name: &str, extra: &[&str]) -> String {
    let path = dir.join(name);
    let mut args = vec!["gen", "--bundle", p(&path)];
    args.extend_from_slice(extra);
    assert_eq!(call(&args).0, 0);
    path.to_str().unwrap().to_string()
}

#[test]
fn help_and_version_succeed() {
    for sub in [&["--help"][..], &["solve", "--help"], &["validate", "--help"], &["gen", "--help"], &["sweep", "--help"], &["--version"]] {
        let (code, out, _) = call(sub);
        assert_eq!(code, 0, "{sub:?}");
        assert!(!out.is_empty());
    }
}

#[test]
fn usage_errors_are_input_errors() {
    assert_eq!(call(&["solve", "--no-such-flag"]).0, 3);
    assert_eq!(call(&["frobnicate"]).0, 3);
    assert_eq!(call(&["solve"]).0, 3);
    assert_eq!(call(&["solve", "--bundle", "/nonexistent/bundle.json"]).0, 3);
    assert_eq!(call(&["sweep", "--axis", "diagonal", "--points", "1"]).0, 3);
    assert_eq!(call(&["gen", "--chain-len", "3..1"]).0, 3);
}

#[test]
fn schema_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"topology": {"clouds": [{"id": "c", "capacity": {"cpu": -1}}]}, "sfcs": [], "flavors": []}"#).unwrap();
    let (code, _, err) = call(&["solve", "--bundle", p(&path)]);
    assert_eq!(code, 3);
    assert!(err.contains("clouds[0].capacity"), "{err}");
}

#[test]
fn gen_solve_validate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(call(&["gen", "--seed", "4", "--out-dir", p(&d.join("s"))]).0, 0);
    let t = d.join("s/topology.json");
    let s = d.join("s/sfcs.json");
    let f = d.join("s/flavors.json");
    let sol = d.join("placement.json");
    let lp = d.join("model.lp");
    let (code, out, err) = call(&[
        "solve", "--topology", p(&t), "--sfcs", p(&s), "--flavors", p(&f), "--out", p(&sol), "--dump-lp", p(&lp),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("objective: "));
    assert!(out.contains("sfc sfc0: delay "));
    assert!(out.contains("cloud c0 residual: cpu="));
    assert!(std::fs::read_to_string(&lp).unwrap().contains("Subject To"));

    let (code, out, _) =
        call(&["validate", "--topology", p(&t), "--sfcs", p(&s), "--flavors", p(&f), "--solution", p(&sol)]);
    assert_eq!((code, out.as_str()), (0, "valid: no violations\n"));

    // Overstating the cost is caught.
    let text = std::fs::read_to_string(&sol).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["total_cost"] = serde_json::json!(9999);
    std::fs::write(&sol, doc.to_string()).unwrap();
    let (code, out, _) = call(&[
        "validate", "--topology", p(&t), "--sfcs", p(&s), "--flavors", p(&f), "--solution", p(&sol), "--json",
    ]);
    assert_eq!(code, 1);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["valid"], false);
    assert_eq!(report["violations"][0]["kind"], "cost_mismatch");
}

#[test]
fn infeasible_names_the_blocking_family() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    std::fs::write(
        &path,
        serde_json::json!({
            "topology": {
                "clouds": [{"id": "a", "capacity": {"cpu": 1}}, {"id": "b", "capacity": {"cpu": 1}}],
                "links": [{"a": "a", "b": "b", "delay_ms": 1, "bandwidth_mbps": 10, "security_level": 2}],
            },
            "sfcs": [{"id": "s", "traffic_mbps": 1, "max_delay_ms": 10, "min_security": 5,
                      "vnfs": [{"id": "v1", "type": "fw"}, {"id": "v2", "type": "lb"}]}],
            "flavors": [{"id": "f", "price": 1, "demand": {"cpu": 1}}],
        })
        .to_string(),
    )
    .unwrap();
    let (code, out, _) = call(&["solve", "--bundle", p(&path)]);
    assert_eq!(code, 1);
    assert!(out.contains("infeasible"));
    assert!(out.contains("eq33"), "{out}");
    assert!(out.contains("eq24"), "{out}");

    let (code, out, _) = call(&["solve", "--bundle", p(&path), "--json"]);
    assert_eq!(code, 1);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["status"], "infeasible");
    assert_eq!(doc["objective"], serde_json::Value::Null);
}

#[test]
fn exhausted_budget_is_a_timeout() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = gen_bundle(dir.path(), "b.json", &["--seed", "1", "--clouds", "8"]);
    let (code, out, _) = call(&["solve", "--bundle", &bundle, "--max-nodes", "1", "--json"]);
    assert_eq!(code, 2);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["status"], "timed_out");
    assert!(doc["bound"].is_number());
}

#[test]
fn broken_external_solution_is_an_internal_breach() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = gen_bundle(dir.path(), "b.json", &["--seed", "1"]);
    let script = dir.path().join("liar.sh");
    std::fs::write(&script, "#!/bin/sh\necho '=obj= 0' > \"$2\"\n").unwrap();
    let backend = format!("external:sh {}", p(&script));
    let (code, _, err) = call(&["solve", "--bundle", &bundle, "--backend", &backend]);
    assert_eq!(code, 4, "{err}");
    assert!(err.contains("violates"), "{err}");
}

#[test]
fn lp_dump_goes_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = gen_bundle(dir.path(), "b.json", &["--seed", "2"]);
    let (code, out, _) = call(&["dump-lp", "--bundle", &bundle, "--bandwidth"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("\\ sfc-placer model"));
    assert!(out.contains(" ext_bandwidth_0:"));
    assert!(out.ends_with("End\n"));
}

#[test]
fn seed_falls_back_to_the_environment() {
    let gen = |env: Option<&str>, args: &[&str]| {
        let mut cmd = Command::new(common::bin());
        cmd.arg("gen").args(args).env_remove("SFC_PLACER_SEED");
        if let Some(v) = env {
            cmd.env("SFC_PLACER_SEED", v);
        }
        let out = cmd.output().unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    let from_env = gen(Some("77"), &[]);
    assert_eq!(from_env, gen(None, &["--seed", "77"]));
    assert_ne!(from_env, gen(None, &[]));
    // An explicit flag wins over the environment.
    assert_eq!(gen(Some("5"), &["--seed", "77"]), from_env);
}

#[test]
fn process_exit_codes_match() {
    let out = Command::new(common::bin()).args(["solve", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(common::bin()).arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sweep_writes_both_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("sweep");
    let (code, out, err) = call(&[
        "sweep", "--axis", "sfcs", "--points", "1,2", "--reps", "3", "--clouds", "3", "--out", p(&out_dir), "--jobs", "2",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("sfcs"));
    let runs = std::fs::read_to_string(out_dir.join("runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 1 + 2 * 3);
    let summary = std::fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 1 + 2);
    assert!(summary.starts_with("axis_value,"));
}
