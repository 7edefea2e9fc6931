use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn tsmlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsmlab")).args(args).env("RUST_LOG", "off").output().expect("spawn tsmlab")
}

fn payloads(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap())
        .filter(|e| e.file_name() != "manifest.json")
        .map(|e| (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap()))
        .collect()
}

#[test]
fn list_checks_names_every_experiment() {
    let out = tsmlab(&["--list-checks"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for id in ["identities.eigen", "tsm.finite", "project.reconstruction", "expand.holdout", "counterexample.zero_set", "probe.regression"] {
        assert!(text.contains(id), "missing {id}");
    }
}

#[test]
fn tsm_eval_writes_payloads_summary_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("run");
    let out = tsmlab(&["--experiment", "tsm-eval", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["tsm.csv", "summary.json", "manifest.json"] {
        assert!(dir.join(name).is_file(), "missing {name}");
    }
    let summary: serde_json::Value = serde_json::from_slice(&fs::read(dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["passed"], true);
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["run"]["experiment"], "tsm-eval");
    assert!(manifest["frozen_constants"].is_object());
    assert!(String::from_utf8(out.stdout).unwrap().contains("PASS tsm.finite"));
}

#[test]
fn malformed_config_exits_2_without_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("run");
    let d = dir.to_str().unwrap();
    let cases: [&[&str]; 4] = [
        &["--experiment", "tsm-eval", "--out", d, "--override", "tsm.radii=[1.0, -0.5]"],
        &["--experiment", "tsm-eval", "--out", d, "--override", "tsm.no_such_key=1"],
        &["--experiment", "no-such-experiment", "--out", d],
        &["--experiment", "tsm-eval", "--out", d, "--override", "missing_equals_sign"],
    ];
    for args in cases {
        let out = tsmlab(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!dir.exists(), "{args:?} left artifacts");
    }

    let cfg = tmp.path().join("bad.toml");
    fs::write(&cfg, "run.experiment = \"tsm-eval\"\nquadrature.circle_nodes = -4\n").unwrap();
    let out = tsmlab(&["--config", cfg.to_str().unwrap(), "--out", d]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.exists());
}

#[test]
fn failing_check_exits_1_and_names_it() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("run");
    let out = tsmlab(&[
        "--experiment",
        "probe",
        "--out",
        dir.to_str().unwrap(),
        "--override",
        "probe.contrast_ratio=1e30",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("FAIL probe.contrast"));
    let summary: serde_json::Value = serde_json::from_slice(&fs::read(dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["failing"], serde_json::json!(["probe.contrast"]));
}

#[test]
fn reference_config_file_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("run");
    let reference = concat!(env!("CARGO_MANIFEST_DIR"), "/../../config/defaults.toml");
    let out = tsmlab(&["--config", reference, "--experiment", "tsm-eval", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn reruns_are_byte_identical_apart_from_the_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for (dir, threads) in [(&a, "1"), (&b, "3")] {
        let out = Command::new(env!("CARGO_BIN_EXE_tsmlab"))
            .args(["--experiment", "counterexample", "--out", dir.to_str().unwrap()])
            .env("TSMLAB_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    let (pa, pb) = (payloads(&a), payloads(&b));
    assert!(pa.len() >= 3);
    assert_eq!(pa.keys().collect::<Vec<_>>(), pb.keys().collect::<Vec<_>>());
    for (name, bytes) in &pa {
        assert!(bytes == &pb[name], "{name} differs between runs");
    }
}
