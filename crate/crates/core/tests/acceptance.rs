//! Acceptance criteria at their stated tolerances, one line per criterion.
//!
//! Runs every experiment with the reference configuration twice, reads the
//! criteria off the first run's checks and compares the payload bytes of the
//! two runs.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use tsmlab::experiment::{run_into, CheckResult, ExperimentConfig, ExperimentName, Outcome};

struct Criterion {
    number: u32,
    title: &'static str,
    checks: &'static [&'static str],
}

const CRITERIA: &[Criterion] = &[
    Criterion { number: 1, title: "eigenfunction suite", checks: &["identities.eigen"] },
    Criterion { number: 2, title: "product relation", checks: &["identities.product_relation"] },
    Criterion { number: 3, title: "special Hermite expansion", checks: &["identities.expansion", "identities.orthogonality", "project.reconstruction"] },
    Criterion { number: 4, title: "polar equivalence", checks: &["identities.polar_bridge", "identities.zero_profile"] },
    Criterion { number: 5, title: "Euclidean certificate", checks: &["counterexample.euclidean_means", "counterexample.euclidean_near_null"] },
    Criterion { number: 6, title: "twisted contrast", checks: &["probe.contrast", "probe.regression", "probe.sigma_positive"] },
    Criterion { number: 7, title: "Hecke-Bochner vanishing", checks: &["counterexample.zero_set", "counterexample.generic_floor"] },
    Criterion { number: 8, title: "tensor diagonal identity", checks: &["identities.tensor_diagonal", "identities.degree_blocks"] },
    Criterion { number: 9, title: "Q_k expansion fit", checks: &["expand.holdout", "expand.sector", "expand.below_p"] },
];

fn run_suite(root: &Path) -> Result<BTreeMap<&'static str, CheckResult>, String> {
    let mut checks = BTreeMap::new();
    for name in ExperimentName::ALL {
        let mut cfg = ExperimentConfig::default();
        cfg.run.experiment = name;
        let summary = run_into(&cfg, &root.join(name.as_str())).map_err(|e| format!("{name}: {e}"))?;
        for c in summary.checks {
            checks.insert(c.id, c);
        }
    }
    Ok(checks)
}

fn payloads(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for name in ExperimentName::ALL {
        let dir = root.join(name.as_str());
        for entry in fs::read_dir(&dir).into_iter().flatten().flatten() {
            let file = entry.file_name().to_string_lossy().into_owned();
            if file != "manifest.json" {
                out.insert(format!("{name}/{file}"), fs::read(entry.path()).unwrap_or_default());
            }
        }
    }
    out
}

fn main() -> ExitCode {
    let tmp = tempfile::tempdir().expect("temporary directory");
    let (first, second) = (tmp.path().join("first"), tmp.path().join("second"));
    let checks = match run_suite(&first) {
        Ok(c) => c,
        Err(e) => {
            println!("acceptance: suite failed to run: {e}");
            return ExitCode::FAILURE;
        }
    };
    let rerun = run_suite(&second);

    let mut failures = 0;
    for crit in CRITERIA {
        let mut ok = true;
        let mut parts = Vec::new();
        for id in crit.checks {
            match checks.get(id) {
                Some(c) => {
                    ok &= c.outcome == Outcome::Pass;
                    parts.push(format!("{id}={:.3e} (limit {:.0e})", c.value, c.threshold));
                }
                None => {
                    ok = false;
                    parts.push(format!("{id} missing"));
                }
            }
        }
        failures += usize::from(!ok);
        println!("criterion {:>2} {} {:<26} {}", crit.number, if ok { "PASS" } else { "FAIL" }, crit.title, parts.join(", "));
    }

    let (ok, detail) = match rerun {
        Err(e) => (false, format!("second run failed: {e}")),
        Ok(_) => {
            let (a, b) = (payloads(&first), payloads(&second));
            let differing: Vec<&String> = a.keys().filter(|k| b.get(*k) != a.get(*k)).collect();
            if a.keys().ne(b.keys()) {
                (false, "payload file lists differ".to_string())
            } else if differing.is_empty() {
                (true, format!("{} payload files byte-identical", a.len()))
            } else {
                (false, format!("differing payloads: {differing:?}"))
            }
        }
    };
    failures += usize::from(!ok);
    println!("criterion 10 {} {:<26} {}", if ok { "PASS" } else { "FAIL" }, "determinism", detail);

    if failures == 0 {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} of 10 criteria failed");
        ExitCode::FAILURE
    }
}
