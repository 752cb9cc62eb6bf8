use std::path::PathBuf;
use std::process::Command;

use equistrat::catalog;
use equistrat::spec::ProblemSpec;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_equistrat"))
}

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs").join(format!("{name}.toml"))
}

fn run(args: &[&str]) -> (bool, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.success(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn lattice_dot_has_index_labels() {
    let (ok, out) = run(&["lattice", spec("d6").to_str().unwrap(), "--format", "dot"]);
    assert!(ok);
    for label in ["D6 (0)", "Z2(k) (1)", "Z2(ks) (1)", "1 (2)"] {
        assert!(out.contains(&format!("\"{label}\"")), "{label} missing from\n{out}");
    }
}

#[test]
fn equivariants_table_marks_empty_degrees() {
    let (ok, out) = run(&["equivariants", spec("d6").to_str().unwrap()]);
    assert!(ok);
    let row = out.lines().find(|l| l.split_whitespace().next() == Some("3")).unwrap();
    assert_eq!(row.split_whitespace().collect::<Vec<_>>(), ["3", "none", "0", "0"]);
    let (ok, out) = run(&["equivariants", spec("frobenius_case2").to_str().unwrap(), "--degree", "3", "--format", "json"]);
    assert!(ok);
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(rows[0]["trace_formula"], 9);
}

#[test]
fn analyze_json_for_d6_and_frobenius() {
    let (ok, out) = run(&["analyze", spec("d6").to_str().unwrap(), "--format", "json", "--seed", "42"]);
    assert!(ok);
    let r: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(r["seed"], 42);
    let included: Vec<(&str, &str)> = r["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["verdict"] == "Included")
        .map(|v| (v["sigma"].as_str().unwrap(), v["mechanisms"][0].as_str().unwrap()))
        .collect();
    assert_eq!(included, [("Z2(k)", "BmsRegularity"), ("Z2(ks)", "BmsRegularity")]);

    let (ok, out) = run(&["analyze", spec("frobenius_case1").to_str().unwrap(), "--format", "json"]);
    assert!(ok);
    let r: serde_json::Value = serde_json::from_str(&out).unwrap();
    let v = r["verdicts"].as_array().unwrap();
    assert_eq!(v.len(), 3);
    assert!(v.iter().all(|v| v["verdict"] == "Included" && v["mechanisms"][0] == "TheoremIft"));
}

#[test]
fn out_dir_receives_report_files() {
    let dir = std::env::temp_dir().join(format!("equistrat-cli-{}", std::process::id()));
    let (ok, _) = run(&["analyze", spec("d2").to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert!(ok);
    for f in ["analysis.json", "analysis.md", "lattice.dot"] {
        assert!(dir.join(f).exists(), "{f}");
    }
    let (ok, out) = run(&["probe", spec("d2").to_str().unwrap(), "--seed", "5", "--out", dir.to_str().unwrap()]);
    assert!(ok);
    assert!(out.contains("seed 5"));
    let z2s = out.lines().find(|l| l.starts_with("Z2(s)")).unwrap();
    assert!(z2s.ends_with("match"), "{z2s}");
    let csv = std::fs::read_to_string(dir.join("samples.csv")).unwrap();
    assert!(csv.starts_with("sigma,residual,rank,exact"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn errors_exit_nonzero() {
    let (ok, _) = run(&["analyze", "/nonexistent/spec.toml"]);
    assert!(!ok);
    let (ok, _) = run(&["equivariants", spec("d2").to_str().unwrap(), "--format", "dot"]);
    assert!(!ok);
}

#[test]
fn inconclusive_verdicts_do_not_fail_the_run() {
    let (ok, out) = run(&["analyze", spec("frobenius_case3").to_str().unwrap(), "--format", "json"]);
    assert!(ok);
    assert!(out.contains("Inconclusive") || out.contains("Included"));
}

#[test]
fn bundled_specs_round_trip() {
    for (name, src) in catalog::ALL {
        let a = ProblemSpec::from_toml(src).unwrap();
        let text = a.to_toml().unwrap();
        let b = ProblemSpec::from_toml(&text).unwrap();
        assert_eq!(a, b, "{name}");
        assert_eq!(text, b.to_toml().unwrap(), "{name}");
        assert_eq!(ProblemSpec::load(spec(name)).unwrap(), a);
    }
}
