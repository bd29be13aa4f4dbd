use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn delone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_delone")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const Z2: &str = "dim = 2\nmode = \"periodic\"\nnumeric = \"exact\"\n\n[periodic]\nbasis = [[\"1\", \"0\"], [\"0\", \"1\"]]\nmotif = [[\"0\", \"0\"]]\n";

const HONEYCOMB: &str = "dim = 2\nmode = \"periodic\"\nnumeric = \"exact\"\nmetric = [[\"1\",\"1/2\"],[\"1/2\",\"1\"]]\n[periodic]\nbasis = [[\"1\",\"0\"],[\"0\",\"1\"]]\nmotif = [[\"0\",\"0\"],[\"1/3\",\"1/3\"]]\n";

#[test]
fn certify_z2_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let z2 = write(dir.path(), "z2.toml", Z2);
    let out = delone(&["certify", z2.to_str().unwrap(), "--criterion", "regular"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["command"][0], "certify");
    assert_eq!(v["results"]["report"]["verdict"], "satisfied");
    assert_eq!(v["input"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&delone(&["certify"])), 2);
    assert_eq!(code(&delone(&["bogus"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.toml");
    assert_eq!(code(&delone(&["analyze", missing.to_str().unwrap()])), 2);
    let bad = write(dir.path(), "bad.toml", "dim = 2\nmode = \"sideways\"\n");
    assert_eq!(code(&delone(&["analyze", bad.to_str().unwrap()])), 2);
}

#[test]
fn plot_rejects_non_planar_sets() {
    let dir = tempfile::tempdir().unwrap();
    let z3 = write(
        dir.path(),
        "z3.toml",
        "dim = 3\nmode = \"periodic\"\nnumeric = \"exact\"\n\n[periodic]\nbasis = [[\"1\",\"0\",\"0\"],[\"0\",\"1\",\"0\"],[\"0\",\"0\",\"1\"]]\nmotif = [[\"0\",\"0\",\"0\"]]\n",
    );
    let svg = dir.path().join("z3.svg");
    assert_eq!(code(&delone(&["plot", z3.to_str().unwrap(), "--out", svg.to_str().unwrap()])), 2);
    assert!(!svg.exists());
}

#[test]
fn tiny_window_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let w = write(
        dir.path(),
        "w.toml",
        "dim = 2\nmode = \"window\"\nnumeric = \"exact\"\n\n[window]\npoints = [[\"0\",\"0\"],[\"1\",\"0\"],[\"0\",\"1\"],[\"1\",\"1\"]]\nlo = [\"0\",\"0\"]\nhi = [\"1\",\"1\"]\n",
    );
    let out = delone(&["certify", w.to_str().unwrap(), "--criterion", "regular"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn non_antipodal_input_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "h.toml", HONEYCOMB);
    assert_eq!(code(&delone(&["decompose", h.to_str().unwrap()])), 4);
    let out = delone(&["reconstruct", h.to_str().unwrap(), "--center", "0,0", "--rho-max", "3"]);
    assert_eq!(code(&out), 4);
}

#[test]
fn four_cosets_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("c4.toml");
    let out = delone(&[
        "generate",
        "coset-union",
        "--basis",
        "1,0;0,1",
        "--half",
        "0,0;1,0;0,1;1,1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_ne!(code(&out), 0);
    assert!(!out_path.exists());
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let z2 = write(dir.path(), "z2.toml", Z2);
    let report = dir.path().join("r.json");
    let args = ["--report", report.to_str().unwrap(), "analyze", z2.to_str().unwrap(), "--rho", "1,sqrt(2),2R"];
    let mut runs = Vec::new();
    for _ in 0..2 {
        let out = delone(&args);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        runs.push(fs::read(&report).unwrap());
    }
    assert_eq!(runs[0], runs[1]);
    let v: Value = serde_json::from_slice(&runs[0]).unwrap();
    assert!(v.get("wall_time_ms").is_none());
}

#[test]
fn generate_then_decompose_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c3.toml");
    let out = delone(&[
        "generate",
        "coset-union",
        "--basis",
        "1,0;0,1",
        "--half",
        "0,0;1,0;0,1",
        "--out",
        f.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let out = delone(&["decompose", f.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["results"]["n"], 3);
}

#[test]
fn plot_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let z2 = write(dir.path(), "z2.toml", Z2);
    for highlight in ["classes", "clusters", "chains"] {
        let svg = dir.path().join(format!("{highlight}.svg"));
        let mut args = vec!["plot", z2.to_str().unwrap(), "--out", svg.to_str().unwrap(), "--highlight", highlight];
        match highlight {
            "chains" => args.extend(["--from", "0,0", "--to", "3,2"]),
            "clusters" => args.extend(["--center", "0,0"]),
            _ => {}
        }
        let out = delone(&args);
        assert_eq!(code(&out), 0, "{highlight}: {}", String::from_utf8_lossy(&out.stderr));
        let text = fs::read_to_string(&svg).unwrap();
        assert!(text.starts_with("<?xml"));
        assert!(text.trim_end().ends_with("</svg>"));
        if highlight == "chains" {
            assert!(text.contains("<polyline"));
        }
    }
}
