use std::path::Path;
use std::process::{Command, Output};

use ellis_core::presets;

fn ellis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellis"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = ellis(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn rows(text: &str) -> Vec<&str> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect()
}

#[test]
fn octagon_cones() {
    let out = stdout(&["cones", "octagon"]);
    assert!(out.starts_with("# hyperplanes 4\n"));
    let body = rows(&out);
    assert_eq!(body.len(), 17);
    let dims: Vec<usize> = body
        .iter()
        .map(|r| r.split('\t').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(dims.iter().filter(|&&d| d == 0).count(), 1);
    assert_eq!(dims.iter().filter(|&&d| d == 1).count(), 8);
    assert_eq!(dims.iter().filter(|&&d| d == 2).count(), 8);
    assert!(body.iter().all(|r| r.split('\t').nth(2) == Some("yes")));
}

#[test]
fn octagon_fiber_over_zero() {
    let out = stdout(&["fiber", "octagon"]);
    assert_eq!(out.lines().count(), 8);
    assert!(out.lines().all(|l| l.starts_with("z=[0, 0, 0, 0]_Σ  c=")));
}

#[test]
fn fiber_with_patterns_prints_csv_blocks() {
    let out = stdout(&["fiber", "fibonacci", "--patterns", "3"]);
    assert_eq!(out.matches("m1,m2,x1\n").count(), 2);
}

#[test]
fn empty_region_gives_header_only() {
    let out = stdout(&["pattern", "octagon", "--w", "9,9", "--radius", "0"]);
    assert_eq!(out, "m1,m2,m3,m4,x1,x2\n");
}

#[test]
fn svg_output() {
    let out = stdout(&["pattern", "fibonacci", "--radius", "5", "--format", "svg"]);
    assert!(out.contains("version=\"1.1\""));
    assert_eq!(
        out.matches("<circle").count(),
        rows(&stdout(&["pattern", "fibonacci", "--radius", "5"])).len()
    );
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        &["semigroup", "octagon"][..],
        &["ellis", "octagon"],
        &["pattern", "octagon", "--radius", "6"],
    ] {
        assert_eq!(ellis(args).stdout, ellis(args).stdout);
    }
}

#[test]
fn exported_preset_runs_like_the_preset() {
    let dir = tempfile::tempdir().unwrap();
    for name in presets::NAMES {
        let path = dir.path().join(format!("{name}.json"));
        let p = path.to_str().unwrap();
        stdout(&["preset", "export", name, "--output", p]);
        for cmd in [
            "cones",
            "semigroup",
            "ellis",
            "fiber",
            "pattern",
            "validate",
        ] {
            assert_eq!(stdout(&[cmd, p]), stdout(&[cmd, name]), "{cmd} {name}");
        }
    }
}

#[test]
fn act_reports_oracle_agreement() {
    let out = stdout(&["act", "fibonacci", "--type", "+", "--radius", "6"]);
    assert!(out.starts_with("g  z=[0, 0]_Σ  t=+\n"));
    assert_eq!(out.matches("oracle=match").count(), 2);
}

fn error_line(out: &Output) -> serde_json::Value {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    serde_json::from_str(text.trim()).expect("one JSON line")
}

#[test]
fn validation_failures_exit_with_2() {
    let out = ellis(&["cones", "no-such-model"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_line(&out)["error"], "invalid_input");

    let out = ellis(&["preset", "export", "penrose"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_line(&out)["error"], "unknown_preset");

    let out = ellis(&["act", "octagon", "--type", "+0"]);
    assert_eq!(out.status.code(), Some(2));

    // (1/3, 1/3) is not in V_t + Γ* for the half-line type
    let out = ellis(&["act", "octagon", "--type", "0+++", "--target-w", "1/3,1/3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"D": 2, "d": 1}"#).unwrap();
    let out = ellis(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_line(&out)["error"], "invalid_input");
}

#[test]
fn discrete_stabilizers_fail_validation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("square.json");
    std::fs::write(&path, presets::discrete_square().config.to_json()).unwrap();
    let out = ellis(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_line(&out)["error"], "invalid_window");
}

#[test]
fn output_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.txt");
    let out = ellis(&["ellis", "octagon", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(Path::new(&path).is_file());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        stdout(&["ellis", "octagon"])
    );
}
