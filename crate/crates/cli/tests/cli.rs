use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const TWO_CYCLE: &str = "wgraph v1\nvertex a\nvertex b\narc a b 1 0 1\narc b a 1 0 0\n";
const NILPOTENT: &str = "wgraph v1\nvertex a\nvertex b\narc a b 1 0 1\narc b a 0 0 0\n";
const ODOMETER: &str = "action v1\nmealy 2\nstate a 1 e 0 a\nstate e 0 e 1 e\nlevel 3\n";
const A_PLUS_INVERSE: &str = "element v1\na 1 0\na' 1 0\n";

fn wgspec(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wgspec"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value<'a>(report: &'a str, key: &str) -> &'a str {
    let prefix = format!("{key}: ");
    report
        .lines()
        .find_map(|l| l.strip_prefix(prefix.as_str()))
        .unwrap_or_else(|| panic!("missing {key} in\n{report}"))
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("two.wg"), TWO_CYCLE).unwrap();
    fs::write(dir.path().join("nil.wg"), NILPOTENT).unwrap();
    fs::write(dir.path().join("odo.act"), ODOMETER).unwrap();
    fs::write(dir.path().join("m.elt"), A_PLUS_INVERSE).unwrap();
    dir
}

#[test]
fn adjoint_writes_sibling_and_passes_self_check() {
    let dir = workspace();
    let o = wgspec(dir.path(), &["graph-op", "adjoint", "nil.wg"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(value(&out, "OUTPUT"), "nil_adj.wg");
    assert_eq!(value(&out, "SELF_CHECK"), "PASS");
    let written = fs::read_to_string(dir.path().join("nil_adj.wg")).unwrap();
    assert!(written.starts_with("wgraph v1"));
}

#[test]
fn compose_of_two_graphs() {
    let dir = workspace();
    let o = wgspec(dir.path(), &["graph-op", "compose", "two.wg", "nil.wg", "--out", "c.wg"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(value(&out, "SELF_CHECK"), "PASS");
    assert!(dir.path().join("c.wg").exists());
}

#[test]
fn scale_requires_lambda() {
    let dir = workspace();
    let o = wgspec(dir.path(), &["graph-op", "scale", "two.wg"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--lambda"));
}

#[test]
fn deficiency_is_positive_contraction() {
    let dir = workspace();
    let o = wgspec(dir.path(), &["graph-op", "deficiency", "nil.wg", "--lambda", "-0.3+0.2i", "--side", "left"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(value(&out, "HERMITIAN"), "yes");
    assert_eq!(value(&out, "PSD"), "yes");
    assert_eq!(value(&out, "IN_UNIT_INTERVAL"), "yes");
    assert_eq!(value(&out, "SIDE"), "left");
}

#[test]
fn two_cycle_spectrum() {
    let dir = workspace();
    let out = stdout(&wgspec(dir.path(), &["spectrum", "two.wg", "--scatter", "pts.txt"]));
    assert_eq!(value(&out, "SPECTRUM"), "-1, 1");
    assert_eq!(value(&out, "HERMITIAN"), "yes");
    assert_eq!(fs::read_to_string(dir.path().join("pts.txt")).unwrap(), "-1 0\n1 0\n");
}

#[test]
fn nilpotent_membership_uses_both_sides() {
    let dir = workspace();
    let out = stdout(&wgspec(
        dir.path(),
        &["spectrum", "nil.wg", "--check-lambda", "0", "--check-lambda", "2"],
    ));
    let checks: Vec<&str> = out.lines().filter_map(|l| l.strip_prefix("CHECK: ")).collect();
    assert_eq!(checks.len(), 2);
    assert!(checks[0].starts_with("MEMBER lambda=0+0i side=left"), "{}", checks[0]);
    assert!(checks[1].starts_with("NONMEMBER"), "{}", checks[1]);
}

#[test]
fn matrix_dump_round_trips_through_spectrum() {
    let dir = workspace();
    assert!(wgspec(dir.path(), &["matrix", "two.wg"]).status.success());
    let out = stdout(&wgspec(dir.path(), &["spectrum", "two_op.mat"]));
    assert_eq!(value(&out, "SOURCE"), "matrix");
    assert_eq!(value(&out, "SPECTRUM"), "-1, 1");
}

#[test]
fn lift_verify_and_include() {
    let dir = workspace();
    fs::write(dir.path().join("v.volt"), "voltage v1\ndegree 2\narc 0 2 1\n").unwrap();
    let o = wgspec(dir.path(), &["cover", "lift", "two.wg", "v.volt"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(value(&stdout(&o), "STATUS"), "VALID");

    let o = wgspec(dir.path(), &["cover", "verify", "two_lift.cov"]);
    assert!(o.status.success());
    assert_eq!(value(&stdout(&o), "VIOLATIONS"), "0");

    let out = stdout(&wgspec(dir.path(), &["cover", "include", "two_lift.cov"]));
    assert_eq!(value(&out, "COVER_SPECTRUM"), "-1, -1, 1, 1");
    assert_eq!(value(&out, "STATUS"), "INCLUDED");
}

#[test]
fn tampered_covering_is_rejected() {
    let dir = workspace();
    fs::write(dir.path().join("v.volt"), "voltage v1\ndegree 2\narc 0 2 1\n").unwrap();
    assert!(wgspec(dir.path(), &["cover", "lift", "two.wg", "v.volt"]).status.success());
    let cover = dir.path().join("two_lift.wg");
    let text = fs::read_to_string(&cover).unwrap().replacen(" 1 0 ", " 3 0 ", 1);
    fs::write(&cover, text).unwrap();
    let o = wgspec(dir.path(), &["cover", "verify", "two_lift.cov"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(value(&out, "STATUS"), "INVALID");
    assert!(out.contains("VIOLATION: "));
}

#[test]
fn random_inclusion() {
    let dir = workspace();
    let out = stdout(&wgspec(dir.path(), &["cover", "include", "--random", "5", "--seed", "3"]));
    assert_eq!(value(&out, "INCLUDED"), "5/5");
    assert_eq!(out.lines().filter(|l| l.starts_with("CASE: ")).count(), 5);
}

#[test]
fn odometer_levels_three_and_four() {
    let dir = workspace();
    let o = wgspec(dir.path(), &["orbital", "odo.act", "m.elt", "000", "0000", "--level-y", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(value(&out, "ORBIT_X"), "8");
    assert_eq!(value(&out, "ORBIT_Y"), "16");
    assert_eq!(value(&out, "LOCAL_ISO_RADIUS"), "3");
    assert_eq!(value(&out, "R"), "4");
    assert_eq!(value(&out, "TRANSFER"), "PASS");
    assert_eq!(value(&out, "X_IN_Y"), "5/5");
}

#[test]
fn mismatched_alphabets_fail_cleanly() {
    let dir = workspace();
    fs::write(dir.path().join("p.act"), "action v1\nperm 3\ngen b 2 3 1\n").unwrap();
    fs::write(dir.path().join("b.elt"), "element v1\nb 1 0\n").unwrap();
    let o = wgspec(dir.path(), &["orbital", "odo.act", "b.elt", "000", "1", "--action-y", "p.act"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));
}

#[test]
fn shift_demo_at_small_and_default_depth() {
    let dir = workspace();
    for depth in ["1", "100"] {
        let o = wgspec(dir.path(), &["demo-shift", "--depth", depth]);
        assert!(o.status.success());
        let out = stdout(&o);
        assert_eq!(value(&out, "STATUS"), "PASS");
        assert_eq!(value(&out, "ONE_SIDED_CLAIMS_INVERTIBLE"), "yes");
        assert_eq!(value(&out, "LEFT_WITNESS"), "yes");
        assert!(out.contains("WARNING: the one-sided deficiency test is unsound"));
    }
}

#[test]
fn parse_errors_name_the_line() {
    let dir = workspace();
    fs::write(dir.path().join("bad.wg"), "wgraph v1\nvertex a\narc a zz 1 0 0\n").unwrap();
    let o = wgspec(dir.path(), &["spectrum", "bad.wg"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn json_mirrors_text() {
    let dir = workspace();
    let text = stdout(&wgspec(dir.path(), &["spectrum", "two.wg"]));
    let json: serde_json::Value = serde_json::from_slice(&wgspec(dir.path(), &["--json", "spectrum", "two.wg"]).stdout).unwrap();
    assert_eq!(json["command"], "spectrum");
    let entries = json["entries"].as_array().unwrap();
    assert_eq!(entries.len(), text.lines().count());
    assert_eq!(entries[6][1], "-1, 1");
}
