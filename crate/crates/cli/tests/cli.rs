use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn mrees(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mrees")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn worked_example_layout_and_restricted_generators() {
    let o = mrees(&["generators", path(&spec("five_ideals.json"))]);
    assert!(o.status.success());
    let text = stdout(&o);
    let layout = "\
E_a (4 x 6):
[ p1  T[1;1,1,1]  T[2;1,1,1]              T[4;1,1,1]             ]
[ p2  T[1;1,1,0]              T[3;1,1,0]              T[5;1,1,0] ]
[ x               T[2;1,0,0]  T[3;1,0,0]                         ]
[ y                                       T[4;0,0,0]  T[5;0,0,0] ]
generators (8):
";
    assert!(text.contains(layout), "{text}");
    assert_eq!(text.lines().count(), 1 + layout.lines().count() + 8);
}

#[test]
fn full_family_is_larger() {
    let o = mrees(&["generators", path(&spec("five_ideals.json")), "--family", "full"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("generators (22):"));
}

#[test]
fn empty_ideal_list_is_invalid() {
    let o = mrees(&["generators", path(&spec("empty_ideals.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at least one ideal"));
}

#[test]
fn concrete_integer_spec_verifies() {
    let o = mrees(&["verify", path(&spec("integers_2_3_5_xyz.json"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("phi-vanishing: PASS"));
    assert!(text.trim_end().ends_with("PASS"));
}

#[test]
fn generic_spec_verifies_against_kernel() {
    let o = mrees(&["verify", path(&spec("squares.json"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn injected_sign_flip_fails_with_witness() {
    let o = mrees(&["verify", path(&spec("five_ideals.json")), "--inject-sign-flip", "0", "--phi-only"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("phi-vanishing: FAIL"));
    assert!(text.contains("witness: generator 0"));
}

#[test]
fn groebner_worked_example_passes_lex() {
    let o = mrees(&["groebner", path(&spec("five_ideals.json")), "--order", "lex"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("lex")).count(), 5);
    assert!(text.contains("(lex, pure powers first): NormalCm"));
}

#[test]
fn truncated_generators_are_inconclusive() {
    let o = mrees(&[
        "groebner",
        path(&spec("five_ideals.json")),
        "--family",
        "restricted",
        "--order",
        "lex",
        "--perms",
        "1",
        "--truncate",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("INCONCLUSIVE"));
}

#[test]
fn generic_matrix_groebner() {
    let o = mrees(&["groebner", "--matrix", "2x3", "--perms", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("generators=6"));
}

#[test]
fn taylor_examples_pass() {
    let o = mrees(&["taylor", "x", "y"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("d(e12) = - y*e1 + x*e2"));
    assert!(text.contains("y*e1 - x*e2"));
    let o = mrees(&["taylor", "x^2*y", "y*z^2", "x*z"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("PASS"));
}

#[test]
fn taylor_guard_exits_three() {
    let names: Vec<String> = (0..13).map(|i| format!("v{i}")).collect();
    let mut args = vec!["taylor"];
    args.extend(names.iter().map(String::as_str));
    let o = mrees(&args);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn oracle_cap_exits_three() {
    let o = mrees(&["oracle", path(&spec("squares.json")), "--monomial-cap", "10"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn json_spec_round_trip() {
    let o = mrees(&["--format", "json", "generators", path(&spec("squares.json"))]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let again = dir.path().join("spec.json");
    std::fs::write(&again, serde_json::to_string(&v["spec"]).unwrap()).unwrap();
    let o2 = mrees(&["--format", "json", "generators", again.to_str().unwrap()]);
    assert!(o2.status.success());
    let w: serde_json::Value = serde_json::from_str(&stdout(&o2)).unwrap();
    assert_eq!(v, w);
}

#[test]
fn output_directory_and_cas_format() {
    let dir = tempfile::tempdir().unwrap();
    let o = mrees(&[
        "--format",
        "cas",
        "generators",
        path(&spec("integers_2_3_5_xyz.json")),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let cas = std::fs::read_to_string(dir.path().join("generators.m2")).unwrap();
    assert!(cas.contains("R = ZZ[x, y, z, T_1_1_0_0_0_0"));
    assert!(!cas.split("I = ideal(").nth(1).unwrap().contains("s1"));
    assert!(dir.path().join("e_a.txt").exists());
}

#[test]
fn output_is_deterministic() {
    let args = ["--seed", "7", "--format", "json", "groebner", "--matrix", "2x2"];
    assert_eq!(stdout(&mrees(&args)), stdout(&mrees(&args)));
    let squares = spec("squares.json");
    let a = mrees(&["--jobs", "2", "oracle", path(&squares)]);
    let b = mrees(&["--jobs", "1", "oracle", path(&squares)]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}
