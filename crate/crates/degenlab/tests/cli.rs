//! End-to-end runs of the command line interface: exit codes, report
//! shape, artifact formats, and byte-identical output for fixed seeds.

use std::io::Write;
use std::process::{Command, Output};
use tempfile::NamedTempFile;

const LOOP_ARROW_ALG: &str = "\
[quiver]
vertex 1
vertex 2
arrow w 1 1
arrow a 1 2
[relations]
1 w*w
[options]
max_len 2
field rational
";

const LOOP_ARROW_JZ2: &str = "\
[module]
top 1
top 1
gen 1 w z2
gen 1 a z2
";

const A2_ALG: &str = "\
[quiver]
vertex 1
vertex 2
arrow a 1 2
[options]
max_len 1
field rational
";

const A2_JZ2: &str = "\
[module]
top 1
top 1
gen 1 a z2
";

const KRONECKER_ALG: &str = "\
[quiver]
vertex 1
vertex 2
arrow a 1 2
arrow b 1 2
[options]
max_len 1
field rational
";

const KRONECKER_SPLIT: &str = "\
[module]
top 1
top 1
gen 1 a z1
gen 1 b z2
";

fn write_temp(content: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

fn degenlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_degenlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn check_full_mode_maximal_point() {
    let alg = write_temp(A2_ALG);
    let module = write_temp(A2_JZ2);
    let out = degenlab(&[
        "check",
        "--algebra",
        alg.path().to_str().unwrap(),
        "--module",
        module.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdicts"]["fully_maximal"], true);
    assert_eq!(report["m"], 0);
    assert_eq!(report["orbit_dim"], 1);
    assert_eq!(report["certificate"]["kind"], "flag");
}

#[test]
fn check_full_mode_degenerate_point() {
    let alg = write_temp(LOOP_ARROW_ALG);
    let module = write_temp(LOOP_ARROW_JZ2);
    let out = degenlab(&[
        "check",
        "--algebra",
        alg.path().to_str().unwrap(),
        "--module",
        module.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdicts"]["fully_maximal"], false);
    assert_eq!(report["m"], 1);
    assert_eq!(report["certificate"]["kind"], "curve");
    assert_eq!(report["certificate"]["mode"], "unipotent");
    assert_eq!(report["certificate"]["iso_with_original"], false);
}

#[test]
fn reports_are_byte_identical() {
    let alg = write_temp(LOOP_ARROW_ALG);
    let module = write_temp(LOOP_ARROW_JZ2);
    let args = [
        "check",
        "--algebra",
        alg.path().to_str().unwrap(),
        "--module",
        module.path().to_str().unwrap(),
        "--seed",
        "7",
    ];
    let a = degenlab(&args);
    let b = degenlab(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn malformed_relation_exits_two_with_position() {
    let alg = write_temp(&LOOP_ARROW_ALG.replace("1 w*w", "1 a**"));
    let module = write_temp(LOOP_ARROW_JZ2);
    let out = degenlab(&[
        "check",
        "--algebra",
        alg.path().to_str().unwrap(),
        "--module",
        module.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 7"), "stderr: {stderr}");
    assert!(stderr.contains("column"), "stderr: {stderr}");
}

#[test]
fn limit_of_kronecker_torus_curve() {
    // the torus of (z1+z2, z2) acting by (1, τ):
    // g(z1+z2) = z1+z2, g(z2) = τ z2, hence g(z1) = z1 + z2 − τ z2
    let curve_text = "\
[curve]
z1 -> 1 z1 + 1 z2 + -1 t^1 z2
z2 -> 1 t^1 z2
";
    let alg = write_temp(KRONECKER_ALG);
    let module = write_temp(KRONECKER_SPLIT);
    let curve = write_temp(curve_text);
    let out = degenlab(&[
        "limit",
        "--algebra",
        alg.path().to_str().unwrap(),
        "--module",
        module.path().to_str().unwrap(),
        "--curve",
        curve.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    // the limit is Jz2 = span{a z2, b z2}
    assert!(text.contains("gen 1 a z2"), "artifact: {text}");
    assert!(text.contains("gen 1 b z2"), "artifact: {text}");
    assert!(!text.contains("z1\ngen"), "artifact: {text}");
}

#[test]
fn normal_form_swaps_and_rejects() {
    let alg = write_temp(A2_ALG);
    let module = write_temp(A2_JZ2);
    let out = degenlab(&[
        "normal-form",
        "--algebra",
        alg.path().to_str().unwrap(),
        "--module",
        module.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("gen 1 a z1"), "artifact: {text}");
    // a point with proper degenerations is rejected with exit 1
    let alg2 = write_temp(LOOP_ARROW_ALG);
    let module2 = write_temp(LOOP_ARROW_JZ2);
    let out2 = degenlab(&[
        "normal-form",
        "--algebra",
        alg2.path().to_str().unwrap(),
        "--module",
        module2.path().to_str().unwrap(),
    ]);
    assert_eq!(out2.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out2.stderr).contains("not maximal"));
}

#[test]
fn compile_variety_emits_algebra_file() {
    let out = degenlab(&["compile-variety", "--poly", "x0*x2 - x1^2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    // three level vertices, six arrows, the level commutators and the
    // compiled polynomial
    assert_eq!(text.matches("vertex ").count(), 3);
    assert_eq!(text.matches("arrow ").count(), 6);
    let relation_lines: Vec<&str> = text
        .lines()
        .skip_while(|l| *l != "[relations]")
        .skip(1)
        .take_while(|l| !l.starts_with('['))
        .collect();
    assert_eq!(relation_lines.len(), 4, "text: {text}");
    assert!(text.contains("top 1"));
    // the emitted file parses back and feeds the checker
    let alg = write_temp(&text);
    let module = write_temp("[module]\ntop 1\ngen 1 a1_1 z1\ngen 1 a1_2 z1\n");
    let check = degenlab(&[
        "check",
        "--algebra",
        alg.path().to_str().unwrap(),
        "--module",
        module.path().to_str().unwrap(),
    ]);
    assert_eq!(
        check.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&check.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&check.stdout).unwrap();
    assert_eq!(report["dimension_vector"], serde_json::json!([1, 1, 1]));
    assert_eq!(report["verdicts"]["fully_maximal"], true);
}

#[test]
fn compile_variety_with_point() {
    let out = degenlab(&[
        "compile-variety",
        "--poly",
        "x0*x2 - x1^2",
        "--point",
        "1,1,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("gen 1 a1_1 z1 + -1 a1_0 z1"), "text: {text}");
}

#[test]
fn decompose_artifact() {
    let alg = write_temp(A2_ALG);
    let module = write_temp(A2_JZ2);
    let out = degenlab(&[
        "decompose",
        "--algebra",
        alg.path().to_str().unwrap(),
        "--module",
        module.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.matches("# summand").count(), 2);
}

#[test]
fn invariants_and_torus_mode() {
    let alg = write_temp(KRONECKER_ALG);
    let module = write_temp(KRONECKER_SPLIT);
    let out = degenlab(&[
        "invariants",
        "--algebra",
        alg.path().to_str().unwrap(),
        "--module",
        module.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["m"], 0);
    assert_eq!(report["summand_count"], 2);
    assert!(report["verdicts"].is_null());
    // torus mode reports the incomparable-pair witness
    let out2 = degenlab(&[
        "check",
        "--mode",
        "torus",
        "--algebra",
        alg.path().to_str().unwrap(),
        "--module",
        module.path().to_str().unwrap(),
    ]);
    assert_eq!(out2.status.code(), Some(0));
    let report2: serde_json::Value = serde_json::from_slice(&out2.stdout).unwrap();
    assert_eq!(report2["verdicts"]["torus_maximal"], false);
    assert!(report2["verdicts"]["fully_maximal"].is_null());
    assert_eq!(report2["certificate"]["mode"], "incomparable_pair");
}

#[test]
fn charts_artifact_lists_bases() {
    let alg = write_temp(A2_ALG);
    let module = write_temp(A2_JZ2);
    let out = degenlab(&[
        "charts",
        "--algebra",
        alg.path().to_str().unwrap(),
        "--module",
        module.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.matches("# basis:").count(), 2);
    assert!(text.contains("vars:"));
}

#[test]
fn needs_split_input_exits_one() {
    // the rotation Kronecker module: splitting needs a field extension of
    // the rationals
    let alg = write_temp(KRONECKER_ALG);
    let module = write_temp(
        "[module]\ntop 1\ntop 1\ngen 1 a z1 + 1 b z2\ngen 1 a z2 + -1 b z1\n",
    );
    let out = degenlab(&[
        "decompose",
        "--algebra",
        alg.path().to_str().unwrap(),
        "--module",
        module.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NEEDS_SPLIT_INPUT"));
    // the documented fallback: the same module splits over a prime field
    let out2 = degenlab(&[
        "decompose",
        "--field",
        "fp:5",
        "--algebra",
        alg.path().to_str().unwrap(),
        "--module",
        module.path().to_str().unwrap(),
    ]);
    assert_eq!(out2.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out2.stdout);
    assert_eq!(text.matches("# summand").count(), 2);
}

#[test]
fn prime_field_flag() {
    let alg = write_temp(LOOP_ARROW_ALG);
    let module = write_temp(LOOP_ARROW_JZ2);
    let out = degenlab(&[
        "check",
        "--field",
        "fp:32003",
        "--algebra",
        alg.path().to_str().unwrap(),
        "--module",
        module.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["field"], "fp:32003");
    assert_eq!(report["m"], 1);
}
