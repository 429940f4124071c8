use std::path::Path;

use helicoid_ends::cli::{run_with, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use helicoid_ends::export::{read_descriptor, write_descriptor};
use helicoid_ends::EndDescriptor;

const A1: f64 = -3.670_492_660_530_974;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("helicoid-ends").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn descriptor(dir: &Path, name: &str, d: &EndDescriptor) -> String {
    let path = dir.join(name);
    write_descriptor(d, &path).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_simple_family_prints_two_roots() {
    let (code, out, _) = run(&["solve", "--family", "simple", "--roots", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("root 1: -3.67049266053"), "{out}");
    assert!(out.contains("root 2: -12.3046140804"), "{out}");
}

#[test]
fn solve_with_descriptor_and_bracket() {
    let dir = tempfile::tempdir().unwrap();
    let desc = descriptor(dir.path(), "e.json", &EndDescriptor::simple_family(0.0));
    let out_dir = dir.path().join("roots");
    let (code, out, err) = run(&[
        "solve", "--desc", &desc, "--free", "1", "--bracket", "-6", "-1", "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("|Res|"));
    let root = read_descriptor(out_dir.join("root_1.json")).unwrap();
    assert!((root.coefficients[0] - A1).abs() < 1e-10);
}

#[test]
fn inverted_bracket_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let desc = descriptor(dir.path(), "e.json", &EndDescriptor::simple_family(0.0));
    let (code, _, err) = run(&["solve", "--desc", &desc, "--free", "1", "--bracket", "-1", "-6"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("bracket"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(run(&["bessel-zeros", "--count", "3"]).0, EXIT_USAGE);
    assert_eq!(run(&[]).0, EXIT_USAGE);
}

#[test]
fn missing_descriptor_file_is_a_usage_error() {
    let (code, _, err) = run(&["residue", "--desc", "/nonexistent/e.json"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(!err.is_empty());
}

#[test]
fn verify_helicoid_passes() {
    let dir = tempfile::tempdir().unwrap();
    let desc = descriptor(dir.path(), "h.json", &EndDescriptor::helicoid());
    let json = dir.path().join("report.json");
    let (code, out, _) = run(&["verify", "--desc", &desc, "--json", json.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{out}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert!(report["checks"].as_array().unwrap().len() > 10);
}

#[test]
fn verify_bessel_end_passes() {
    let dir = tempfile::tempdir().unwrap();
    let desc = descriptor(dir.path(), "b.json", &EndDescriptor::simple_family(A1));
    let (code, out, _) = run(&["verify", "--desc", &desc]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("no-line"));
    assert!(!out.contains("[FAIL]"));
}

#[test]
fn verify_inadmissible_periods_fail() {
    let dir = tempfile::tempdir().unwrap();
    let desc = descriptor(dir.path(), "one.json", &EndDescriptor::simple_family(1.0));
    let (code, out, _) = run(&["verify", "--desc", &desc, "--checks", "periods"]);
    assert_eq!(code, EXIT_FAILED);
    assert!(out.contains("[FAIL] periods"));
}

#[test]
fn verify_subset_runs_only_selected_checks() {
    let dir = tempfile::tempdir().unwrap();
    let desc = descriptor(dir.path(), "b.json", &EndDescriptor::simple_family(A1));
    let (code, out, _) = run(&["verify", "--desc", &desc, "--checks", "residue,rays"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("residue:") && out.contains("rays:"));
    assert!(!out.contains("embed") && !out.contains("curvature"));
}

#[test]
fn nonunitary_end_reports_missing_vertical_ray() {
    let dir = tempfile::tempdir().unwrap();
    let desc = descriptor(dir.path(), "m.json", &EndDescriptor::simple_family(A1).with_modulus(2.0));
    let (code, out, _) = run(&["verify", "--desc", &desc, "--checks", "rays"]);
    assert_eq!(code, EXIT_FAILED);
    assert!(out.contains("no vertical ray expected"));
    assert!(out.contains("[PASS] non-unitary: min std of |g|"));
}

#[test]
fn residue_both_methods() {
    let dir = tempfile::tempdir().unwrap();
    let desc = descriptor(dir.path(), "one.json", &EndDescriptor::simple_family(1.0));
    let (code, out, _) = run(&["residue", "--desc", &desc, "--method", "both"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("series      1.5906368546"), "{out}");
    assert!(out.contains("quadrature  1.5906368546"), "{out}");
    assert!(out.contains("difference"));
}

#[test]
fn bessel_zeros() {
    let (code, out, _) = run(&["bessel-zeros", "--n", "3"]);
    assert_eq!(code, EXIT_OK);
    let values: Vec<f64> = out
        .lines()
        .map(|l| l.split(" = ").nth(1).unwrap().parse().unwrap())
        .collect();
    let want = [3.831_705_970_2, 7.015_586_669_8, 10.173_468_135_1];
    for (v, w) in values.iter().zip(want) {
        assert!((v - w).abs() < 1e-9);
    }
}

#[test]
fn mesh_and_levelcurve_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let desc = descriptor(dir.path(), "b.json", &EndDescriptor::simple_family(A1));
    let obj = dir.path().join("end.obj");
    let (code, out, err) = run(&[
        "mesh", "--desc", &desc, "-o", obj.to_str().unwrap(), "--nt", "11", "--nalpha", "11",
        "--exclude", "1",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("vertices"));
    assert!(std::fs::read_to_string(&obj).unwrap().starts_with("v "));

    let csv = dir.path().join("c.csv");
    let (code, _, err) = run(&[
        "levelcurve", "--desc", &desc, "--alpha", "-2", "--n", "50", "-o", csv.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 52);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["solve", "--family", "simple", "--roots", "3"]);
    let b = run(&["solve", "--family", "simple", "--roots", "3"]);
    assert_eq!(a, b);
}
