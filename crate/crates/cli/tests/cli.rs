//! End-to-end tests of the binary: output shapes, exit codes, and flag
//! handling.

use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cellchain"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn homology_single_degree() {
    let out = run(&["homology", data("torus.json").to_str().unwrap(), "--dim", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "H_1 = Z^2\n");
}

#[test]
fn homology_all_degrees_and_torsion_order() {
    let out = run(&["homology", data("rp2.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "H_0 = Z\nH_1 = Z/2\nH_2 = 0\n");
}

#[test]
fn homology_with_coefficients() {
    let out = run(&[
        "homology",
        data("rp2.json").to_str().unwrap(),
        "--coeff",
        "Z/2",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "H_0 = Z/2\nH_1 = Z/2\nH_2 = Z/2\n");

    let out = run(&[
        "homology",
        data("rp2.json").to_str().unwrap(),
        "--coeff",
        "Q",
    ]);
    assert_eq!(stdout(&out), "H_0 = Q\nH_1 = 0\nH_2 = 0\n");

    let out = run(&[
        "homology",
        data("rp2.json").to_str().unwrap(),
        "--coeff",
        "Z/1",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn snf_with_verification() {
    let out = run(&["snf", data("mat2x2.json").to_str().unwrap(), "--verify"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("divisors: 2 4"), "{text}");
    assert!(text.contains("verification: PASS"), "{text}");
}

#[test]
fn snf_structured_roundtrips_the_factors() {
    let out = run(&[
        "snf",
        data("mat2x2.json").to_str().unwrap(),
        "--format",
        "structured",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rank"], 2);
    assert_eq!(v["divisors"][0], 2);
    assert_eq!(v["divisors"][1], 4);
    assert_eq!(v["U"]["rows"], 2);
    assert_eq!(v["D"]["entries"][0][1], 0);
}

#[test]
fn chain_condition_violation_exits_2_with_witness() {
    let out = run(&["homology", data("bad_chain.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("chain condition fails at degree 1"), "{err}");
    assert!(stdout(&out).is_empty());
}

#[test]
fn missing_file_and_bad_json_exit_1() {
    let out = run(&["homology", "no_such_file.json"]);
    assert_eq!(code(&out), 1);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{not json").unwrap();
    let out = run(&["homology", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("invalid JSON"));
}

#[test]
fn parse_error_names_file_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, r#"{"rows": 1, "cols": 2, "entries": [[1]]}"#).unwrap();
    let out = run(&["snf", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("m.json"), "{err}");
    assert!(err.contains("entries[0]"), "{err}");
    assert!(err.contains("expected 2 integers"), "{err}");
}

#[test]
fn betti_euler_poincare() {
    let torus = data("torus.json");
    let torus = torus.to_str().unwrap();
    assert_eq!(stdout(&run(&["betti", torus])), "b_0 = 1\nb_1 = 2\nb_2 = 1\n");
    assert_eq!(stdout(&run(&["euler", torus])), "chi = 0\n");
    assert_eq!(
        stdout(&run(&["poincare", torus])),
        "P(t) = 1 + 2t + t^2\nsparse: 0:1 1:2 2:1\n"
    );
}

#[test]
fn filtration_levels_and_intervals() {
    let crit = data("critical_sphere.json");
    let crit = crit.to_str().unwrap();
    let out = run(&["filtration", crit, "--level", "0.5"]);
    assert_eq!(
        stdout(&out),
        "H_0(<= 0.5) = Z\nH_1(<= 0.5) = 0\nH_2(<= 0.5) = 0\n"
    );
    let out = run(&["filtration", crit, "--level", "1.5", "--dim", "2"]);
    assert_eq!(stdout(&out), "H_2(<= 1.5) = Z\n");

    let out = run(&["filtration", crit, "--interval", "0.5", "1.5"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("overall: PASS"));

    // Critical endpoint: a mathematical precondition violation.
    let out = run(&["filtration", crit, "--interval", "0", "1.5"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("regular"));
}

#[test]
fn perturb_modes_and_structured_roundtrip() {
    let crit = data("critical_sphere.json");
    let crit = crit.to_str().unwrap();
    let out = run(&[
        "perturb", crit, "--level", "0.5", "--index", "1", "--count", "5", "--mode",
        "paper_model",
    ]);
    assert_eq!(
        stdout(&out),
        "betti before: 1 0 1\nbetti after: 1 5 1\n"
    );

    // Structured output is a cellchain document that feeds back in.
    let out = run(&[
        "perturb", crit, "--level", "0.5", "--index", "1", "--count", "2", "--mode",
        "cancelling_pairs", "--format", "structured",
    ]);
    assert_eq!(code(&out), 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("perturbed.json");
    std::fs::write(&path, stdout(&out)).unwrap();
    let round = run(&["betti", path.to_str().unwrap()]);
    assert_eq!(stdout(&round), "b_0 = 1\nb_1 = 0\nb_2 = 1\n");

    let out = run(&[
        "perturb", crit, "--level", "1", "--index", "1", "--count", "1", "--mode",
        "paper_model",
    ]);
    assert_eq!(code(&out), 2, "critical value must be rejected");
}

#[test]
fn nerve_homology() {
    let out = run(&["nerve", data("cover_circle.json").to_str().unwrap()]);
    assert_eq!(
        stdout(&out),
        "simplices per dim: 3 3\nH_0 = Z\nH_1 = Z\n"
    );
}

#[test]
fn spaces_actions() {
    let out = run(&["spaces", "--berger", "Spin(7)"]);
    assert_eq!(
        stdout(&out),
        "group: Spin(7)\ndimension: 8 (8)\nstructure: Spin(7) manifold\ndescription: Ricci-flat\n"
    );

    let out = run(&["spaces", "--factors", "Spin(7)", "--dim", "8"]);
    assert!(stdout(&out).contains("INVALID (1 factor)"));
    assert!(stdout(&out).contains("not asserted"));

    let out = run(&["spaces", "--factors", "SO(2),SO(2)", "--dim", "5"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("sum to 4"));

    let out = run(&["spaces", "--poincare", "CP(2)"]);
    assert_eq!(stdout(&out), "P(t) = 1 + t^2 + t^4\nsparse: 0:1 2:1 4:1\n");

    let out = run(&["spaces", "--kunneth", "S(2),S(3)"]);
    assert_eq!(
        stdout(&out),
        "P(t) = 1 + t^2 + t^3 + t^5\nsparse: 0:1 2:1 3:1 5:1\n"
    );

    let out = run(&["spaces", "--growth", "1,0,0", "--alpha", "2", "--from", "2"]);
    assert_eq!(stdout(&out), "growth: FAILS at n = 2\n");

    let out = run(&["spaces", "--growth", "1,2", "--alpha", "1", "--from", "1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn analyze_actions() {
    let out = run(&["analyze", "--index-seq", "3,6,9,12", "--base", "3"]);
    assert_eq!(
        stdout(&out),
        "exactly linear: yes\nepsilon: 3 at (m,s) = (1,1)\nall zero: no\n"
    );

    let out = run(&["analyze", "--nullity-seq", "1,3,1,3,1,3"]);
    assert_eq!(
        stdout(&out),
        "constant one: no\nvalues: 1@1 3@2\ndivisibility consistent: yes\n"
    );

    let out = run(&["analyze", "--nullity-seq", "1,0,2"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn usage_errors_exit_1() {
    let out = run(&["homology"]);
    assert_eq!(code(&out), 1);
    let out = run(&["unknown-command"]);
    assert_eq!(code(&out), 1);
}
