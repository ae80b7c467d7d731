//! End-to-end checks of the command-line surface: exit codes, report shape,
//! catalog resolution, and the extra-catalog environment variable.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nilcohom"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_file(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn validate_exit_codes() {
    assert_eq!(run(&["validate", "kt"]).status.code(), Some(0));
    assert_eq!(run(&["validate", "catalog:torus4"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let non_nilpotent = write_file(dir.path(), "aff.alg", "dim 3; [1,2]=1*1;");
    assert_eq!(run(&["validate", &non_nilpotent]).status.code(), Some(1));

    let malformed = write_file(dir.path(), "bad.alg", "dim 3; [1,2]=;");
    let out = run(&["validate", &malformed]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    let missing = run(&["validate", "no-such-entry"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn betti_output_matches_catalog_facts() {
    let out = run(&["betti", "torus6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("1 6 15 20 15 6 1"));
    assert!(text.contains("euler characteristic: 0"));

    let kt = run(&["betti", "kt"]);
    assert!(stdout_of(&kt).contains("1 3 4 3 1"));
}

#[test]
fn symplectic_rejects_bad_forms_with_domain_exit() {
    let degenerate = run(&["symplectic", "torus4", "--form", "a1^a2"]);
    assert_eq!(degenerate.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&degenerate.stderr).contains("degenerate"));

    let not_closed = run(&["symplectic", "prop45", "--form", "a2^a5"]);
    assert_eq!(not_closed.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&not_closed.stderr).contains("not closed"));

    let bad_expr = run(&["symplectic", "torus4", "--form", "a1^^a2"]);
    assert_eq!(bad_expr.status.code(), Some(2));
}

#[test]
fn named_forms_resolve_and_json_has_schema() {
    let out = run(&["harmonic", "prop45", "--form", "omega2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value["schema"], "nilcohom/1");
    assert_eq!(value["command"], "harmonic");
    assert_eq!(value["input"], "prop45");
    assert_eq!(value["results"]["h"][5], 2);
    assert!(value["warnings"].as_array().is_some());
}

#[test]
fn lefschetz_reports_failure_point_on_prop45() {
    let out = run(&["lefschetz", "prop45", "--form", "omega2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("hard lefschetz: fails"));
    assert!(text.contains("L^2"));

    let torus = run(&["lefschetz", "torus6"]);
    assert!(stdout_of(&torus).contains("hard lefschetz: holds"));
}

#[test]
fn massey_command_examples() {
    let trivial = run(&["massey", "kt", "--classes", "[e1],[e1],[omega]"]);
    assert_eq!(trivial.status.code(), Some(0));
    assert!(stdout_of(&trivial).contains("trivial"));

    let nontrivial = run(&["massey", "kt", "--classes", "[e1],[e1],[e2]"]);
    assert_eq!(nontrivial.status.code(), Some(0));
    assert!(stdout_of(&nontrivial).contains("NON-TRIVIAL"));

    let undefined = run(&["massey", "kt", "--classes", "[x],[x],[omega]"]);
    assert_eq!(undefined.status.code(), Some(1));
    assert!(stdout_of(&undefined).contains("not defined"));

    let malformed = run(&["massey", "kt", "--classes", "[e1],[e1]"]);
    assert_eq!(malformed.status.code(), Some(2));

    // a non-closed class representative is a domain error
    let not_closed = run(&["massey", "kt", "--classes", "[e3],[e1],[e2]"]);
    assert_eq!(not_closed.status.code(), Some(1));
}

#[test]
fn flex_command_reports_the_flexible_verdict() {
    let out = run(&[
        "flex", "prop45", "--form-a", "omega1", "--form-b", "omega2", "--steps", "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("verdict: flexible"));
    assert!(
        text.contains("skipped"),
        "the midpoint of this pencil degenerates"
    );

    let json = run(&[
        "flex", "prop45", "--form-a", "omega1", "--form-b", "omega2", "--steps", "4", "--json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&json)).unwrap();
    assert_eq!(value["results"]["verdict"], "flexible");
    assert_eq!(value["results"]["highlight_degrees"][0], 5);

    let zero_steps = bin()
        .args([
            "flex", "prop45", "--form-a", "omega1", "--form-b", "omega2", "--steps", "0",
        ])
        .output()
        .unwrap();
    assert_eq!(zero_steps.status.code(), Some(2)); // usage error
}

#[test]
fn profile_lines_for_the_three_catalog_classes() {
    let kt = run(&["profile", "kt", "--json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&kt)).unwrap();
    assert_eq!(value["results"]["line"], 8);
    assert_eq!(value["results"]["annotation"], "K");

    let product = run(&["profile", "kt-x-kt", "--massey-bound", "3", "--json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&product)).unwrap();
    assert_eq!(value["results"]["line"], 7);
    assert_eq!(value["results"]["hard_lefschetz"], false);
    assert_eq!(value["results"]["odd_betti_even"], true);

    let torus = run(&["profile", "torus4", "--json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&torus)).unwrap();
    assert_eq!(value["results"]["line"], 1);
}

#[test]
fn extra_catalog_directory_is_consulted() {
    let dir = tempfile::tempdir().unwrap();
    write_file(
        dir.path(),
        "heis3.alg",
        "dim 3; generators p,q,z; [1,2]=1*3;",
    );
    let out = bin()
        .env("NILCOHOM_CATALOG", dir.path())
        .args(["validate", "heis3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("nilpotent: yes"));

    // without the variable the same name does not resolve
    let out = bin()
        .env_remove("NILCOHOM_CATALOG")
        .args(["validate", "heis3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn differential_style_input_block_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    // same algebra as kt, written with a differential statement
    let path = write_file(
        dir.path(),
        "kt-diff.alg",
        "dim 4; generators x,e1,e2,e3;\nd 4 = e1^e2;\n",
    );
    let out = run(&["betti", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("1 3 4 3 1"));

    let inconsistent = write_file(
        dir.path(),
        "bad-diff.alg",
        "dim 4; [2,3]=1*4;\nd 4 = a2^a3;\n",
    );
    assert_eq!(run(&["betti", &inconsistent]).status.code(), Some(2));
}

#[test]
fn warnings_flag_non_nilpotent_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "solv.alg", "dim 3; [1,2]=1*2;");
    let out = run(&["betti", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not nilpotent"));

    let json = run(&["betti", &path, "--json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&json)).unwrap();
    assert!(value["warnings"][0]
        .as_str()
        .unwrap()
        .contains("not nilpotent"));
}
