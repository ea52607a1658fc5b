use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conicfree")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("conicfree-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn analyze_json_is_deterministic() {
    let a = run(&["--json", "analyze", "corpus:celal_three_conics"]);
    let b = run(&["--json", "analyze", "corpus:celal_three_conics"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "conicfree.report/1");
    assert_eq!(v["freeness"]["verdict"], "free");
    assert_eq!(v["freeness"]["tau"], 19);
    assert_eq!(v["checks"]["arnold_exponent"], "2/3");
}

#[test]
fn modular_linalg_agrees() {
    let a = run(&["--json", "analyze", "corpus:persson_deformed"]);
    let b = run(&["--json", "--modular-linalg", "on", "analyze", "corpus:persson_deformed"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn syntax_error_exits_one_with_position() {
    let o = run(&["analyze", "x^2+*y^2"]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("position 4"), "{err}");
    assert!(err.contains("    ^"), "{err}");
}

#[test]
fn unknown_corpus_entry_and_bad_flags() {
    assert_eq!(code(&run(&["analyze", "corpus:nope"])), 1);
    assert_eq!(code(&run(&["analyze", "corpus:ploski:9"])), 1);
    assert_eq!(code(&run(&["theorems", "near", "--kmax", "10001"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn non_reduced_is_inconclusive() {
    let o = run(&["analyze", "(x^2+y^2-z^2)^2*(x^2+y^2-2*z^2)"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("indeterminate"));
}

#[test]
fn arrangement_file_and_points_file() {
    let conics = temp_file("arr.txt", "# two conics with one A7 point\nx^2-y*z\nx^2-y*z+y^2\n\n");
    let o = run(&["analyze", conics.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("verdict    free"));

    let pts = temp_file("pts.txt", "1:0:0\n(0:1:0)\n");
    let o = run(&["--json", "--points", pts.to_str().unwrap(), "analyze", "x^3*y^3+z^6"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["points"][0]["tau"], 10);
    assert_eq!(v["points"][1]["tau"], 10);

    let bad = temp_file("bad.txt", "x^2+y^2\nx^2+\n");
    let o = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8(o.stderr).unwrap().contains(":2:"));
}

#[test]
fn classify_reports_incomplete_surveys() {
    assert_eq!(code(&run(&["classify", "corpus:celal_three_conics"])), 0);
    // tangent at the conjugate points (0:±sqrt2:1)
    let o = run(&["classify", "(x^2+y^2-2*z^2)*(2*x^2+y^2-2*z^2)"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("incomplete"));
    assert_eq!(code(&run(&["classify", "(x^2+y^2-z^2)*(x*y)"])), 1);
}

#[test]
fn theorem_certificates() {
    let o = run(&["--json", "theorems", "char", "--kmax", "20"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["admissible"], serde_json::json!([2, 3, 4]));
}

#[test]
fn deformation_exit_codes() {
    let ok = run(&["deform-check", "corpus:persson_triconical", "corpus:persson_deformed"]);
    assert_eq!(code(&ok), 0);
    let bad = run(&["deform-check", "corpus:celal_three_conics", "corpus:persson_deformed"]);
    assert_eq!(code(&bad), 2);
    assert!(stdout(&bad).contains("FAIL"));
}

#[test]
fn supersolvable_modes() {
    let inc = temp_file("inc.txt", "point 1: components 1,2\npoint 2: components 3,4\n");
    let o = run(&["--json", "supersolvable", inc.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["supersolvable"], false);

    let o = run(&["supersolvable", "corpus:pencil_two_points:4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("[supplied]"));

    assert_eq!(code(&run(&["supersolvable", "corpus:persson_triconical"])), 2);
}

#[test]
fn regression_subset_and_listing() {
    let o = run(&["regression", "two_conics_a7", "ploski:3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("4 instance(s), 0 failed"));
    assert_eq!(code(&run(&["regression", "missing"])), 1);
    assert!(stdout(&run(&["corpus"])).contains("pencil_four_points"));
}
