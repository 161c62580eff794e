use std::path::Path;
use std::process::{Command, Output};

use tanaka_core::catalog::make_algebra;
use tanaka_core::format::{algebra_to_json, to_json, ProlongationReport};

fn tanaka(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tanaka")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn check_presets_and_files() {
    let o = tanaka(&["check", "preset:heisenberg3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("fundamental"));

    let dir = tempfile::tempdir().unwrap();
    let text = algebra_to_json(&make_algebra("free_235").unwrap()).unwrap();
    let path = write(dir.path(), "free.json", &text);
    assert_eq!(tanaka(&["check", &path]).status.code(), Some(0));
}

#[test]
fn corrupted_json_is_an_input_error_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.json", "{\n  \"name\": \"x\",\n  \"degrees\": {\"-1\": [\"e1\"]\n");
    let o = tanaka(&["check", &path]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line") && err.contains("column"), "{err}");

    let path = write(dir.path(), "unknown.json", r#"{"name": "x", "degrees": {"-1": ["e1"]}, "brackets": [], "extra": 1}"#);
    assert_eq!(tanaka(&["check", &path]).status.code(), Some(2));
    assert_eq!(tanaka(&["check", "/nonexistent/algebra.json"]).status.code(), Some(2));
}

#[test]
fn abelian_with_a_lower_degree_is_not_fundamental() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "ab.json", r#"{"name": "ab21", "degrees": {"-2": ["z"], "-1": ["x", "y"]}, "brackets": []}"#);
    let o = tanaka(&["check", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not fundamental"));
    let o = tanaka(&["prolong", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not fundamental"));
}

#[test]
fn jacobi_failure_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"name": "broken", "degrees": {"-3": ["d"], "-2": ["c"], "-1": ["a", "b"]},
        "brackets": [{"left": "a", "right": "b", "value": [{"basis": "c", "num": 1, "den": 1}]},
                     {"left": "a", "right": "c", "value": [{"basis": "d", "num": 1, "den": 1}]},
                     {"left": "b", "right": "c", "value": [{"basis": "d", "num": 1, "den": 1}]},
                     {"left": "a", "right": "a", "value": [{"basis": "c", "num": 1, "den": 1}]}]}"#;
    let path = write(dir.path(), "broken.json", text);
    let o = tanaka(&["check", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("violation"), "{}", stdout(&o));
}

#[test]
fn prolong_reports() {
    let o = tanaka(&["prolong", "preset:abelian3", "--g0", "co"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("order 1; dims g0=4 g1=3; bound 10"), "{out}");
    assert!(out.contains("dim(M) + Σ dim(g^i) = 3 + 4 + 3 = 10"), "{out}");
    assert!(stdout(&tanaka(&["prolong", "preset:abelian2", "--g0", "gl", "--max-degree", "3"])).contains("truncated at 3; dims 6,8,10"));
    assert!(stdout(&tanaka(&["prolong", "preset:abelian2", "--g0", "zero"])).contains("order 0; bound 2"));
    let o = tanaka(&["prolong", "preset:abelian3", "--g0", "co", "--base-dim", "5"]);
    assert!(stdout(&o).contains("bound 12"));
    let o = tanaka(&["prolong", "preset:free_235"]);
    assert!(stdout(&o).contains("order 3; dims g0=4 g1=2 g2=1 g3=2; bound 14"), "{}", stdout(&o));
}

#[test]
fn prolong_input_errors() {
    assert_eq!(tanaka(&["prolong", "preset:heisenberg3", "--g0", "so"]).status.code(), Some(2));
    assert_eq!(tanaka(&["prolong", "preset:abelian2", "--g0", "nonsense"]).status.code(), Some(2));
    assert_eq!(tanaka(&["prolong", "preset:abelian2", "--max-degree", "0"]).status.code(), Some(2));
    assert_eq!(tanaka(&["prolong", "preset:abelian3", "--base-dim", "2"]).status.code(), Some(2));
    assert_eq!(tanaka(&["prolong", "preset:abelian2", "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn g0_files() {
    let dir = tempfile::tempdir().unwrap();
    let scalars = write(dir.path(), "scalars.json", r#"{"generators": [{"-1": [[1, 0], [0, 1]]}]}"#);
    let o = tanaka(&["prolong", "preset:abelian2", "--g0", &format!("file:{scalars}")]);
    assert!(stdout(&o).contains("order 0; dims g0=1; bound 3"), "{}{}", stdout(&o), stderr(&o));
    let lorentz = write(dir.path(), "so11.json", r#"{"preset": "so", "form": [[1, 0], [0, "-1"]]}"#);
    let o = tanaka(&["prolong", "preset:abelian2", "--g0", &format!("file:{lorentz}")]);
    assert!(stdout(&o).contains("order 0; dims g0=1; bound 3"), "{}{}", stdout(&o), stderr(&o));
    let not_derivation = write(dir.path(), "nd.json", r#"{"generators": [{"-1": [[1, 0], [0, 0]]}]}"#);
    assert_eq!(tanaka(&["prolong", "preset:heisenberg3", "--g0", &format!("file:{not_derivation}")]).status.code(), Some(2));
}

#[test]
fn prolong_json_round_trips() {
    let o = tanaka(&["prolong", "preset:heisenberg3", "--max-degree", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let report: ProlongationReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.dims, vec![4, 6, 9]);
    assert_eq!(format!("{}\n", to_json(&report)), text);
    assert!(!text.contains('.'), "rationals are printed as num/den");
}

#[test]
fn torsion_reports() {
    let o = tanaka(&["torsion", "preset:abelian2", "--g0", "gl", "--max-degree", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS Ker ∂ = gl_2 + g^1"));
    let o = tanaka(&["torsion", "preset:heisenberg3", "--level", "1", "--max-degree", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 3, "{out}");
    assert!(!out.contains("FAIL"));
    let o = tanaka(&["torsion", "preset:abelian2", "--g0", "gl", "--max-degree", "2", "--level", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unreachable"));
    let o = tanaka(&["torsion", "preset:abelian3", "--g0", "co", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kernel_identity"], true);
}

#[test]
fn tower_reports() {
    let out = stdout(&tanaka(&["tower", "preset:abelian3", "--g0", "co"]));
    assert!(out.trim_end().ends_with("dim bound = 10"), "{out}");
    let out = stdout(&tanaka(&["tower", "preset:abelian3", "--g0", "so"]));
    let rows: Vec<&str> = out.lines().filter(|l| l.trim_start().chars().next().is_some_and(|c| c.is_ascii_digit())).collect();
    assert_eq!(rows.len(), 1, "{out}");
    let out = stdout(&tanaka(&["tower", "preset:abelian2", "--g0", "gl", "--max-degree", "2"]));
    let rows: Vec<&str> = out.lines().filter(|l| l.ends_with("truncated")).collect();
    assert_eq!(rows.len(), 3, "{out}");
    let o = tanaka(&["tower", "preset:free_235", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["bound"], 14);
}

#[test]
fn der0_report() {
    let o = tanaka(&["der0", "preset:heisenberg3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("dim der0(heisenberg3) = 4"));
}

#[test]
fn selftest_passes_for_several_seeds() {
    let o = tanaka(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("(200 cases)"));
    for seed in ["1", "987654321"] {
        let o = tanaka(&["selftest", "--seed", seed, "--cases", "40"]);
        assert_eq!(o.status.code(), Some(0), "seed {seed}: {}", stderr(&o));
    }
}

#[test]
fn selftest_catches_an_injected_fault() {
    let o = tanaka(&["selftest", "--cases", "20", "--inject-fault", "act-quasi"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("first counterexample"));
}
