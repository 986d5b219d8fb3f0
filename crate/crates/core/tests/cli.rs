use std::path::{Path, PathBuf};
use std::process::Command;

use poset_derived::cli::{load_poset, parse_poset, run_with, serialize_poset};
use poset_derived::fixtures;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("posetdx").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn shipped_fixture_files_match_generated_posets() {
    for name in fixtures::NAMED {
        let file = fixture(&format!("{name}.poset"));
        let loaded = load_poset(&file).unwrap();
        assert_eq!(loaded, fixtures::by_name(name).unwrap(), "{name}");
    }
    assert_eq!(load_poset(&fixture("CHAIN2.poset")).unwrap(), fixtures::chain(2));
    assert_eq!(load_poset(&fixture("point.json")).unwrap(), fixtures::point());
    assert_eq!(load_poset(&fixture("FIG1L.poset")).unwrap().len(), 12);
    assert_eq!(load_poset(&fixture("FIG1R.poset")).unwrap().len(), 12);
}

#[test]
fn compare_names_f11_for_the_counterexample() {
    let (code, out, _) = run(&["compare", &path("FIG1L.poset"), &path("FIG1R.poset"), "--primes", "2,3,5,7,11"]);
    assert_eq!(code, 10);
    assert!(out.starts_with("distinguished by invariant factors over F11"), "{out}");
    let (code, out, _) = run(&["compare", &path("FIG1L.poset"), &path("FIG1R.poset"), "--primes", "2,3,5,7", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "not_distinguished");
}

#[test]
fn info_on_a_point() {
    let (code, out, _) = run(&["info", &path("POINT.poset"), "--primes", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("points                        1\n"), "{out}");
    assert!(out.contains("euler characteristic          1\n"));
    assert!(out.contains("betti over Q                  (1)\n"));
    let (code, out, _) = run(&["info", &path("CROWN4.poset"), "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "betti",
            "components",
            "coxeter_charpoly",
            "coxeter_charpoly_text",
            "dim",
            "euler_char",
            "mobius_entry_sum",
            "n",
            "p_invariant_factors",
            "q_invariant_factors"
        ]
    );
    assert_eq!(v["betti"]["Q"], serde_json::json!([1, 1]));
    assert_eq!(v["p_invariant_factors"].as_object().unwrap().len(), 15);
    assert!(!out.contains('.'), "no floating point in output");
}

#[test]
fn ay_reports_the_violation_and_algebra() {
    let (code, out, _) = run(&["construct", "ay", &path("V3.poset"), "--closed", "1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("condition fails: y=1 <= y'=1, u'=2 <= u=3"), "{out}");
    assert!(out.contains("algebra of dimension 5"));
    assert!(!out.contains("e(2,3) * e(3,1)"));
    let (_, out, _) = run(&["construct", "ay", &path("V3.poset"), "--closed", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dimension"], 5);
}

#[test]
fn constructions_write_poset_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("flip.poset");
    let comps: Vec<String> = ["V3.poset", "CHAIN2.poset", "POINT.poset", "YP.poset", "CROWN4.poset"]
        .iter()
        .map(|f| path(f))
        .collect();
    let exs = path("EXS.poset");
    let mut args = vec!["construct", "flip", exs.as_str()];
    args.push("--components");
    args.extend(comps.iter().map(String::as_str));
    args.extend(["--out", out.to_str().unwrap()]);
    let (code, _, err) = run(&args);
    assert_eq!(code, 0, "{err}");
    let flipped = load_poset(&out).unwrap();
    assert_eq!(flipped.len(), 13);

    let (code, text, _) = run(&["construct", "ordinal-sum", &path("CHAIN2.poset"), &path("POINT.poset")]);
    assert_eq!(code, 0);
    assert!(parse_poset(&text).unwrap().is_isomorphic(&fixtures::chain(3)).is_some());

    let (code, text, _) = run(&["construct", "opposite", &path("V3.poset")]);
    assert_eq!(code, 0);
    assert_eq!(parse_poset(&text).unwrap(), fixtures::v3().opposite());

    let json_out = dir.path().join("prod.json");
    let (code, _, _) = run(&[
        "construct",
        "product",
        &path("CHAIN2.poset"),
        &path("CHAIN2.poset"),
        "--out",
        json_out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(load_poset(&json_out).unwrap().is_isomorphic(&fixtures::diamond()).is_some());

    let (code, _, err) = run(&["construct", "flip", &path("CHAIN2.poset"), "--components", &path("POINT.poset")]);
    assert_eq!(code, 2);
    assert!(err.contains("element"), "{err}");
}

#[test]
fn homological_subcommands() {
    let (code, out, _) = run(&["ext", &path("V3.poset"), "--from", "1", "--to", "3"]);
    assert_eq!((code, out.as_str()), (0, "ext over Q: (0, 1)\n"));
    let (_, out, _) = run(&["ext", &path("DIAMOND.poset"), "--from", "t", "--to", "b", "--field", "2"]);
    assert_eq!(out, "ext over F2: (0, 0, 1)\n");
    let (_, out, _) = run(&["cohomology", &path("CROWN4.poset"), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["cohomology"], serde_json::json!([1, 1]));
    let (_, out, _) = run(&["hochschild", &path("CROWN4.poset"), "--max-degree", "3"]);
    assert_eq!(out, "hochschild over Q: (1, 1, 0, 0)\n");
    let (code, out, err) = run(&["hochschild", &path("FIG1L.poset")]);
    assert_eq!(code, 0, "{err}");
    // Order complex of an ordinal sum is a join: reduced H_1 of X+Y and of Z are both 2.
    assert_eq!(out, "hochschild over Q: (1, 0, 0, 4)\n");
    let (_, info, _) = run(&["info", &path("FIG1L.poset"), "--primes", "2"]);
    assert!(info.contains("betti over Q                  (1, 0, 0, 4, 0, 0)"), "{info}");
}

#[test]
fn hochschild_refuses_large_posets() {
    let dir = tempfile::tempdir().unwrap();
    let big = dir.path().join("big.poset");
    std::fs::write(&big, serialize_poset(&fixtures::chain(21))).unwrap();
    let (code, _, err) = run(&["hochschild", big.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("441"), "{err}");
}

#[test]
fn ext_between_diagram_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let poset = r#"{"elements": ["x", "y"], "less_than": [["x", "y"]]}"#;
    std::fs::write(&a, format!(r#"{{"poset": {poset}, "field": "F3", "stalks": {{"x": 1}}}}"#)).unwrap();
    std::fs::write(&b, format!(r#"{{"poset": {poset}, "field": "F3", "stalks": {{"y": 1}}}}"#)).unwrap();
    let (code, out, err) = run(&["ext-diagram", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out, "ext over F3: (0, 1)\n");
}

#[test]
fn iso_and_exit_codes() {
    let (code, out, _) = run(&["iso", &path("DIAMOND.poset"), &path("APR_R.poset")]);
    assert_eq!((code, out.as_str()), (10, "not isomorphic\n"));
    let (code, out, _) = run(&["iso", &path("YP.poset"), &path("YP.poset")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("isomorphic\n"));
    assert_eq!(run(&["bogus"]).0, 2);
    assert_eq!(run(&["info", "/nonexistent.poset"]).0, 2);
    assert_eq!(run(&["info", &path("V3.poset"), "--primes", "4"]).0, 2);
    assert_eq!(run(&["ext", &path("V3.poset"), "--from", "9", "--to", "1"]).0, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("compare"));
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.poset");
    std::fs::write(&bad, "elements: a b\na < b\nb < a\n").unwrap();
    let (code, _, err) = run(&["info", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("cycle"), "{err}");
    std::fs::write(&bad, "elements: a\nwhat\n").unwrap();
    let (code, _, err) = run(&["info", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn binary_runs_end_to_end() {
    let out = Command::new(env!("CARGO_BIN_EXE_posetdx"))
        .args(["compare", &path("FIG1L.poset"), &path("FIG1R.poset"), "--primes", "2,3,5,7,11"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(10));
    assert!(String::from_utf8_lossy(&out.stdout).contains("F11"));
    let out = Command::new(env!("CARGO_BIN_EXE_posetdx")).arg("info").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
