use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn qhl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhl"))
        .args(args)
        .env_remove("QHL_TOL")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn all_text(o: &Output) -> String {
    format!(
        "{}{}",
        String::from_utf8_lossy(&o.stdout),
        String::from_utf8_lossy(&o.stderr)
    )
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", all_text(o)))
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn without_name(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("name");
    v
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn every_fixture_validates() {
    for f in [
        "cz2.json",
        "cz3.json",
        "cs3.json",
        "cz3_twisted.json",
        "dw_z2.json",
        "quantum_plane.json",
    ] {
        let o = qhl(&["validate", p(&fixture(f))]);
        assert_eq!(code(&o), 0, "{f}: {}", all_text(&o));
    }
}

#[test]
fn broken_phi_names_the_pentagon() {
    let mut v = read_json(&fixture("cz3_twisted.json"));
    v["phi"][0][3] = json!("2");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let o = qhl(&["validate", p(&path)]);
    assert_eq!(code(&o), 1);
    assert!(all_text(&o).contains("FAIL pentagon"), "{}", all_text(&o));
    // other commands refuse the bundle and say why
    let o = qhl(&["invariant", p(&path), "--braid", "1"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("pentagon"));
}

#[test]
fn unreadable_input_exits_2() {
    let text = std::fs::read_to_string(fixture("cz2.json")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("truncated.json");
    std::fs::write(&path, &text[..text.len() / 2]).unwrap();
    assert_eq!(code(&qhl(&["validate", p(&path)])), 2);
    assert_eq!(code(&qhl(&["validate", p(&dir.path().join("missing.json"))])), 2);
    assert_eq!(code(&qhl(&["invariant", p(&fixture("cz2.json")), "--braid", "1 x"])), 2);
    assert_eq!(code(&qhl(&["invariant", p(&fixture("cz2.json")), "--rep", "nope"])), 2);
}

#[test]
fn identity_twist_returns_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let twistor = dir.path().join("identity.json");
    std::fs::write(
        &twistor,
        json!({"dim": 3, "scalar": "rational", "f": [[0, 0, "1"]], "f_inv": [[0, 0, "1"]]}).to_string(),
    )
    .unwrap();
    let out = dir.path().join("out.json");
    let o = qhl(&["twist", p(&fixture("cz3_twisted.json")), p(&twistor), "-o", p(&out)]);
    assert_eq!(code(&o), 0, "{}", all_text(&o));
    assert_eq!(
        without_name(read_json(&out)),
        without_name(read_json(&fixture("cz3_twisted.json")))
    );
}

#[test]
fn twist_and_untwist_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (mid, back) = (dir.path().join("mid.json"), dir.path().join("back.json"));
    let o = qhl(&[
        "twist",
        p(&fixture("cz3.json")),
        p(&fixture("twistors/cz3_diagonal.json")),
        "-o",
        p(&mid),
    ]);
    assert_eq!(code(&o), 0, "{}", all_text(&o));
    assert_eq!(read_json(&mid), read_json(&fixture("cz3_twisted.json")));
    let o = qhl(&[
        "twist",
        p(&mid),
        p(&fixture("twistors/cz3_diagonal_inverse.json")),
        "-o",
        p(&back),
    ]);
    assert_eq!(code(&o), 0, "{}", all_text(&o));
    assert_eq!(
        without_name(read_json(&back)),
        without_name(read_json(&fixture("cz3.json")))
    );
    assert_eq!(code(&qhl(&["validate", p(&back)])), 0);
}

#[test]
fn trefoil_on_the_quantum_plane() {
    let o = qhl(&[
        "--json",
        "invariant",
        p(&fixture("quantum_plane.json")),
        "--braid",
        "1 1 1",
        "--normalized",
    ]);
    assert_eq!(code(&o), 0, "{}", all_text(&o));
    let v = stdout_json(&o);
    assert_eq!(v["e"], 3);
    assert_eq!(v["n"], 1);
    assert_eq!(v["z_plus"], json!({"4": "1"}));
    assert_eq!(v["z_minus"], json!({"-4": "1"}));
    assert_eq!(v["theta"], json!({"-6": "-1", "2": "1", "6": "1", "10": "1"}));
    assert_eq!(v["normalized"]["L"], json!({"-4": "1", "-12": "1", "-16": "-1"}));
}

#[test]
fn empty_braid_is_the_unknot_baseline() {
    let o = qhl(&[
        "--json",
        "invariant",
        p(&fixture("quantum_plane.json")),
        "--braid",
        "",
        "--normalized",
    ]);
    assert_eq!(code(&o), 0, "{}", all_text(&o));
    let v = stdout_json(&o);
    assert_eq!(v["strands"], 1);
    assert_eq!(v["e"], 0);
    assert_eq!(v["theta"], json!({"-2": "1", "2": "1"}));
    assert_eq!(v["normalized"]["L"], json!({"0": "1"}));
}

#[test]
fn conjugate_words_give_the_same_l() {
    let l = |braid: &str| {
        let o = qhl(&[
            "--json",
            "invariant",
            p(&fixture("quantum_plane.json")),
            "--braid",
            braid,
            "--strands",
            "3",
        ]);
        assert_eq!(code(&o), 0, "{}", all_text(&o));
        stdout_json(&o)["L"].clone()
    };
    assert_eq!(l("1 -2 1 1"), l("2 1 -2 1 1 -2"));
    assert_eq!(l("1 -2 1 1"), l("-2 1 1 1"));
}

#[test]
fn oracle_reports_the_trefoil() {
    let o = qhl(&["oracle", "--braid", "1 1 1", "--substitute", "0.9i"]);
    assert_eq!(code(&o), 0, "{}", all_text(&o));
    let v = stdout_json(&o);
    assert_eq!(v["bracket"], "-A^5 - A^-3 + A^-7");
    assert_eq!(v["jones"], "A^-4 + A^-12 - A^-16");
    assert_eq!(v["writhe"], 3);
    let frozen = read_json(&fixture("oracle/trefoil.json"));
    let got = v["jones_value"].as_array().unwrap();
    let want = frozen["points"][0]["jones"].as_array().unwrap();
    for k in 0..2 {
        assert!((got[k].as_f64().unwrap() - want[k].as_f64().unwrap()).abs() < 1e-12);
    }
    assert_eq!(code(&qhl(&["oracle", "--braid", "1 0"])), 2);
    assert_eq!(code(&qhl(&["oracle", "--braid", "1", "--substitute", "what"])), 2);
}

#[test]
fn tolerance_comes_from_the_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_qhl"));
        c.env_remove("QHL_TOL");
        if let Some(t) = env {
            c.env("QHL_TOL", t);
        }
        c.args(extra).arg("validate").arg(fixture("dw_z2.json"));
        c.output().unwrap().status.code().unwrap()
    };
    assert_eq!(run(None, &[]), 0);
    // a negative tolerance fails every floating point check
    assert_eq!(run(Some("-1"), &[]), 1);
    assert_eq!(run(Some("-1"), &["--tol", "1e-9"]), 0);
    assert_eq!(run(Some("abc"), &[]), 2);
}

#[test]
fn twist_invariance_and_control() {
    let o = qhl(&[
        "twist-invariance",
        p(&fixture("cz3.json")),
        "--trials",
        "4",
        "--negative-control",
    ]);
    assert_eq!(code(&o), 0, "{}", all_text(&o));
    let text = all_text(&o);
    assert!(text.contains("max residual"));
    assert!(text.contains("negative control detected"));
    // exact identity twistor: residual exactly zero
    let dir = tempfile::tempdir().unwrap();
    let twistor = dir.path().join("identity.json");
    std::fs::write(
        &twistor,
        json!({"dim": 3, "scalar": "rational", "f": [[0, 0, "1"]], "f_inv": [[0, 0, "1"]]}).to_string(),
    )
    .unwrap();
    let o = qhl(&[
        "--json",
        "twist-invariance",
        p(&fixture("cz3.json")),
        p(&twistor),
        "--rep",
        "rotation",
    ]);
    assert_eq!(code(&o), 0, "{}", all_text(&o));
    for c in stdout_json(&o)["invariance"]["checks"].as_array().unwrap() {
        assert_eq!(c["residual"], 0.0, "{c}");
    }
}

#[test]
fn markov_and_braid_checks_pass() {
    for args in [
        vec!["markov-check", "quantum_plane.json", "--trials", "10"],
        vec!["markov-check", "cs3.json", "--rep", "standard", "--trials", "10"],
        vec!["braid-check", "dw_z2.json", "--rep", "regular", "--strands", "3"],
        vec!["braid-check", "quantum_plane.json"],
    ] {
        let path = fixture(args[1]);
        let mut full = vec![args[0], p(&path)];
        full.extend(&args[2..]);
        let o = qhl(&full);
        assert_eq!(code(&o), 0, "{args:?}: {}", all_text(&o));
    }
}
