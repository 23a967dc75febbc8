//! The shipped fixtures are frozen outputs of the catalog and of `qhl twist`.

use std::path::{Path, PathBuf};
use std::process::Command;

use qhopf::io::{bundle_to_json, hopf_rep_to_json, to_pretty, twistor_to_json};
use qhopf::markov::HopfRepBundle;
use qhopf::{catalog, Rational};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn assert_frozen(name: &str, v: &Value) {
    let shipped = std::fs::read_to_string(fixture(name)).unwrap();
    assert!(
        shipped == to_pretty(v),
        "{name} differs from the catalog; rerun the make_fixtures example"
    );
}

#[test]
fn bundles_match_the_catalog() {
    assert_frozen("cz2.json", &bundle_to_json(&catalog::cyclic::<Rational>(2).unwrap()));
    assert_frozen("cz3.json", &bundle_to_json(&catalog::cyclic::<Rational>(3).unwrap()));
    assert_frozen("cs3.json", &bundle_to_json(&catalog::s3::<Rational>().unwrap()));
    assert_frozen("dw_z2.json", &bundle_to_json(&catalog::twisted_double_z2().unwrap()));
    assert_frozen("quantum_plane.json", &hopf_rep_to_json(&HopfRepBundle::quantum_plane()));
}

#[test]
fn twistors_match_the_catalog() {
    let z3 = catalog::z3_default_twistor().unwrap();
    assert_frozen(
        "twistors/cz2_catalog.json",
        &twistor_to_json(&catalog::z2_twistor().unwrap()),
    );
    assert_frozen("twistors/cz3_diagonal.json", &twistor_to_json(&z3));
    assert_frozen("twistors/cz3_diagonal_inverse.json", &twistor_to_json(&z3.inverse()));
}

#[test]
fn twisted_fixture_is_qhl_twist_output() {
    let out = Command::new(env!("CARGO_BIN_EXE_qhl"))
        .arg("twist")
        .arg(fixture("cz3.json"))
        .arg(fixture("twistors/cz3_diagonal.json"))
        .env_remove("QHL_TOL")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        std::fs::read_to_string(fixture("cz3_twisted.json")).unwrap()
    );
}
