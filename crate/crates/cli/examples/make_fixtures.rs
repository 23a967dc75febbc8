//! Regenerate the shipped fixture files from the built-in catalog.
//!
//! Usage: `cargo run -p qhl --example make_fixtures -- <dir>`. The twisted
//! `C[Z3]` fixture is produced afterwards with `qhl twist`.

use std::fs;
use std::path::Path;

use bracket_oracle::{jones, kauffman_bracket, ClosedBraid};
use num_complex::Complex64;
use qhopf::catalog;
use qhopf::io::{bundle_to_json, hopf_rep_to_json, to_pretty, twistor_to_json};
use qhopf::markov::HopfRepBundle;
use qhopf::Rational;
use serde_json::{json, Value};

/// Sample points for the trefoil comparison, in the `s` variable.
const SAMPLES: [(f64, f64); 5] = [(0.9, 0.0), (1.1, 0.2), (0.7, -0.4), (0.955336, 0.295520), (1.3, 0.5)];

fn write(dir: &Path, name: &str, v: &Value) -> anyhow::Result<()> {
    let path = dir.join(name);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(&path, to_pretty(v))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn main() -> anyhow::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into());
    let dir = Path::new(&dir);

    write(dir, "cz2.json", &bundle_to_json(&catalog::cyclic::<Rational>(2)?))?;
    write(dir, "cz3.json", &bundle_to_json(&catalog::cyclic::<Rational>(3)?))?;
    write(dir, "cs3.json", &bundle_to_json(&catalog::s3::<Rational>()?))?;
    write(dir, "dw_z2.json", &bundle_to_json(&catalog::twisted_double_z2()?))?;
    write(
        dir,
        "quantum_plane.json",
        &hopf_rep_to_json(&HopfRepBundle::quantum_plane()),
    )?;

    write(
        dir,
        "twistors/cz2_catalog.json",
        &twistor_to_json(&catalog::z2_twistor()?),
    )?;
    let z3 = catalog::z3_default_twistor()?;
    write(dir, "twistors/cz3_diagonal.json", &twistor_to_json(&z3))?;
    write(
        dir,
        "twistors/cz3_diagonal_inverse.json",
        &twistor_to_json(&z3.inverse()),
    )?;

    // the oracle side of the trefoil comparison, with A = i·s
    let b = ClosedBraid::parse("1 1 1", 2)?;
    let bracket = kauffman_bracket(&b)?;
    let jp = jones(&b)?;
    let points: Vec<Value> = SAMPLES
        .iter()
        .map(|&(re, im)| {
            let s = Complex64::new(re, im);
            let a = Complex64::i() * s;
            let mirror = jp.invert_variable().eval(a);
            json!({
                "s": [s.re, s.im],
                "A": [a.re, a.im],
                "jones": [jp.eval(a).re, jp.eval(a).im],
                "jones_mirror": [mirror.re, mirror.im],
            })
        })
        .collect();
    write(
        dir,
        "oracle/trefoil.json",
        &json!({
            "braid": "1 1 1",
            "strands": 2,
            "states": 8,
            "substitution": "A = i*s",
            "bracket": bracket.to_string(),
            "jones": jp.to_string(),
            "points": points,
        }),
    )?;
    Ok(())
}
