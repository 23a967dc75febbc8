//! JSON file formats for bundles, Hopf representation data and twistors.
//!
//! Tensors are lists of rows `[i1, ..., ik, scalar]`. Structure maps list the
//! source indices first, so `mult` rows read `[i, j, k, c]` for
//! `b_i b_j = Σ c b_k` and `coproduct` rows read `[i, j, k, c]` for
//! `Δ(b_i) = Σ c b_j ⊗ b_k`. Matrices are dense row-major grids of scalars.

use serde_json::{json, Map, Value};

use crate::markov::HopfRepBundle;
use crate::quasi_hopf::QuasiHopf;
use crate::rep::{Matrix, Representation};
use crate::scalar::{Complex64, Laurent, Rational, Ring, Scalar, ScalarMode};
use crate::tensor::{Algebra, Element, StructureMap};
use crate::twist::Twistor;
use crate::{Error, Result};

fn fmt_err(what: impl std::fmt::Display) -> Error {
    Error::Format(what.to_string())
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| fmt_err(format!("invalid JSON at line {}, column {}: {e}", e.line(), e.column())))
}

/// Indented JSON that keeps short arrays and objects on one line, so
/// tensor rows read one per line.
pub fn to_pretty(v: &Value) -> String {
    let mut out = String::new();
    write_pretty(v, 0, &mut out);
    out.push('\n');
    out
}

fn write_pretty(v: &Value, indent: usize, out: &mut String) {
    let compact = v.to_string();
    let nested = match v {
        Value::Array(xs) => xs.iter().any(|x| x.is_array() || x.is_object()),
        Value::Object(m) => m.values().any(|x| x.is_array() || x.is_object()),
        _ => false,
    };
    let fits = compact.len() + indent <= 100 && !(nested && compact.len() > 60);
    if fits || !(v.is_array() || v.is_object()) {
        out.push_str(&compact);
        return;
    }
    let pad = " ".repeat(indent + 2);
    match v {
        Value::Array(xs) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad);
                write_pretty(x, indent + 2, out);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
        }
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_pretty(x, indent + 2, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
        }
        _ => {}
    }
    out.push_str(&" ".repeat(indent));
    out.push(if v.is_array() { ']' } else { '}' });
}

/// The scalar mode named in a file's `"scalar"` field.
pub fn file_mode(v: &Value) -> Result<ScalarMode> {
    v.get("scalar")
        .and_then(Value::as_str)
        .ok_or_else(|| fmt_err("missing \"scalar\" field"))?
        .parse()
        .map_err(|_| fmt_err("unknown scalar mode"))
}

/// `"quasi-hopf"` (the default) or `"hopf-rep"`.
pub fn file_kind(v: &Value) -> &str {
    v.get("kind").and_then(Value::as_str).unwrap_or("quasi-hopf")
}

fn check_mode<R: Ring>(v: &Value) -> Result<()> {
    let mode = file_mode(v)?;
    if mode != R::MODE {
        return Err(fmt_err(format!("file uses {mode} scalars, expected {}", R::MODE)));
    }
    Ok(())
}

fn scalar<R: Ring>(v: &Value, at: &str) -> Result<R> {
    let s = Scalar::from_json(R::MODE, v).map_err(|e| fmt_err(format!("{at}: {e}")))?;
    R::from_scalar(&s).map_err(|e| fmt_err(format!("{at}: {e}")))
}

fn scalar_json<R: Ring>(x: &R) -> Value {
    x.to_scalar().to_json()
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| fmt_err(format!("missing field \"{name}\"")))
}

fn usize_field(v: &Value, name: &str) -> Result<usize> {
    field(v, name)?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| fmt_err(format!("field \"{name}\" must be a non-negative integer")))
}

fn rows<R: Ring>(v: &Value, arity: usize, dim: usize, name: &str) -> Result<Vec<(Vec<usize>, R)>> {
    let list = v
        .as_array()
        .ok_or_else(|| fmt_err(format!("\"{name}\" must be a list of rows")))?;
    list.iter()
        .enumerate()
        .map(|(r, row)| {
            let at = format!("\"{name}\" row {r}");
            let items = row.as_array().ok_or_else(|| fmt_err(format!("{at}: not a list")))?;
            if items.len() != arity + 1 {
                return Err(fmt_err(format!("{at}: expected {} indices and a scalar", arity)));
            }
            let idx = items[..arity]
                .iter()
                .map(|i| match i.as_u64() {
                    Some(i) if (i as usize) < dim => Ok(i as usize),
                    _ => Err(fmt_err(format!("{at}: index {i} out of range"))),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((idx, scalar(&items[arity], &at)?))
        })
        .collect()
}

fn element<R: Ring>(v: &Value, rank: usize, dim: usize, name: &str) -> Result<Element<R>> {
    Element::from_entries(rank, dim, rows(v, rank, dim, name)?)
}

fn opt_element<R: Ring>(v: &Value, rank: usize, dim: usize, name: &str) -> Result<Option<Element<R>>> {
    match v.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(x) => element(x, rank, dim, name).map(Some),
    }
}

fn map<R: Ring>(v: &Value, src: usize, tgt: usize, dim: usize, name: &str) -> Result<StructureMap<R>> {
    StructureMap::from_rows(src, tgt, dim, rows(field(v, name)?, src + tgt, dim, name)?)
}

fn rows_json<R: Ring>(rows: Vec<(Vec<usize>, R)>) -> Value {
    Value::Array(
        rows.into_iter()
            .map(|(idx, c)| {
                let mut row: Vec<Value> = idx.into_iter().map(Value::from).collect();
                row.push(scalar_json(&c));
                Value::Array(row)
            })
            .collect(),
    )
}

pub fn element_json<R: Ring>(x: &Element<R>) -> Value {
    rows_json(x.rows())
}

fn matrix<R: Ring>(v: &Value, n: usize, name: &str) -> Result<Matrix<R>> {
    let grid = v
        .as_array()
        .filter(|g| g.len() == n)
        .ok_or_else(|| fmt_err(format!("{name}: expected {n} rows")))?;
    let rows = grid
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let row = row
                .as_array()
                .filter(|r| r.len() == n)
                .ok_or_else(|| fmt_err(format!("{name}: row {i} must have {n} entries")))?;
            row.iter()
                .enumerate()
                .map(|(j, x)| scalar(x, &format!("{name}[{i}][{j}]")))
                .collect::<Result<Vec<R>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

pub fn matrix_json<R: Ring>(m: &Matrix<R>) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(scalar_json).collect()))
            .collect(),
    )
}

fn representation<R: Ring>(v: &Value, alg: &Algebra<R>, tol: f64) -> Result<Representation<R>> {
    let name = field(v, "name")?
        .as_str()
        .ok_or_else(|| fmt_err("representation name must be a string"))?;
    let dim = usize_field(v, "dim")?;
    let mats = field(v, "matrices")?
        .as_array()
        .filter(|m| m.len() == alg.dim())
        .ok_or_else(|| fmt_err(format!("representation {name}: need one matrix per basis element")))?;
    let matrices = mats
        .iter()
        .enumerate()
        .map(|(i, m)| matrix(m, dim, &format!("representation {name} matrix {i}")))
        .collect::<Result<Vec<_>>>()?;
    let irreducible = v.get("irreducible").and_then(Value::as_bool).unwrap_or(false);
    let rep = Representation::new(name, dim, matrices, irreducible)?;
    rep.validate(alg, tol)?;
    Ok(rep)
}

/// Parse a bundle; representations are checked to be homomorphisms, the
/// axioms are not.
pub fn parse_bundle<R: Ring>(v: &Value, tol: f64) -> Result<QuasiHopf<R>> {
    check_mode::<R>(v)?;
    if file_kind(v) != "quasi-hopf" {
        return Err(fmt_err("not a quasi-Hopf algebra file"));
    }
    let d = usize_field(v, "dim")?;
    if d == 0 {
        return Err(fmt_err("dimension must be positive"));
    }
    let name = v.get("name").and_then(Value::as_str).unwrap_or("unnamed").to_string();
    let algebra = Algebra::new(map(v, 2, 1, d, "mult")?, element(field(v, "unit")?, 1, d, "unit")?)?;
    let antipode = map(v, 1, 1, d, "antipode")?;
    let b = QuasiHopf {
        name,
        coproduct: map(v, 1, 2, d, "coproduct")?,
        counit: map(v, 1, 0, d, "counit")?,
        antipode_inv: match v.get("antipode_inv") {
            Some(_) => map(v, 1, 1, d, "antipode_inv")?,
            None => return Err(Error::Missing("antipode inverse")),
        },
        antipode,
        phi: element(field(v, "phi")?, 3, d, "phi")?,
        phi_inv: element(field(v, "phi_inv")?, 3, d, "phi_inv")?,
        alpha: element(field(v, "alpha")?, 1, d, "alpha")?,
        beta: element(field(v, "beta")?, 1, d, "beta")?,
        r: opt_element(v, 2, d, "r")?,
        r_inv: opt_element(v, 2, d, "r_inv")?,
        v: opt_element(v, 1, d, "v")?,
        v_inv: opt_element(v, 1, d, "v_inv")?,
        reps: Vec::new(),
        algebra,
    };
    let reps = match v.get("reps") {
        None => Vec::new(),
        Some(list) => list
            .as_array()
            .ok_or_else(|| fmt_err("\"reps\" must be a list"))?
            .iter()
            .map(|r| representation(r, &b.algebra, tol))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(QuasiHopf { reps, ..b })
}

pub fn bundle_to_json<R: Ring>(b: &QuasiHopf<R>) -> Value {
    let mut out = Map::new();
    out.insert("kind".into(), "quasi-hopf".into());
    out.insert("name".into(), b.name.clone().into());
    out.insert("scalar".into(), R::MODE.file_name().into());
    out.insert("dim".into(), b.dim().into());
    out.insert("mult".into(), rows_json(b.algebra.mult().rows()));
    out.insert("unit".into(), element_json(b.algebra.unit()));
    out.insert("coproduct".into(), rows_json(b.coproduct.rows()));
    out.insert("counit".into(), rows_json(b.counit.rows()));
    out.insert("antipode".into(), rows_json(b.antipode.rows()));
    out.insert("antipode_inv".into(), rows_json(b.antipode_inv.rows()));
    out.insert("phi".into(), element_json(&b.phi));
    out.insert("phi_inv".into(), element_json(&b.phi_inv));
    out.insert("alpha".into(), element_json(&b.alpha));
    out.insert("beta".into(), element_json(&b.beta));
    for (key, x) in [("r", &b.r), ("r_inv", &b.r_inv), ("v", &b.v), ("v_inv", &b.v_inv)] {
        if let Some(x) = x {
            out.insert(key.into(), element_json(x));
        }
    }
    let reps: Vec<Value> = b
        .reps
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "dim": r.dim,
                "irreducible": r.irreducible,
                "matrices": r.matrices.iter().map(matrix_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    out.insert("reps".into(), Value::Array(reps));
    Value::Object(out)
}

pub fn parse_hopf_rep<R: Ring>(v: &Value) -> Result<HopfRepBundle<R>> {
    check_mode::<R>(v)?;
    if file_kind(v) != "hopf-rep" {
        return Err(fmt_err("not a Hopf representation file"));
    }
    let dim = usize_field(v, "dim")?;
    Ok(HopfRepBundle {
        name: v.get("name").and_then(Value::as_str).unwrap_or("unnamed").to_string(),
        dim,
        r_check: matrix(field(v, "r_check")?, dim * dim, "r_check")?,
        r_check_inv: matrix(field(v, "r_check_inv")?, dim * dim, "r_check_inv")?,
        mu: matrix(field(v, "mu")?, dim, "mu")?,
        z_plus: scalar(field(v, "z_plus")?, "z_plus")?,
        z_minus: scalar(field(v, "z_minus")?, "z_minus")?,
    })
}

pub fn hopf_rep_to_json<R: Ring>(h: &HopfRepBundle<R>) -> Value {
    json!({
        "kind": "hopf-rep",
        "name": h.name,
        "scalar": R::MODE.file_name(),
        "dim": h.dim,
        "r_check": matrix_json(&h.r_check),
        "r_check_inv": matrix_json(&h.r_check_inv),
        "mu": matrix_json(&h.mu),
        "z_plus": scalar_json(&h.z_plus),
        "z_minus": scalar_json(&h.z_minus),
    })
}

pub fn parse_twistor<R: Ring>(v: &Value) -> Result<Twistor<R>> {
    check_mode::<R>(v)?;
    let d = usize_field(v, "dim")?;
    Ok(Twistor {
        f: element(field(v, "f")?, 2, d, "f")?,
        f_inv: element(field(v, "f_inv")?, 2, d, "f_inv")?,
    })
}

pub fn twistor_to_json<R: Ring>(t: &Twistor<R>) -> Value {
    json!({
        "scalar": R::MODE.file_name(),
        "dim": t.f.dim(),
        "f": element_json(&t.f),
        "f_inv": element_json(&t.f_inv),
    })
}

/// A bundle in whichever scalar mode its file declared.
#[derive(Clone, Debug)]
pub enum AnyBundle {
    Rational(QuasiHopf<Rational>),
    Laurent(QuasiHopf<Laurent>),
    Complex(QuasiHopf<Complex64>),
}

impl AnyBundle {
    pub fn parse(v: &Value, tol: f64) -> Result<Self> {
        Ok(match file_mode(v)? {
            ScalarMode::ExactRational => AnyBundle::Rational(parse_bundle(v, tol)?),
            ScalarMode::ExactLaurent => AnyBundle::Laurent(parse_bundle(v, tol)?),
            ScalarMode::ComplexFloat => AnyBundle::Complex(parse_bundle(v, tol)?),
        })
    }

    /// The same bundle over complex scalars. Laurent data only converts
    /// when every entry is constant.
    pub fn to_complex(&self) -> Result<QuasiHopf<Complex64>> {
        match self {
            AnyBundle::Complex(b) => Ok(b.clone()),
            AnyBundle::Rational(b) => Ok(b.map_scalars(|x| x.to_complex().expect("rationals are complex"))),
            AnyBundle::Laurent(b) => {
                let ok = std::sync::atomic::AtomicBool::new(true);
                let out = b.map_scalars(|x| {
                    x.to_complex().unwrap_or_else(|| {
                        ok.store(false, std::sync::atomic::Ordering::Relaxed);
                        Complex64::new(0.0, 0.0)
                    })
                });
                if ok.into_inner() {
                    Ok(out)
                } else {
                    Err(fmt_err("Laurent entries are not constant"))
                }
            }
        }
    }
}

/// A Hopf representation file in its declared mode.
#[derive(Clone, Debug)]
pub enum AnyHopfRep {
    Rational(HopfRepBundle<Rational>),
    Laurent(HopfRepBundle<Laurent>),
    Complex(HopfRepBundle<Complex64>),
}

impl AnyHopfRep {
    pub fn parse(v: &Value) -> Result<Self> {
        Ok(match file_mode(v)? {
            ScalarMode::ExactRational => AnyHopfRep::Rational(parse_hopf_rep(v)?),
            ScalarMode::ExactLaurent => AnyHopfRep::Laurent(parse_hopf_rep(v)?),
            ScalarMode::ComplexFloat => AnyHopfRep::Complex(parse_hopf_rep(v)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasi_hopf::tests::s3;
    use crate::rep::test_support::s3_standard;
    use crate::twist::{random_twistor, twist};

    #[test]
    fn bundle_round_trip() {
        let mut b = s3::<Rational>();
        b.reps.push(s3_standard());
        let v = bundle_to_json(&b);
        let back: QuasiHopf<Rational> = parse_bundle(&v, 0.0).unwrap();
        assert_eq!(bundle_to_json(&back), v);
        assert_eq!(back.reps[0].matrices, b.reps[0].matrices);
        assert!(back.verify_all(0.0).unwrap().passed());
    }

    #[test]
    fn complex_round_trip_of_twisted_bundle() {
        let b = s3::<Complex64>();
        let t = random_twistor(&b, 1, 1e-9).unwrap();
        let bt = twist(&b, &t, 1e-9).unwrap();
        let text = serde_json::to_string(&bundle_to_json(&bt)).unwrap();
        let back: QuasiHopf<Complex64> = parse_bundle(&parse_json(&text).unwrap(), 1e-9).unwrap();
        assert_eq!(back.phi, bt.phi);
        let tv = twistor_to_json(&t);
        let tb: Twistor<Complex64> = parse_twistor(&tv).unwrap();
        assert_eq!(tb.f, t.f);
    }

    #[test]
    fn hopf_rep_round_trip() {
        let h = HopfRepBundle::quantum_plane();
        let v = hopf_rep_to_json(&h);
        let back: HopfRepBundle<Laurent> = parse_hopf_rep(&v).unwrap();
        assert_eq!(hopf_rep_to_json(&back), v);
        assert!(matches!(AnyHopfRep::parse(&v).unwrap(), AnyHopfRep::Laurent(_)));
    }

    #[test]
    fn pretty_output_parses_back() {
        let b = s3::<Rational>();
        let v = bundle_to_json(&b);
        let text = to_pretty(&v);
        assert_eq!(parse_json(&text).unwrap(), v);
        assert!(text.lines().all(|l| l.len() <= 110));
    }

    #[test]
    fn parse_errors_are_located() {
        let err = parse_json("{\"scalar\": \"rational\",\n  \"dim\": ").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let mut v = bundle_to_json(&s3::<Rational>());
        v["phi"][0][1] = json!(17);
        let err = parse_bundle::<Rational>(&v, 0.0).unwrap_err();
        assert!(err.to_string().contains("\"phi\" row 0"), "{err}");
        v["scalar"] = json!("complex");
        assert!(parse_bundle::<Rational>(&v, 0.0).is_err());
    }

    #[test]
    fn conversion_to_complex() {
        let v = bundle_to_json(&s3::<Rational>());
        let any = AnyBundle::parse(&v, 0.0).unwrap();
        let c = any.to_complex().unwrap();
        assert!(c.verify_all(1e-9).unwrap().passed());
    }
}
