use std::path::Path;

use qhopf::io::{self, AnyBundle, AnyHopfRep};
use qhopf::{QuasiHopf, Report, Representation, Ring};
use serde_json::Value;

use crate::{CliError, Ctx, LoadArgs};

#[allow(clippy::large_enum_variant)]
pub enum Loaded {
    Bundle(AnyBundle),
    HopfRep(AnyHopfRep),
}

/// Malformed input is exit 2; a representation that is not a homomorphism
/// is a failed identity.
pub fn input_error(path: &Path, e: qhopf::Error) -> CliError {
    match e {
        qhopf::Error::Representation(..) => CliError::Failed(format!("{}: {e}", path.display())),
        _ => CliError::Input(format!("{}: {e}", path.display())),
    }
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    io::parse_json(&text).map_err(|e| input_error(path, e))
}

pub fn parse(path: &Path, tol: f64) -> Result<Loaded, CliError> {
    let v = read_json(path)?;
    let loaded = match io::file_kind(&v) {
        "hopf-rep" => AnyHopfRep::parse(&v).map(Loaded::HopfRep),
        _ => AnyBundle::parse(&v, tol).map(Loaded::Bundle),
    };
    loaded.map_err(|e| input_error(path, e))
}

pub fn verify(loaded: &Loaded, tol: f64) -> Result<Report, CliError> {
    Ok(match loaded {
        Loaded::Bundle(b) => with_bundle!(b, x => x.verify_all(tol)?),
        Loaded::HopfRep(h) => with_hopf_rep!(h, x => x.validate(tol)?),
    })
}

/// Parse and, unless `--skip-verify`, reject bundles failing any check.
pub fn load(ctx: &Ctx, args: &LoadArgs) -> Result<Loaded, CliError> {
    let loaded = parse(&args.file, ctx.tol)?;
    if !args.skip_verify {
        let report = verify(&loaded, ctx.tol)?;
        if !report.passed() {
            eprint!("{report}");
            let names: Vec<&str> = report.failures().iter().map(|c| c.name.as_str()).collect();
            return Err(CliError::Failed(format!(
                "{} failed verification: {}",
                args.file.display(),
                names.join(", ")
            )));
        }
    }
    Ok(loaded)
}

/// The named representation, else the first irreducible one that is not the
/// counit, else any irreducible one.
pub fn pick_rep<'a, R: Ring>(b: &'a QuasiHopf<R>, name: Option<&str>) -> Result<&'a Representation<R>, CliError> {
    match name {
        Some(n) => b.rep(n).ok_or_else(|| {
            let known: Vec<&str> = b.reps.iter().map(|r| r.name.as_str()).collect();
            CliError::Input(format!("no representation named '{n}' (have: {})", known.join(", ")))
        }),
        None => b
            .reps
            .iter()
            .find(|r| r.irreducible && !is_counit(b, r))
            .or_else(|| b.reps.iter().find(|r| r.irreducible))
            .or(b.reps.first())
            .ok_or_else(|| CliError::Input(format!("{} has no representations", b.name))),
    }
}

// Twisting is invisible through the counit, so it makes a poor default.
fn is_counit<R: Ring>(b: &QuasiHopf<R>, r: &Representation<R>) -> bool {
    let d = b.algebra.dim();
    r.dim == 1
        && (0..d).all(|i| {
            let Ok(x) = qhopf::Element::basis(d, &[i]) else {
                return false;
            };
            match (r.element(&x), b.counit_of(&x)) {
                (Ok(m), Ok(e)) => (m.get(0, 0).clone() - e).is_zero(),
                _ => false,
            }
        })
}
