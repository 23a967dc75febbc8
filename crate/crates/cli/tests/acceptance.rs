//! Acceptance criteria 1 to 10. Run with `cargo test --test acceptance -- --nocapture`
//! to see one line per criterion.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use bracket_oracle::ClosedBraid;
use num_complex::Complex64;
use qhopf::braid::{verify_braid_relations, AlgebraModel};
use qhopf::io::{self, AnyBundle, AnyHopfRep};
use qhopf::markov::{self, HopfRepBundle, LinkValue, MarkovContext};
use qhopf::twist::{drinfeld_twist_check, random_twistor, twist, Twistor};
use qhopf::{catalog, BraidWord, Laurent, QuasiHopf, Report, Representation, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const AXIOM_TOL: f64 = 1e-9;
const TRACE_TOL: f64 = 1e-8;
const SEED: u64 = 2024;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn read(name: &str) -> Value {
    let text = std::fs::read_to_string(fixtures().join(name)).unwrap();
    io::parse_json(&text).unwrap()
}

const BUNDLES: [&str; 5] = ["cz2.json", "cz3.json", "cs3.json", "cz3_twisted.json", "dw_z2.json"];

fn bundles() -> Vec<AnyBundle> {
    BUNDLES
        .iter()
        .map(|f| AnyBundle::parse(&read(f), AXIOM_TOL).unwrap())
        .collect()
}

fn quantum_plane() -> HopfRepBundle<Laurent> {
    match AnyHopfRep::parse(&read("quantum_plane.json")).unwrap() {
        AnyHopfRep::Laurent(h) => h,
        _ => panic!("quantum plane fixture should be Laurent"),
    }
}

macro_rules! on_bundle {
    ($e:expr, $b:ident => $body:expr) => {
        match $e {
            AnyBundle::Rational($b) => $body,
            AnyBundle::Laurent($b) => $body,
            AnyBundle::Complex($b) => $body,
        }
    };
}

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            passed: true,
            detail: String::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl std::fmt::Display) {
        if !ok {
            self.passed = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(&what.to_string());
        }
    }

    fn report(&mut self, r: &Report) {
        let names: Vec<String> = r
            .failures()
            .iter()
            .map(|c| format!("{} ({:.2e})", c.name, c.residual))
            .collect();
        self.require(r.passed(), format_args!("{}: {}", r.title, names.join(", ")));
    }

    fn note(mut self, text: impl std::fmt::Display) -> Self {
        if self.passed {
            self.detail = text.to_string();
        }
        self
    }
}

/// Representations with a well-defined Markov trace.
fn markov_reps<R: Ring>(b: &QuasiHopf<R>) -> Vec<&Representation<R>> {
    b.reps
        .iter()
        .filter(|r| MarkovContext::new(&AlgebraModel::new(b, r), TRACE_TOL).is_ok())
        .collect()
}

fn is_counit<R: Ring>(b: &QuasiHopf<R>, r: &Representation<R>) -> bool {
    r.dim == 1
        && (0..b.dim()).all(|i| {
            let x = b.basis(i);
            (r.element(&x).unwrap().get(0, 0).clone() - b.counit_of(&x).unwrap()).is_zero()
        })
}

fn complex(any: &AnyBundle) -> QuasiHopf<Complex64> {
    match any {
        AnyBundle::Complex(b) => b.clone(),
        other => other.to_complex().unwrap(),
    }
}

fn c1_axioms() -> Outcome {
    let start = Instant::now();
    let mut out = Outcome::new();
    for any in bundles() {
        out.report(&on_bundle!(&any, b => b.verify_all(AXIOM_TOL).unwrap()));
    }
    out.report(&quantum_plane().validate(AXIOM_TOL).unwrap());
    let took = start.elapsed();
    out.require(took <= Duration::from_secs(60), format_args!("took {took:?}"));
    out.note(format_args!("6 fixtures in {:.2}s", took.as_secs_f64()))
}

fn c2_twist_closure() -> Outcome {
    let mut out = Outcome::new();
    let mut worst = 0.0f64;
    for b in [
        catalog::cyclic::<Complex64>(2).unwrap(),
        catalog::cyclic::<Complex64>(3).unwrap(),
    ] {
        for k in 0..20 {
            let t = random_twistor(&b, SEED + k, AXIOM_TOL).unwrap();
            let r = twist(&b, &t, AXIOM_TOL).unwrap().verify_all(AXIOM_TOL).unwrap();
            for ribbon in ["v central", "v^2 = u S(u)", "S(v) = v", "eps(v) = 1"] {
                out.require(r.get(ribbon).is_some(), format_args!("{ribbon} not checked"));
            }
            worst = worst.max(r.max_residual());
            out.report(&r);
        }
    }
    out.note(format_args!("40 twisted bundles, max residual {worst:.2e}"))
}

fn c3_u_operator() -> Outcome {
    let mut out = Outcome::new();
    for any in bundles() {
        on_bundle!(&any, b => {
            let der = b.derived(AXIOM_TOL).unwrap();
            let r = b.verify_u(&der, AXIOM_TOL).unwrap();
            out.require(r.checks.len() == 4, format_args!("{}: {} u checks", b.name, r.checks.len()));
            out.report(&r);
        });
    }
    out.note("5 bundles")
}

fn c4_drinfeld() -> Outcome {
    let mut out = Outcome::new();
    for any in bundles() {
        on_bundle!(&any, b => {
            let der = b.derived(AXIOM_TOL).unwrap();
            out.report(&b.verify_drinfeld(&der, AXIOM_TOL).unwrap());
        });
    }
    // exact twistors
    let cz2 = catalog::cyclic(2).unwrap();
    out.report(&drinfeld_twist_check(&cz2, &catalog::z2_twistor().unwrap(), 0.0).unwrap());
    let cz3 = catalog::cyclic(3).unwrap();
    out.report(&drinfeld_twist_check(&cz3, &catalog::z3_default_twistor().unwrap(), 0.0).unwrap());
    let mut count = 2;
    for any in bundles() {
        let b = complex(&any);
        for k in 0..3 {
            let t = random_twistor(&b, SEED + k, AXIOM_TOL).unwrap();
            out.report(&drinfeld_twist_check(&b, &t, AXIOM_TOL).unwrap());
            count += 1;
        }
    }
    out.note(format_args!("5 bundles, {count} twisted bundles"))
}

fn c5_braid_relations() -> Outcome {
    let start = Instant::now();
    let mut out = Outcome::new();
    let mut models = 1;
    for any in bundles() {
        on_bundle!(&any, b => {
            for rep in &b.reps {
                out.report(&verify_braid_relations(&AlgebraModel::new(b, rep), 3, AXIOM_TOL).unwrap());
                models += 1;
            }
        });
    }
    out.report(&verify_braid_relations(&quantum_plane(), 3, AXIOM_TOL).unwrap());
    let took = start.elapsed();
    out.require(took <= Duration::from_secs(120), format_args!("took {took:?}"));
    out.note(format_args!(
        "{models} representations on 4 strands in {:.2}s",
        took.as_secs_f64()
    ))
}

fn c6_markov() -> Outcome {
    let mut out = Outcome::new();
    let mut models = 1;
    for any in bundles() {
        on_bundle!(&any, b => {
            let der = b.derived(TRACE_TOL).unwrap();
            out.report(&b.r_check_trace_check(&der, TRACE_TOL).unwrap());
            for rep in markov_reps(b) {
                let model = AlgebraModel::new(b, rep);
                let ctx = MarkovContext::new(&model, TRACE_TOL).unwrap();
                out.report(&ctx.markov_check(SEED, 50, 25, 4).unwrap());
                models += 1;
            }
        });
    }
    let qp = quantum_plane();
    let ctx = MarkovContext::new(&qp, 0.0).unwrap();
    out.report(&ctx.markov_check(SEED, 50, 25, 4).unwrap());
    out.note(format_args!("{models} traces, 50 pairs and 25 stabilizations each"))
}

fn invariance_words(rng: &mut ChaCha8Rng, count: usize) -> Vec<BraidWord> {
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=4);
            markov::random_word(rng, n, 1, 6)
        })
        .collect()
}

fn c7_twist_invariance() -> Outcome {
    let mut out = Outcome::new();
    let mut worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for any in bundles() {
        let b = complex(&any);
        let reps: Vec<_> = markov_reps(&b).into_iter().filter(|r| r.irreducible).collect();
        let mut detected = false;
        for k in 0..20 {
            let t = random_twistor(&b, SEED + k, AXIOM_TOL).unwrap();
            let words = invariance_words(&mut rng, 10);
            for rep in &reps {
                let r = markov::twist_invariance_check(&b, &t, rep, &words, TRACE_TOL).unwrap();
                worst = worst.max(r.max_residual());
                out.report(&r);
                if !is_counit(&b, rep) {
                    detected |= !markov::negative_control(&b, &t, rep, &words, TRACE_TOL)
                        .unwrap()
                        .passed();
                }
            }
        }
        out.require(detected, format_args!("negative control on {} passed", b.name));
    }
    // exact mode: the identity twistor leaves the trace untouched to the bit
    let cz3 = catalog::cyclic(3).unwrap();
    let words = invariance_words(&mut rng, 10);
    for t in [Twistor::identity(&cz3), catalog::z3_default_twistor().unwrap()] {
        for rep in markov_reps(&cz3) {
            let r = markov::twist_invariance_check(&cz3, &t, rep, &words, 0.0).unwrap();
            out.require(
                r.max_residual() == 0.0,
                format_args!("exact residual {:.2e}", r.max_residual()),
            );
        }
    }
    out.note(format_args!(
        "5 bundles x 20 twistors x 10 words, max residual {worst:.2e}, controls fail"
    ))
}

fn c8_oracle() -> Outcome {
    let mut out = Outcome::new();
    let qp = quantum_plane();
    let ctx = MarkovContext::new(&qp, 0.0).unwrap();
    let word = BraidWord::parse("1 1 1", 2).unwrap();
    let ratio = |w: &BraidWord| match ctx.normalized(w).unwrap() {
        LinkValue::L(l) => l,
        LinkValue::LSquared(_) => panic!("quantum plane should give L exactly"),
    };
    let (l, l_mirror) = (ratio(&word), ratio(&word.mirror()));
    let trefoil = ClosedBraid::parse("1 1 1", 2).unwrap();
    let jones = bracket_oracle::jones(&trefoil).unwrap();
    let jones_mirror = bracket_oracle::jones(&trefoil.mirror()).unwrap();
    out.require(jones_mirror == jones.invert_variable(), "oracle mirror is not A -> 1/A");

    let recorded = read("oracle/trefoil.json");
    out.require(
        recorded["jones"] == jones.to_string().as_str(),
        "recorded jones differs from enumeration",
    );
    out.require(recorded["states"] == 8, "trefoil should enumerate 8 states");
    let pair = |v: &Value| Complex64::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap());
    let points = recorded["points"].as_array().unwrap();
    out.require(points.len() == 5, "5 substitution points");
    let mut worst = 0.0f64;
    for p in points {
        let s = pair(&p["s"]);
        let a = Complex64::i() * s;
        for (lhs, oracle, frozen) in [
            (l.eval(s), jones.eval(a), pair(&p["jones"])),
            (l_mirror.eval(s), jones.eval(a.inv()), pair(&p["jones_mirror"])),
        ] {
            let d = (lhs - oracle).norm().max((oracle - frozen).norm());
            worst = worst.max(d);
            out.require(d <= TRACE_TOL, format_args!("|delta| {d:.2e} at s = {s}"));
        }
    }
    out.note(format_args!("5 points and mirror, max |delta| {worst:.2e}"))
}

fn c9_isotopy() -> Outcome {
    let mut out = Outcome::new();
    let qp = quantum_plane();
    out.report(
        &MarkovContext::new(&qp, 0.0)
            .unwrap()
            .isotopy_check(SEED, 10, 4)
            .unwrap(),
    );
    for any in bundles() {
        on_bundle!(&any, b => {
            for rep in markov_reps(b) {
                let model = AlgebraModel::new(b, rep);
                out.report(&MarkovContext::new(&model, TRACE_TOL).unwrap().isotopy_check(SEED, 10, 4).unwrap());
            }
        });
    }
    out.note("10 move pairs per trace")
}

fn qhl(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_qhl")).args(args).output().unwrap();
    out.stdout
}

fn c10_determinism(started: Instant) -> Outcome {
    let mut out = Outcome::new();
    let b = complex(&AnyBundle::parse(&read("cs3.json"), AXIOM_TOL).unwrap());
    let t1 = random_twistor(&b, 7, AXIOM_TOL).unwrap();
    let t2 = random_twistor(&b, 7, AXIOM_TOL).unwrap();
    out.require(
        io::twistor_to_json(&t1) == io::twistor_to_json(&t2),
        "random twistor not reproducible",
    );

    let qp = quantum_plane();
    let ctx = MarkovContext::new(&qp, 0.0).unwrap();
    let a = ctx.markov_check(11, 10, 5, 4).unwrap().to_json();
    out.require(
        a == ctx.markov_check(11, 10, 5, 4).unwrap().to_json(),
        "markov check not reproducible",
    );

    let cs3 = fixtures().join("cs3.json");
    let cz3 = fixtures().join("cz3.json");
    let twistor = fixtures().join("twistors/cz3_diagonal.json");
    for args in [
        vec![
            "twist-invariance",
            cs3.to_str().unwrap(),
            "--trials",
            "3",
            "--seed",
            "5",
            "--json",
        ],
        vec!["twist", cz3.to_str().unwrap(), twistor.to_str().unwrap()],
        vec!["markov-check", cs3.to_str().unwrap(), "--trials", "10", "--seed", "3"],
    ] {
        let first = qhl(&args);
        out.require(
            !first.is_empty() && first == qhl(&args),
            format_args!("qhl {} not byte-stable", args[0]),
        );
    }
    let took = started.elapsed();
    out.require(took <= Duration::from_secs(600), format_args!("suite took {took:?}"));
    out.note(format_args!(
        "seeded runs repeat exactly, suite {:.1}s",
        took.as_secs_f64()
    ))
}

#[test]
fn acceptance() {
    let started = Instant::now();
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("axiom suite", c1_axioms),
        ("twist closure", c2_twist_closure),
        ("u operator", c3_u_operator),
        ("Drinfeld twist", c4_drinfeld),
        ("braid relations", c5_braid_relations),
        ("Markov properties", c6_markov),
        ("twisting invariance", c7_twist_invariance),
        ("Jones oracle", c8_oracle),
        ("ambient isotopy", c9_isotopy),
    ];
    let mut failed = Vec::new();
    let mut line = |k: usize, name: &str, o: Outcome| {
        println!(
            "criterion {k:>2} {:<20} {}  {}",
            name,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.passed {
            failed.push(k);
        }
    };
    for (k, (name, run)) in criteria.iter().enumerate() {
        line(k + 1, name, run());
    }
    line(10, "runtime and seeds", c10_determinism(started));
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
