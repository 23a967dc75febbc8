use std::collections::BTreeMap;
use std::path::Path;

use bracket_oracle::{jones, kauffman_bracket, ClosedBraid};
use qhopf::braid::{verify_braid_relations, AlgebraModel};
use qhopf::io::{self, AnyBundle};
use qhopf::markov::{self, random_word, LinkValue, MarkovContext, MarkovModel};
use qhopf::twist::{self, random_twistor};
use qhopf::{BraidWord, QuasiHopf, Report, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::literal::parse_complex;
use crate::load::{self, input_error, pick_rep, Loaded};
use crate::{CliError, Ctx, LoadArgs, WordArgs};

fn print_report(ctx: &Ctx, report: &Report) {
    if ctx.json {
        print_json(&report.to_json());
    } else {
        print!("{report}");
    }
}

fn print_json(v: &Value) {
    print!("{}", io::to_pretty(v));
}

fn parse_word(args: &WordArgs) -> Result<BraidWord, CliError> {
    let text = args.braid.as_deref().unwrap_or("");
    let strands = match args.strands {
        Some(n) => n,
        // smallest strand count that fits the letters
        None => {
            let top = text
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter_map(|t| t.parse::<i32>().ok())
                .map(|l| l.unsigned_abs() as usize)
                .max()
                .unwrap_or(0);
            top + 1
        }
    };
    BraidWord::parse(text, strands).map_err(|e| CliError::Input(e.to_string()))
}

pub fn validate(ctx: &Ctx, args: &LoadArgs) -> Result<bool, CliError> {
    let loaded = load::parse(&args.file, ctx.tol)?;
    let report = load::verify(&loaded, ctx.tol)?;
    print_report(ctx, &report);
    Ok(report.passed())
}

pub fn twist(ctx: &Ctx, args: &LoadArgs, twistor: &Path, output: Option<&Path>) -> Result<bool, CliError> {
    let Loaded::Bundle(any) = load::load(ctx, args)? else {
        return Err(CliError::Input("twisting needs a quasi-Hopf bundle file".into()));
    };
    let tv = load::read_json(twistor)?;
    let (json, report) = with_bundle!(&any, b => {
        let t = io::parse_twistor(&tv).map_err(|e| input_error(twistor, e))?;
        let bt = twist::twist(b, &t, ctx.tol)?;
        (io::bundle_to_json(&bt), bt.verify_all(ctx.tol)?)
    });
    let text = io::to_pretty(&json);
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    if output.is_some() || !report.passed() {
        if ctx.json {
            eprintln!("{}", report.to_json());
        } else {
            eprint!("{report}");
        }
    }
    Ok(report.passed())
}

fn link_value_json<R: Ring>(v: &LinkValue<R>) -> Value {
    match v {
        LinkValue::L(x) => json!({ "L": x.to_scalar().to_json() }),
        LinkValue::LSquared(x) => json!({ "L_squared": x.to_scalar().to_json(), "reported_as_L_squared": true }),
    }
}

fn emit_invariant<R: Ring, M: MarkovModel<R>>(
    ctx: &Ctx,
    model: &M,
    w: &BraidWord,
    normalized: bool,
) -> Result<bool, CliError> {
    let mctx = MarkovContext::new(model, ctx.tol)?;
    let result = mctx.link_polynomial(w)?;
    let mut out = result.to_json();
    out["braid"] = w.to_string().into();
    out["strands"] = w.strands().into();
    if normalized {
        out["normalized"] = link_value_json(&mctx.normalized(w)?);
    }
    print_json(&out);
    Ok(true)
}

pub fn invariant(
    ctx: &Ctx,
    args: &LoadArgs,
    rep: Option<&str>,
    word: &WordArgs,
    normalized: bool,
) -> Result<bool, CliError> {
    let w = parse_word(word)?;
    match load::load(ctx, args)? {
        Loaded::Bundle(any) => with_bundle!(&any, b => {
            let model = AlgebraModel::new(b, pick_rep(b, rep)?);
            emit_invariant(ctx, &model, &w, normalized)
        }),
        Loaded::HopfRep(h) => with_hopf_rep!(&h, m => emit_invariant(ctx, m, &w, normalized)),
    }
}

fn markov_reports<'m, R: Ring, M: MarkovModel<R>>(
    ctx: &Ctx,
    model: &'m M,
    trials: usize,
    seed: u64,
    strands: usize,
) -> Result<(MarkovContext<'m, R, M>, Report), CliError> {
    let mctx = MarkovContext::new(model, ctx.tol)?;
    let mut report = mctx.markov_check(seed, trials, trials.div_ceil(2), strands)?;
    report.extend(mctx.isotopy_check(seed, 10, strands)?);
    Ok((mctx, report))
}

fn algebra_markov<R: Ring>(
    ctx: &Ctx,
    b: &QuasiHopf<R>,
    rep: Option<&str>,
    trials: usize,
    seed: u64,
    strands: usize,
) -> Result<Report, CliError> {
    let model = AlgebraModel::new(b, pick_rep(b, rep)?);
    let (mctx, mut report) = markov_reports(ctx, &model, trials, seed, strands)?;
    report.title = format!("Markov properties of {} on {}", b.name, model.rep.name);
    let der = b.derived(ctx.tol)?;
    report.extend(b.r_check_trace_check(&der, ctx.tol)?);
    report.extend(model.invariant_operator_check(ctx.tol)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<BraidWord> = (0..10)
        .map(|_| {
            let n = rng.gen_range(2..=strands.max(2));
            random_word(&mut rng, n, 0, 5)
        })
        .collect();
    report.extend(markov::tau_check(&mctx, &words, ctx.tol)?);
    Ok(report)
}

pub fn markov_check(
    ctx: &Ctx,
    args: &LoadArgs,
    rep: Option<&str>,
    trials: usize,
    seed: u64,
    strands: usize,
) -> Result<bool, CliError> {
    let report = match load::load(ctx, args)? {
        Loaded::Bundle(any) => with_bundle!(&any, b => algebra_markov(ctx, b, rep, trials, seed, strands)?),
        Loaded::HopfRep(h) => with_hopf_rep!(&h, m => {
            let (_, mut report) = markov_reports(ctx, m, trials, seed, strands)?;
            report.title = format!("Markov properties of {}", m.name);
            report
        }),
    };
    print_report(ctx, &report);
    Ok(report.passed())
}

pub fn braid_check(ctx: &Ctx, args: &LoadArgs, rep: Option<&str>, strands: usize) -> Result<bool, CliError> {
    if strands < 2 {
        return Err(CliError::Input("braid checks need at least 2 strands".into()));
    }
    let report = match load::load(ctx, args)? {
        Loaded::Bundle(any) => with_bundle!(&any, b => {
            let model = AlgebraModel::new(b, pick_rep(b, rep)?);
            verify_braid_relations(&model, strands - 1, ctx.tol)?
        }),
        Loaded::HopfRep(h) => with_hopf_rep!(&h, m => verify_braid_relations(m, strands - 1, ctx.tol)?),
    };
    print_report(ctx, &report);
    Ok(report.passed())
}

pub struct InvarianceOpts {
    pub trials: usize,
    pub words: usize,
    pub seed: u64,
    pub negative_control: bool,
}

fn invariance_words(rng: &mut ChaCha8Rng, count: usize, max_strands: usize) -> Vec<BraidWord> {
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=max_strands.max(2));
            random_word(rng, n, 1, 6)
        })
        .collect()
}

/// Fold per-trial reports into one, keeping the worst residual of each check.
fn merge(title: String, reports: &[Report]) -> Report {
    let mut worst: BTreeMap<&str, (usize, f64, bool)> = BTreeMap::new();
    for (order, c) in reports.iter().flat_map(|r| r.checks.iter()).enumerate() {
        let e = worst.entry(&c.name).or_insert((order, 0.0, true));
        e.1 = e.1.max(c.residual);
        e.2 &= c.passed;
    }
    let mut rows: Vec<_> = worst.into_iter().collect();
    rows.sort_by_key(|(_, (order, ..))| *order);
    let mut out = Report::new(title);
    for (name, (_, r, p)) in rows {
        out.push(name, r, p);
    }
    out
}

/// `control` carries the control report and whether it detected the fault.
fn print_outcome(ctx: &Ctx, main: &Report, control: Option<(&Report, bool)>) -> bool {
    let control_failed = control.is_none_or(|(_, detected)| detected);
    if ctx.json {
        let mut v = json!({ "invariance": main.to_json() });
        if let Some((c, _)) = control {
            v["negative_control"] = c.to_json();
            v["negative_control_detected"] = control_failed.into();
        }
        print_json(&v);
    } else {
        print!("{main}");
        println!("max residual {:.3e}", main.max_residual());
        if let Some((c, _)) = control {
            print!("{c}");
            let verdict = if control_failed {
                "detected (expected)"
            } else {
                "NOT detected"
            };
            println!("negative control {verdict}");
        }
    }
    main.passed() && control_failed
}

pub fn twist_invariance(
    ctx: &Ctx,
    args: &LoadArgs,
    twistor: Option<&Path>,
    rep: Option<&str>,
    word: &WordArgs,
    opts: &InvarianceOpts,
) -> Result<bool, CliError> {
    let Loaded::Bundle(any) = load::load(ctx, args)? else {
        return Err(CliError::Input(
            "twist invariance needs a quasi-Hopf bundle file".into(),
        ));
    };
    let max_strands = word.strands.unwrap_or(4);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let fixed = match &word.braid {
        Some(_) => Some(vec![parse_word(word)?]),
        None => None,
    };

    if let Some(path) = twistor {
        let tv = load::read_json(path)?;
        let words = fixed.unwrap_or_else(|| invariance_words(&mut rng, opts.words, max_strands));
        return with_bundle!(&any, b => {
            let t = io::parse_twistor(&tv).map_err(|e| input_error(path, e))?;
            let r = pick_rep(b, rep)?;
            let main = markov::twist_invariance_check(b, &t, r, &words, ctx.tol)?;
            let control = match opts.negative_control {
                true => Some(markov::negative_control(b, &t, r, &words, ctx.tol)?),
                false => None,
            };
            Ok(print_outcome(ctx, &main, control.as_ref().map(|c| (c, !c.passed()))))
        });
    }

    // random twistors live in complex arithmetic
    let b = match &any {
        AnyBundle::Complex(b) => b.clone(),
        other => other.to_complex().map_err(|e| CliError::Input(e.to_string()))?,
    };
    let r = pick_rep(&b, rep)?;
    let (mut mains, mut controls) = (Vec::new(), Vec::new());
    for k in 0..opts.trials {
        let t = random_twistor(&b, opts.seed.wrapping_add(k as u64), ctx.tol)?;
        let words = fixed
            .clone()
            .unwrap_or_else(|| invariance_words(&mut rng, opts.words, max_strands));
        mains.push(markov::twist_invariance_check(&b, &t, r, &words, ctx.tol)?);
        if opts.negative_control {
            controls.push(markov::negative_control(&b, &t, r, &words, ctx.tol)?);
        }
    }
    let main = merge(
        format!("twist invariance on {} over {} twistors", b.name, opts.trials),
        &mains,
    );
    let control = merge(format!("negative control on {}", b.name), &controls);
    let detected = !control.passed();
    Ok(print_outcome(
        ctx,
        &main,
        opts.negative_control.then_some((&control, detected)),
    ))
}

pub fn oracle(word: &WordArgs, substitute: Option<&str>) -> Result<bool, CliError> {
    let text = word.braid.as_deref().unwrap_or("");
    let strands = parse_word(word)?.strands();
    let b = ClosedBraid::parse(text, strands).map_err(|e| CliError::Input(e.to_string()))?;
    let bracket = kauffman_bracket(&b).map_err(|e| CliError::Input(e.to_string()))?;
    let j = jones(&b).map_err(|e| CliError::Input(e.to_string()))?;
    let mut out = json!({
        "braid": text.split_whitespace().collect::<Vec<_>>().join(" "),
        "strands": strands,
        "writhe": b.writhe(),
        "variable": "A",
        "convention": "t = A^-4",
        "bracket": bracket.to_string(),
        "jones": j.to_string(),
    });
    if let Some(lit) = substitute {
        let a = parse_complex(lit).ok_or_else(|| CliError::Input(format!("cannot parse scalar literal '{lit}'")))?;
        let pair = |z: num_complex::Complex64| json!([z.re, z.im]);
        out["A"] = pair(a);
        out["bracket_value"] = pair(bracket.eval(a));
        out["jones_value"] = pair(j.eval(a));
    }
    print_json(&out);
    Ok(true)
}
