//! Markov traces on braid representations and the link polynomial built
//! from them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::braid::{AlgebraModel, BraidModel, BraidWord, Generators};
use crate::quasi_hopf::{passes, QuasiHopf};
use crate::rep::{Matrix, Representation};
use crate::report::Report;
use crate::scalar::Ring;
use crate::tensor::{Element, Factor};
use crate::twist::{chi, twist, twist_without_alpha, Twistor};
use crate::{Error, Result};

use Factor::{Elem, Leg};

/// What a Markov trace needs beyond the braid generators.
pub trait MarkovModel<R: Ring>: BraidModel<R> {
    /// `π^{⊗(n+1)}Δ^{(n)}(μ)` for the trace element `μ = β S(α) u v^{-1}`.
    fn trace_matrix(&self, n: usize) -> Result<Matrix<R>>;

    /// `(z⁺, z⁻)`, the scalars by which `v^{-1}` and `v` act.
    fn z_pair(&self, tol: f64) -> Result<(R, R)>;
}

impl<R: Ring> AlgebraModel<'_, R> {
    /// `β S(α) u v^{-1}`.
    pub fn trace_element(&self) -> Result<Element<R>> {
        let b = self.bundle;
        let u = b.u_element()?;
        b.prod(&[&b.beta, &b.s_at(&b.alpha, 1)?, &u, b.v_inv()?])
    }

    fn scalar_of(&self, x: &Element<R>, tol: f64) -> Result<R> {
        self.rep.element(x)?.as_scalar(tol).ok_or(Error::NotIrreducible)
    }

    /// Partial trace `τ_n` taking an operator on `V^{⊗(n+1)}` to one on `V^{⊗n}`.
    pub fn tau_partial(&self, omega: &Matrix<R>, n: usize) -> Result<Matrix<R>> {
        let b = self.bundle;
        let v = self.rep.dim;
        let size = v.pow(n as u32);
        if n == 0 || omega.rows() != size * v || omega.cols() != size * v {
            return Err(Error::Shape(format!(
                "tau on {} strands of a {}x{} matrix",
                n + 1,
                omega.rows(),
                omega.cols()
            )));
        }
        let u = b.u_element()?;
        let s_alpha = b.s_at(&b.alpha, 1)?;
        // W[x̄, x, m] = X̄ ⊗ X ⊗ Y β S(Z) S(Z̄) S(α) u v^{-1} Ȳ
        let w = b.algebra.fuse(
            &[&b.s_at(&b.phi_inv, 3)?, &b.s_at(&b.phi, 3)?],
            &[
                vec![Leg(0)],
                vec![Leg(3)],
                vec![
                    Leg(4),
                    Elem(&b.beta),
                    Leg(5),
                    Leg(2),
                    Elem(&s_alpha),
                    Elem(&u),
                    Elem(b.v_inv()?),
                    Leg(1),
                ],
            ],
        )?;
        let id = Matrix::identity(size);
        let mut partial: HashMap<usize, Matrix<R>> = HashMap::new();
        let mut outer: HashMap<usize, Matrix<R>> = HashMap::new();
        let mut grouped: HashMap<(usize, usize), Matrix<R>> = HashMap::new();
        for (idx, c) in w.rows() {
            if let std::collections::hash_map::Entry::Vacant(e) = partial.entry(idx[2]) {
                let m = omega.mul(&id.kron(&self.rep.matrices[idx[2]]))?.partial_trace_last(v)?;
                e.insert(m);
            }
            let term = partial[&idx[2]].scale(&c);
            let slot = grouped
                .entry((idx[0], idx[1]))
                .or_insert_with(|| Matrix::zeros(size, size));
            *slot = slot.add(&term)?;
        }
        let mut keys: Vec<_> = grouped.keys().copied().collect();
        keys.sort_unstable();
        let mut out = Matrix::zeros(size, size);
        for key in keys {
            for x in [key.0, key.1] {
                if let std::collections::hash_map::Entry::Vacant(e) = outer.entry(x) {
                    e.insert(b.rep_coproduct_power(self.rep, &b.basis(x), n - 1)?);
                }
            }
            out = out.add(&Matrix::product(&[&outer[&key.0], &grouped[&key], &outer[&key.1]])?)?;
        }
        Ok(out)
    }

    /// The invariant-operator identity behind the partial trace, for
    /// `C = I` and `C = Ř` on `V⊗V`.
    pub fn invariant_operator_check(&self, tol: f64) -> Result<Report> {
        let b = self.bundle;
        let alg = &b.algebra;
        let mut rep = Report::new("invariant operator identity");
        let abcd = b.s_at(&b.s_at(&b.abcd()?, 3)?, 4)?;
        let klmn = b.s_at(&b.s_at(&b.klmn()?, 3)?, 4)?;
        let beta = Elem(&b.beta);
        let lhs = alg.fuse(
            &[&abcd, &klmn],
            &[
                vec![Leg(0)],
                vec![Leg(1)],
                vec![Leg(4), beta, Leg(7), Leg(3)],
                vec![Leg(5), beta, Leg(6), Leg(2)],
            ],
        )?;
        let rhs = alg.fuse(
            &[&b.s_at(&b.phi_inv, 3)?, &b.s_at(&b.phi, 3)?],
            &[
                vec![Leg(0)],
                vec![Leg(1)],
                vec![Leg(3), beta],
                vec![Leg(4), beta, Leg(5), Leg(2)],
            ],
        )?;
        let side = |t: &Element<R>, c: &Matrix<R>| -> Result<Matrix<R>> {
            let m = &self.rep.matrices;
            let n = self.rep.dim * self.rep.dim;
            let mut out = Matrix::zeros(n, n);
            for (idx, coef) in t.rows() {
                let left = m[idx[0]].kron(&m[idx[1]]);
                let right = m[idx[2]].kron(&m[idx[3]]);
                out = out.add(&Matrix::product(&[&left, c, &right])?.scale(&coef))?;
            }
            Ok(out)
        };
        let (rc, _) = self.r_check()?;
        let id = Matrix::identity(self.rep.dim * self.rep.dim);
        for (name, c) in [("identity operator", &id), ("R-check operator", &rc)] {
            let res = side(&lhs, c)?.residual(&side(&rhs, c)?)?;
            rep.push(name, res.0, passes::<R>(res, tol));
        }
        Ok(rep)
    }
}

impl<R: Ring> MarkovModel<R> for AlgebraModel<'_, R> {
    fn trace_matrix(&self, n: usize) -> Result<Matrix<R>> {
        self.bundle.rep_coproduct_power(self.rep, &self.trace_element()?, n)
    }

    fn z_pair(&self, tol: f64) -> Result<(R, R)> {
        let z_plus = self.scalar_of(self.bundle.v_inv()?, tol)?;
        let z_minus = self.scalar_of(self.bundle.v()?, tol)?;
        Ok((z_plus, z_minus))
    }
}

/// Representation-level data for an ordinary ribbon Hopf algebra: `Φ` is
/// trivial and the trace element is a grouplike `μ`.
#[derive(Clone, Debug)]
pub struct HopfRepBundle<R> {
    pub name: String,
    pub dim: usize,
    pub r_check: Matrix<R>,
    pub r_check_inv: Matrix<R>,
    pub mu: Matrix<R>,
    pub z_plus: R,
    pub z_minus: R,
}

impl<R: Ring> HopfRepBundle<R> {
    /// Yang-Baxter, inverse, `μ⊗μ` invariance and the two partial trace
    /// identities `tr₂((I⊗μ)Ř^{±1}) = z^{±} I`.
    pub fn validate(&self, tol: f64) -> Result<Report> {
        let v = self.dim;
        let id = Matrix::identity(v);
        let mut rep = Report::new(format!("{}: load-time identities", self.name));
        let mut push = |name: &str, a: &Matrix<R>, b: &Matrix<R>| -> Result<()> {
            let res = a.residual(b)?;
            rep.push(name, res.0, passes::<R>(res, tol));
            Ok(())
        };
        let r12 = self.r_check.kron(&id);
        let r23 = id.kron(&self.r_check);
        push(
            "Yang-Baxter",
            &Matrix::product(&[&r12, &r23, &r12])?,
            &Matrix::product(&[&r23, &r12, &r23])?,
        )?;
        let id2 = Matrix::identity(v * v);
        push("R-check inverse", &self.r_check.mul(&self.r_check_inv)?, &id2)?;
        push("R-check inverse (left)", &self.r_check_inv.mul(&self.r_check)?, &id2)?;
        let mm = self.mu.kron(&self.mu);
        push("mu x mu invariance", &self.r_check.mul(&mm)?, &mm.mul(&self.r_check)?)?;
        let i_mu = id.kron(&self.mu);
        push(
            "partial trace of R-check",
            &i_mu.mul(&self.r_check)?.partial_trace_last(v)?,
            &id.scale(&self.z_plus),
        )?;
        push(
            "partial trace of inverse R-check",
            &i_mu.mul(&self.r_check_inv)?.partial_trace_last(v)?,
            &id.scale(&self.z_minus),
        )?;
        Ok(rep)
    }

    pub fn map_scalars<S: Ring>(&self, f: impl Fn(&R) -> S) -> HopfRepBundle<S> {
        HopfRepBundle {
            name: self.name.clone(),
            dim: self.dim,
            r_check: self.r_check.map_scalars(&f),
            r_check_inv: self.r_check_inv.map_scalars(&f),
            mu: self.mu.map_scalars(&f),
            z_plus: f(&self.z_plus),
            z_minus: f(&self.z_minus),
        }
    }
}

impl HopfRepBundle<crate::scalar::Laurent> {
    /// The two-dimensional quantum group representation with `q = s²`.
    pub fn quantum_plane() -> Self {
        use crate::scalar::Laurent;
        let z = || <Laurent as Ring>::zero();
        let one = || <Laurent as Ring>::one();
        let q = Laurent::s_pow(2);
        let qi = Laurent::s_pow(-2);
        let r = vec![
            vec![q.clone(), z(), z(), z()],
            vec![z(), z(), one(), z()],
            vec![z(), one(), q.clone() - qi.clone(), z()],
            vec![z(), z(), z(), q.clone()],
        ];
        let r_inv = vec![
            vec![qi.clone(), z(), z(), z()],
            vec![z(), qi.clone() - q.clone(), one(), z()],
            vec![z(), one(), z(), z()],
            vec![z(), z(), z(), qi.clone()],
        ];
        HopfRepBundle {
            name: "quantum plane".into(),
            dim: 2,
            r_check: Matrix::from_rows(r).expect("square"),
            r_check_inv: Matrix::from_rows(r_inv).expect("square"),
            mu: Matrix::from_rows(vec![vec![q.clone(), z()], vec![z(), qi]]).expect("square"),
            z_plus: Laurent::s_pow(4),
            z_minus: Laurent::s_pow(-4),
        }
    }
}

impl<R: Ring> BraidModel<R> for HopfRepBundle<R> {
    fn v_dim(&self) -> usize {
        self.dim
    }

    fn r_check(&self) -> Result<(Matrix<R>, Matrix<R>)> {
        Ok((self.r_check.clone(), self.r_check_inv.clone()))
    }

    fn phi_conjugator(&self, i: usize, n: usize) -> Result<(Matrix<R>, Matrix<R>)> {
        if i == 0 || i > n {
            return Err(Error::Generator(i, n + 1));
        }
        let id = Matrix::identity(self.dim.pow(n as u32 + 1));
        Ok((id.clone(), id))
    }

    fn invariants(&self, n: usize) -> Result<Vec<Matrix<R>>> {
        Ok(vec![self.trace_matrix(n)?])
    }
}

impl<R: Ring> MarkovModel<R> for HopfRepBundle<R> {
    fn trace_matrix(&self, n: usize) -> Result<Matrix<R>> {
        Ok((0..n).fold(self.mu.clone(), |acc, _| acc.kron(&self.mu)))
    }

    fn z_pair(&self, _tol: f64) -> Result<(R, R)> {
        Ok((self.z_plus.clone(), self.z_minus.clone()))
    }
}

/// `L` itself, or `L²` when an exact square root is unavailable.
#[derive(Clone, Debug, PartialEq)]
pub enum LinkValue<R> {
    L(R),
    LSquared(R),
}

impl<R: Ring> LinkValue<R> {
    pub fn squared(&self) -> R {
        match self {
            LinkValue::L(l) => l.clone() * l.clone(),
            LinkValue::LSquared(l2) => l2.clone(),
        }
    }

    /// `self / other`, squared unless both sides carry `L`.
    pub fn ratio(&self, other: &LinkValue<R>, tol: f64) -> Result<LinkValue<R>> {
        match (self, other) {
            (LinkValue::L(a), LinkValue::L(b)) => Ok(LinkValue::L(a.try_divide(b, tol).ok_or(Error::NotInvertible)?)),
            _ => Ok(LinkValue::LSquared(
                self.squared()
                    .try_divide(&other.squared(), tol)
                    .ok_or(Error::NotInvertible)?,
            )),
        }
    }

    /// Residual against another value, comparing squares if either side
    /// lacks `L`.
    pub fn residual(&self, other: &LinkValue<R>) -> (f64, bool) {
        let d = match (self, other) {
            (LinkValue::L(a), LinkValue::L(b)) => a.clone() - b.clone(),
            _ => self.squared() - other.squared(),
        };
        (d.magnitude(), d.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinkResult<R> {
    pub theta: R,
    pub e: i64,
    pub n: usize,
    pub z_plus: R,
    pub z_minus: R,
    pub value: LinkValue<R>,
}

impl<R: Ring> LinkResult<R> {
    pub fn to_json(&self) -> serde_json::Value {
        let mut out = serde_json::json!({
            "theta": self.theta.to_scalar().to_json(),
            "e": self.e,
            "n": self.n,
            "z_plus": self.z_plus.to_scalar().to_json(),
            "z_minus": self.z_minus.to_scalar().to_json(),
        });
        match &self.value {
            LinkValue::L(l) => out["L"] = l.to_scalar().to_json(),
            LinkValue::LSquared(l2) => {
                out["L_squared"] = l2.to_scalar().to_json();
                out["reported_as_L_squared"] = true.into();
            }
        }
        out
    }
}

fn scalar_residual<R: Ring>(a: &R, b: &R) -> (f64, bool) {
    let d = a.clone() - b.clone();
    (d.magnitude(), d.is_zero())
}

fn pow_int<R: Ring>(x: &R, k: i64, tol: f64) -> Result<R> {
    let base = if k < 0 {
        x.try_inverse(tol).ok_or(Error::NotInvertible)?
    } else {
        x.clone()
    };
    Ok((0..k.unsigned_abs()).fold(R::one(), |acc, _| acc * base.clone()))
}

// x^{k/2}; None when k is odd and x has no square root in the ring
fn pow_half<R: Ring>(x: &R, k: i64, tol: f64) -> Result<Option<R>> {
    if k % 2 == 0 {
        return pow_int(x, k / 2, tol).map(Some);
    }
    match x.sqrt_unit() {
        Some(r) => pow_int(&r, k, tol).map(Some),
        None => Ok(None),
    }
}

fn trace_of_product<R: Ring>(a: &Matrix<R>, b: &Matrix<R>) -> R {
    let mut acc = R::zero();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = a.get(i, j);
            if !x.is_zero() {
                acc += x.clone() * b.get(j, i).clone();
            }
        }
    }
    acc
}

struct Strands<R> {
    gens: Generators<R>,
    trace: Matrix<R>,
}

/// A model with its Markov parameters extracted and per-strand-count data
/// cached.
pub struct MarkovContext<'m, R, M: ?Sized> {
    model: &'m M,
    z_plus: R,
    z_minus: R,
    tol: f64,
    cache: Mutex<HashMap<usize, Arc<Strands<R>>>>,
}

impl<'m, R: Ring, M: MarkovModel<R> + ?Sized> MarkovContext<'m, R, M> {
    pub fn new(model: &'m M, tol: f64) -> Result<Self> {
        let (z_plus, z_minus) = model.z_pair(tol)?;
        Ok(MarkovContext {
            model,
            z_plus,
            z_minus,
            tol,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn model(&self) -> &M {
        self.model
    }

    pub fn z_plus(&self) -> &R {
        &self.z_plus
    }

    pub fn z_minus(&self) -> &R {
        &self.z_minus
    }

    fn strands(&self, n: usize) -> Result<Arc<Strands<R>>> {
        if let Some(s) = self.cache.lock().expect("cache lock").get(&n) {
            return Ok(s.clone());
        }
        let s = Arc::new(Strands {
            gens: Generators::new(self.model, n)?,
            trace: self.model.trace_matrix(n)?,
        });
        self.cache.lock().expect("cache lock").insert(n, s.clone());
        Ok(s)
    }

    pub fn word_matrix(&self, w: &BraidWord) -> Result<Matrix<R>> {
        self.strands(w.strands() - 1)?.gens.word_matrix(w)
    }

    pub fn trace_matrix(&self, n: usize) -> Result<Matrix<R>> {
        Ok(self.strands(n)?.trace.clone())
    }

    /// `θ_n(Ψ) = tr(Ψ·M_n)` of an operator on `n + 1` strands.
    pub fn theta_of(&self, psi: &Matrix<R>, n: usize) -> Result<R> {
        let s = self.strands(n)?;
        if psi.rows() != s.trace.rows() || psi.cols() != s.trace.cols() {
            return Err(Error::Shape(format!(
                "operator of size {} on {} strands",
                psi.rows(),
                n + 1
            )));
        }
        Ok(trace_of_product(psi, &s.trace))
    }

    pub fn theta(&self, w: &BraidWord) -> Result<R> {
        let n = w.strands() - 1;
        self.theta_of(&self.word_matrix(w)?, n)
    }

    /// Traces of a batch of words, in input order.
    pub fn theta_batch(&self, words: &[BraidWord]) -> Result<Vec<R>> {
        for w in words {
            self.strands(w.strands() - 1)?;
        }
        words.par_iter().map(|w| self.theta(w)).collect()
    }

    /// `L = (z⁺z⁻)^{n/2} (z⁻/z⁺)^{e/2} θ`, with the branch
    /// `(z⁺z⁻)^{1/2} = z⁺ (z⁻/z⁺)^{1/2}` so that only one square root is taken.
    /// Independent roots of the two factors can disagree in sign across a
    /// stabilization.
    pub fn link_polynomial(&self, w: &BraidWord) -> Result<LinkResult<R>> {
        let theta = self.theta(w)?;
        let n = w.strands() - 1;
        let e = w.exponent_sum();
        let prod = self.z_plus.clone() * self.z_minus.clone();
        let ratio = self.z_minus.clone() * self.z_plus.try_inverse(self.tol).ok_or(Error::NotInvertible)?;
        let value = match pow_half(&ratio, n as i64 + e, self.tol)? {
            Some(r) => LinkValue::L(pow_int(&self.z_plus, n as i64, self.tol)? * r * theta.clone()),
            None => LinkValue::LSquared(
                pow_int(&prod, n as i64, self.tol)? * pow_int(&ratio, e, self.tol)? * theta.clone() * theta.clone(),
            ),
        };
        Ok(LinkResult {
            theta,
            e,
            n,
            z_plus: self.z_plus.clone(),
            z_minus: self.z_minus.clone(),
            value,
        })
    }

    /// `L(closure of w) / L(unknot)`.
    pub fn normalized(&self, w: &BraidWord) -> Result<LinkValue<R>> {
        let unknot = BraidWord::new(1, vec![]).expect("empty word");
        let base = self.link_polynomial(&unknot)?.value;
        self.link_polynomial(w)?.value.ratio(&base, self.tol)
    }

    /// Trace cyclicity over random word pairs and the stabilization law
    /// over random words, on at most `max_strands` strands.
    pub fn markov_check(&self, seed: u64, pairs: usize, stabilizations: usize, max_strands: usize) -> Result<Report> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rep = Report::new("Markov properties");
        let max_strands = max_strands.max(2);
        let mut cyc = Vec::new();
        for _ in 0..pairs {
            let strands = rng.gen_range(2..=max_strands);
            let a = random_word(&mut rng, strands, 1, 4);
            let b = random_word(&mut rng, strands, 1, 4);
            cyc.push((a.concat(&b)?, b.concat(&a)?));
        }
        let mut worst = (0.0f64, true);
        for (ab, ba) in &cyc {
            let r = scalar_residual(&self.theta(ab)?, &self.theta(ba)?);
            worst = (worst.0.max(r.0), worst.1 && passes::<R>(r, self.tol));
        }
        rep.push("trace cyclicity", worst.0, worst.1);
        let mut worst = (0.0f64, true);
        for _ in 0..stabilizations {
            let strands = rng.gen_range(2..=max_strands);
            let n = strands - 1;
            let psi = random_word(&mut rng, n, 0, 4);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let stab = psi
                .with_strands(strands)?
                .concat(&BraidWord::new(strands, vec![sign * n as i32])?)?;
            let z = if sign > 0 { &self.z_plus } else { &self.z_minus };
            let r = scalar_residual(&self.theta(&stab)?, &(z.clone() * self.theta(&psi)?));
            worst = (worst.0.max(r.0), worst.1 && passes::<R>(r, self.tol));
        }
        rep.push("stabilization", worst.0, worst.1);
        Ok(rep)
    }

    /// Normalized `L` compared across seeded conjugation and stabilization
    /// moves.
    pub fn isotopy_check(&self, seed: u64, cases: usize, max_strands: usize) -> Result<Report> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rep = Report::new("ambient isotopy moves");
        let max_strands = max_strands.max(2);
        let (mut conj, mut stab) = ((0.0f64, true), (0.0f64, true));
        for _ in 0..cases {
            let strands = rng.gen_range(1..max_strands);
            let psi = random_word(&mut rng, strands, 0, 5);
            let g = random_word(&mut rng, strands, 1, 3);
            let base = self.normalized(&psi)?;
            let r = base.residual(&self.normalized(&psi.conjugate(&g)?)?);
            conj = (conj.0.max(r.0), conj.1 && passes::<R>(r, self.tol));
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let up = psi
                .with_strands(strands + 1)?
                .concat(&BraidWord::new(strands + 1, vec![sign * strands as i32])?)?;
            let r = base.residual(&self.normalized(&up)?);
            stab = (stab.0.max(r.0), stab.1 && passes::<R>(r, self.tol));
        }
        rep.push("conjugation invariance", conj.0, conj.1);
        rep.push("stabilization invariance", stab.0, stab.1);
        Ok(rep)
    }
}

/// A random word with between `min_len` and `max_len` letters.
pub fn random_word(rng: &mut impl Rng, strands: usize, min_len: usize, max_len: usize) -> BraidWord {
    if strands < 2 {
        return BraidWord::new(strands.max(1), vec![]).expect("empty word");
    }
    let len = rng.gen_range(min_len..=max_len.max(min_len));
    let letters = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..strands) as i32;
            if rng.gen_bool(0.5) {
                i
            } else {
                -i
            }
        })
        .collect();
    BraidWord::new(strands, letters).expect("letters in range")
}

/// Partial trace identities: `θ_n = θ_{n-1}∘τ_n` on the given words,
/// `τ_n(σ_n^{±1}) = z^{±} I` and `τ_n(Ψσ_n^{±1}) = Ψ τ_n(σ_n^{±1})`.
pub fn tau_check<R: Ring>(
    ctx: &MarkovContext<'_, R, AlgebraModel<'_, R>>,
    words: &[BraidWord],
    tol: f64,
) -> Result<Report> {
    let model = ctx.model();
    let mut rep = Report::new("partial trace");
    let mut worst = (0.0f64, true);
    for w in words.iter().filter(|w| w.strands() >= 2) {
        let n = w.strands() - 1;
        let tau = model.tau_partial(&ctx.word_matrix(w)?, n)?;
        let r = scalar_residual(&ctx.theta(w)?, &ctx.theta_of(&tau, n - 1)?);
        worst = (worst.0.max(r.0), worst.1 && passes::<R>(r, tol));
    }
    rep.push("theta through partial trace", worst.0, worst.1);
    let (mut gen, mut fac) = ((0.0f64, true), (0.0f64, true));
    for w in words.iter().filter(|w| w.strands() >= 2) {
        let n = w.strands() - 1;
        for sign in [1i32, -1] {
            let sigma = BraidWord::new(n + 1, vec![sign * n as i32])?;
            let tau_sigma = model.tau_partial(&ctx.word_matrix(&sigma)?, n)?;
            let z = if sign > 0 { ctx.z_plus() } else { ctx.z_minus() };
            let id = Matrix::identity(tau_sigma.rows());
            let r = tau_sigma.residual(&id.scale(z))?;
            gen = (gen.0.max(r.0), gen.1 && passes::<R>(r, tol));
            // Ψ on the first n strands only
            let psi: Vec<i32> = w
                .letters()
                .iter()
                .copied()
                .filter(|l| (l.unsigned_abs() as usize) < n)
                .collect();
            let psi_n = BraidWord::new(n, psi.clone())?;
            let full = BraidWord::new(n + 1, psi)?.concat(&sigma)?;
            let lhs = model.tau_partial(&ctx.word_matrix(&full)?, n)?;
            let rhs = ctx.word_matrix(&psi_n)?.mul(&tau_sigma)?;
            let r = lhs.residual(&rhs)?;
            fac = (fac.0.max(r.0), fac.1 && passes::<R>(r, tol));
        }
    }
    rep.push("partial trace of last generator", gen.0, gen.1);
    rep.push("partial trace factorization", fac.0, fac.1);
    Ok(rep)
}

/// Compare the Markov data of `b` and an already twisted `bt` on `words`:
/// traces, Markov parameters and `σ_i^F = χ_n σ_i χ_n^{-1}`.
pub fn invariance_report<R: Ring>(
    b: &QuasiHopf<R>,
    bt: &QuasiHopf<R>,
    t: &Twistor<R>,
    rep: &Representation<R>,
    words: &[BraidWord],
    tol: f64,
) -> Result<Report> {
    let mut report = Report::new(format!("twist invariance on {}", b.name));
    let model = AlgebraModel::new(b, rep);
    let ctx = MarkovContext::new(&model, tol)?;
    let model_f = AlgebraModel::new(bt, rep);
    let ctx_f = match MarkovContext::new(&model_f, tol) {
        Ok(c) => c,
        Err(_) => {
            report.push("twisted Markov data", f64::INFINITY, false);
            return Ok(report);
        }
    };
    let thetas = ctx.theta_batch(words)?;
    let mut worst = (0.0f64, true);
    match ctx_f.theta_batch(words) {
        Ok(thetas_f) => {
            for (a, b) in thetas.iter().zip(&thetas_f) {
                let r = scalar_residual(a, b);
                worst = (worst.0.max(r.0), worst.1 && passes::<R>(r, tol));
            }
        }
        Err(_) => worst = (f64::INFINITY, false),
    }
    report.push("trace invariance", worst.0, worst.1);
    let rp = scalar_residual(ctx.z_plus(), ctx_f.z_plus());
    let rm = scalar_residual(ctx.z_minus(), ctx_f.z_minus());
    report.push("z+ invariance", rp.0, passes::<R>(rp, tol));
    report.push("z- invariance", rm.0, passes::<R>(rm, tol));
    let mut counts: Vec<usize> = words.iter().map(|w| w.strands() - 1).filter(|&n| n >= 1).collect();
    counts.sort_unstable();
    counts.dedup();
    let mut worst = (0.0f64, true);
    for n in counts {
        let (c, ci) = chi(b, t, n)?;
        let (c, ci) = (rep.element(&c)?, rep.element(&ci)?);
        let g = Generators::new(&model, n)?;
        let gf = Generators::new(&model_f, n)?;
        for i in 1..=n as i32 {
            let r = gf.get(i)?.residual(&Matrix::product(&[&c, g.get(i)?, &ci])?)?;
            worst = (worst.0.max(r.0), worst.1 && passes::<R>(r, tol));
        }
    }
    report.push("generator conjugation", worst.0, worst.1);
    Ok(report)
}

/// Twist `b` by `t` and check that the Markov trace does not notice.
pub fn twist_invariance_check<R: Ring>(
    b: &QuasiHopf<R>,
    t: &Twistor<R>,
    rep: &Representation<R>,
    words: &[BraidWord],
    tol: f64,
) -> Result<Report> {
    invariance_report(b, &twist(b, t, tol)?, t, rep, words, tol)
}

/// The same comparison with `α_F` left untwisted. Expected to fail.
pub fn negative_control<R: Ring>(
    b: &QuasiHopf<R>,
    t: &Twistor<R>,
    rep: &Representation<R>,
    words: &[BraidWord],
    tol: f64,
) -> Result<Report> {
    let mut r = invariance_report(b, &twist_without_alpha(b, t, tol)?, t, rep, words, tol)?;
    r.title = format!("negative control on {}", b.name);
    Ok(r)
}
