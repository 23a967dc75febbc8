//! Twisting a quasi-Hopf bundle by a counit-normalized invertible `F ∈ A⊗A`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::quasi_hopf::QuasiHopf;
use crate::report::Report;
use crate::scalar::{Complex64, Ring};
use crate::tensor::{Element, Factor, StructureMap};
use crate::{Error, Result};

use Factor::{Elem, Leg};

#[derive(Clone, Debug)]
pub struct Twistor<R> {
    pub f: Element<R>,
    pub f_inv: Element<R>,
}

impl<R: Ring> Twistor<R> {
    pub fn identity(b: &QuasiHopf<R>) -> Self {
        Twistor {
            f: b.one(2),
            f_inv: b.one(2),
        }
    }

    /// The twistor undoing `self` on the twisted bundle.
    pub fn inverse(&self) -> Self {
        Twistor {
            f: self.f_inv.clone(),
            f_inv: self.f.clone(),
        }
    }

    /// Invertibility and `(ε⊗1)F = 1 = (1⊗ε)F`.
    pub fn validate(&self, b: &QuasiHopf<R>, tol: f64) -> Result<()> {
        let ok = |(r, zero): (f64, bool)| if R::MODE.is_exact() { zero } else { r <= tol };
        if self.f.rank() != 2 || self.f_inv.rank() != 2 || self.f.dim() != b.dim() || self.f_inv.dim() != b.dim() {
            return Err(Error::Shape(
                "twistor components must be rank 2 over the bundle's algebra".into(),
            ));
        }
        let one = b.one(2);
        if !ok(b.mul(&self.f, &self.f_inv)?.residual(&one)?) || !ok(b.mul(&self.f_inv, &self.f)?.residual(&one)?) {
            return Err(Error::TwistorNotInvertible);
        }
        let unit = b.one(1);
        for leg in [1, 2] {
            if !ok(b.eps_at(&self.f, leg)?.residual(&unit)?) {
                return Err(Error::TwistorCounit);
            }
        }
        Ok(())
    }
}

/// Twisted coproduct, coassociator, `α`, `β` and `R`. The algebra, `S` and
/// `v` are untouched.
pub fn twist<R: Ring>(b: &QuasiHopf<R>, t: &Twistor<R>, tol: f64) -> Result<QuasiHopf<R>> {
    t.validate(b, tol)?;
    let alg = &b.algebra;
    let (f, fi) = (&t.f, &t.f_inv);
    let images = (0..b.dim())
        .map(|a| b.prod(&[f, &b.delta_at(&b.basis(a), 1)?, fi]))
        .collect::<Result<Vec<_>>>()?;
    let coproduct = StructureMap::from_images(1, 2, b.dim(), images)?;

    let f12 = alg.embed(f, &[1, 2], 3)?;
    let f23 = alg.embed(f, &[2, 3], 3)?;
    let fi12 = alg.embed(fi, &[1, 2], 3)?;
    let fi23 = alg.embed(fi, &[2, 3], 3)?;
    let phi = b.prod(&[&f12, &b.delta_at(f, 1)?, &b.phi, &b.delta_at(fi, 2)?, &fi23])?;
    let phi_inv = b.prod(&[&f23, &b.delta_at(f, 2)?, &b.phi_inv, &b.delta_at(fi, 1)?, &fi12])?;
    let alpha = alg.fuse(&[&b.s_at(fi, 1)?], &[vec![Leg(0), Elem(&b.alpha), Leg(1)]])?;
    let beta = alg.fuse(&[&b.s_at(f, 2)?], &[vec![Leg(0), Elem(&b.beta), Leg(1)]])?;
    let (r, r_inv) = match (&b.r, &b.r_inv) {
        (Some(r), Some(ri)) => (
            Some(b.prod(&[&f.flip()?, r, fi])?),
            Some(b.prod(&[f, ri, &fi.flip()?])?),
        ),
        _ => (None, None),
    };
    Ok(QuasiHopf {
        name: format!("{} (twisted)", b.name),
        coproduct,
        phi,
        phi_inv,
        alpha,
        beta,
        r,
        r_inv,
        ..b.clone()
    })
}

/// Twisted bundle with `α` deliberately left untwisted. Used as a negative
/// control for the invariance harness.
pub fn twist_without_alpha<R: Ring>(b: &QuasiHopf<R>, t: &Twistor<R>, tol: f64) -> Result<QuasiHopf<R>> {
    Ok(QuasiHopf {
        alpha: b.alpha.clone(),
        ..twist(b, t, tol)?
    })
}

/// `χ_n = F_{12}·(Δ⊗1)F·…·(Δ^{(n-1)}⊗1)F` on `n+1` legs and its inverse.
pub fn chi<R: Ring>(b: &QuasiHopf<R>, t: &Twistor<R>, n: usize) -> Result<(Element<R>, Element<R>)> {
    if n == 0 {
        return Err(Error::Index("chi needs n >= 1".into()));
    }
    let mut factors = Vec::with_capacity(n);
    let mut inverses = Vec::with_capacity(n);
    for k in 0..n {
        let pos: Vec<usize> = (1..=k + 2).collect();
        let fk = b.coproduct_power(&t.f, k)?;
        let fik = b.coproduct_power(&t.f_inv, k)?;
        factors.push(b.algebra.embed(&fk, &pos, n + 1)?);
        inverses.push(b.algebra.embed(&fik, &pos, n + 1)?);
    }
    let chi = b.prod(&factors.iter().collect::<Vec<_>>())?;
    let chi_inv = b.prod(&inverses.iter().rev().collect::<Vec<_>>())?;
    Ok((chi, chi_inv))
}

/// The Drinfeld twist of the twisted bundle against its transformation law
/// `f_F = (S⊗S)(F_{21}^{-1}) f F^{-1}`.
pub fn drinfeld_twist_check<R: Ring>(b: &QuasiHopf<R>, t: &Twistor<R>, tol: f64) -> Result<Report> {
    let mut rep = Report::new("Drinfeld twist under twisting");
    let bt = twist(b, t, tol)?;
    let der = b.derived(tol)?;
    let der_t = bt.derived(tol)?;
    let ss = b.s_at(&b.s_at(&t.f_inv.flip()?, 1)?, 2)?;
    let expected = b.prod(&[&ss, &der.f, &t.f_inv])?;
    rep.compare("twisted f", &der_t.f, &expected, tol)?;
    Ok(rep)
}

/// A seeded random counit-normalized twistor near the identity.
///
/// A random `G` is projected so that its counit slices are the unit, then
/// shrunk towards `1⊗1` for conditioning. The inverse comes from a linear
/// solve. Draws that are singular, or whose inverse strays further than 1
/// from `1⊗1` in max-norm, are retried with a derived seed.
pub fn random_twistor(b: &QuasiHopf<Complex64>, seed: u64, tol: f64) -> Result<Twistor<Complex64>> {
    const SCALE: f64 = 0.15;
    const MAX_INVERSE_SPREAD: f64 = 1.0;
    let d = b.dim();
    let one = b.one(2);
    for attempt in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(attempt));
        let g: Vec<Complex64> = (0..d * d)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let g = Element::from_dense(2, d, g)?;
        // F = G - 1⊗(ε⊗1)G - (1⊗ε)G⊗1 + (ε⊗ε)G 1⊗1 + 1⊗1
        let left = b.eps_at(&g, 1)?;
        let right = b.eps_at(&g, 2)?;
        let both = b.eps_at(&left, 1)?.scalar_value();
        let unit = b.one(1);
        let f0 = g
            .sub(&unit.tensor(&left)?)?
            .sub(&right.tensor(&unit)?)?
            .add(&one.scale(&(both + Complex64::new(1.0, 0.0))))?;
        let f = one.add(&f0.sub(&one)?.scale(&Complex64::new(SCALE, 0.0)))?;
        let Ok(f_inv) = b.algebra.invert(&f) else {
            continue;
        };
        if f_inv.residual(&one)?.0 > MAX_INVERSE_SPREAD {
            continue;
        }
        let t = Twistor { f, f_inv };
        if t.validate(b, tol).is_ok() {
            return Ok(t);
        }
    }
    Err(Error::SingularProjection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasi_hopf::tests::{cyclic, s3};
    use crate::scalar::Rational;

    #[test]
    fn identity_twist_is_identity() {
        let b = s3::<Rational>();
        let t = twist(&b, &Twistor::identity(&b), 0.0).unwrap();
        assert_eq!(t.coproduct, b.coproduct);
        assert_eq!(t.phi, b.phi);
        assert_eq!(t.alpha, b.alpha);
        assert_eq!(t.r, b.r);
        let (c, ci) = chi(&b, &Twistor::identity(&b), 3).unwrap();
        assert_eq!(c, b.one(4));
        assert_eq!(ci, b.one(4));
    }

    #[test]
    fn random_twistors_are_deterministic_and_normalized() {
        let b = cyclic::<Complex64>(3);
        let t1 = random_twistor(&b, 42, 1e-9).unwrap();
        let t2 = random_twistor(&b, 42, 1e-9).unwrap();
        assert_eq!(t1.f, t2.f);
        assert_eq!(t1.f_inv, t2.f_inv);
        for seed in 0..20 {
            random_twistor(&b, seed, 1e-9).unwrap().validate(&b, 1e-9).unwrap();
        }
    }

    #[test]
    fn twisted_s3_passes_everything() {
        let b = s3::<Complex64>();
        let t = random_twistor(&b, 7, 1e-9).unwrap();
        let bt = twist(&b, &t, 1e-9).unwrap();
        let rep = bt.verify_all(1e-9).unwrap();
        assert!(rep.passed(), "{rep}");
        assert!(bt.phi.residual(&b.phi).unwrap().0 > 1e-3);
    }

    #[test]
    fn chi_intertwines_coproduct_powers() {
        let b = s3::<Complex64>();
        let t = random_twistor(&b, 3, 1e-9).unwrap();
        let bt = twist(&b, &t, 1e-9).unwrap();
        assert_eq!(chi(&b, &t, 1).unwrap().0, t.f);
        for n in 1..=3 {
            let (c, ci) = chi(&b, &t, n).unwrap();
            for a in [1, 4] {
                let x = b.basis(a);
                let lhs = bt.coproduct_power(&x, n).unwrap();
                let rhs = b.prod(&[&c, &b.coproduct_power(&x, n).unwrap(), &ci]).unwrap();
                assert!(lhs.residual(&rhs).unwrap().0 < 1e-10);
            }
        }
    }

    #[test]
    fn round_trip_through_inverse_twistor() {
        let b = s3::<Complex64>();
        let t = random_twistor(&b, 11, 1e-9).unwrap();
        let back = twist(&twist(&b, &t, 1e-9).unwrap(), &t.inverse(), 1e-9).unwrap();
        assert!(back.phi.residual(&b.phi).unwrap().0 < 1e-10);
        assert!(back.alpha.residual(&b.alpha).unwrap().0 < 1e-10);
        assert!(back.beta.residual(&b.beta).unwrap().0 < 1e-10);
        assert!(back.r.unwrap().residual(b.r.as_ref().unwrap()).unwrap().0 < 1e-10);
        assert!(back.coproduct.residual(&b.coproduct).unwrap().0 < 1e-10);
    }

    #[test]
    fn drinfeld_twist_transforms() {
        let b = s3::<Complex64>();
        for seed in [1, 2] {
            let t = random_twistor(&b, seed, 1e-9).unwrap();
            let rep = drinfeld_twist_check(&b, &t, 1e-9).unwrap();
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn twists_compose_on_abelian_algebras() {
        let b = cyclic::<Complex64>(3);
        let t1 = random_twistor(&b, 21, 1e-9).unwrap();
        let t2 = random_twistor(&b, 22, 1e-9).unwrap();
        let composite = Twistor {
            f: b.mul(&t2.f, &t1.f).unwrap(),
            f_inv: b.mul(&t1.f_inv, &t2.f_inv).unwrap(),
        };
        let twice = twist(&twist(&b, &t1, 1e-9).unwrap(), &t2, 1e-9).unwrap();
        let once = twist(&b, &composite, 1e-9).unwrap();
        assert!(twice.phi.residual(&once.phi).unwrap().0 < 1e-10);
        assert!(twice.alpha.residual(&once.alpha).unwrap().0 < 1e-10);
        assert!(twice.beta.residual(&once.beta).unwrap().0 < 1e-10);
        assert!(twice.r.unwrap().residual(once.r.as_ref().unwrap()).unwrap().0 < 1e-10);
    }

    #[test]
    fn counit_violation_is_rejected() {
        let b = cyclic::<Rational>(2);
        let two = Rational::from_integer(2.into());
        let bad = Twistor {
            f: b.one(2).scale(&two),
            f_inv: b.one(2).scale(&two.recip()),
        };
        assert!(matches!(twist(&b, &bad, 0.0), Err(Error::TwistorCounit)));
        let singular = Twistor {
            f: b.one(2),
            f_inv: b.one(2).scale(&two),
        };
        assert!(matches!(twist(&b, &singular, 0.0), Err(Error::TwistorNotInvertible)));
    }
}
