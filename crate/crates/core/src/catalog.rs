//! Small built-in bundles: group algebras, the twisted double of `Z₂`, and a
//! few twistors with closed-form inverses.

use crate::quasi_hopf::QuasiHopf;
use crate::rep::{Matrix, Representation};
use crate::scalar::{Complex64, Rational, Ring};
use crate::tensor::{Algebra, Element, StructureMap};
use crate::twist::Twistor;
use crate::Result;

/// Group algebra with trivial `Φ`, `R` and `v` from a multiplication table.
pub fn group_bundle<R: Ring>(name: &str, table: &[Vec<usize>], inverse: &[usize]) -> Result<QuasiHopf<R>> {
    let d = table.len();
    let one = R::one();
    let rows = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| (vec![i, j, table[i][j]], one.clone()));
    let e = (0..d)
        .find(|&i| (0..d).all(|j| table[i][j] == j))
        .expect("group table has an identity");
    let alg = Algebra::new(StructureMap::from_rows(2, 1, d, rows)?, Element::basis(d, &[e])?)?;
    let coproduct = StructureMap::from_rows(1, 2, d, (0..d).map(|i| (vec![i, i, i], one.clone())))?;
    let counit = StructureMap::from_rows(1, 0, d, (0..d).map(|i| (vec![i], one.clone())))?;
    let antipode = StructureMap::from_rows(1, 1, d, (0..d).map(|i| (vec![i, inverse[i]], one.clone())))?;
    Ok(QuasiHopf {
        name: name.into(),
        phi: alg.one(3),
        phi_inv: alg.one(3),
        alpha: alg.one(1),
        beta: alg.one(1),
        r: Some(alg.one(2)),
        r_inv: Some(alg.one(2)),
        v: Some(alg.one(1)),
        v_inv: Some(alg.one(1)),
        antipode_inv: antipode.clone(),
        antipode,
        coproduct,
        counit,
        algebra: alg,
        reps: vec![],
    })
}

/// Representation of a group algebra from one matrix per group element.
fn group_rep<R: Ring>(name: &str, mats: Vec<Vec<Vec<i64>>>, irreducible: bool) -> Result<Representation<R>> {
    let dim = mats[0].len();
    let mats = mats
        .into_iter()
        .map(|m| {
            Matrix::from_rows(
                m.into_iter()
                    .map(|r| r.into_iter().map(R::from_i64).collect())
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Representation::new(name, dim, mats, irreducible)
}

fn regular<R: Ring>(table: &[Vec<usize>]) -> Result<Representation<R>> {
    let d = table.len();
    let mats = (0..d)
        .map(|g| {
            let mut m = vec![vec![0; d]; d];
            for h in 0..d {
                m[table[g][h]][h] = 1;
            }
            m
        })
        .collect();
    group_rep("regular", mats, false)
}

fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()
}

/// `C[Z_n]` with its trivial and regular representations, plus the sign
/// representation for `n = 2` and the rational 2-dimensional irreducible one
/// for `n = 3`.
pub fn cyclic<R: Ring>(n: usize) -> Result<QuasiHopf<R>> {
    let table = cyclic_table(n);
    let inv: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    let mut b = group_bundle(&format!("C[Z{n}]"), &table, &inv)?;
    b.reps.push(group_rep("trivial", vec![vec![vec![1]]; n], true)?);
    match n {
        2 => b
            .reps
            .push(group_rep("sign", vec![vec![vec![1]], vec![vec![-1]]], true)?),
        // rotation by a third of a turn in the lattice basis
        3 => b.reps.push(group_rep(
            "rotation",
            vec![
                vec![vec![1, 0], vec![0, 1]],
                vec![vec![0, -1], vec![1, -1]],
                vec![vec![-1, 1], vec![-1, 0]],
            ],
            true,
        )?),
        _ => {}
    }
    b.reps.push(regular(&table)?);
    Ok(b)
}

const S3_PERMS: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];

pub(crate) fn s3_table() -> Vec<Vec<usize>> {
    let idx = |p: [usize; 3]| S3_PERMS.iter().position(|q| *q == p).unwrap();
    S3_PERMS
        .iter()
        .map(|a| S3_PERMS.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
        .collect()
}

/// 2-dimensional irreducible representation of `S₃` on the sum-zero plane.
pub fn s3_standard<R: Ring>() -> Result<Representation<R>> {
    let mats = S3_PERMS
        .iter()
        .map(|p| {
            let mut m = vec![vec![0; 2]; 2];
            for (col, (x, y)) in [(0, 1), (1, 2)].into_iter().enumerate() {
                let mut w = [0i64; 3];
                w[p[x]] += 1;
                w[p[y]] -= 1;
                m[0][col] = w[0];
                m[1][col] = -w[2];
            }
            m
        })
        .collect();
    group_rep("standard", mats, true)
}

/// `C[S₃]` with trivial, sign, standard and regular representations.
pub fn s3<R: Ring>() -> Result<QuasiHopf<R>> {
    // transpositions are involutions, the two 3-cycles are swapped
    let mut b = group_bundle("C[S3]", &s3_table(), &[0, 1, 2, 3, 5, 4])?;
    b.reps.push(group_rep("trivial", vec![vec![vec![1]]; 6], true)?);
    let signs = [1, -1, -1, -1, 1, 1];
    b.reps
        .push(group_rep("sign", signs.iter().map(|&s| vec![vec![s]]).collect(), true)?);
    b.reps.push(s3_standard()?);
    b.reps.push(regular(&s3_table())?);
    Ok(b)
}

/// Twisted quantum double `D^ω(Z₂)` with the nontrivial 3-cocycle
/// `ω(a,b,c) = (-1)^{abc}`. Basis element `2g + x` is `e_g x`.
pub fn twisted_double_z2() -> Result<QuasiHopf<Complex64>> {
    let c = |x: f64| Complex64::new(x, 0.0);
    let omega = |a: usize, b: usize, c_: usize| if a * b * c_ == 1 { -1.0 } else { 1.0 };
    // abelian forms of the usual θ and γ
    let theta = |g, x, y| omega(g, x, y) * omega(x, y, g) / omega(x, g, y);
    let gamma = |x, h, k| omega(h, k, x) * omega(x, h, k) / omega(h, x, k);
    let idx = |g: usize, x: usize| 2 * g + x;
    let d = 4;

    let mut mult = Vec::new();
    for g in 0..2 {
        for x in 0..2 {
            for y in 0..2 {
                mult.push((vec![idx(g, x), idx(g, y), idx(g, x ^ y)], c(theta(g, x, y))));
            }
        }
    }
    let unit = Element::from_entries(1, d, [(vec![idx(0, 0)], c(1.0)), (vec![idx(1, 0)], c(1.0))])?;
    let alg = Algebra::new(StructureMap::from_rows(2, 1, d, mult)?, unit)?;

    let mut cop = Vec::new();
    for g in 0..2 {
        for x in 0..2 {
            for h in 0..2 {
                let k = g ^ h;
                cop.push((vec![idx(g, x), idx(h, x), idx(k, x)], c(gamma(x, h, k))));
            }
        }
    }
    let counit = StructureMap::from_rows(1, 0, d, (0..2).map(|x| (vec![idx(0, x)], c(1.0))))?;
    let anti: Vec<_> = (0..2)
        .flat_map(|g| (0..2).map(move |x| (g, x)))
        .map(|(g, x)| (vec![idx(g, x), idx(g, x)], c(1.0 / (theta(g, x, x) * gamma(x, g, g)))))
        .collect();
    let antipode = StructureMap::from_rows(1, 1, d, anti)?;

    let mut phi = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            for c_ in 0..2 {
                phi.push((vec![idx(a, 0), idx(b, 0), idx(c_, 0)], c(omega(a, b, c_))));
            }
        }
    }
    // ω is ±1, so Φ is its own inverse
    let phi = Element::from_entries(3, d, phi)?;
    let beta = Element::from_entries(1, d, (0..2).map(|g| (vec![idx(g, 0)], c(omega(g, g, g)))))?;
    let r = Element::from_entries(
        2,
        d,
        (0..2).flat_map(|g| (0..2).map(move |h| (vec![idx(g, 0), idx(h, g)], c(1.0)))),
    )?;
    let r_inv = alg.invert(&r)?;
    let v = Element::from_entries(1, d, (0..2).map(|g| (vec![idx(g, g)], c(1.0))))?;
    let v_inv = alg.invert(&v)?;

    let mut reps = Vec::new();
    let i = Complex64::i();
    // one-dimensional representations e_h x ↦ δ_{g,h} χ(x), χ(1)² = θ_g(1,1)
    for (g, chi, name) in [(0, c(1.0), "e0+"), (0, c(-1.0), "e0-"), (1, i, "e1+i"), (1, -i, "e1-i")] {
        let mats = (0..d)
            .map(|b| {
                let (h, x) = (b / 2, b % 2);
                let val = if h != g {
                    c(0.0)
                } else if x == 0 {
                    c(1.0)
                } else {
                    chi
                };
                Matrix::from_rows(vec![vec![val]])
            })
            .collect::<Result<Vec<_>>>()?;
        reps.push(Representation::new(name, 1, mats, true)?);
    }
    let left = (0..d)
        .map(|a| {
            let mut m = Matrix::zeros(d, d);
            for b in 0..d {
                for (k, coef) in alg.multiply(&alg.basis(a), &alg.basis(b))?.entries() {
                    m.set(k, b, *coef);
                }
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    reps.push(Representation::new("regular", d, left, false)?);

    Ok(QuasiHopf {
        name: "D^w(Z2)".into(),
        coproduct: StructureMap::from_rows(1, 2, d, cop)?,
        counit,
        antipode_inv: antipode.clone(),
        antipode,
        phi_inv: phi.clone(),
        phi,
        alpha: alg.one(1),
        beta,
        r: Some(r),
        r_inv: Some(r_inv),
        v: Some(v),
        v_inv: Some(v_inv),
        algebra: alg,
        reps,
    })
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `F = ½(e⊗e + e⊗g + g⊗e - g⊗g)` on `C[Z₂]`. It squares to one.
pub fn z2_twistor() -> Result<Twistor<Rational>> {
    let h = q(1, 2);
    let f = Element::from_entries(
        2,
        2,
        [
            (vec![0, 0], h.clone()),
            (vec![0, 1], h.clone()),
            (vec![1, 0], h.clone()),
            (vec![1, 1], -h),
        ],
    )?;
    Ok(Twistor { f_inv: f.clone(), f })
}

/// Diagonal twistor on `C[Z₃]` in the idempotent basis: `F = 1 + (λ-1)P + (μ-1)Q`
/// where `P` projects onto equal nontrivial character pairs and `Q` onto
/// distinct nontrivial ones. Both projections are rational, and `F` is not a
/// cocycle unless `μ = λ²`.
pub fn z3_twistor(lambda: Rational, mu: Rational) -> Result<Twistor<Rational>> {
    let build = |l: &Rational, m: &Rational| -> Result<Element<Rational>> {
        let one = Rational::from_integer(1.into());
        let (lp, mq) = (l - &one, m - &one);
        let mut rows = Vec::new();
        for k in 0..3usize {
            for j in 0..3usize {
                let p = if (k + j) % 3 == 0 { q(2, 9) } else { q(-1, 9) };
                let qq = if k == j { q(2, 9) } else { q(-1, 9) };
                let mut coef = &lp * &p + &mq * &qq;
                if k == 0 && j == 0 {
                    coef += &one;
                }
                rows.push((vec![k, j], coef));
            }
        }
        Element::from_entries(2, 3, rows)
    };
    let f = build(&lambda, &mu)?;
    let f_inv = build(&lambda.recip(), &mu.recip())?;
    Ok(Twistor { f, f_inv })
}

/// The shipped exact `C[Z₃]` twistor, `λ = 2`, `μ = 3`.
pub fn z3_default_twistor() -> Result<Twistor<Rational>> {
    z3_twistor(q(2, 1), q(3, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twist::twist;

    #[test]
    fn group_bundles_and_reps_validate() {
        for b in [cyclic::<Rational>(2).unwrap(), cyclic(3).unwrap(), s3().unwrap()] {
            let rep = b.verify_all(0.0).unwrap();
            assert!(rep.passed(), "{rep}");
            for r in &b.reps {
                r.validate(&b.algebra, 0.0).unwrap();
            }
        }
    }

    #[test]
    fn twisted_double_passes_everything() {
        let b = twisted_double_z2().unwrap();
        let rep = b.verify_all(1e-12).unwrap();
        assert!(rep.passed(), "{rep}");
        for r in &b.reps {
            r.validate(&b.algebra, 1e-12).unwrap();
        }
        // Φ is not trivial
        assert!(b.phi.residual(&b.one(3)).unwrap().0 > 1.0);
    }

    #[test]
    fn shipped_twistors_are_valid() {
        let z2 = cyclic::<Rational>(2).unwrap();
        let t = z2_twistor().unwrap();
        t.validate(&z2, 0.0).unwrap();
        let z3 = cyclic::<Rational>(3).unwrap();
        let t = z3_default_twistor().unwrap();
        t.validate(&z3, 0.0).unwrap();
        let bt = twist(&z3, &t, 0.0).unwrap();
        assert_ne!(bt.phi, z3.phi);
        assert!(bt.verify_all(0.0).unwrap().passed());
        // a cocycle gives back trivial Φ
        let cocycle = z3_twistor(q(2, 1), q(4, 1)).unwrap();
        assert_eq!(twist(&z3, &cocycle, 0.0).unwrap().phi, z3.phi);
    }
}
