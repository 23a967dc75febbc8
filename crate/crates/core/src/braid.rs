//! Braid words and their representation `σ_i = Φ_i Ř_{i,i+1} Φ_i^{-1}`.

use std::fmt;

use thiserror::Error as ThisError;

use crate::quasi_hopf::QuasiHopf;
use crate::rep::{Matrix, Representation};
use crate::report::Report;
use crate::scalar::Ring;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum BraidError {
    #[error("zero letter")]
    ZeroLetter,
    #[error("generator index exceeds strand count: letter {letter} on {strands} strands")]
    IndexTooLarge { letter: i64, strands: usize },
    #[error("malformed integer: '{0}'")]
    Malformed(String),
    #[error("a braid needs at least one strand")]
    NoStrands,
}

/// A word in the generators of the braid group on `strands` strands. Letter
/// `i` stands for `σ_i`, `-i` for its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::NoStrands);
        }
        for &l in &letters {
            if l == 0 {
                return Err(BraidError::ZeroLetter);
            }
            if l.unsigned_abs() as usize >= strands {
                return Err(BraidError::IndexTooLarge {
                    letter: l as i64,
                    strands,
                });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Whitespace separated nonzero integers.
    pub fn parse(text: &str, strands: usize) -> Result<Self, BraidError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let l: i64 = tok.parse().map_err(|_| BraidError::Malformed(tok.to_string()))?;
            if l == 0 {
                return Err(BraidError::ZeroLetter);
            }
            if l.unsigned_abs() >= strands as u64 {
                return Err(BraidError::IndexTooLarge { letter: l, strands });
            }
            letters.push(l as i32);
        }
        Self::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sum of the generator exponents.
    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.signum() as i64).sum()
    }

    pub fn inverse(&self) -> Self {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// All crossings switched.
    pub fn mirror(&self) -> Self {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().map(|l| -l).collect(),
        }
    }

    pub fn concat(&self, other: &BraidWord) -> Result<Self, BraidError> {
        let strands = self.strands.max(other.strands);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self::new(strands, letters)
    }

    /// The same word viewed on more strands.
    pub fn with_strands(&self, strands: usize) -> Result<Self, BraidError> {
        Self::new(strands, self.letters.clone())
    }

    /// `g · w · g^{-1}`.
    pub fn conjugate(&self, g: &BraidWord) -> Result<Self, BraidError> {
        g.concat(self)?.concat(&g.inverse())
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Representation-level data from which braid generators are assembled.
pub trait BraidModel<R: Ring>: Sync {
    fn v_dim(&self) -> usize;

    /// `Ř` and `Ř^{-1}` on `V⊗V`.
    fn r_check(&self) -> Result<(Matrix<R>, Matrix<R>)>;

    /// `Φ_i` and its inverse on `V^{⊗(n+1)}`.
    fn phi_conjugator(&self, i: usize, n: usize) -> Result<(Matrix<R>, Matrix<R>)>;

    /// Operators on `V^{⊗(n+1)}` that every generator must commute with.
    fn invariants(&self, n: usize) -> Result<Vec<Matrix<R>>>;
}

/// A quasi-Hopf bundle together with one of its representations.
pub struct AlgebraModel<'a, R> {
    pub bundle: &'a QuasiHopf<R>,
    pub rep: &'a Representation<R>,
}

impl<'a, R: Ring> AlgebraModel<'a, R> {
    pub fn new(bundle: &'a QuasiHopf<R>, rep: &'a Representation<R>) -> Self {
        AlgebraModel { bundle, rep }
    }
}

impl<R: Ring> BraidModel<R> for AlgebraModel<'_, R> {
    fn v_dim(&self) -> usize {
        self.rep.dim
    }

    fn r_check(&self) -> Result<(Matrix<R>, Matrix<R>)> {
        let flip = Matrix::flip(self.rep.dim);
        let r = self.rep.element(self.bundle.r()?)?;
        let r_inv = self.rep.element(self.bundle.r_inv()?)?;
        Ok((flip.mul(&r)?, r_inv.mul(&flip)?))
    }

    fn phi_conjugator(&self, i: usize, n: usize) -> Result<(Matrix<R>, Matrix<R>)> {
        self.bundle.phi_conjugator(self.rep, i, n)
    }

    fn invariants(&self, n: usize) -> Result<Vec<Matrix<R>>> {
        (0..self.bundle.dim())
            .map(|a| self.bundle.rep_coproduct_power(self.rep, &self.bundle.basis(a), n))
            .collect()
    }
}

/// `Φ_i Ř^{±1}_{i,i+1} Φ_i^{-1}` on `n+1` strands.
pub fn generator_matrix<R: Ring, M: BraidModel<R> + ?Sized>(
    model: &M,
    i: usize,
    n: usize,
    inverse: bool,
) -> Result<Matrix<R>> {
    if i == 0 || i > n {
        return Err(Error::Generator(i, n + 1));
    }
    let v = model.v_dim();
    let (rc, rc_inv) = model.r_check()?;
    let core = if inverse { rc_inv } else { rc };
    let local = Matrix::identity(v.pow(i as u32 - 1))
        .kron(&core)
        .kron(&Matrix::identity(v.pow((n - i) as u32)));
    let (phi, phi_inv) = model.phi_conjugator(i, n)?;
    Matrix::product(&[&phi, &local, &phi_inv])
}

/// All generators `σ_i^{±1}` for one strand count, built once.
#[derive(Clone, Debug)]
pub struct Generators<R> {
    n: usize,
    size: usize,
    plus: Vec<Matrix<R>>,
    minus: Vec<Matrix<R>>,
}

impl<R: Ring> Generators<R> {
    /// Generators on `n + 1` strands.
    pub fn new<M: BraidModel<R> + ?Sized>(model: &M, n: usize) -> Result<Self> {
        let size = model.v_dim().pow(n as u32 + 1);
        let mut plus = Vec::with_capacity(n);
        let mut minus = Vec::with_capacity(n);
        for i in 1..=n {
            plus.push(generator_matrix(model, i, n, false)?);
            minus.push(generator_matrix(model, i, n, true)?);
        }
        Ok(Generators { n, size, plus, minus })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, letter: i32) -> Result<&Matrix<R>> {
        let i = letter.unsigned_abs() as usize;
        if i == 0 || i > self.n {
            return Err(Error::Generator(i, self.n + 1));
        }
        Ok(if letter > 0 {
            &self.plus[i - 1]
        } else {
            &self.minus[i - 1]
        })
    }

    /// Product of the generators in letter order; the empty word is the identity.
    pub fn word_matrix(&self, w: &BraidWord) -> Result<Matrix<R>> {
        if w.strands() != self.n + 1 {
            return Err(Error::Generator(w.strands() - 1, self.n + 1));
        }
        let mut out = Matrix::identity(self.size);
        for &l in w.letters() {
            out = out.mul(self.get(l)?)?;
        }
        Ok(out)
    }
}

pub fn word_matrix<R: Ring, M: BraidModel<R> + ?Sized>(model: &M, w: &BraidWord) -> Result<Matrix<R>> {
    Generators::new(model, w.strands() - 1)?.word_matrix(w)
}

/// Commutation and braid relations on `n + 1` strands plus invariance of
/// every generator under the coproduct action.
pub fn verify_braid_relations<R: Ring, M: BraidModel<R> + ?Sized>(model: &M, n: usize, tol: f64) -> Result<Report> {
    let gens = Generators::new(model, n)?;
    let mut rep = Report::new(format!("braid relations on {} strands", n + 1));
    let id = Matrix::identity(gens.size);
    let push = |rep: &mut Report, name: &str, pairs: Vec<(Matrix<R>, Matrix<R>)>| -> Result<()> {
        let mut worst = 0.0f64;
        let mut ok = true;
        for (a, b) in pairs {
            let (r, zero) = a.residual(&b)?;
            worst = worst.max(r);
            ok &= if R::MODE.is_exact() { zero } else { r <= tol };
        }
        rep.push(name, worst, ok);
        Ok(())
    };
    let mut inv = Vec::new();
    for i in 1..=n as i32 {
        inv.push((gens.get(i)?.mul(gens.get(-i)?)?, id.clone()));
        inv.push((gens.get(-i)?.mul(gens.get(i)?)?, id.clone()));
    }
    push(&mut rep, "generator inverses", inv)?;
    let mut far = Vec::new();
    let mut adjacent = Vec::new();
    for i in 1..=n as i32 {
        for j in i + 2..=n as i32 {
            far.push((gens.get(i)?.mul(gens.get(j)?)?, gens.get(j)?.mul(gens.get(i)?)?));
        }
        if i < n as i32 {
            let (a, b) = (gens.get(i)?, gens.get(i + 1)?);
            adjacent.push((Matrix::product(&[a, b, a])?, Matrix::product(&[b, a, b])?));
        }
    }
    push(&mut rep, "far commutativity", far)?;
    push(&mut rep, "braid relation", adjacent)?;
    let mut commute = Vec::new();
    for m in model.invariants(n)? {
        for i in 1..=n as i32 {
            let s = gens.get(i)?;
            commute.push((s.mul(&m)?, m.mul(s)?));
        }
    }
    push(&mut rep, "generators commute with coproduct action", commute)?;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_words() {
        let w = BraidWord::parse("1 1 1", 2).unwrap();
        assert_eq!(w.letters(), &[1, 1, 1]);
        assert_eq!(w.exponent_sum(), 3);
        let fig8 = BraidWord::parse("1 -2 1 -2", 3).unwrap();
        assert_eq!(fig8.exponent_sum(), 0);
        assert_eq!(BraidWord::parse("", 1).unwrap().exponent_sum(), 0);
        assert_eq!(
            BraidWord::parse("3", 3),
            Err(BraidError::IndexTooLarge { letter: 3, strands: 3 })
        );
        assert_eq!(BraidWord::parse("1 0", 3), Err(BraidError::ZeroLetter));
        assert_eq!(BraidWord::parse("1 x", 3), Err(BraidError::Malformed("x".into())));
        assert_eq!(BraidError::ZeroLetter.to_string(), "zero letter");
        assert!(BraidError::IndexTooLarge { letter: 3, strands: 3 }
            .to_string()
            .starts_with("generator index exceeds strand count"));
    }

    #[test]
    fn word_algebra() {
        let w = BraidWord::parse("1 -2 3", 4).unwrap();
        assert_eq!(w.inverse().letters(), &[-3, 2, -1]);
        assert_eq!(w.mirror().letters(), &[-1, 2, -3]);
        let g = BraidWord::parse("2", 4).unwrap();
        assert_eq!(w.conjugate(&g).unwrap().letters(), &[2, 1, -2, 3, -2]);
        assert_eq!(w.to_string(), "1 -2 3");
        assert!(w.with_strands(3).is_err());
    }
}
