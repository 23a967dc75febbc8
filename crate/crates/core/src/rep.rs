//! Finite-dimensional representations and dense matrices on `V^{⊗k}`.

use std::fmt;

use crate::quasi_hopf::QuasiHopf;
use crate::scalar::Ring;
use crate::tensor::{split, Algebra, Element};
use crate::{Error, Result};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![R::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = R::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// The flip `x⊗y ↦ y⊗x` on `V⊗V`.
    pub fn flip(v: usize) -> Self {
        let mut m = Self::zeros(v * v, v * v);
        for i in 0..v {
            for j in 0..v {
                m.data[(j * v + i) * v * v + i * v + j] = R::one();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &R {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: R) {
        self.data[r * self.cols + c] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        self.data.chunks(self.cols.max(1)).map(|c| c.to_vec()).collect()
    }

    fn nonzeros(&self) -> Vec<(usize, usize, R)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k / self.cols, k % self.cols, v.clone()))
            .collect()
    }

    pub fn mul(&self, other: &Matrix<R>) -> Result<Matrix<R>> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for (o, b) in row.iter_mut().zip(&other.data[k * other.cols..(k + 1) * other.cols]) {
                    if !b.is_zero() {
                        *o += a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn product(ms: &[&Matrix<R>]) -> Result<Matrix<R>> {
        let (first, rest) = ms
            .split_first()
            .ok_or_else(|| Error::Shape("empty matrix product".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, m| acc.mul(m))
    }

    fn zip_with(&self, other: &Matrix<R>, f: impl Fn(&R, &R) -> R) -> Result<Matrix<R>> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Matrix<R>) -> Result<Matrix<R>> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Matrix<R>) -> Result<Matrix<R>> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, c: &R) -> Matrix<R> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn kron(&self, other: &Matrix<R>) -> Matrix<R> {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(r, c);
        for (i, j, a) in self.nonzeros() {
            for (k, l, b) in other.nonzeros() {
                out.data[(i * other.rows + k) * c + j * other.cols + l] = a.clone() * b.clone();
            }
        }
        out
    }

    pub fn trace(&self) -> R {
        let n = self.rows.min(self.cols);
        (0..n).fold(R::zero(), |acc, i| acc + self.data[i * self.cols + i].clone())
    }

    /// Partial trace over the last tensor factor of dimension `v`.
    pub fn partial_trace_last(&self, v: usize) -> Result<Matrix<R>> {
        if v == 0 || self.rows != self.cols || !self.rows.is_multiple_of(v) {
            return Err(Error::Shape(format!(
                "partial trace of dimension {v} on {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows / v;
        let mut out = Self::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let mut s = R::zero();
                for i in 0..v {
                    s += self.data[(a * v + i) * self.cols + b * v + i].clone();
                }
                out.data[a * n + b] = s;
            }
        }
        Ok(out)
    }

    /// `Some(c)` when the matrix is `c·I`.
    pub fn as_scalar(&self, tol: f64) -> Option<R> {
        if self.rows != self.cols || self.rows == 0 {
            return None;
        }
        let c = self.data[0].clone();
        let exact = R::MODE.is_exact();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { c.clone() } else { R::zero() };
                let diff = self.data[i * self.cols + j].clone() - want;
                if (exact && !diff.is_zero()) || (!exact && diff.magnitude() > tol) {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|a| a.magnitude()).fold(0.0, f64::max)
    }

    /// Max-norm of the difference and whether it is structurally zero.
    pub fn residual(&self, other: &Matrix<R>) -> Result<(f64, bool)> {
        let d = self.sub(other)?;
        Ok((d.max_norm(), d.data.iter().all(|a| a.is_zero())))
    }

    pub fn map_scalars<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<R: Ring> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_rows() {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `π: A → End(V)` given by the images of the basis elements.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation<R> {
    pub name: String,
    pub dim: usize,
    pub matrices: Vec<Matrix<R>>,
    /// Input metadata; z± extraction checks the consequence (π(v) scalar).
    pub irreducible: bool,
    entries: Vec<Vec<(usize, usize, R)>>,
}

impl<R: Ring> Representation<R> {
    pub fn new(name: impl Into<String>, dim: usize, matrices: Vec<Matrix<R>>, irreducible: bool) -> Result<Self> {
        let name = name.into();
        if let Some(m) = matrices.iter().find(|m| m.rows != dim || m.cols != dim) {
            return Err(Error::Representation(
                name,
                format!("{}x{} matrix in a {dim}-dimensional representation", m.rows, m.cols),
            ));
        }
        let entries = matrices.iter().map(|m| m.nonzeros()).collect();
        Ok(Representation {
            name,
            dim,
            matrices,
            irreducible,
            entries,
        })
    }

    /// Check `π(1) = I` and `π(e_i e_j) = π(e_i)π(e_j)` on all basis pairs.
    pub fn validate(&self, alg: &Algebra<R>, tol: f64) -> Result<()> {
        let fail = |what: String| Error::Representation(self.name.clone(), what);
        if self.matrices.len() != alg.dim() {
            return Err(fail(format!(
                "{} matrices for an algebra of dimension {}",
                self.matrices.len(),
                alg.dim()
            )));
        }
        let ok = |(r, zero): (f64, bool)| if R::MODE.is_exact() { zero } else { r <= tol };
        if !ok(self.element(alg.unit())?.residual(&Matrix::identity(self.dim))?) {
            return Err(fail("unit does not act as the identity".into()));
        }
        let d = alg.dim();
        for i in 0..d {
            for j in 0..d {
                let prod = alg.multiply(&alg.basis(i), &alg.basis(j))?;
                let lhs = self.element(&prod)?;
                let rhs = self.matrices[i].mul(&self.matrices[j])?;
                if !ok(lhs.residual(&rhs)?) {
                    return Err(fail(format!("not multiplicative on basis pair ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    /// `π^{⊗k}(x)` on `V^{⊗k}`.
    pub fn element(&self, x: &Element<R>) -> Result<Matrix<R>> {
        if x.dim() != self.matrices.len() {
            return Err(Error::Shape(format!(
                "element of dim {} in representation of an algebra of dim {}",
                x.dim(),
                self.matrices.len()
            )));
        }
        let k = x.rank();
        let n = self.dim.pow(k as u32);
        let mut out = Matrix::zeros(n, n);
        for (flat, c) in x.entries() {
            let digits = split(flat, x.dim(), k);
            // expand the Kronecker product over nonzero entries only
            let mut terms: Vec<(usize, usize, R)> = vec![(0, 0, c.clone())];
            for &b in &digits {
                let mut next = Vec::with_capacity(terms.len() * self.entries[b].len());
                for (r, col, v) in &terms {
                    for (i, j, w) in &self.entries[b] {
                        next.push((r * self.dim + i, col * self.dim + j, v.clone() * w.clone()));
                    }
                }
                terms = next;
            }
            for (r, col, v) in terms {
                out.data[r * n + col] += v;
            }
        }
        Ok(out)
    }

    pub fn map_scalars<S: Ring>(&self, f: impl Fn(&R) -> S) -> Representation<S> {
        let matrices: Vec<Matrix<S>> = self.matrices.iter().map(|m| m.map_scalars(&f)).collect();
        Representation::new(self.name.clone(), self.dim, matrices, self.irreducible).expect("shapes preserved")
    }
}

impl<R: Ring> QuasiHopf<R> {
    /// `π^{⊗(n+1)}(Δ^{(n)}(x))`.
    pub fn rep_coproduct_power(&self, rep: &Representation<R>, x: &Element<R>, n: usize) -> Result<Matrix<R>> {
        rep.element(&self.coproduct_power(x, n)?)
    }

    /// `Φ_i` and `Φ_i^{-1}` on `V^{⊗(n+1)}`. `Φ_1` is the identity; for
    /// `i ≥ 2` it is `(Δ^{(i-2)}⊗1⊗1)Φ` on legs `1..=i+1`, padded with
    /// identities.
    pub fn phi_conjugator(&self, rep: &Representation<R>, i: usize, n: usize) -> Result<(Matrix<R>, Matrix<R>)> {
        if i == 0 || i > n {
            return Err(Error::Generator(i, n + 1));
        }
        let total = rep.dim.pow(n as u32 + 1);
        if i == 1 {
            return Ok((Matrix::identity(total), Matrix::identity(total)));
        }
        let pad = Matrix::identity(rep.dim.pow((n - i) as u32));
        let phi = rep.element(&self.coproduct_power(&self.phi, i - 2)?)?.kron(&pad);
        let phi_inv = rep.element(&self.coproduct_power(&self.phi_inv, i - 2)?)?.kron(&pad);
        Ok((phi, phi_inv))
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    pub(crate) fn s3_standard<R: Ring>() -> Representation<R> {
        crate::catalog::s3_standard().unwrap()
    }
}
