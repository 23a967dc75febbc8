//! Kauffman bracket and Jones polynomial of braid closures by brute-force
//! state enumeration.
//!
//! Conventions: a positive generator `σ_i` expands as `A·id + A⁻¹·e_i`, the
//! bracket is normalised so that the unknot is 1, and
//! `jones(w) = (-A³)^(-writhe)·⟨w⟩`. With `t = A⁻⁴` the right-handed trefoil
//! `σ₁³` has Jones polynomial `t + t³ - t⁴`.

mod poly;

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

pub use poly::Poly;

/// Largest crossing count accepted by the enumerator (2^24 states).
pub const MAX_CROSSINGS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("too many crossings for exact enumeration: {0} > {MAX_CROSSINGS}")]
    TooManyCrossings(usize),
    #[error("braid needs at least one strand")]
    NoStrands,
    #[error("crossing {letter} is out of range for {strands} strands")]
    OutOfRange { letter: i32, strands: usize },
    #[error("braid letters must be non-zero")]
    ZeroLetter,
    #[error("cannot parse braid letter '{0}'")]
    Malformed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    /// Left strand of the crossing, 1-based.
    pub position: usize,
    pub positive: bool,
}

impl Crossing {
    pub fn sign(&self) -> i64 {
        if self.positive {
            1
        } else {
            -1
        }
    }
}

/// A braid read as the planar diagram of its closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedBraid {
    strands: usize,
    crossings: Vec<Crossing>,
}

impl ClosedBraid {
    pub fn new(strands: usize, letters: &[i32]) -> Result<Self, OracleError> {
        if strands == 0 {
            return Err(OracleError::NoStrands);
        }
        let crossings = letters
            .iter()
            .map(|&l| {
                if l == 0 {
                    return Err(OracleError::ZeroLetter);
                }
                let position = l.unsigned_abs() as usize;
                if position >= strands {
                    return Err(OracleError::OutOfRange { letter: l, strands });
                }
                Ok(Crossing {
                    position,
                    positive: l > 0,
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { strands, crossings })
    }

    /// Parse whitespace- or comma-separated signed letters, e.g. `"1 -2 1"`.
    pub fn parse(text: &str, strands: usize) -> Result<Self, OracleError> {
        let letters = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i32>().map_err(|_| OracleError::Malformed(t.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(strands, &letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn letters(&self) -> Vec<i32> {
        self.crossings
            .iter()
            .map(|c| {
                if c.positive {
                    c.position as i32
                } else {
                    -(c.position as i32)
                }
            })
            .collect()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(Crossing::sign).sum()
    }

    pub fn mirror(&self) -> Self {
        let crossings = self
            .crossings
            .iter()
            .map(|c| Crossing {
                position: c.position,
                positive: !c.positive,
            })
            .collect();
        Self {
            strands: self.strands,
            crossings,
        }
    }

    /// Number of loops in the smoothing selected by `mask`, where bit `k`
    /// set means crossing `k` takes its B-smoothing.
    fn loops(&self, mask: u64, parent: &mut Vec<usize>) -> usize {
        let c = self.crossings.len();
        let n = self.strands;
        if c == 0 {
            return n;
        }
        parent.clear();
        parent.extend(0..c * n);
        let node = |level: usize, p: usize| (level % c) * n + p;
        let mut merged = 0;
        for (k, x) in self.crossings.iter().enumerate() {
            let i = x.position - 1;
            for p in (0..n).filter(|&p| p != i && p != i + 1) {
                merged += union(parent, node(k, p), node(k + 1, p)) as usize;
            }
            let b = mask >> k & 1 == 1;
            // A-smoothing of a positive crossing keeps the strands vertical
            if b != x.positive {
                merged += union(parent, node(k, i), node(k + 1, i)) as usize;
                merged += union(parent, node(k, i + 1), node(k + 1, i + 1)) as usize;
            } else {
                merged += union(parent, node(k, i), node(k, i + 1)) as usize;
                merged += union(parent, node(k + 1, i), node(k + 1, i + 1)) as usize;
            }
        }
        c * n - merged
    }
}

impl fmt::Display for ClosedBraid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<String> = self.letters().iter().map(i32::to_string).collect();
        write!(f, "[{}] on {} strands", letters.join(" "), self.strands)
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) -> bool {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra == rb {
        return false;
    }
    parent[ra] = rb;
    true
}

/// `Σ_states A^(#A - #B) d^(loops - 1)` over all 2^c smoothings.
pub fn kauffman_bracket(braid: &ClosedBraid) -> Result<Poly, OracleError> {
    let c = braid.crossings.len();
    if c > MAX_CROSSINGS {
        return Err(OracleError::TooManyCrossings(c));
    }
    let max_loops = braid.strands * c.max(1);
    let width = max_loops + 1;
    // histogram[a * width + loops] counts states with `a` B-smoothings
    let histogram = (0..1u64 << c)
        .into_par_iter()
        .fold(
            || (vec![0i64; (c + 1) * width], Vec::new()),
            |(mut hist, mut parent), mask| {
                let loops = braid.loops(mask, &mut parent);
                hist[mask.count_ones() as usize * width + loops] += 1;
                (hist, parent)
            },
        )
        .map(|(hist, _)| hist)
        .reduce(
            || vec![0i64; (c + 1) * width],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let d = Poly::loop_value();
    let d_pows: Vec<Poly> = (0..width as u32).map(|k| d.pow(k)).collect();
    let mut total = Poly::zero();
    for b in 0..=c {
        for loops in 1..width {
            let count = histogram[b * width + loops];
            if count != 0 {
                let a_minus_b = c as i32 - 2 * b as i32;
                total = total + &Poly::monomial(count, a_minus_b) * &d_pows[loops - 1];
            }
        }
    }
    Ok(total)
}

/// Jones polynomial in `A`: `(-A³)^(-writhe)·⟨braid⟩`.
pub fn jones(braid: &ClosedBraid) -> Result<Poly, OracleError> {
    let w = braid.writhe();
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let factor = Poly::monomial(sign, -3 * w as i32);
    Ok(&factor * &kauffman_bracket(braid)?)
}
