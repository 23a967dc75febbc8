//! Finite-dimensional quasi-Hopf algebras, concretely.
//!
//! An algebra is given by structure constants; elements of `A^{⊗k}` are sparse
//! coordinate tensors. On top of that sit verifiers for the quasi-Hopf,
//! quasitriangular and ribbon axioms, the twisting engine, braid group
//! representations built from `Φ` and `R`, and the Markov trace with its link
//! polynomial normalization.

pub mod braid;
pub mod catalog;
pub mod io;
pub mod markov;
pub mod quasi_hopf;
pub mod rep;
pub mod report;
pub mod scalar;
pub mod tensor;
pub mod twist;

pub use braid::{BraidError, BraidWord};
pub use quasi_hopf::{DerivedElements, QuasiHopf};
pub use rep::{Matrix, Representation};
pub use report::{Check, Report};
pub use scalar::{Complex64, Laurent, Rational, Ring, Scalar, ScalarError, ScalarMode, DEFAULT_TOL};
pub use tensor::{Algebra, Element, Factor, LegPermutation, StructureMap};
pub use twist::Twistor;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error("rank/dim mismatch: {0}")]
    Shape(String),
    #[error("leg range out of bounds: {0}")]
    LegRange(String),
    #[error("duplicate or out-of-range positions: {0:?}")]
    Positions(Vec<usize>),
    #[error("arity mismatch: permutation of {perm} legs applied to rank {rank}")]
    Arity { perm: usize, rank: usize },
    #[error("index out of range: {0}")]
    Index(String),
    #[error("element not invertible")]
    NotInvertible,
    #[error("inversion unsupported; supply inverse")]
    InversionUnsupported,
    #[error("bundle has no {0}")]
    Missing(&'static str),
    #[error("{0} does not match the supplied inverse (residual {1:e})")]
    BadInverse(&'static str, f64),
    #[error("twistor counit violation")]
    TwistorCounit,
    #[error("twistor not invertible")]
    TwistorNotInvertible,
    #[error("projection produced singular F")]
    SingularProjection,
    #[error("u not invertible")]
    UNotInvertible,
    #[error("f not invertible")]
    FNotInvertible,
    #[error("input not invariant")]
    NotInvariant,
    #[error("representation not irreducible or v invalid")]
    NotIrreducible,
    #[error("representation {0}: {1}")]
    Representation(String, String),
    #[error("generator index {0} out of range for {1} strands")]
    Generator(usize, usize),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
