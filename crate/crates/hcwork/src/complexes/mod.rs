//! Chain complexes, simplicial and cyclic modules, mixed complexes, the
//! Hochschild/bar/relative constructions, Hodge decomposition and spectral
//! sequences of filtered complexes.

pub mod chain;
pub mod cyclic;
pub mod hochschild;
pub mod hodge;
pub mod specseq;
pub mod tensor;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::exactla::LaError;

pub use chain::ChainComplex;
pub use cyclic::{cyclic_group_coinvariants, CyclicModule, MixedComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("degree {0} outside the stored range")]
    DegreeOutOfRange(i32),
    #[error("d∘d ≠ 0 at degree {0}")]
    NotAComplex(i32),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("subspaces do not form a subcomplex at degree {0}")]
    NotASubcomplex(i32),
    #[error("simplicial identity fails: {0}")]
    Simplicial(String),
    #[error("cyclic identity fails: {0}")]
    NotCyclic(String),
    #[error("mixed complex identity fails: {0}")]
    NotMixed(String),
    #[error("algebra is not commutative")]
    NotCommutative,
    #[error("filtration not preserved by the boundary at degree {0}")]
    FiltrationNotPreserved(i32),
    #[error("matrix is not an action of the stated order")]
    NotAnAction,
    #[error("operator does not descend to the quotient: {0}")]
    NotWellDefined(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    La(#[from] LaError),
}
