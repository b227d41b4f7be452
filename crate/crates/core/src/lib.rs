//! Exact computational homological algebra for finite-presentation DGAs:
//! bar constructions, Koszul duals, Hochschild homology, and chain-level
//! duality checks, all over ℚ or 𝔽ₚ with no floating point anywhere.

pub mod bar;
pub mod complex;
pub mod corpus;
pub mod dga;
pub mod duality;
pub mod field;
pub mod hochschild;
pub mod matrix;
pub mod report;
pub mod window;

use thiserror::Error;

pub use crate::complex::{BettiTable, ChainComplex, GradedBasis};
pub use crate::dga::{Connectivity, DGAlgebra, DgaBuilder, LinComb};
pub use crate::field::{FieldSpec, Scalar};
pub use crate::matrix::SparseMatrix;
pub use crate::window::TruncationWindow;

/// Any failure an engine operation can report.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
    #[error(transparent)]
    Matrix(#[from] crate::matrix::MatrixError),
    #[error(transparent)]
    Window(#[from] crate::window::WindowError),
    #[error(transparent)]
    ComplexInvalid(#[from] crate::complex::ComplexViolation),
    #[error(transparent)]
    DgaInvalid(#[from] crate::dga::DgaViolation),
    #[error(transparent)]
    Dga(#[from] crate::dga::DgaError),
    #[error("unknown corpus entry `{0}`")]
    UnknownCorpusEntry(String),
    #[error("corpus entry `{name}` has no expected table of kind `{kind}`")]
    UnknownExpectedKind { name: String, kind: String },
}
