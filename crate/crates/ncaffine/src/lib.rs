//! Exact-arithmetic workbench for finite-dimensional algebra over `Q` and `F_p`:
//! associative algebras presented by structure constants, bimodules and their
//! tensor calculus, corings and convolution algebras, Galois-type ring
//! extensions, Morita contexts, cyclic/Hochschild/periodic homology with
//! braided coefficients, and differential-operator filtrations.
//!
//! All computations are exact (arbitrary-precision rationals or prime fields);
//! every map defined on representatives of a quotient is verified to descend.

pub mod exactlin;
pub mod algebra;
pub mod bimod;
pub mod coalg;
pub mod morita;
pub mod galois;
pub mod cyclic;
pub mod infinitesimal;
pub mod format;
pub mod cli;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum WbError {
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("map does not descend to the quotient: {0}")]
    NotWellDefined(String),
    #[error("no splitting satisfying the constraints exists")]
    NoSplit,
    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, WbError>;
