//! Computational toolkit for deciding saturation of finite group (and
//! group Hopf algebra) actions on finite dimensional C*-algebras, with
//! strata index computations on finite G-spaces and symbolic saturation
//! witnesses for the gauge action on graph C*-algebras.

pub mod algebra;
pub mod group;
pub mod crossed;
pub mod hopf;
pub mod index;
pub mod strata;
pub mod graph;

use thiserror::Error as ThisError;

/// Operator norm tolerance for equality checks.
pub const EPS_EQ: f64 = 1e-9;
/// Relative rank cutoff for spans and singular values.
pub const EPS_RANK: f64 = 1e-9;
/// Orthonormality tolerance for subspace bases.
pub const EPS_ORTH: f64 = 1e-10;
/// Residual bound for accepted quasi-bases.
pub const EPS_QB: f64 = 1e-7;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("invalid construction: {0}")]
    Invalid(String),
    #[error("axiom violation: {0}")]
    AxiomViolation(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("window exhausted: radius {required} required, have {available}")]
    WindowExhausted { required: u32, available: u32 },
    #[error("internal consistency error: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
