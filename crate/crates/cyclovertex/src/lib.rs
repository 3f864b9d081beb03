//! Exact computer algebra for vertex Lie algebras over the cyclotomic field
//! Q(w_T), their mode Lie algebras, vacuum Verma modules, state-field
//! correspondences, Gamma-twisted quasi-modules and cyclotomic coinvariant
//! reduction on the Riemann sphere.
//!
//! Every scalar is an exact element of Q(w_T); there is no floating point
//! anywhere in the crate. All values are immutable after construction and all
//! operations are pure functions, so everything can be shared freely across
//! threads.

pub mod cycfield;
pub mod vla;
pub mod modes;
pub mod verma;
pub mod fields;
pub mod quasi;
pub mod coinv;
pub mod parse;
pub mod config;
pub mod report;
pub mod suites;

pub use coinv::{MarkedConfig, TensorMono, TensorState};
pub use cycfield::poly::Poly;
pub use cycfield::ratfun::{ExpansionPoint, RatFun};
pub use cycfield::scalar::{CycScalar, Rat};
pub use cycfield::series::LaurentSeries;
pub use modes::{LoopElem, TwistedElem};
pub use verma::{ModuleKind, Monomial, State};
pub use vla::{VlaElem, VlaPresentation};

use thiserror::Error;

/// Errors shared across the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("vertex Lie algebras have no negative products (n = {0})")]
    NegativeProduct(i64),
    #[error("pole set incomplete: leftover denominator factor {0}")]
    PoleSetIncomplete(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("mode not in twisted algebra: {0}")]
    ModeNotInTwistedAlgebra(String),
    #[error("locality bound exceeded (r > {0}); this signals an engine bug")]
    LocalityBoundExceeded(u32),
    #[error("state is not homogeneous")]
    NonHomogeneous,
    #[error("configuration invariant violated: {0}")]
    ConfigInvariant(String),
    #[error("truncation order too small; the principal part needs K >= {required}")]
    OrderTooSmall { required: i64 },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, EngineError>;
