//! Exact symbolic engine for boundary-term noncommutative residues of twisted
//! Dirac and signature operators on a 6-dimensional collar.

pub mod clifford;
pub mod endo;
pub mod fixtures;
pub mod integrator;
pub mod ledger;
pub mod matrix;
pub mod oracle;
pub mod pipeline;
pub mod report;
pub mod scalar;
pub mod selftest;
pub mod symbol;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("jet truncated at order {order}; a higher x_n-derivative was requested")]
    Truncation { order: usize },
    #[error("a second tangential derivative of f is outside the supported model")]
    SecondFDerivative,
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("operation mixes Clifford representations or needs the exterior one")]
    RepMismatch,
    #[error("integrand does not decay in xi_n")]
    NonDecaying,
    #[error("unexpected pole off xi_n = ±i")]
    UnexpectedPole,
    #[error("insufficient decay for the contour integral (need degree <= a+b-2)")]
    InsufficientDecay,
    #[error("result still depends on |xi'|^2 after restriction")]
    ResidualSnorm,
    #[error("unknown operator family `{0}`")]
    UnknownFamily(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(#[from] scalar::ParseError),
    #[error("fixture error: {0}")]
    Fixture(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("numeric oracle: {0}")]
    Oracle(String),
    #[error("internal inconsistency: {0}")]
    EngineBug(String),
    #[error("reserved curvature generator reached a boundary term")]
    ReservedGenerator,
}
