//! Exact scalars: Gaussian rationals, the formal-parameter polynomial ring
//! (with Laurent exponents on `f`), formal F-traces and normal-coordinate jets.

mod expr;
mod gauss;
mod jet;
mod text;

use std::fmt;

pub use expr::{Monomial, Param, ScalarExpr, TraceSymbol};
pub use gauss::{binomial, double_factorial, GaussianRational};
pub use gauss::rat_to_f64;
pub use jet::Jet;

/// Exact rational with checked fixed-width arithmetic (overflow panics in every profile).
pub type Rational = num_rational::Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError(pub String);

impl ParseError {
    pub fn new(msg: impl Into<String>) -> Self {
        ParseError(msg.into())
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

/// Minimal ring interface shared by every coefficient type that flows through
/// jets, partial fractions and symbol terms.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scaled(&self, c: &GaussianRational) -> Self;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negate())
    }

    fn plus_assign(&mut self, other: &Self) {
        *self = self.plus(other);
    }
}

impl Ring for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scaled(&self, c: &GaussianRational) -> Self {
        self * c
    }
    fn plus_assign(&mut self, other: &Self) {
        *self += other;
    }
}
