//! Error type shared across the crate.

use std::fmt;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Gamma evaluated at zero or a negative integer.
    GammaPole(f64),
    /// Result exceeds the representable double-precision range.
    Overflow,
    /// Fractal order outside (0, 1].
    InvalidOrder(f64),
    /// Two operands carry different fractal orders.
    OrderMismatch { left: f64, right: f64 },
    /// Division by a zero value.
    DivisionByZero,
    /// Polar decomposition of the zero element.
    ZeroModulus,
    /// Series did not meet the tail tolerance within the term budget.
    NonConvergence { terms: usize },
    /// An argument violated a documented precondition.
    Domain(String),
    /// Contour touches or crosses the principal branch cut.
    BranchCut { re: f64, im: f64 },
    /// No derivative rule applies to this expression node.
    UnsupportedNode(String),
    /// All sample points coincide.
    DegenerateGrid,
    /// Claim identifier not present in the registry.
    UnknownClaim(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GammaPole(x) => write!(f, "gamma pole at x = {x}"),
            Error::Overflow => write!(f, "result overflows double precision"),
            Error::InvalidOrder(a) => write!(f, "fractal order {a} outside (0, 1]"),
            Error::OrderMismatch { left, right } => {
                write!(f, "fractal order mismatch: {left} vs {right}")
            }
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::ZeroModulus => write!(f, "polar decomposition of zero modulus"),
            Error::NonConvergence { terms } => {
                write!(f, "series not converged after {terms} terms")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::BranchCut { re, im } => {
                write!(f, "path crosses the principal branch cut near ({re}, {im})")
            }
            Error::UnsupportedNode(what) => write!(f, "unsupported node: {what}"),
            Error::DegenerateGrid => write!(f, "degenerate grid: all sample points equal"),
            Error::UnknownClaim(id) => write!(f, "unknown claim id: {id}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
