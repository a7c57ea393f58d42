//! The fractal order parameter.

use crate::error::{Error, Result};
use std::fmt;

/// Fractal order `alpha` in (0, 1]. Every object in the crate is indexed by
/// one of these; `alpha = 1` recovers classical analysis.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractalOrder(f64);

impl FractalOrder {
    /// The classical order `alpha = 1`.
    pub const ONE: FractalOrder = FractalOrder(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
            Ok(FractalOrder(alpha))
        } else {
            Err(Error::InvalidOrder(alpha))
        }
    }

    #[inline]
    pub fn alpha(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_classical(self) -> bool {
        self.0 == 1.0
    }
}

impl fmt::Display for FractalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
