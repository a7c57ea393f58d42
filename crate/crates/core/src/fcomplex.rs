//! Fractional-order complex numbers `a + i^alpha b`.
//!
//! The unit is a formal basis element with `i^(2 alpha) = -1`, which makes
//! the arithmetic structurally the ordinary complex plane over the realized
//! components. Fields hold the realized values `a = x^alpha`, `b = y^alpha`,
//! not the underlying roots.

use crate::error::{Error, Result};
use crate::ml::{cos_alpha, sin_alpha, SeriesControl};
use crate::order::FractalOrder;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalComplex {
    /// Realized "purely real" part, the value of `x^alpha`.
    pub a: f64,
    /// Realized imaginary coefficient, the value of `y^alpha`.
    pub b: f64,
    pub order: FractalOrder,
}

/// Search window and grid for the polar decomposition.
#[derive(Debug, Clone, Copy)]
pub struct ThetaSearch {
    pub theta_min: f64,
    pub theta_max: f64,
    pub grid: usize,
}

impl Default for ThetaSearch {
    fn default() -> Self {
        ThetaSearch {
            theta_min: 0.0,
            theta_max: 2.0 * std::f64::consts::PI,
            grid: 2048,
        }
    }
}

/// Result of the residual-based polar decomposition.
#[derive(Debug, Clone, Copy)]
pub struct PolarForm {
    pub radius: f64,
    pub theta: f64,
    /// Achieved minimum of the squared distance between `z / r` and the
    /// fractional trig point `(cos_a theta, sin_a theta)`. Zero only where
    /// the trigonometric form is exact.
    pub residual: f64,
}

// The arithmetic is checked (order agreement, zero divisors) and returns
// Result, so the std operator traits do not fit these signatures.
#[allow(clippy::should_implement_trait)]
impl FractionalComplex {
    pub fn new(a: f64, b: f64, order: FractalOrder) -> Self {
        FractionalComplex { a, b, order }
    }

    /// Zero element of the given order.
    pub fn zero(order: FractalOrder) -> Self {
        FractionalComplex::new(0.0, 0.0, order)
    }

    /// Multiplicative unit.
    pub fn one(order: FractalOrder) -> Self {
        FractionalComplex::new(1.0, 0.0, order)
    }

    /// The unit `i^alpha` itself.
    pub fn unit(order: FractalOrder) -> Self {
        FractionalComplex::new(0.0, 1.0, order)
    }

    fn check_order(self, rhs: Self) -> Result<()> {
        if self.order == rhs.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch {
                left: self.order.alpha(),
                right: rhs.order.alpha(),
            })
        }
    }

    pub fn add(self, rhs: Self) -> Result<Self> {
        self.check_order(rhs)?;
        Ok(FractionalComplex::new(self.a + rhs.a, self.b + rhs.b, self.order))
    }

    pub fn sub(self, rhs: Self) -> Result<Self> {
        self.check_order(rhs)?;
        Ok(FractionalComplex::new(self.a - rhs.a, self.b - rhs.b, self.order))
    }

    /// Product under the `i^(2 alpha) = -1` law.
    pub fn mul(self, rhs: Self) -> Result<Self> {
        self.check_order(rhs)?;
        Ok(FractionalComplex::new(
            self.a * rhs.a - self.b * rhs.b,
            self.a * rhs.b + self.b * rhs.a,
            self.order,
        ))
    }

    pub fn div(self, rhs: Self) -> Result<Self> {
        self.check_order(rhs)?;
        let m2 = rhs.a * rhs.a + rhs.b * rhs.b;
        if m2 == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(FractionalComplex::new(
            (self.a * rhs.a + self.b * rhs.b) / m2,
            (self.b * rhs.a - self.a * rhs.b) / m2,
            self.order,
        ))
    }

    pub fn conj(self) -> Self {
        FractionalComplex::new(self.a, -self.b, self.order)
    }

    /// Scale by a plain real factor.
    pub fn scale(self, t: f64) -> Self {
        FractionalComplex::new(self.a * t, self.b * t, self.order)
    }

    /// Fractional modulus `sqrt(x^(2 alpha) + y^(2 alpha))`.
    pub fn modulus(self) -> f64 {
        self.a.hypot(self.b)
    }

    /// Recover the underlying root `x = a^(1/alpha)`; defined for `a >= 0`.
    pub fn root_real(self) -> Result<f64> {
        if self.a < 0.0 {
            return Err(Error::Domain(format!(
                "cannot take {} root of negative realized part {}",
                self.order, self.a
            )));
        }
        Ok(self.a.powf(1.0 / self.order.alpha()))
    }

    /// Residual-based polar decomposition against the fractional trig pair.
    ///
    /// Scans the window for the minimizer of
    /// `(cos_a t - a/r)^2 + (sin_a t - b/r)^2`, then refines the best
    /// bracketed grid point by golden-section descent. The residual is
    /// reported, not asserted zero: for `alpha < 1` the Pythagorean identity
    /// fails and the minimum is genuinely positive.
    pub fn polar_decompose(self, search: &ThetaSearch, ctl: &SeriesControl) -> Result<PolarForm> {
        let r = self.modulus();
        if r == 0.0 {
            return Err(Error::ZeroModulus);
        }
        if search.grid < 2 || !(search.theta_max > search.theta_min) {
            return Err(Error::Domain("theta search window is empty".into()));
        }
        let ca = self.a / r;
        let cb = self.b / r;
        let objective = |theta: f64| -> Result<f64> {
            let c = cos_alpha(self.order, theta, ctl)?;
            let s = sin_alpha(self.order, theta, ctl)?;
            Ok((c - ca) * (c - ca) + (s - cb) * (s - cb))
        };

        let n = search.grid;
        let step = (search.theta_max - search.theta_min) / (n - 1) as f64;
        let mut best_j = 0usize;
        let mut best = f64::INFINITY;
        let mut values = Vec::with_capacity(n);
        for j in 0..n {
            let v = objective(search.theta_min + step * j as f64)?;
            values.push(v);
            if v < best {
                best = v;
                best_j = j;
            }
        }

        let (mut theta, mut residual) = (search.theta_min + step * best_j as f64, best);
        if best_j > 0 && best_j + 1 < n {
            let (t, v) = golden_min(
                search.theta_min + step * (best_j - 1) as f64,
                search.theta_min + step * (best_j + 1) as f64,
                1e-12,
                &objective,
            )?;
            if v <= residual {
                theta = t;
                residual = v;
            }
        }
        Ok(PolarForm { radius: r, theta, residual })
    }
}

/// Golden-section minimization on a bracket; the objective may fail.
pub(crate) fn golden_min<F>(mut lo: f64, mut hi: f64, tol: f64, f: &F) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.6180339887498949;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let mid = 0.5 * (lo + hi);
    Ok((mid, f(mid)?))
}

impl fmt::Display for FractionalComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b < 0.0 {
            write!(f, "{} - i^a {}", self.a, -self.b)
        } else {
            write!(f, "{} + i^a {}", self.a, self.b)
        }
    }
}
