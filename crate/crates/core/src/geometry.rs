//! Fractional-order circle, disk, and sphere residuals plus the
//! trigonometric parametrizations.
//!
//! Coordinates are restricted to the first quadrant/octant: the defining
//! equations take powers `x^(2 alpha)` that are single-valued only for
//! non-negative coordinates. Extension by absolute value is left to callers.

use crate::error::{Error, Result};
use crate::ml::{cos_alpha, sin_alpha, SeriesControl};
use crate::order::FractalOrder;

#[derive(Debug, Clone, Copy)]
pub struct FCircleSpec {
    pub radius: f64,
    pub order: FractalOrder,
}

impl FCircleSpec {
    pub fn new(radius: f64, order: FractalOrder) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Domain(format!("radius {radius} must be positive")));
        }
        Ok(FCircleSpec { radius, order })
    }
}

fn check_nonnegative(coords: &[(f64, &str)]) -> Result<()> {
    for &(v, name) in coords {
        if !(v >= 0.0) {
            return Err(Error::Domain(format!("coordinate {name} = {v} must be >= 0")));
        }
    }
    Ok(())
}

/// Signed residual `x^(2a) + y^(2a) - R^(2a)`; zero on the circle.
pub fn on_fcircle(x: f64, y: f64, spec: &FCircleSpec) -> Result<f64> {
    check_nonnegative(&[(x, "x"), (y, "y")])?;
    let p = 2.0 * spec.order.alpha();
    Ok(x.powf(p) + y.powf(p) - spec.radius.powf(p))
}

/// Disk membership: residual non-positive.
pub fn in_fdisk(x: f64, y: f64, spec: &FCircleSpec) -> Result<bool> {
    Ok(on_fcircle(x, y, spec)? <= 0.0)
}

/// Signed residual of the roundness equation in three coordinates.
pub fn on_fsphere(x: f64, y: f64, z: f64, spec: &FCircleSpec) -> Result<f64> {
    check_nonnegative(&[(x, "x"), (y, "y"), (z, "z")])?;
    let p = 2.0 * spec.order.alpha();
    Ok(x.powf(p) + y.powf(p) + z.powf(p) - spec.radius.powf(p))
}

/// Ball membership: residual non-positive.
pub fn in_fball(x: f64, y: f64, z: f64, spec: &FCircleSpec) -> Result<bool> {
    Ok(on_fsphere(x, y, z, spec)? <= 0.0)
}

/// Trigonometric circle transform: realized coordinates
/// `(R^a cos_a theta, R^a sin_a theta)` and the circle residual they leave.
/// The residual is returned, not asserted zero; it vanishes identically only
/// at `alpha = 1`.
pub fn circle_param(
    theta: f64,
    spec: &FCircleSpec,
    ctl: &SeriesControl,
) -> Result<(f64, f64, f64)> {
    let a = spec.order.alpha();
    let ra = spec.radius.powf(a);
    let xa = ra * cos_alpha(spec.order, theta, ctl)?;
    let ya = ra * sin_alpha(spec.order, theta, ctl)?;
    let residual = xa * xa + ya * ya - spec.radius.powf(2.0 * a);
    Ok((xa, ya, residual))
}

/// Trigonometric sphere transform and its roundness residual.
pub fn sphere_param(
    eta: f64,
    theta: f64,
    spec: &FCircleSpec,
    ctl: &SeriesControl,
) -> Result<(f64, f64, f64, f64)> {
    let a = spec.order.alpha();
    let ra = spec.radius.powf(a);
    let se = sin_alpha(spec.order, eta, ctl)?;
    let ce = cos_alpha(spec.order, eta, ctl)?;
    let st = sin_alpha(spec.order, theta, ctl)?;
    let ct = cos_alpha(spec.order, theta, ctl)?;
    let ua = ra * se * ct;
    let va = ra * se * st;
    let wa = ra * ce;
    let residual = ua * ua + va * va + wa * wa - spec.radius.powf(2.0 * a);
    Ok((ua, va, wa, residual))
}
