//! Local fractional calculus of fractal order `alpha` in (0, 1].
//!
//! The crate evaluates Mittag-Leffler and fractional trigonometric series,
//! does arithmetic in the fractional complex plane (formal unit with
//! `i^(2 alpha) = -1`), manipulates formal power series over the
//! Mittag-Leffler basis (where the fractional derivative is an exact
//! coefficient shift), computes limit-definition derivatives and
//! Riemann-sum integrals over the fractional measure on the real line and
//! along contours, truncated Fourier/Laplace transforms, fractional
//! circle/sphere geometry, and a claims registry that measures the residual
//! of every identity the framework asserts. At `alpha = 1` everything must
//! collapse to classical analysis, and the test suite holds it to that.
//!
//! ```
//! use fractal_calc::{FractalOrder, SeriesControl, ml};
//!
//! let order = FractalOrder::new(0.5).unwrap();
//! let v = ml(order, 1.0, &SeriesControl::default()).unwrap();
//! assert!((v - 5.008980080762283).abs() < 1e-12);
//! ```

// Frozen oracle constants keep their full precision, and domain guards use
// negated comparisons so NaN is rejected along with out-of-range values.
#![allow(clippy::excessive_precision)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod claims;
pub mod error;
pub mod expr;
pub mod fcomplex;
pub mod gamma;
pub mod geometry;
pub mod ml;
pub mod order;
pub mod series;
pub mod transforms;

pub use calculus::{
    check_ftc, contour_integral, lf_integral, lfd_numeric, Contour, FtcCheck, IntegralScheme,
    LimitEstimate, LimitOptions, QuadDiagnostics, QuadOutcome, QuadResult, RefinePolicy,
};
pub use claims::{
    hoelder_estimate, run_all, run_claim, ClaimReport, ClaimStatus, GridSpec, CLAIMS,
};
pub use error::{Error, Result};
pub use expr::{eval as expr_eval, eval_complex as expr_eval_complex, lfd_symbolic, ExprNode};
pub use fcomplex::{FractionalComplex, PolarForm, ThetaSearch};
pub use gamma::{gamma, gamma_ratio, ln_gamma};
pub use geometry::{circle_param, in_fball, in_fdisk, on_fcircle, on_fsphere, sphere_param, FCircleSpec};
pub use ml::{cos_alpha, ml, ml_arg, period_solve, sin_alpha, SeriesControl};
pub use order::FractalOrder;
pub use series::FracPowerSeries;
pub use transforms::{lf_fourier, lf_laplace, FourierResult, LaplaceResult, QuadSpec};
