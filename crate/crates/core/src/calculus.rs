//! Limit-definition derivatives, Riemann-sum integrals over the fractional
//! measure (real line and contours), and the fundamental-theorem residual
//! check.
//!
//! Two increment readings are shipped. STIELTJES takes differences of
//! alpha-powers of the partition points, which telescopes exactly for
//! constant integrands and reduces classically at `alpha = 1`. LITERAL takes
//! alpha-powers of the differences; its fine-partition limit diverges like
//! `n^(1-alpha)` on smooth integrands, which the refinement loop detects and
//! reports instead of chasing.

use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::ml::Kahan;
use crate::order::FractalOrder;
use crate::series::FracPowerSeries;
use num_complex::Complex64;

/// Oriented polyline with an optional closed flag.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    points: Vec<Complex64>,
    closed: bool,
}

impl Contour {
    pub fn new(points: Vec<Complex64>, closed: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Domain("contour needs at least two points".into()));
        }
        for w in points.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Domain(format!(
                    "consecutive contour points coincide at ({}, {})",
                    w[0].re, w[0].im
                )));
            }
        }
        if closed {
            let gap = (points[0] - points[points.len() - 1]).norm();
            if gap > 1e-12 {
                return Err(Error::Domain(format!(
                    "closed contour endpoints differ by {gap}"
                )));
            }
        }
        Ok(Contour { points, closed })
    }

    pub fn from_pairs(pairs: &[(f64, f64)], closed: bool) -> Result<Self> {
        Contour::new(pairs.iter().map(|&(re, im)| Complex64::new(re, im)).collect(), closed)
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn start(&self) -> Complex64 {
        self.points[0]
    }

    pub fn end(&self) -> Complex64 {
        self.points[self.points.len() - 1]
    }

    /// Join two polylines sharing an endpoint.
    pub fn concat(&self, other: &Contour) -> Result<Contour> {
        if self.end() != other.start() {
            return Err(Error::Domain("contours do not share an endpoint".into()));
        }
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points[1..]);
        Contour::new(points, false)
    }
}

/// Increment reading for the fractional measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegralScheme {
    /// Differences of alpha-powers of partition points.
    Stieltjes,
    /// Alpha-powers of increments at a fixed subdivision count per segment.
    Literal(usize),
    /// Alpha-powers of increments with doubling refinement and divergence
    /// detection.
    LiteralLimit,
}

impl IntegralScheme {
    pub fn label(&self) -> String {
        match self {
            IntegralScheme::Stieltjes => "stieltjes".into(),
            IntegralScheme::Literal(n) => format!("literal:{n}"),
            IntegralScheme::LiteralLimit => "literal-limit".into(),
        }
    }
}

/// Refinement control for the doubling loop.
#[derive(Debug, Clone, Copy)]
pub struct RefinePolicy {
    /// Stop once successive doublings agree to this relative tolerance.
    pub rel_tol: f64,
    /// Initial subdivisions per segment.
    pub n_start: usize,
    /// Budget per segment; refinement stops here, converged or not.
    pub n_max: usize,
}

impl Default for RefinePolicy {
    fn default() -> Self {
        RefinePolicy { rel_tol: 1e-8, n_start: 32, n_max: 1 << 20 }
    }
}

impl RefinePolicy {
    /// Single fixed level: no refinement, deterministic partition.
    pub fn fixed(n: usize) -> Self {
        RefinePolicy { rel_tol: 0.0, n_start: n, n_max: n }
    }
}

/// Structured record of a refinement run.
#[derive(Debug, Clone)]
pub struct QuadDiagnostics {
    pub scheme: String,
    /// (subdivisions per segment, value magnitude) per refinement level.
    pub sequence: Vec<(usize, f64)>,
    /// Relative agreement of the last two levels, when more than one ran.
    pub rel_change: Option<f64>,
    pub converged: bool,
    /// Fitted log2 growth rate across the final doublings, when divergence
    /// was detected.
    pub growth_exponent: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadOutcome<T> {
    Value(T),
    Divergent { exponent: f64 },
}

impl<T: Copy> QuadOutcome<T> {
    pub fn value(&self) -> Option<T> {
        match self {
            QuadOutcome::Value(v) => Some(*v),
            QuadOutcome::Divergent { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuadResult<T> {
    pub outcome: QuadOutcome<T>,
    pub diagnostics: QuadDiagnostics,
}

/// Principal power with an exact fast path on the non-negative real axis,
/// which keeps real-path telescoping sums exactly real.
pub(crate) fn powa(z: Complex64, p: f64) -> Complex64 {
    if z.im == 0.0 && z.re >= 0.0 {
        Complex64::new(z.re.powf(p), 0.0)
    } else {
        z.powf(p)
    }
}

/// Reject polylines that touch or cross the strictly negative real axis.
/// The origin itself is fine: 0^alpha = 0.
fn check_branch_cut(contour: &Contour) -> Result<()> {
    for p in contour.points() {
        if p.im == 0.0 && p.re < 0.0 {
            return Err(Error::BranchCut { re: p.re, im: p.im });
        }
    }
    for w in contour.points.windows(2) {
        let (p, q) = (w[0], w[1]);
        if p.im == 0.0 && q.im == 0.0 {
            if p.re.min(q.re) < 0.0 {
                return Err(Error::BranchCut { re: p.re.min(q.re), im: 0.0 });
            }
            continue;
        }
        if p.im * q.im < 0.0 {
            let t = -p.im / (q.im - p.im);
            let x = p.re + (q.re - p.re) * t;
            if x < 0.0 {
                return Err(Error::BranchCut { re: x, im: 0.0 });
            }
        }
    }
    Ok(())
}

/// One level of the contour sum at `n` subdivisions per segment.
fn contour_level<F>(
    f: &F,
    contour: &Contour,
    alpha: f64,
    scheme_literal: bool,
    n: usize,
) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut re = Kahan::default();
    let mut im = Kahan::default();
    for w in contour.points.windows(2) {
        let (p, q) = (w[0], w[1]);
        let step = (q - p) / n as f64;
        if scheme_literal {
            let inc = powa(step, alpha);
            for i in 0..n {
                let mid = p + step * (i as f64 + 0.5);
                let v = f(mid)? * inc;
                re.add(v.re);
                im.add(v.im);
            }
        } else {
            let mut w_prev = powa(p, alpha);
            for i in 0..n {
                let t_next = if i + 1 == n { q } else { p + step * (i + 1) as f64 };
                let w_next = powa(t_next, alpha);
                let mid = p + step * (i as f64 + 0.5);
                let v = f(mid)? * (w_next - w_prev);
                re.add(v.re);
                im.add(v.im);
                w_prev = w_next;
            }
        }
    }
    Ok(Complex64::new(re.value(), im.value()))
}

/// One level of the real-line sum at `n` subdivisions.
fn real_level<F>(f: &F, a: f64, b: f64, alpha: f64, scheme_literal: bool, n: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let step = (b - a) / n as f64;
    let mut acc = Kahan::default();
    if scheme_literal {
        let inc = step.powf(alpha);
        for i in 0..n {
            let mid = a + step * (i as f64 + 0.5);
            acc.add(f(mid)? * inc);
        }
    } else {
        let mut w_prev = a.powf(alpha);
        for i in 0..n {
            let t_next = if i + 1 == n { b } else { a + step * (i + 1) as f64 };
            let w_next = t_next.powf(alpha);
            let mid = a + step * (i as f64 + 0.5);
            acc.add(f(mid)? * (w_next - w_prev));
            w_prev = w_next;
        }
    }
    Ok(acc.value())
}

/// Consistent-growth detector: the last three doubling slopes must all be
/// positive and mutually close for the loop to call the sum divergent.
fn detect_growth(sequence: &[(usize, f64)]) -> Option<f64> {
    if sequence.len() < 4 {
        return None;
    }
    let tail = &sequence[sequence.len() - 4..];
    let mut slopes = [0.0_f64; 3];
    for (i, s) in slopes.iter_mut().enumerate() {
        let (_, v0) = tail[i];
        let (_, v1) = tail[i + 1];
        if v0 <= 0.0 || v1 <= 0.0 {
            return None;
        }
        *s = (v1 / v0).log2();
    }
    let min = slopes.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = slopes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if min > 0.02 && (max - min) < 0.02 {
        Some(slopes.iter().sum::<f64>() / 3.0)
    } else {
        None
    }
}

fn run_refinement<T, L>(
    scheme: IntegralScheme,
    policy: &RefinePolicy,
    mut level: L,
) -> Result<QuadResult<T>>
where
    T: Copy,
    L: FnMut(bool, usize) -> Result<(T, f64)>,
{
    let label = scheme.label();
    match scheme {
        IntegralScheme::Literal(n) => {
            if n == 0 {
                return Err(Error::Domain("literal scheme needs n >= 1".into()));
            }
            let (v, mag) = level(true, n)?;
            Ok(QuadResult {
                outcome: QuadOutcome::Value(v),
                diagnostics: QuadDiagnostics {
                    scheme: label,
                    sequence: vec![(n, mag)],
                    rel_change: None,
                    converged: true,
                    growth_exponent: None,
                },
            })
        }
        IntegralScheme::Stieltjes | IntegralScheme::LiteralLimit => {
            let literal = matches!(scheme, IntegralScheme::LiteralLimit);
            let mut sequence: Vec<(usize, f64)> = Vec::new();
            let mut n = policy.n_start.max(1);
            let mut prev: Option<(T, f64)> = None;
            let mut rel_change = None;
            loop {
                let (v, mag) = level(literal, n)?;
                sequence.push((n, mag));
                if let Some((_, prev_mag)) = prev {
                    let rel = (mag - prev_mag).abs() / mag.abs().max(f64::MIN_POSITIVE);
                    rel_change = Some(rel);
                    if rel <= policy.rel_tol {
                        return Ok(QuadResult {
                            outcome: QuadOutcome::Value(v),
                            diagnostics: QuadDiagnostics {
                                scheme: label,
                                sequence,
                                rel_change,
                                converged: true,
                                growth_exponent: None,
                            },
                        });
                    }
                }
                if literal {
                    if let Some(exponent) = detect_growth(&sequence) {
                        return Ok(QuadResult {
                            outcome: QuadOutcome::Divergent { exponent },
                            diagnostics: QuadDiagnostics {
                                scheme: label,
                                sequence,
                                rel_change,
                                converged: false,
                                growth_exponent: Some(exponent),
                            },
                        });
                    }
                }
                prev = Some((v, mag));
                if n >= policy.n_max {
                    let (v, _) = prev.unwrap();
                    return Ok(QuadResult {
                        outcome: QuadOutcome::Value(v),
                        diagnostics: QuadDiagnostics {
                            scheme: label,
                            sequence,
                            rel_change,
                            converged: false,
                            growth_exponent: None,
                        },
                    });
                }
                n *= 2;
            }
        }
    }
}

/// Local fractional integral of `f` over `[a, b]`, `0 <= a <= b`.
pub fn lf_integral<F>(
    f: F,
    a: f64,
    b: f64,
    order: FractalOrder,
    scheme: IntegralScheme,
    policy: &RefinePolicy,
) -> Result<QuadResult<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(a >= 0.0) || !(b >= a) {
        return Err(Error::Domain(format!(
            "integration interval [{a}, {b}] must satisfy 0 <= a <= b"
        )));
    }
    let alpha = order.alpha();
    let norm = gamma(1.0 + alpha)?;
    if a == b {
        // Empty-path convention: the integral from a point to itself is zero.
        return Ok(QuadResult {
            outcome: QuadOutcome::Value(0.0),
            diagnostics: QuadDiagnostics {
                scheme: scheme.label(),
                sequence: vec![],
                rel_change: None,
                converged: true,
                growth_exponent: None,
            },
        });
    }
    run_refinement(scheme, policy, |literal, n| {
        let raw = real_level(&f, a, b, alpha, literal, n)?;
        Ok((raw / norm, (raw / norm).abs()))
    })
}

/// Local fractional integral of `f` along a contour.
pub fn contour_integral<F>(
    f: F,
    contour: &Contour,
    order: FractalOrder,
    scheme: IntegralScheme,
    policy: &RefinePolicy,
) -> Result<QuadResult<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let alpha = order.alpha();
    if alpha < 1.0 && !matches!(scheme, IntegralScheme::Literal(_) | IntegralScheme::LiteralLimit) {
        check_branch_cut(contour)?;
    }
    let norm = gamma(1.0 + alpha)?;
    run_refinement(scheme, policy, |literal, n| {
        let raw = contour_level(&f, contour, alpha, literal, n)?;
        let v = raw / norm;
        Ok((v, v.norm()))
    })
}

/// Fundamental-theorem residual for a series primitive `F` along a contour.
#[derive(Debug, Clone)]
pub struct FtcCheck {
    pub integral: Complex64,
    pub primitive_delta: Complex64,
    pub residual: f64,
    pub diagnostics: QuadDiagnostics,
}

pub fn check_ftc(
    primitive: &FracPowerSeries,
    contour: &Contour,
    scheme: IntegralScheme,
    policy: &RefinePolicy,
) -> Result<FtcCheck> {
    let derivative = primitive.lfd();
    let result = contour_integral(
        |z| derivative.eval_complex(z),
        contour,
        primitive.order,
        scheme,
        policy,
    )?;
    let integral = match result.outcome {
        QuadOutcome::Value(v) => v,
        QuadOutcome::Divergent { exponent } => {
            return Err(Error::Domain(format!(
                "integral diverges (growth exponent {exponent:.3}); residual undefined"
            )))
        }
    };
    let delta = primitive.eval_complex(contour.end())? - primitive.eval_complex(contour.start())?;
    Ok(FtcCheck {
        integral,
        primitive_delta: delta,
        residual: (integral - delta).norm(),
        diagnostics: result.diagnostics,
    })
}

/// Options for the limit-definition derivative.
#[derive(Debug, Clone)]
pub struct LimitOptions {
    /// Decreasing positive increments; default is dyadic 2^-4 .. 2^-40.
    pub h_schedule: Vec<f64>,
    /// Relative window for declaring the last three quotients settled.
    pub window_rel_tol: f64,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions {
            h_schedule: (4..=40).map(|m| 2.0_f64.powi(-m)).collect(),
            window_rel_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LimitEstimate {
    pub estimate: f64,
    pub converged: bool,
    /// (h, quotient) pairs actually evaluated.
    pub trace: Vec<(f64, f64)>,
}

/// Right-sided limit quotient `Gamma(1+alpha) (f(x0+h) - f(x0)) / h^alpha`
/// over the schedule; stops early once the last three quotients agree.
pub fn lfd_numeric<F>(
    f: F,
    x0: f64,
    order: FractalOrder,
    opts: &LimitOptions,
) -> Result<LimitEstimate>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(x0 >= 0.0) {
        return Err(Error::Domain(format!("x0 must be >= 0, got {x0}")));
    }
    if opts.h_schedule.is_empty() {
        return Err(Error::Domain("empty h schedule".into()));
    }
    for w in opts.h_schedule.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::Domain("h schedule must be strictly decreasing".into()));
        }
    }
    if !(opts.h_schedule[0] > 0.0 && *opts.h_schedule.last().unwrap() > 0.0) {
        return Err(Error::Domain("h schedule must stay positive".into()));
    }
    let alpha = order.alpha();
    let scale = gamma(1.0 + alpha)?;
    let f0 = f(x0)?;
    let mut trace: Vec<(f64, f64)> = Vec::with_capacity(opts.h_schedule.len());
    for &h in &opts.h_schedule {
        let q = scale * (f(x0 + h)? - f0) / h.powf(alpha);
        trace.push((h, q));
        if trace.len() >= 3 {
            let window = &trace[trace.len() - 3..];
            let settled = window.iter().zip(window.iter().skip(1)).all(|(&(_, a), &(_, b))| {
                (a - b).abs() <= opts.window_rel_tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
            });
            if settled {
                return Ok(LimitEstimate {
                    estimate: window[2].1,
                    converged: true,
                    trace,
                });
            }
        }
    }
    Ok(LimitEstimate {
        estimate: trace.last().unwrap().1,
        converged: false,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::gamma;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ord(a: f64) -> FractalOrder {
        FractalOrder::new(a).unwrap()
    }

    fn cnum(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn contour_validation() {
        assert!(Contour::from_pairs(&[(0.0, 0.0)], false).is_err());
        assert!(Contour::from_pairs(&[(0.0, 0.0), (0.0, 0.0)], false).is_err());
        assert!(Contour::from_pairs(&[(0.0, 0.0), (1.0, 0.0)], true).is_err());
        assert!(Contour::from_pairs(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)], true).is_ok());
    }

    #[test]
    fn stieltjes_constant_telescopes() {
        let one = |_x: f64| Ok(1.0);
        for alpha in [0.4, 0.85, 1.0] {
            let o = ord(alpha);
            let r = lf_integral(one, 0.25, 2.0, o, IntegralScheme::Stieltjes, &RefinePolicy::default())
                .unwrap();
            let expect = (2.0_f64.powf(alpha) - 0.25_f64.powf(alpha)) / gamma(1.0 + alpha).unwrap();
            let v = r.outcome.value().unwrap();
            assert!((v - expect).abs() <= 1e-12, "alpha = {alpha}: {v} vs {expect}");
            assert!(r.diagnostics.converged);
        }
    }

    #[test]
    fn empty_interval_is_zero() {
        let r = lf_integral(|_| Ok(3.0), 1.0, 1.0, ord(0.5), IntegralScheme::Stieltjes, &RefinePolicy::default())
            .unwrap();
        assert_eq!(r.outcome.value(), Some(0.0));
    }

    #[test]
    fn classical_square_integral() {
        let r = lf_integral(
            |x| Ok(x * x),
            0.0,
            1.0,
            ord(1.0),
            IntegralScheme::Stieltjes,
            &RefinePolicy::default(),
        )
        .unwrap();
        assert!((r.outcome.value().unwrap() - 1.0 / 3.0).abs() <= 1e-6);
    }

    #[test]
    fn literal_fixed_matches_closed_form() {
        // Constant integrand: n (L/n)^alpha / Gamma(1+alpha) = n^(1-alpha) L^alpha / Gamma(1+alpha).
        let o = ord(0.5);
        for n in [64usize, 256, 4096] {
            let r = lf_integral(|_| Ok(1.0), 0.0, 1.0, o, IntegralScheme::Literal(n), &RefinePolicy::default())
                .unwrap();
            let expect = (n as f64).sqrt() / gamma(1.5).unwrap();
            assert_relative_eq!(r.outcome.value().unwrap(), expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn literal_limit_detects_divergence() {
        let r = lf_integral(
            |_| Ok(1.0),
            0.0,
            1.0,
            ord(0.5),
            IntegralScheme::LiteralLimit,
            &RefinePolicy::default(),
        )
        .unwrap();
        match r.outcome {
            QuadOutcome::Divergent { exponent } => {
                assert!((exponent - 0.5).abs() <= 0.05, "exponent {exponent}");
            }
            QuadOutcome::Value(v) => panic!("expected divergence, got {v}"),
        }
    }

    #[test]
    fn literal_limit_converges_classically() {
        let r = lf_integral(
            |x| Ok(x * x),
            0.0,
            1.0,
            ord(1.0),
            IntegralScheme::LiteralLimit,
            &RefinePolicy::default(),
        )
        .unwrap();
        assert!((r.outcome.value().unwrap() - 1.0 / 3.0).abs() <= 1e-6);
    }

    #[test]
    fn contour_constant_telescopes_and_closes() {
        let o = ord(0.6);
        let c = Contour::from_pairs(&[(0.5, 0.1), (1.5, 1.0), (0.8, 2.0)], false).unwrap();
        let r = contour_integral(|_| Ok(cnum(1.0, 0.0)), &c, o, IntegralScheme::Stieltjes, &RefinePolicy::default())
            .unwrap();
        let expect = (powa(c.end(), 0.6) - powa(c.start(), 0.6)) / gamma(1.6).unwrap();
        assert!((r.outcome.value().unwrap() - expect).norm() <= 1e-12);

        let loop_c =
            Contour::from_pairs(&[(0.5, 0.1), (1.5, 1.0), (0.8, 2.0), (0.5, 0.1)], true).unwrap();
        let r = contour_integral(|_| Ok(cnum(1.0, 0.0)), &loop_c, o, IntegralScheme::Stieltjes, &RefinePolicy::default())
            .unwrap();
        assert!(r.outcome.value().unwrap().norm() <= 1e-12);
    }

    #[test]
    fn classical_contour_primitive() {
        // integral of z^2 along 0 -> 1+i is (1+i)^3 / 3.
        let c = Contour::from_pairs(&[(0.0, 0.0), (1.0, 1.0)], false).unwrap();
        let r = contour_integral(
            |z| Ok(z * z),
            &c,
            ord(1.0),
            IntegralScheme::Stieltjes,
            &RefinePolicy::default(),
        )
        .unwrap();
        let expect = cnum(1.0, 1.0).powu(3) / 3.0;
        assert!((r.outcome.value().unwrap() - expect).norm() <= 1e-6);
    }

    #[test]
    fn branch_cut_is_guarded_for_fractional_orders() {
        let crossing = Contour::from_pairs(&[(-1.0, -1.0), (-1.0, 1.0)], false).unwrap();
        let err = contour_integral(
            |_| Ok(cnum(1.0, 0.0)),
            &crossing,
            ord(0.7),
            IntegralScheme::Stieltjes,
            &RefinePolicy::default(),
        );
        assert!(matches!(err, Err(Error::BranchCut { .. })));
        // The same path is fine classically.
        assert!(contour_integral(
            |_| Ok(cnum(1.0, 0.0)),
            &crossing,
            ord(1.0),
            IntegralScheme::Stieltjes,
            &RefinePolicy::default(),
        )
        .is_ok());
    }

    #[test]
    fn linearity_and_concatenation_at_fixed_level() {
        // A shared fixed partition makes scheme linearity exact up to rounding.
        let policy = RefinePolicy::fixed(512);
        let f = |x: f64| -> Result<f64> { Ok(x * x - 0.5 * x) };
        let g = |x: f64| -> Result<f64> { Ok((1.0 + x).recip()) };
        for (alpha, scheme) in [
            (0.7, IntegralScheme::Stieltjes),
            (0.7, IntegralScheme::Literal(512)),
            (1.0, IntegralScheme::LiteralLimit),
        ] {
            let o = ord(alpha);
            let both = lf_integral(|x| Ok(f(x)? + g(x)?), 0.0, 2.0, o, scheme, &policy)
                .unwrap()
                .outcome
                .value()
                .unwrap();
            let fa = lf_integral(f, 0.0, 2.0, o, scheme, &policy).unwrap().outcome.value().unwrap();
            let ga = lf_integral(g, 0.0, 2.0, o, scheme, &policy).unwrap().outcome.value().unwrap();
            assert!(
                (both - fa - ga).abs() <= 1e-10 * both.abs().max(1.0),
                "linearity failed for alpha {alpha} scheme {scheme:?}"
            );
        }

        let o = ord(0.8);
        let c1 = Contour::from_pairs(&[(0.3, 0.2), (1.0, 0.9)], false).unwrap();
        let c2 = Contour::from_pairs(&[(1.0, 0.9), (2.0, 0.4)], false).unwrap();
        let joined = c1.concat(&c2).unwrap();
        let fz = |z: Complex64| -> Result<Complex64> { Ok(z * z) };
        let whole = contour_integral(fz, &joined, o, IntegralScheme::Stieltjes, &policy)
            .unwrap()
            .outcome
            .value()
            .unwrap();
        let part1 = contour_integral(fz, &c1, o, IntegralScheme::Stieltjes, &policy)
            .unwrap()
            .outcome
            .value()
            .unwrap();
        let part2 = contour_integral(fz, &c2, o, IntegralScheme::Stieltjes, &policy)
            .unwrap()
            .outcome
            .value()
            .unwrap();
        assert!((whole - part1 - part2).norm() <= 1e-10 * whole.norm().max(1.0));
    }

    #[test]
    fn schemes_agree_classically() {
        // At alpha = 1 the two increment readings coincide and both match
        // classical quadrature on smooth integrands.
        let o = ord(1.0);
        let f = |x: f64| -> Result<f64> { Ok(x * x - 0.5 * x + 1.0) };
        let exact = 8.0 / 3.0 - 1.0 + 2.0;
        let schemes = [
            IntegralScheme::Stieltjes,
            IntegralScheme::Literal(1 << 14),
            IntegralScheme::LiteralLimit,
        ];
        let mut values = Vec::new();
        for scheme in schemes {
            let v = lf_integral(f, 0.0, 2.0, o, scheme, &RefinePolicy::default())
                .unwrap()
                .outcome
                .value()
                .unwrap();
            assert!((v - exact).abs() <= 1e-6, "{scheme:?}: {v}");
            values.push(v);
        }
        for w in values.windows(2) {
            assert!((w[0] - w[1]).abs() <= 1e-6);
        }

        // On a shared partition the contour readings are identical at
        // alpha = 1: the increments are literally the same numbers.
        let c = Contour::from_pairs(&[(0.25, 0.0), (1.0, 0.75), (1.5, 0.25)], false).unwrap();
        let policy = RefinePolicy::fixed(512);
        let fz = |z: Complex64| -> Result<Complex64> { Ok(z * z) };
        let st = contour_integral(fz, &c, o, IntegralScheme::Stieltjes, &policy)
            .unwrap()
            .outcome
            .value()
            .unwrap();
        let lit = contour_integral(fz, &c, o, IntegralScheme::Literal(512), &policy)
            .unwrap()
            .outcome
            .value()
            .unwrap();
        assert!((st - lit).norm() <= 1e-12);
    }

    #[test]
    fn ftc_base_monomial_is_exact() {
        // F = e_1 realizes to z^alpha / Gamma(1+alpha); its derivative is the
        // constant 1, so the Stieltjes sum telescopes.
        let o = ord(0.5);
        let f = FracPowerSeries::monomial(o, 1);
        let c = Contour::from_pairs(&[(0.2, 0.3), (1.4, 0.8), (2.0, 0.1)], false).unwrap();
        let check = check_ftc(&f, &c, IntegralScheme::Stieltjes, &RefinePolicy::default()).unwrap();
        assert!(check.residual <= 1e-12, "residual {}", check.residual);
    }

    #[test]
    fn ftc_classical_polynomial_over_random_path() {
        let o = ord(1.0);
        let f = FracPowerSeries::new(o, vec![0.5, 1.0, -0.75, 0.25]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut pts = vec![(0.5, 0.0)];
        for _ in 0..50 {
            pts.push((rng.gen_range(0.2..2.0), rng.gen_range(-1.5..1.5)));
        }
        let c = Contour::from_pairs(&pts, false).unwrap();
        let check = check_ftc(&f, &c, IntegralScheme::Stieltjes, &RefinePolicy::default()).unwrap();
        assert!(check.residual <= 1e-6, "residual {}", check.residual);
    }

    #[test]
    fn ftc_fractional_residual_matches_closed_form() {
        // F = e_2 at alpha = 1/2 on [0,1]: the integral is 2/pi while the
        // primitive difference is 1, a genuinely nonzero residual.
        let o = ord(0.5);
        let f = FracPowerSeries::monomial(o, 2);
        let c = Contour::from_pairs(&[(0.0, 0.0), (1.0, 0.0)], false).unwrap();
        let policy = RefinePolicy { rel_tol: 1e-6, n_start: 64, n_max: 1 << 17 };
        let check = check_ftc(&f, &c, IntegralScheme::Stieltjes, &policy).unwrap();
        let two_over_pi = std::f64::consts::FRAC_2_PI;
        assert!((check.integral.re - two_over_pi).abs() <= 1e-4);
        assert!((check.residual - (1.0 - two_over_pi)).abs() <= 1e-4);
    }

    #[test]
    fn limit_quotient_is_exact_on_the_matched_monomial() {
        let o = ord(0.6);
        let g = gamma(1.6).unwrap();
        let est = lfd_numeric(|x| Ok(x.powf(0.6) / g), 0.0, o, &LimitOptions::default()).unwrap();
        assert!(est.converged);
        assert!((est.estimate - 1.0).abs() <= 1e-12);
        for &(_, q) in &est.trace {
            assert!((q - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn limit_quotient_classical_derivative() {
        let est = lfd_numeric(|x| Ok(x * x), 3.0, ord(1.0), &LimitOptions::default()).unwrap();
        assert!(est.converged);
        assert!((est.estimate - 6.0).abs() <= 1e-5, "estimate {}", est.estimate);
    }

    #[test]
    fn limit_quotient_annihilates_smooth_functions_fractionally() {
        // At an interior point a smooth f has f(x0+h) - f(x0) ~ f' h, so the
        // quotient behaves like h^(1-alpha) -> 0: here that is h^(1/2), and
        // the trace never settles.
        let o = ord(0.5);
        let g = gamma(1.5).unwrap();
        let est = lfd_numeric(|x| Ok(x.sqrt() / g), 1.0, o, &LimitOptions::default()).unwrap();
        assert!(!est.converged);
        // Log-log slope oracle over the clean part of the trace.
        let pts: Vec<(f64, f64)> = est
            .trace
            .iter()
            .filter(|&&(h, q)| h > 1e-9 && q > 0.0)
            .map(|&(h, q)| (h.ln(), q.ln()))
            .collect();
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!((slope - 0.5).abs() <= 0.02, "slope {slope}");
    }

    #[test]
    fn limit_options_are_validated() {
        let o = ord(0.5);
        let bad = LimitOptions { h_schedule: vec![], window_rel_tol: 1e-6 };
        assert!(lfd_numeric(Ok, 0.0, o, &bad).is_err());
        let bad = LimitOptions { h_schedule: vec![0.1, 0.2], window_rel_tol: 1e-6 };
        assert!(lfd_numeric(Ok, 0.0, o, &bad).is_err());
    }
}
