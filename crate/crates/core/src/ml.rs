//! Truncated-series evaluation of the Mittag-Leffler function and the
//! fractional trigonometric functions, plus the period solver.
//!
//! All series are summed in fixed ascending-k order (Kahan-compensated) so
//! results are deterministic. Terms are built recursively through
//! `gamma_ratio`, which keeps every intermediate finite even where the
//! individual gamma factors would overflow.

use crate::error::{Error, Result};
use crate::fcomplex::FractionalComplex;
use crate::gamma::gamma_ratio;
use crate::order::FractalOrder;
use num_complex::Complex64;

/// Truncation policy for the series.
///
/// Summation stops once `|term| / max(1, |partial|) < tail_tol` holds for two
/// consecutive terms; reaching `max_terms` first is a non-convergence error
/// (the argument is too large for the budget).
#[derive(Debug, Clone, Copy)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub tail_tol: f64,
}

impl SeriesControl {
    pub fn new(max_terms: usize, tail_tol: f64) -> Result<Self> {
        if max_terms < 8 {
            return Err(Error::Domain(format!("max_terms {max_terms} < 8")));
        }
        if !(tail_tol > 0.0) {
            return Err(Error::Domain(format!("tail_tol {tail_tol} must be positive")));
        }
        Ok(SeriesControl { max_terms, tail_tol })
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl { max_terms: 256, tail_tol: 1e-16 }
    }
}

/// Compensated accumulator; keeps grid sums reproducible at full precision.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub(crate) fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum
    }
}

pub(crate) struct TailWatch {
    tol: f64,
    hits: usize,
}

impl TailWatch {
    pub(crate) fn new(tol: f64) -> Self {
        TailWatch { tol, hits: 0 }
    }

    /// True once two consecutive terms are negligible against the partial sum.
    pub(crate) fn settled(&mut self, term_mag: f64, partial_mag: f64) -> bool {
        if term_mag / partial_mag.max(1.0) < self.tol {
            self.hits += 1;
        } else {
            self.hits = 0;
        }
        self.hits >= 2
    }
}

/// Mittag-Leffler function of the realized base: sum of `x^(alpha k) / Gamma(1 + alpha k)`.
///
/// Requires `x >= 0` so the fractional power is single-valued; signed or
/// complex arguments go through [`ml_arg`] as realized values.
pub fn ml(order: FractalOrder, x: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("ml requires x >= 0, got {x}")));
    }
    let a = order.alpha();
    let xa = x.powf(a);
    let mut term = 1.0_f64;
    let mut acc = Kahan::default();
    acc.add(term);
    let mut watch = TailWatch::new(ctl.tail_tol);
    for k in 1..=ctl.max_terms {
        let ratio = gamma_ratio(1.0 + a * k as f64, 1.0 + a * (k - 1) as f64)?;
        term = term * xa / ratio;
        acc.add(term);
        if watch.settled(term.abs(), acc.value().abs()) {
            return Ok(acc.value());
        }
    }
    Err(Error::NonConvergence { terms: ctl.max_terms })
}

/// Fractional cosine: alternating sum of `x^(2 alpha k) / Gamma(1 + 2 alpha k)`.
pub fn cos_alpha(order: FractalOrder, x: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("cos_alpha requires x >= 0, got {x}")));
    }
    let a = order.alpha();
    let x2a = x.powf(2.0 * a);
    let mut term = 1.0_f64;
    let mut acc = Kahan::default();
    acc.add(term);
    let mut watch = TailWatch::new(ctl.tail_tol);
    for k in 1..=ctl.max_terms {
        let ratio = gamma_ratio(1.0 + 2.0 * a * k as f64, 1.0 + 2.0 * a * (k - 1) as f64)?;
        term = -term * x2a / ratio;
        acc.add(term);
        if watch.settled(term.abs(), acc.value().abs()) {
            return Ok(acc.value());
        }
    }
    Err(Error::NonConvergence { terms: ctl.max_terms })
}

/// Fractional sine: alternating sum of `x^((2k+1) alpha) / Gamma(1 + (2k+1) alpha)`.
pub fn sin_alpha(order: FractalOrder, x: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("sin_alpha requires x >= 0, got {x}")));
    }
    let a = order.alpha();
    let x2a = x.powf(2.0 * a);
    let mut term = x.powf(a) / gamma_ratio(1.0 + a, 1.0)?;
    let mut acc = Kahan::default();
    acc.add(term);
    let mut watch = TailWatch::new(ctl.tail_tol);
    for k in 1..=ctl.max_terms {
        let ratio = gamma_ratio(
            1.0 + (2 * k + 1) as f64 * a,
            1.0 + (2 * k - 1) as f64 * a,
        )?;
        term = -term * x2a / ratio;
        acc.add(term);
        if watch.settled(term.abs(), acc.value().abs()) {
            return Ok(acc.value());
        }
    }
    Err(Error::NonConvergence { terms: ctl.max_terms })
}

/// Mittag-Leffler function of an already-realized fractional-complex value:
/// sum of `u^k / Gamma(1 + alpha k)` under the `i^(2 alpha) = -1` product.
///
/// Severe cancellation sets in when `|u|` is large enough that the largest
/// intermediate term dwarfs the result; callers integrating against this
/// kernel should keep their domains accordingly modest.
pub fn ml_arg(order: FractalOrder, u: FractionalComplex, ctl: &SeriesControl) -> Result<FractionalComplex> {
    if u.order != order {
        return Err(Error::OrderMismatch { left: order.alpha(), right: u.order.alpha() });
    }
    let a = order.alpha();
    let mut term = FractionalComplex::one(order);
    let mut re = Kahan::default();
    let mut im = Kahan::default();
    re.add(term.a);
    im.add(term.b);
    let mut watch = TailWatch::new(ctl.tail_tol);
    for k in 1..=ctl.max_terms {
        let ratio = gamma_ratio(1.0 + a * k as f64, 1.0 + a * (k - 1) as f64)?;
        term = term.mul(u)?.scale(1.0 / ratio);
        re.add(term.a);
        im.add(term.b);
        let partial = re.value().hypot(im.value());
        if watch.settled(term.modulus(), partial) {
            return Ok(FractionalComplex::new(re.value(), im.value(), order));
        }
    }
    Err(Error::NonConvergence { terms: ctl.max_terms })
}

/// Plane-complex Mittag-Leffler sum of `w^k / Gamma(1 + alpha k)` where `w`
/// is the realized principal power `z^alpha`.
pub fn ml_complex(order: FractalOrder, w: Complex64, ctl: &SeriesControl) -> Result<Complex64> {
    let a = order.alpha();
    let mut term = Complex64::new(1.0, 0.0);
    let mut re = Kahan::default();
    let mut im = Kahan::default();
    re.add(term.re);
    im.add(term.im);
    let mut watch = TailWatch::new(ctl.tail_tol);
    for k in 1..=ctl.max_terms {
        let ratio = gamma_ratio(1.0 + a * k as f64, 1.0 + a * (k - 1) as f64)?;
        term = term * w / ratio;
        re.add(term.re);
        im.add(term.im);
        let partial = re.value().hypot(im.value());
        if watch.settled(term.norm(), partial) {
            return Ok(Complex64::new(re.value(), im.value()));
        }
    }
    Err(Error::NonConvergence { terms: ctl.max_terms })
}

/// Plane-complex fractional cosine over the realized power `w = z^alpha`.
pub fn cos_complex(order: FractalOrder, w: Complex64, ctl: &SeriesControl) -> Result<Complex64> {
    let a = order.alpha();
    let w2 = w * w;
    let mut term = Complex64::new(1.0, 0.0);
    let mut re = Kahan::default();
    let mut im = Kahan::default();
    re.add(term.re);
    im.add(term.im);
    let mut watch = TailWatch::new(ctl.tail_tol);
    for k in 1..=ctl.max_terms {
        let ratio = gamma_ratio(1.0 + 2.0 * a * k as f64, 1.0 + 2.0 * a * (k - 1) as f64)?;
        term = -term * w2 / ratio;
        re.add(term.re);
        im.add(term.im);
        let partial = re.value().hypot(im.value());
        if watch.settled(term.norm(), partial) {
            return Ok(Complex64::new(re.value(), im.value()));
        }
    }
    Err(Error::NonConvergence { terms: ctl.max_terms })
}

/// Plane-complex fractional sine over the realized power `w = z^alpha`.
pub fn sin_complex(order: FractalOrder, w: Complex64, ctl: &SeriesControl) -> Result<Complex64> {
    let a = order.alpha();
    let w2 = w * w;
    let mut term = w / gamma_ratio(1.0 + a, 1.0)?;
    let mut re = Kahan::default();
    let mut im = Kahan::default();
    re.add(term.re);
    im.add(term.im);
    let mut watch = TailWatch::new(ctl.tail_tol);
    for k in 1..=ctl.max_terms {
        let ratio = gamma_ratio(
            1.0 + (2 * k + 1) as f64 * a,
            1.0 + (2 * k - 1) as f64 * a,
        )?;
        term = -term * w2 / ratio;
        re.add(term.re);
        im.add(term.im);
        let partial = re.value().hypot(im.value());
        if watch.settled(term.norm(), partial) {
            return Ok(Complex64::new(re.value(), im.value()));
        }
    }
    Err(Error::NonConvergence { terms: ctl.max_terms })
}

/// Deviation `|E_a(i^a P^a) - 1|` whose roots would be periods.
pub fn period_residual(order: FractalOrder, p: f64, ctl: &SeriesControl) -> Result<f64> {
    let c = cos_alpha(order, p, ctl)?;
    let s = sin_alpha(order, p, ctl)?;
    Ok((c - 1.0).hypot(s))
}

/// Trivial-root exclusion for the period scan.
const PERIOD_EPS: f64 = 1e-6;

/// Scan `(eps, p_max]` for the period candidate minimizing
/// `|E_a(i^a P^a) - 1|` and return `(best_p, best_residual)`.
///
/// Only interior, bracketed grid minima are refined (golden section); the
/// monotone descent into the excluded trivial root at `P = 0` is not a
/// candidate. Ties within 1e-9 of the best residual resolve to the smallest
/// `P`, so at `alpha = 1` the solver reports the fundamental period rather
/// than a multiple. A large residual is a finding, not an error.
pub fn period_solve(order: FractalOrder, p_max: f64, grid: usize) -> Result<(f64, f64)> {
    if !(p_max > PERIOD_EPS) {
        return Err(Error::Domain(format!("p_max {p_max} must exceed {PERIOD_EPS}")));
    }
    if grid < 10_000 {
        return Err(Error::Domain(format!("period grid {grid} < 10000")));
    }
    let ctl = SeriesControl::default();
    let step = (p_max - PERIOD_EPS) / grid as f64;
    let point = |j: usize| PERIOD_EPS + step * (j + 1) as f64;
    let mut residuals = Vec::with_capacity(grid);
    for j in 0..grid {
        residuals.push(period_residual(order, point(j), &ctl)?);
    }

    let objective = |p: f64| period_residual(order, p, &ctl);
    let mut candidates: Vec<(f64, f64)> = Vec::new();
    for j in 1..grid - 1 {
        if residuals[j] < residuals[j - 1] && residuals[j] < residuals[j + 1] {
            let (p, v) = crate::fcomplex::golden_min(point(j - 1), point(j + 1), 1e-11, &objective)?;
            candidates.push((p, v));
        }
    }
    if candidates.is_empty() {
        // No interior minimum anywhere in the window: report the best grid
        // point as scanned.
        let (j, v) = residuals
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("grid is non-empty");
        return Ok((point(j), *v));
    }
    let best = candidates
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::INFINITY, f64::min);
    let chosen = candidates
        .iter()
        .filter(|&&(_, v)| v <= best + 1e-9)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .copied()
        .expect("at least one candidate within the tie band");
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ord(a: f64) -> FractalOrder {
        FractalOrder::new(a).unwrap()
    }

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn control_validation() {
        assert!(SeriesControl::new(8, 1e-12).is_ok());
        assert!(SeriesControl::new(4, 1e-12).is_err());
        assert!(SeriesControl::new(64, 0.0).is_err());
    }

    #[test]
    fn ml_at_zero_is_one() {
        for alpha in [0.2, 0.5, 0.9, 1.0] {
            assert_eq!(ml(ord(alpha), 0.0, &ctl()).unwrap(), 1.0);
        }
    }

    #[test]
    fn ml_classical_is_exp() {
        assert_relative_eq!(
            ml(ord(1.0), 1.0, &ctl()).unwrap(),
            std::f64::consts::E,
            max_relative = 1e-14
        );
        for i in 0..=100 {
            let x = 10.0 * i as f64 / 100.0;
            let v = ml(ord(1.0), x, &ctl()).unwrap();
            assert!(((v - x.exp()) / x.exp()).abs() <= 1e-12, "x = {x}");
        }
    }

    #[test]
    fn ml_half_matches_oracle() {
        // 40-digit series oracle, cross-checked against e * erfc(-1).
        assert_relative_eq!(
            ml(ord(0.5), 1.0, &ctl()).unwrap(),
            5.008980080762283466309824598214809814694,
            max_relative = 1e-13
        );
        // Same closed form at base 2: e^2 * erfc(-sqrt 2).
        assert_relative_eq!(
            ml(ord(0.5), 2.0, &ctl()).unwrap(),
            14.44190819541495924160655669309184822961,
            max_relative = 1e-13
        );
    }

    #[test]
    fn ml_rejects_negative_and_signals_budget() {
        assert!(matches!(ml(ord(0.5), -1.0, &ctl()), Err(Error::Domain(_))));
        assert_eq!(
            ml(ord(0.9), 1e6, &ctl()),
            Err(Error::NonConvergence { terms: 256 })
        );
    }

    #[test]
    fn converged_result_is_independent_of_budget() {
        let small = SeriesControl::new(64, 1e-16).unwrap();
        let a = ml(ord(0.6), 2.0, &small).unwrap();
        let b = ml(ord(0.6), 2.0, &ctl()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn trig_at_zero() {
        for alpha in [0.3, 0.5, 1.0] {
            assert_eq!(cos_alpha(ord(alpha), 0.0, &ctl()).unwrap(), 1.0);
            assert_eq!(sin_alpha(ord(alpha), 0.0, &ctl()).unwrap(), 0.0);
        }
    }

    #[test]
    fn trig_classical_reduction() {
        let o = ord(1.0);
        assert!((sin_alpha(o, std::f64::consts::FRAC_PI_2, &ctl()).unwrap() - 1.0).abs() <= 1e-12);
        assert!((cos_alpha(o, std::f64::consts::PI, &ctl()).unwrap() + 1.0).abs() <= 1e-12);
        for i in 0..=100 {
            let x = 2.0 * std::f64::consts::PI * i as f64 / 100.0;
            assert!((sin_alpha(o, x, &ctl()).unwrap() - x.sin()).abs() <= 1e-12);
            assert!((cos_alpha(o, x, &ctl()).unwrap() - x.cos()).abs() <= 1e-12);
        }
    }

    #[test]
    fn trig_half_matches_oracle() {
        // cos_(1/2)(1) collapses to exp(-1); sin value from the 40-digit oracle.
        assert_relative_eq!(
            cos_alpha(ord(0.5), 1.0, &ctl()).unwrap(),
            (-1.0_f64).exp(),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            sin_alpha(ord(0.5), 1.0, &ctl()).unwrap(),
            0.6071577058413937291150382358007449211612,
            max_relative = 1e-13
        );
    }

    #[test]
    fn ml_arg_at_zero_and_euler_identity() {
        for alpha in [0.4, 1.0] {
            let o = ord(alpha);
            let v = ml_arg(o, FractionalComplex::zero(o), &ctl()).unwrap();
            assert_eq!((v.a, v.b), (1.0, 0.0));
        }
        let o = ord(1.0);
        let v = ml_arg(o, FractionalComplex::new(0.0, std::f64::consts::PI, o), &ctl()).unwrap();
        assert!((v.a + 1.0).abs() <= 1e-12 && v.b.abs() <= 1e-12);
    }

    #[test]
    fn euler_split_is_exact_bookkeeping() {
        for alpha in [0.3, 0.5, 0.9, 1.0] {
            let o = ord(alpha);
            for i in 0..=12 {
                let x = 3.0 * i as f64 / 12.0;
                let u = FractionalComplex::new(0.0, x.powf(alpha), o);
                let v = ml_arg(o, u, &ctl()).unwrap();
                let c = cos_alpha(o, x, &ctl()).unwrap();
                let s = sin_alpha(o, x, &ctl()).unwrap();
                assert!((v.a - c).abs() <= 1e-12, "alpha={alpha} x={x}");
                assert!((v.b - s).abs() <= 1e-12, "alpha={alpha} x={x}");
            }
        }
    }

    #[test]
    fn complex_plane_variants_reduce_classically() {
        let o = ord(1.0);
        let z = Complex64::new(0.3, 1.1);
        let v = ml_complex(o, z, &ctl()).unwrap();
        assert!((v - z.exp()).norm() <= 1e-13);
        let c = cos_complex(o, z, &ctl()).unwrap();
        let s = sin_complex(o, z, &ctl()).unwrap();
        assert!((c - z.cos()).norm() <= 1e-13);
        assert!((s - z.sin()).norm() <= 1e-13);
    }

    #[test]
    fn period_residual_classical_values() {
        let o = ord(1.0);
        assert!((period_residual(o, std::f64::consts::PI, &ctl()).unwrap() - 2.0).abs() <= 1e-12);
        assert!(period_residual(o, 2.0 * std::f64::consts::PI, &ctl()).unwrap() <= 1e-12);
    }

    #[test]
    fn period_solver_finds_two_pi() {
        let (p, r) = period_solve(ord(1.0), 4.0 * std::f64::consts::PI, 20_000).unwrap();
        assert!((p - 2.0 * std::f64::consts::PI).abs() <= 1e-6, "p = {p}");
        assert!(r <= 1e-9, "residual = {r}");
    }

    #[test]
    fn period_solver_fractional_residual_is_large() {
        // Dense-grid desk oracle at alpha = 0.9: interior minimum near
        // P = 6.252581223935564 with residual 0.6337866794140046; the
        // periodicity claim genuinely fails under the k >= 0 series.
        let (p, r) = period_solve(ord(0.9), 4.0 * std::f64::consts::PI, 20_000).unwrap();
        assert!((p - 6.252581223935564).abs() <= 1e-4, "p = {p}");
        assert!((r - 0.6337866794140046).abs() <= 1e-6, "residual = {r}");
    }

    #[test]
    fn period_solver_validates_input() {
        assert!(period_solve(ord(1.0), 4.0 * std::f64::consts::PI, 100).is_err());
        assert!(period_solve(ord(1.0), 0.0, 20_000).is_err());
    }
}
