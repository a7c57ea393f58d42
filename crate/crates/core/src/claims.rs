//! Registry of identity claims, each evaluated on a stated grid with its
//! residual reported.
//!
//! Classical-order claims carry a 1e-9 tolerance: at `alpha = 1` the whole
//! framework must collapse to ordinary analysis, and every entry except the
//! sign-flipped quotient rule does. Fractional-order runs are report-only
//! (null tolerance): several of the registered identities are genuinely
//! false under the `k >= 0` series, and the contract here is measurement,
//! not endorsement.

use crate::calculus::{
    check_ftc, contour_integral, lf_integral, Contour, IntegralScheme, QuadOutcome, RefinePolicy,
};
use crate::error::{Error, Result};
use crate::expr::{eval as expr_eval, lfd_symbolic, lfd_symbolic_with, ExprNode, QuotientSign};
use crate::fcomplex::{FractionalComplex, ThetaSearch};
use crate::gamma::gamma_ratio;
use crate::geometry::{circle_param, sphere_param, FCircleSpec};
use crate::ml::{ml, ml_arg, period_residual, SeriesControl};
use crate::order::FractalOrder;
use crate::series::FracPowerSeries;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ClaimStatus {
    Pass,
    Fail,
    Diverges,
}

/// One identity, one grid, one measured residual.
#[derive(Debug, Clone, Serialize)]
pub struct ClaimReport {
    pub claim: String,
    pub eq: String,
    pub alpha: f64,
    pub grid: String,
    pub max_residual: f64,
    /// `None` marks a report-only run (unbounded tolerance).
    pub tol: Option<f64>,
    pub status: ClaimStatus,
}

/// Seeded grid control shared by every claim; concrete grids derive from the
/// resolution and are recorded in each report.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub seed: u64,
    pub resolution: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { seed: 42, resolution: 16 }
    }
}

impl GridSpec {
    fn validate(&self) -> Result<()> {
        if self.resolution < 2 {
            return Err(Error::Domain(format!(
                "grid resolution {} < 2",
                self.resolution
            )));
        }
        Ok(())
    }
}

/// Registered claims: (id, equation tag).
pub const CLAIMS: &[(&str, &str)] = &[
    ("sem-real", "2.2"),
    ("sem-imag", "2.3"),
    ("sem-mixed", "2.6"),
    ("unit-at-zero", "2.7"),
    ("period-2pi", "2.13"),
    ("sem-cplx-a", "3.2"),
    ("sem-cplx-b", "3.3"),
    ("polar-form", "thm-1"),
    ("pythagoras-circle", "2.17"),
    ("pythagoras-sphere", "2.19"),
    ("leibniz", "4.10"),
    ("quotient-as-printed", "4.11"),
    ("chain", "4.13"),
    ("ftc", "thm-2"),
    ("closed-zero", "thm-3"),
    ("path-indep", "cor-4"),
    ("deform", "cor-5"),
    ("scheme-gap", "1.2-vs-4.18"),
    ("holder", "4.1"),
];

/// Claim ids in registry order.
pub fn registry_ids() -> Vec<&'static str> {
    CLAIMS.iter().map(|&(id, _)| id).collect()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Empirical Hoelder constant: max over pairs of
/// `|f(z1) - f(z2)| / |z1 - z2|^alpha`.
pub fn hoelder_estimate<F>(f: F, order: FractalOrder, points: &[Complex64]) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if points.len() < 2 {
        return Err(Error::Domain("hoelder estimate needs at least two points".into()));
    }
    if points.iter().all(|&p| p == points[0]) {
        return Err(Error::DegenerateGrid);
    }
    let alpha = order.alpha();
    let values: Vec<Complex64> = points.iter().map(|&p| f(p)).collect::<Result<_>>()?;
    let mut zeta: f64 = 0.0;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d = (points[i] - points[j]).norm();
            if d > 0.0 {
                zeta = zeta.max((values[i] - values[j]).norm() / d.powf(alpha));
            }
        }
    }
    Ok(zeta)
}

/// Gap left by the principal-value unit model `exp(i pi alpha / 2)`: its
/// square misses -1 by `2 |cos(pi alpha / 2)|` for `alpha < 1`, which is why
/// the formal unit (whose square is -1 exactly) is the arithmetic default.
/// Kept here for comparison.
pub fn principal_unit_gap(order: FractalOrder) -> f64 {
    let unit = Complex64::new(0.0, std::f64::consts::FRAC_PI_2 * order.alpha()).exp();
    (unit * unit + Complex64::new(1.0, 0.0)).norm()
}

struct Evaluation {
    max_residual: f64,
    grid: String,
}

fn eval_claim(id: &str, order: FractalOrder, grid: &GridSpec) -> Result<Evaluation> {
    let ctl = SeriesControl::default();
    let alpha = order.alpha();
    let res = grid.resolution;
    match id {
        "sem-real" => {
            let xs = linspace(0.0, 1.5, res);
            let mut max = 0.0_f64;
            for &lambda in &[0.5, 1.0] {
                for &x in &xs {
                    for &y in &xs {
                        let lhs = ml(order, lambda * x, &ctl)? * ml(order, lambda * y, &ctl)?;
                        let rhs = ml(order, lambda * (x + y), &ctl)?;
                        max = max.max((lhs - rhs).abs());
                    }
                }
            }
            Ok(Evaluation {
                max_residual: max,
                grid: format!("lambda in {{0.5, 1}}; x,y on {res}x{res} uniform [0,1.5]^2"),
            })
        }
        "sem-imag" => {
            let xs = linspace(0.0, 1.5, res);
            let mut max = 0.0_f64;
            for &x in &xs {
                for &y in &xs {
                    let ux = FractionalComplex::new(0.0, x.powf(alpha), order);
                    let uy = FractionalComplex::new(0.0, y.powf(alpha), order);
                    let us = FractionalComplex::new(0.0, (x + y).powf(alpha), order);
                    let lhs = ml_arg(order, ux, &ctl)?.mul(ml_arg(order, uy, &ctl)?)?;
                    let rhs = ml_arg(order, us, &ctl)?;
                    max = max.max(lhs.sub(rhs)?.modulus());
                }
            }
            Ok(Evaluation {
                max_residual: max,
                grid: format!("x,y on {res}x{res} uniform [0,1.5]^2"),
            })
        }
        "sem-mixed" => {
            let xs = linspace(0.0, 1.5, res);
            let mut max = 0.0_f64;
            for &x in &xs {
                for &y in &xs {
                    let uy = FractionalComplex::new(0.0, y.powf(alpha), order);
                    let lhs = ml_arg(order, uy, &ctl)?.scale(ml(order, x, &ctl)?);
                    let mixed = FractionalComplex::new(x.powf(alpha), y.powf(alpha), order);
                    let rhs = ml_arg(order, mixed, &ctl)?;
                    max = max.max(lhs.sub(rhs)?.modulus());
                }
            }
            Ok(Evaluation {
                max_residual: max,
                grid: format!("x,y on {res}x{res} uniform [0,1.5]^2"),
            })
        }
        "unit-at-zero" => {
            let real_dev = (ml(order, 0.0, &ctl)? - 1.0).abs();
            let arg_dev = ml_arg(order, FractionalComplex::zero(order), &ctl)?
                .sub(FractionalComplex::one(order))?
                .modulus();
            Ok(Evaluation {
                max_residual: real_dev.max(arg_dev),
                grid: "single point x = 0".into(),
            })
        }
        "period-2pi" => Ok(Evaluation {
            max_residual: period_residual(order, TWO_PI, &ctl)?,
            grid: "single point P = 2pi".into(),
        }),
        "sem-cplx-a" | "sem-cplx-b" => {
            // Both semigroup readings run on the same seeded points so their
            // mutual inconsistency shows up side by side.
            let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
            let mut max = 0.0_f64;
            for _ in 0..res {
                let (x1, y1): (f64, f64) = (rng.gen_range(0.0..1.2), rng.gen_range(0.0..1.2));
                let (x2, y2): (f64, f64) = (rng.gen_range(0.0..1.2), rng.gen_range(0.0..1.2));
                let u1 = FractionalComplex::new(x1.powf(alpha), y1.powf(alpha), order);
                let u2 = FractionalComplex::new(x2.powf(alpha), y2.powf(alpha), order);
                let lhs = ml_arg(order, u1, &ctl)?.mul(ml_arg(order, u2, &ctl)?)?;
                let rhs_arg = if id == "sem-cplx-a" {
                    u1.add(u2)?
                } else {
                    FractionalComplex::new((x1 + x2).powf(alpha), (y1 + y2).powf(alpha), order)
                };
                let rhs = ml_arg(order, rhs_arg, &ctl)?;
                max = max.max(lhs.sub(rhs)?.modulus());
            }
            Ok(Evaluation {
                max_residual: max,
                grid: format!("{res} seeded pairs in [0,1.2]^4, seed {}", grid.seed),
            })
        }
        "polar-form" => {
            let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
            let mut max = 0.0_f64;
            for _ in 0..res {
                let z = FractionalComplex::new(
                    rng.gen_range(0.1..2.0),
                    rng.gen_range(0.1..2.0),
                    order,
                );
                let p = z.polar_decompose(&ThetaSearch::default(), &ctl)?;
                max = max.max(p.residual);
            }
            Ok(Evaluation {
                max_residual: max,
                grid: format!(
                    "{res} seeded points in [0.1,2]^2, theta grid 2048 on [0,2pi], seed {}",
                    grid.seed
                ),
            })
        }
        "pythagoras-circle" => {
            let spec = FCircleSpec::new(1.5, order)?;
            let mut max = 0.0_f64;
            for &theta in &linspace(0.0, TWO_PI, 4 * res) {
                let (_, _, r) = circle_param(theta, &spec, &ctl)?;
                max = max.max(r.abs());
            }
            Ok(Evaluation {
                max_residual: max,
                grid: format!("R = 1.5; theta on {} uniform [0,2pi]", 4 * res),
            })
        }
        "pythagoras-sphere" => {
            let spec = FCircleSpec::new(1.2, order)?;
            let mut max = 0.0_f64;
            for &eta in &linspace(0.05, std::f64::consts::PI - 0.05, res) {
                for &theta in &linspace(0.0, TWO_PI, res) {
                    let (_, _, _, r) = sphere_param(eta, theta, &spec, &ctl)?;
                    max = max.max(r.abs());
                }
            }
            Ok(Evaluation {
                max_residual: max,
                grid: format!("R = 1.2; eta,theta on {res}x{res} grid"),
            })
        }
        "leibniz" => {
            let f = FracPowerSeries::sin(order, 16);
            let g = FracPowerSeries::cos(order, 16);
            let defect = f
                .mul(&g)?
                .lfd()
                .add(&f.lfd().mul(&g)?.scale(-1.0))?
                .add(&f.mul(&g.lfd())?.scale(-1.0))?;
            let mut max = 0.0_f64;
            for &x in &linspace(0.0, 2.0, 2 * res) {
                max = max.max(defect.eval(x)?.abs());
            }
            Ok(Evaluation {
                max_residual: max,
                grid: format!("f = sin (K=16), g = cos (K=16); x on {} uniform [0,2]", 2 * res),
            })
        }
        "quotient-as-printed" => {
            let e = ExprNode::Div(
                Box::new(ExprNode::FracMonomial(2.0)),
                Box::new(ExprNode::MlExp),
            );
            let corrected = lfd_symbolic(&e, order)?;
            let printed = lfd_symbolic_with(&e, order, QuotientSign::AsPrinted)?;
            let mut max = 0.0_f64;
            for &x in &linspace(0.25, 2.0, res) {
                let gap =
                    (expr_eval(&printed, order, x, &ctl)? - expr_eval(&corrected, order, x, &ctl)?).abs();
                max = max.max(gap);
            }
            Ok(Evaluation {
                max_residual: max,
                grid: format!("f = x^{{2a}}, g = E_a; x on {res} uniform [0.25,2]"),
            })
        }
        "chain" => {
            // Composite E_a((z^2)^a) as a series: coefficient
            // Gamma(1+2ka)/Gamma(1+ka) at index 2k. Its shift derivative is
            // the ground truth; the chain rule proposes E_a((z^2)^a) (2z)^a.
            let k_half = 96;
            let mut coeffs = vec![0.0; 2 * k_half + 1];
            for k in 0..=k_half {
                coeffs[2 * k] =
                    gamma_ratio(1.0 + 2.0 * k as f64 * alpha, 1.0 + k as f64 * alpha)?;
            }
            let composite = FracPowerSeries::new(order, coeffs);
            let shifted = composite.lfd();
            let mut max = 0.0_f64;
            for &x in &linspace(0.0, 1.5, res) {
                let lhs = shifted.eval(x)?;
                let rhs = ml(order, x * x, &ctl)? * (2.0 * x).powf(alpha);
                max = max.max((lhs - rhs).abs());
            }
            Ok(Evaluation {
                max_residual: max,
                grid: format!("inner z^2, outer E_a, K = {}; x on {res} uniform [0,1.5]", 2 * k_half),
            })
        }
        "ftc" => {
            let primitive = FracPowerSeries::monomial(order, 3);
            let contour = Contour::from_pairs(&[(0.0, 0.0), (1.0, 0.0)], false)?;
            let policy = RefinePolicy { rel_tol: 1e-10, n_start: 64, n_max: 1 << 17 };
            let check = check_ftc(&primitive, &contour, IntegralScheme::Stieltjes, &policy)?;
            Ok(Evaluation {
                max_residual: check.residual,
                grid: format!(
                    "F = e_3, path 0 -> 1, stieltjes refined to n = {}",
                    check.diagnostics.sequence.last().map(|&(n, _)| n).unwrap_or(0)
                ),
            })
        }
        "closed-zero" => {
            let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
            let mut max = 0.0_f64;
            let loops = 10;
            for _ in 0..loops {
                let contour = random_loop(&mut rng)?;
                let r = contour_integral(
                    |_| Ok(Complex64::new(1.0, 0.0)),
                    &contour,
                    order,
                    IntegralScheme::Stieltjes,
                    &RefinePolicy::default(),
                )?;
                match r.outcome {
                    QuadOutcome::Value(v) => max = max.max(v.norm()),
                    QuadOutcome::Divergent { exponent } => {
                        return Err(Error::Domain(format!(
                            "closed loop diverged with exponent {exponent}"
                        )))
                    }
                }
            }
            Ok(Evaluation {
                max_residual: max,
                grid: format!("{loops} seeded closed polylines in the cut plane, seed {}", grid.seed),
            })
        }
        "path-indep" => {
            let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
            let integrand = FracPowerSeries::monomial(order, 2).lfd();
            let policy = RefinePolicy { rel_tol: 1e-10, n_start: 64, n_max: 1 << 16 };
            let mut max = 0.0_f64;
            for _ in 0..3 {
                let p0 = Complex64::new(rng.gen_range(0.2..0.6), rng.gen_range(0.1..0.5));
                let p1 = Complex64::new(rng.gen_range(1.4..2.0), rng.gen_range(0.8..1.4));
                let mid = Complex64::new(rng.gen_range(0.5..1.5), rng.gen_range(0.2..1.2));
                let direct = Contour::new(vec![p0, p1], false)?;
                let detour = Contour::new(vec![p0, mid, p1], false)?;
                let va = contour_integral(
                    |z| integrand.eval_complex(z),
                    &direct,
                    order,
                    IntegralScheme::Stieltjes,
                    &policy,
                )?;
                let vb = contour_integral(
                    |z| integrand.eval_complex(z),
                    &detour,
                    order,
                    IntegralScheme::Stieltjes,
                    &policy,
                )?;
                if let (Some(a), Some(b)) = (va.outcome.value(), vb.outcome.value()) {
                    max = max.max((a - b).norm());
                }
            }
            Ok(Evaluation {
                max_residual: max,
                grid: format!(
                    "integrand e_1 realized; 3 seeded endpoint pairs, direct vs detour, seed {}",
                    grid.seed
                ),
            })
        }
        "deform" => {
            let integrand = FracPowerSeries::monomial(order, 2).lfd();
            let policy = RefinePolicy { rel_tol: 1e-10, n_start: 64, n_max: 1 << 16 };
            let square = |c: Complex64, r: f64| -> Result<Contour> {
                Contour::new(
                    vec![
                        c + Complex64::new(-r, -r),
                        c + Complex64::new(r, -r),
                        c + Complex64::new(r, r),
                        c + Complex64::new(-r, r),
                        c + Complex64::new(-r, -r),
                    ],
                    true,
                )
            };
            let center = Complex64::new(1.2, 0.0);
            let outer = square(center, 0.5)?;
            let inner = square(center, 0.25)?;
            let integrate = |c: &Contour| -> Result<Complex64> {
                match contour_integral(
                    |z| integrand.eval_complex(z),
                    c,
                    order,
                    IntegralScheme::Stieltjes,
                    &policy,
                )?
                .outcome
                {
                    QuadOutcome::Value(v) => Ok(v),
                    QuadOutcome::Divergent { exponent } => Err(Error::Domain(format!(
                        "loop integral diverged with exponent {exponent}"
                    ))),
                }
            };
            let residual = (integrate(&outer)? - integrate(&inner)?).norm();
            Ok(Evaluation {
                max_residual: residual,
                grid: "integrand e_1 realized; nested squares around (1.2, 0), radii 0.5 and 0.25"
                    .into(),
            })
        }
        "scheme-gap" => {
            let n = 4096;
            let policy = RefinePolicy::fixed(n);
            let stieltjes = lf_integral(|_| Ok(1.0), 0.0, 1.0, order, IntegralScheme::Stieltjes, &policy)?
                .outcome
                .value()
                .expect("fixed-level stieltjes yields a value");
            let literal = lf_integral(|_| Ok(1.0), 0.0, 1.0, order, IntegralScheme::Literal(n), &policy)?
                .outcome
                .value()
                .expect("fixed-n literal yields a value");
            Ok(Evaluation {
                max_residual: (stieltjes - literal).abs(),
                grid: format!("f = 1 on [0,1], both increment readings at n = {n}"),
            })
        }
        "holder" => {
            let points: Vec<Complex64> = linspace(0.0, 1.0, 200)
                .into_iter()
                .map(|x| Complex64::new(x, 0.0))
                .collect();
            let zeta = hoelder_estimate(
                |z| Ok(Complex64::new(ml(order, z.re, &ctl)?, 0.0)),
                order,
                &points,
            )?;
            // Classically the Lipschitz constant of E_1 on [0,1] is e; any
            // excess over it is the residual. Fractional runs report the raw
            // empirical constant.
            let residual = if order.is_classical() {
                (zeta - std::f64::consts::E).max(0.0)
            } else {
                zeta
            };
            Ok(Evaluation {
                max_residual: residual,
                grid: "E_a on 200 uniform points of [0,1]; residual is zeta-hat (minus e at order 1)"
                    .into(),
            })
        }
        other => Err(Error::UnknownClaim(other.to_string())),
    }
}

fn random_loop(rng: &mut ChaCha8Rng) -> Result<Contour> {
    let n = rng.gen_range(4..9);
    let mut pts: Vec<Complex64> = Vec::with_capacity(n + 1);
    while pts.len() < n {
        let p = Complex64::new(rng.gen_range(0.2..2.5), rng.gen_range(-1.5..1.5));
        if pts.last().is_none_or(|&q| (p - q).norm() > 1e-3) {
            pts.push(p);
        }
    }
    let first = pts[0];
    pts.push(first);
    Contour::new(pts, true)
}

/// Run one registered claim at the given order.
pub fn run_claim(claim_id: &str, order: FractalOrder, grid: &GridSpec) -> Result<ClaimReport> {
    let eq = CLAIMS
        .iter()
        .find(|&&(id, _)| id == claim_id)
        .map(|&(_, eq)| eq)
        .ok_or_else(|| Error::UnknownClaim(claim_id.to_string()))?;
    grid.validate()?;
    let tol = if order.is_classical() { Some(1e-9) } else { None };
    let report = match eval_claim(claim_id, order, grid) {
        Ok(eval) => {
            let status = match tol {
                Some(t) if eval.max_residual > t => ClaimStatus::Fail,
                _ => ClaimStatus::Pass,
            };
            ClaimReport {
                claim: claim_id.to_string(),
                eq: eq.to_string(),
                alpha: order.alpha(),
                grid: eval.grid,
                max_residual: eval.max_residual,
                tol,
                status,
            }
        }
        Err(e) => ClaimReport {
            claim: claim_id.to_string(),
            eq: eq.to_string(),
            alpha: order.alpha(),
            grid: format!("evaluation aborted: {e}"),
            max_residual: f64::NAN,
            tol,
            status: ClaimStatus::Diverges,
        },
    };
    Ok(report)
}

/// Run the whole registry for each order, write one JSON object per line,
/// and return the reports sorted by (claim, alpha).
pub fn run_all<W: Write>(
    orders: &[FractalOrder],
    grid: &GridSpec,
    out: &mut W,
) -> Result<Vec<ClaimReport>> {
    grid.validate()?;
    let mut reports = Vec::with_capacity(orders.len() * CLAIMS.len());
    for &order in orders {
        for &(id, _) in CLAIMS {
            reports.push(run_claim(id, order, grid)?);
        }
    }
    reports.sort_by(|a, b| a.claim.cmp(&b.claim).then(a.alpha.total_cmp(&b.alpha)));
    for report in &reports {
        let line = serde_json::to_string(report)
            .map_err(|e| Error::Domain(format!("serialization failed: {e}")))?;
        writeln!(out, "{line}").map_err(|e| Error::Domain(format!("write failed: {e}")))?;
    }
    Ok(reports)
}
