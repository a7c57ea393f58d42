//! Expression trees and the symbolic derivative rule engine.
//!
//! Nodes cover constants, the variable, fractional monomials `x^{k a}`, the
//! three series primitives and their applications to inner expressions.
//! The derivative follows the rule system: linearity, product rule, quotient
//! rule (with the minus sign the classical reduction forces; the sign-flipped
//! variant is kept for the claims registry), chain rule for affine inner
//! arguments, power rule, and the fixed points of the series primitives.

use crate::error::{Error, Result};
use crate::gamma::gamma_ratio;
use crate::ml::{cos_alpha, cos_complex, ml, ml_complex, sin_alpha, sin_complex, SeriesControl};
use crate::order::FractalOrder;
use num_complex::Complex64;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum ExprNode {
    Const(f64),
    Var,
    /// Raw fractional monomial `x^{k alpha}`. Parsed trees carry integer `k`;
    /// derivatives of `Var` can introduce fractional multiples.
    FracMonomial(f64),
    /// `E_a` applied to the first monomial.
    MlExp,
    SinA,
    CosA,
    Add(Box<ExprNode>, Box<ExprNode>),
    Mul(Box<ExprNode>, Box<ExprNode>),
    Div(Box<ExprNode>, Box<ExprNode>),
    /// Application of a series primitive (outer) to an inner expression.
    Compose(Box<ExprNode>, Box<ExprNode>),
}

/// Sign convention for the quotient-rule numerator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuotientSign {
    /// `(g f' - f g') / g^2`; the only sign compatible with the classical
    /// reduction at `alpha = 1`.
    Corrected,
    /// `(g f' + f g') / g^2`, retained so the registry can measure how far
    /// off it is.
    AsPrinted,
}

impl ExprNode {
    fn is_zero(&self) -> bool {
        matches!(self, ExprNode::Const(c) if *c == 0.0)
    }

    fn is_one(&self) -> bool {
        matches!(self, ExprNode::Const(c) if *c == 1.0)
    }
}

fn add(l: ExprNode, r: ExprNode) -> ExprNode {
    if l.is_zero() {
        return r;
    }
    if r.is_zero() {
        return l;
    }
    ExprNode::Add(Box::new(l), Box::new(r))
}

fn mul(l: ExprNode, r: ExprNode) -> ExprNode {
    if l.is_zero() || r.is_zero() {
        return ExprNode::Const(0.0);
    }
    if l.is_one() {
        return r;
    }
    if r.is_one() {
        return l;
    }
    ExprNode::Mul(Box::new(l), Box::new(r))
}

/// Subtraction desugars to `l + (-1) * r`; the printer recognizes the
/// pattern and renders `l - r`, which reparses to the identical tree.
pub fn sub(l: ExprNode, r: ExprNode) -> ExprNode {
    ExprNode::Add(
        Box::new(l),
        Box::new(ExprNode::Mul(Box::new(ExprNode::Const(-1.0)), Box::new(r))),
    )
}

fn neg(e: ExprNode) -> ExprNode {
    sub(ExprNode::Const(0.0), e)
}

fn monomial(k: f64) -> ExprNode {
    if k == 0.0 {
        ExprNode::Const(1.0)
    } else {
        ExprNode::FracMonomial(k)
    }
}

/// Classical slope of an affine expression `c x + d`, if it is one.
fn affine_slope(e: &ExprNode, alpha: f64) -> Option<f64> {
    match e {
        ExprNode::Const(_) => Some(0.0),
        ExprNode::Var => Some(1.0),
        ExprNode::FracMonomial(k) => {
            if (k * alpha - 1.0).abs() <= 1e-12 {
                Some(1.0)
            } else {
                None
            }
        }
        ExprNode::Add(l, r) => Some(affine_slope(l, alpha)? + affine_slope(r, alpha)?),
        ExprNode::Mul(l, r) => match (l.as_ref(), r.as_ref()) {
            (ExprNode::Const(c), other) | (other, ExprNode::Const(c)) => {
                Some(c * affine_slope(other, alpha)?)
            }
            _ => None,
        },
        ExprNode::Div(l, r) => match r.as_ref() {
            ExprNode::Const(c) if *c != 0.0 => Some(affine_slope(l, alpha)? / c),
            _ => None,
        },
        _ => None,
    }
}

/// Symbolic local fractional derivative with the corrected quotient sign.
pub fn lfd_symbolic(e: &ExprNode, order: FractalOrder) -> Result<ExprNode> {
    derive(e, order, QuotientSign::Corrected)
}

/// Variant applying the sign-flipped quotient numerator; used by the
/// registry to quantify the gap against the corrected rule.
pub fn lfd_symbolic_with(e: &ExprNode, order: FractalOrder, sign: QuotientSign) -> Result<ExprNode> {
    derive(e, order, sign)
}

fn derive(e: &ExprNode, order: FractalOrder, sign: QuotientSign) -> Result<ExprNode> {
    let a = order.alpha();
    Ok(match e {
        ExprNode::Const(_) => ExprNode::Const(0.0),
        ExprNode::Var => {
            // x = x^{(1/a) a}; the power rule gives Gamma(2)/Gamma(2-a) x^{1-a}.
            mul(
                ExprNode::Const(gamma_ratio(2.0, 2.0 - a)?),
                monomial((1.0 - a) / a),
            )
        }
        ExprNode::FracMonomial(k) => {
            let lower = 1.0 + (k - 1.0) * a;
            if lower <= 0.0 && lower == lower.floor() {
                // The coefficient carries 1/Gamma at a pole, which vanishes.
                ExprNode::Const(0.0)
            } else {
                mul(
                    ExprNode::Const(gamma_ratio(1.0 + k * a, lower)?),
                    monomial(k - 1.0),
                )
            }
        }
        ExprNode::MlExp => ExprNode::MlExp,
        ExprNode::SinA => ExprNode::CosA,
        ExprNode::CosA => neg(ExprNode::SinA),
        ExprNode::Add(l, r) => add(derive(l, order, sign)?, derive(r, order, sign)?),
        ExprNode::Mul(f, g) => {
            let df = derive(f, order, sign)?;
            let dg = derive(g, order, sign)?;
            add(mul((**g).clone(), df), mul((**f).clone(), dg))
        }
        ExprNode::Div(f, g) => {
            let df = derive(f, order, sign)?;
            let dg = derive(g, order, sign)?;
            let gf = mul((**g).clone(), df);
            let fg = mul((**f).clone(), dg);
            let numerator = match sign {
                QuotientSign::Corrected => sub(gf, fg),
                QuotientSign::AsPrinted => add(gf, fg),
            };
            ExprNode::Div(
                Box::new(numerator),
                Box::new(mul((**g).clone(), (**g).clone())),
            )
        }
        ExprNode::Compose(outer, inner) => {
            let c = affine_slope(inner, a).ok_or_else(|| {
                Error::UnsupportedNode(
                    "chain rule requires an affine inner argument".into(),
                )
            })?;
            if c < 0.0 {
                return Err(Error::UnsupportedNode(
                    "chain rule factor (g')^alpha undefined for negative slope".into(),
                ));
            }
            let factor = ExprNode::Const(c.powf(a));
            match outer.as_ref() {
                ExprNode::MlExp => mul(
                    factor,
                    ExprNode::Compose(Box::new(ExprNode::MlExp), inner.clone()),
                ),
                ExprNode::SinA => mul(
                    factor,
                    ExprNode::Compose(Box::new(ExprNode::CosA), inner.clone()),
                ),
                ExprNode::CosA => neg(mul(
                    factor,
                    ExprNode::Compose(Box::new(ExprNode::SinA), inner.clone()),
                )),
                other => {
                    return Err(Error::UnsupportedNode(format!(
                        "composition with non-primitive outer {other:?}"
                    )))
                }
            }
        }
    })
}

/// Evaluate on the non-negative real line.
pub fn eval(e: &ExprNode, order: FractalOrder, x: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("expression eval requires x >= 0, got {x}")));
    }
    eval_at(e, order, x, ctl)
}

fn eval_at(e: &ExprNode, order: FractalOrder, x: f64, ctl: &SeriesControl) -> Result<f64> {
    let a = order.alpha();
    Ok(match e {
        ExprNode::Const(c) => *c,
        ExprNode::Var => x,
        ExprNode::FracMonomial(k) => x.powf(k * a),
        ExprNode::MlExp => ml(order, x, ctl)?,
        ExprNode::SinA => sin_alpha(order, x, ctl)?,
        ExprNode::CosA => cos_alpha(order, x, ctl)?,
        ExprNode::Add(l, r) => eval_at(l, order, x, ctl)? + eval_at(r, order, x, ctl)?,
        ExprNode::Mul(l, r) => eval_at(l, order, x, ctl)? * eval_at(r, order, x, ctl)?,
        ExprNode::Div(l, r) => {
            let d = eval_at(r, order, x, ctl)?;
            if d == 0.0 {
                return Err(Error::DivisionByZero);
            }
            eval_at(l, order, x, ctl)? / d
        }
        ExprNode::Compose(outer, inner) => {
            let v = eval_at(inner, order, x, ctl)?;
            if v < 0.0 {
                return Err(Error::Domain(format!(
                    "inner expression evaluated to {v} < 0"
                )));
            }
            eval_at(outer, order, v, ctl)?
        }
    })
}

/// Evaluate at a plane point through principal powers `w = z^alpha`.
pub fn eval_complex(
    e: &ExprNode,
    order: FractalOrder,
    z: Complex64,
    ctl: &SeriesControl,
) -> Result<Complex64> {
    let a = order.alpha();
    let realized = |z: Complex64, p: f64| -> Complex64 {
        if z.re == 0.0 && z.im == 0.0 {
            Complex64::new(0.0, 0.0)
        } else if z.im == 0.0 && z.re > 0.0 {
            Complex64::new(z.re.powf(p), 0.0)
        } else {
            z.powf(p)
        }
    };
    Ok(match e {
        ExprNode::Const(c) => Complex64::new(*c, 0.0),
        ExprNode::Var => z,
        ExprNode::FracMonomial(k) => realized(z, k * a),
        ExprNode::MlExp => ml_complex(order, realized(z, a), ctl)?,
        ExprNode::SinA => sin_complex(order, realized(z, a), ctl)?,
        ExprNode::CosA => cos_complex(order, realized(z, a), ctl)?,
        ExprNode::Add(l, r) => {
            eval_complex(l, order, z, ctl)? + eval_complex(r, order, z, ctl)?
        }
        ExprNode::Mul(l, r) => {
            eval_complex(l, order, z, ctl)? * eval_complex(r, order, z, ctl)?
        }
        ExprNode::Div(l, r) => {
            let d = eval_complex(r, order, z, ctl)?;
            if d.norm() == 0.0 {
                return Err(Error::DivisionByZero);
            }
            eval_complex(l, order, z, ctl)? / d
        }
        ExprNode::Compose(outer, inner) => {
            let v = eval_complex(inner, order, z, ctl)?;
            eval_complex(outer, order, v, ctl)?
        }
    })
}

// Printer. Binary operators are left-associative; the right operand is
// parenthesized when it binds at the same or lower level. The subtraction
// pattern Add(l, Mul(Const(-1), r)) renders as "l - r".
impl fmt::Display for ExprNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, f, 0)
    }
}

fn write_expr(e: &ExprNode, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
    let prec = match e {
        ExprNode::Add(..) => 1,
        ExprNode::Mul(..) | ExprNode::Div(..) => 2,
        _ => 3,
    };
    if prec < min_prec {
        write!(f, "(")?;
        write_expr(e, f, 0)?;
        return write!(f, ")");
    }
    match e {
        ExprNode::Const(c) => {
            if *c < 0.0 {
                // Bare negative literals are not lexable; render through the
                // subtraction form.
                write!(f, "(0 - {})", -c)
            } else {
                write!(f, "{c}")
            }
        }
        ExprNode::Var => write!(f, "x"),
        ExprNode::FracMonomial(k) => {
            if k.fract() == 0.0 && k.abs() < 1e15 {
                write!(f, "x^{{{}a}}", *k as i64)
            } else {
                write!(f, "x^{{{k}a}}")
            }
        }
        ExprNode::MlExp => write!(f, "E_a(x^{{1a}})"),
        ExprNode::SinA => write!(f, "sin_a(x^{{1a}})"),
        ExprNode::CosA => write!(f, "cos_a(x^{{1a}})"),
        ExprNode::Add(l, r) => {
            if let ExprNode::Mul(a, b) = r.as_ref() {
                if matches!(a.as_ref(), ExprNode::Const(c) if *c == -1.0) {
                    write_expr(l, f, 1)?;
                    write!(f, " - ")?;
                    return write_expr(b, f, 2);
                }
            }
            write_expr(l, f, 1)?;
            write!(f, " + ")?;
            write_expr(r, f, 2)
        }
        ExprNode::Mul(l, r) => {
            write_expr(l, f, 2)?;
            write!(f, " * ")?;
            write_expr(r, f, 3)
        }
        ExprNode::Div(l, r) => {
            write_expr(l, f, 2)?;
            write!(f, " / ")?;
            write_expr(r, f, 3)
        }
        ExprNode::Compose(outer, inner) => {
            let head = match outer.as_ref() {
                ExprNode::MlExp => "E_a",
                ExprNode::SinA => "sin_a",
                ExprNode::CosA => "cos_a",
                other => panic!("unprintable composition head {other:?}"),
            };
            write!(f, "{head}(")?;
            write_expr(inner, f, 0)?;
            write!(f, ")")
        }
    }
}
