//! Formal fractional power series over the Mittag-Leffler basis
//! `e_k(x) = x^(k alpha) / Gamma(1 + k alpha)`.
//!
//! In this basis the local fractional derivative is exactly a left shift of
//! the coefficient list: the gamma-ratio weights of the power rule are
//! absorbed by the basis normalization, so the derivative identities for
//! `E_a`, `sin_a`, `cos_a` hold as exact coefficient equalities with no
//! floating tolerance at all.

use crate::error::{Error, Result};
use crate::gamma::{gamma, gamma_ratio};
use crate::ml::Kahan;
use crate::order::FractalOrder;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct FracPowerSeries {
    pub order: FractalOrder,
    /// Coefficients `c_0 .. c_K` against the ML basis; never empty.
    pub coeffs: Vec<f64>,
}

impl FracPowerSeries {
    pub fn new(order: FractalOrder, coeffs: Vec<f64>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![0.0] } else { coeffs };
        FracPowerSeries { order, coeffs }
    }

    pub fn zero(order: FractalOrder) -> Self {
        FracPowerSeries::new(order, vec![0.0])
    }

    pub fn constant(order: FractalOrder, c: f64) -> Self {
        FracPowerSeries::new(order, vec![c])
    }

    /// Truncated `E_a` series: all coefficients one up to degree `k_max`.
    pub fn ml_exp(order: FractalOrder, k_max: usize) -> Self {
        FracPowerSeries::new(order, vec![1.0; k_max + 1])
    }

    /// Truncated `sin_a` series: `(-1)^m` at odd indices `2m + 1`.
    pub fn sin(order: FractalOrder, k_max: usize) -> Self {
        let mut coeffs = vec![0.0; k_max + 1];
        for (m, slot) in coeffs.iter_mut().skip(1).step_by(2).enumerate() {
            *slot = if m % 2 == 0 { 1.0 } else { -1.0 };
        }
        FracPowerSeries::new(order, coeffs)
    }

    /// Truncated `cos_a` series: `(-1)^m` at even indices `2m`.
    pub fn cos(order: FractalOrder, k_max: usize) -> Self {
        let mut coeffs = vec![0.0; k_max + 1];
        for (m, slot) in coeffs.iter_mut().step_by(2).enumerate() {
            *slot = if m % 2 == 0 { 1.0 } else { -1.0 };
        }
        FracPowerSeries::new(order, coeffs)
    }

    /// Single basis monomial `e_k`.
    pub fn monomial(order: FractalOrder, k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        FracPowerSeries::new(order, coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Strip trailing zeros (keeping at least the constant slot).
    pub fn normalize(mut self) -> Self {
        while self.coeffs.len() > 1 && *self.coeffs.last().unwrap() == 0.0 {
            self.coeffs.pop();
        }
        self
    }

    /// Local fractional derivative: exact coefficient left shift.
    pub fn lfd(&self) -> Self {
        if self.coeffs.len() == 1 {
            return FracPowerSeries::zero(self.order);
        }
        FracPowerSeries::new(self.order, self.coeffs[1..].to_vec())
    }

    /// Antiderivative with zero constant: exact coefficient right shift.
    pub fn lfi(&self) -> Self {
        if self.is_zero() {
            return FracPowerSeries::zero(self.order);
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        coeffs.extend_from_slice(&self.coeffs);
        FracPowerSeries::new(self.order, coeffs)
    }

    fn check_order(&self, rhs: &Self) -> Result<()> {
        if self.order == rhs.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch {
                left: self.order.alpha(),
                right: rhs.order.alpha(),
            })
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_order(rhs)?;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = vec![0.0; n];
        for (i, slot) in coeffs.iter_mut().enumerate() {
            *slot = self.coeffs.get(i).copied().unwrap_or(0.0)
                + rhs.coeffs.get(i).copied().unwrap_or(0.0);
        }
        Ok(FracPowerSeries::new(self.order, coeffs))
    }

    pub fn scale(&self, t: f64) -> Self {
        FracPowerSeries::new(self.order, self.coeffs.iter().map(|&c| c * t).collect())
    }

    /// Product against the generalized fractional binomial weights
    /// `B(j, k) = Gamma(1+(j+k)a) / (Gamma(1+ja) Gamma(1+ka))`, truncated at
    /// the sum of the operand degrees. This is the unique product consistent
    /// with pointwise multiplication of realized monomials; the Leibniz rule
    /// consequently fails for `alpha < 1`, which the claims registry measures
    /// rather than hides.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_order(rhs)?;
        let a = self.order.alpha();
        let (k1, k2) = (self.degree(), rhs.degree());
        let mut coeffs = vec![0.0; k1 + k2 + 1];
        for (n, slot) in coeffs.iter_mut().enumerate() {
            let j_lo = n.saturating_sub(k2);
            let j_hi = n.min(k1);
            let mut acc = Kahan::default();
            for j in j_lo..=j_hi {
                let c = self.coeffs[j] * rhs.coeffs[n - j];
                if c == 0.0 {
                    continue;
                }
                acc.add(c * binomial_weight(a, j, n - j)?);
            }
            *slot = acc.value();
        }
        Ok(FracPowerSeries::new(self.order, coeffs))
    }

    /// Realize the series at `x >= 0`, summing in ascending `k`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("series eval requires x >= 0, got {x}")));
        }
        let a = self.order.alpha();
        let xa = x.powf(a);
        let mut basis = 1.0_f64;
        let mut acc = Kahan::default();
        acc.add(self.coeffs[0]);
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            let ratio = gamma_ratio(1.0 + a * k as f64, 1.0 + a * (k - 1) as f64)?;
            basis = basis * xa / ratio;
            acc.add(c * basis);
        }
        Ok(acc.value())
    }

    /// Realize the series at a plane point through the principal power
    /// `w = z^alpha`; the monomials are read as `w^k / Gamma(1 + k alpha)`.
    pub fn eval_complex(&self, z: Complex64) -> Result<Complex64> {
        let a = self.order.alpha();
        let w = if z == Complex64::new(0.0, 0.0) {
            Complex64::new(0.0, 0.0)
        } else {
            z.powf(a)
        };
        let mut basis = Complex64::new(1.0, 0.0);
        let mut re = Kahan::default();
        let mut im = Kahan::default();
        re.add(self.coeffs[0]);
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            let ratio = gamma_ratio(1.0 + a * k as f64, 1.0 + a * (k - 1) as f64)?;
            basis = basis * w / ratio;
            re.add(c * basis.re);
            im.add(c * basis.im);
        }
        Ok(Complex64::new(re.value(), im.value()))
    }
}

/// `B(j, k)`; the ratio pairs the two largest gamma arguments so the split
/// stays finite as long as the result does. Edge weights are exactly one.
fn binomial_weight(a: f64, j: usize, k: usize) -> Result<f64> {
    if j == 0 || k == 0 {
        return Ok(1.0);
    }
    let n = (j + k) as f64;
    let (hi, lo) = (j.max(k) as f64, j.min(k) as f64);
    Ok(gamma_ratio(1.0 + n * a, 1.0 + hi * a)? / gamma(1.0 + lo * a)?)
}
