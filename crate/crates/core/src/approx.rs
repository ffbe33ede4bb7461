//! Rational approximations of the Voigt function `K`, the L-function `L`, the
//! Faddeeva function `w = K + iL` and the Dawson integral `F`, plus the
//! dispatcher that picks the right formula for a point of the upper
//! half-plane.
//!
//! All rational forms are evaluated on the shifted line `y + varsigma / 2`.
//! Near the real axis the real part of that expansion loses accuracy, so the
//! dispatcher switches to the Dawson-based small-`y` form below
//! [`SMALL_Y_THRESHOLD`]. Outside the disk `|z| <= RATIONAL_RADIUS` the
//! Laplace continued fraction takes over.

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::Serialize;

use crate::coeffs::CoefficientSet;
use crate::error::{DvError, Result};
use crate::laplace;

/// `sqrt(pi)`.
pub(crate) const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Points with `0 <= y <= SMALL_Y_THRESHOLD` inside the rational disk use the
/// small-`y` form for `K`.
pub const SMALL_Y_THRESHOLD: f64 = 1e-6;

/// Radius of the disk `|x + iy| <= RATIONAL_RADIUS` served by the rational forms.
pub const RATIONAL_RADIUS: f64 = 15.0;

/// A point `z = x + iy` of the closed upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalPoint {
    x: f64,
    y: f64,
}

impl EvalPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        Self::checked("EvalPoint", x, y)
    }

    pub(crate) fn checked(op: &'static str, x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(DvError::NonFinite { op, x, y });
        }
        if y < 0.0 {
            return Err(DvError::NegativeY { op, y });
        }
        Ok(Self { x, y })
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    /// `|z|^2`.
    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    #[inline]
    pub fn in_rational_disk(&self) -> bool {
        self.norm_sqr() <= RATIONAL_RADIUS * RATIONAL_RADIUS
    }
}

/// A complex value held as its real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl ComplexValue {
    #[inline]
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.re.hypot(self.im)
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Add for ComplexValue {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for ComplexValue {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for ComplexValue {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Mul<f64> for ComplexValue {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.re * s, self.im * s)
    }
}

impl Div for ComplexValue {
    type Output = Self;
    /// Smith's algorithm; avoids overflow in `|o|^2`.
    #[inline]
    fn div(self, o: Self) -> Self {
        if o.re.abs() >= o.im.abs() {
            let r = o.im / o.re;
            let d = o.re + o.im * r;
            Self::new((self.re + self.im * r) / d, (self.im - self.re * r) / d)
        } else {
            let r = o.re / o.im;
            let d = o.re * r + o.im;
            Self::new((self.re * r + self.im) / d, (self.im * r - self.re) / d)
        }
    }
}

impl Neg for ComplexValue {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

/// Which formula produced a value of `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    /// `kappa(x, y + varsigma/2)`, used for `|z| <= 15` and `y > 1e-6`.
    Rational,
    /// `exp(-x^2) - (2y/sqrt(pi)) [1 - sqrt(pi) x lambda(x, varsigma/2)]`.
    SmallY,
    /// Laplace continued fraction for `|z| > 15`.
    ContinuedFraction,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Rational => "rational",
            Branch::SmallY => "small_y",
            Branch::ContinuedFraction => "continued_fraction",
        }
    }
}

fn ensure_finite(op: &'static str, x: f64, y: f64) -> Result<()> {
    if x.is_finite() && y.is_finite() {
        Ok(())
    } else {
        Err(DvError::NonFinite { op, x, y })
    }
}

/// `kappa(x, y) = sum_m [a_m (b_m + y^2 - x^2) + g_m y (b_m + x^2 + y^2)]
///                     / [b_m^2 + 2 b_m (y^2 - x^2) + (x^2 + y^2)^2]`.
///
/// To approximate `K(x, y)` pass `y_shifted = y + varsigma / 2`.
pub fn kappa(x: f64, y_shifted: f64, coeffs: &CoefficientSet) -> Result<f64> {
    ensure_finite("kappa", x, y_shifted)?;
    Ok(kappa_unchecked(x, y_shifted, coeffs))
}

#[inline]
pub(crate) fn kappa_unchecked(x: f64, y: f64, coeffs: &CoefficientSet) -> f64 {
    let x2 = x * x;
    let y2 = y * y;
    let diff = y2 - x2;
    let r = x2 + y2;
    let r2 = r * r;
    let mut sum = 0.0;
    for (a, b, g) in coeffs.terms() {
        let num = a * (b + diff) + g * y * (b + r);
        let den = b * b + 2.0 * b * diff + r2;
        sum += num / den;
    }
    sum
}

/// `lambda(x, y) = sum_m x [2 a_m y + g_m (x^2 + y^2 - b_m)]
///                      / [b_m^2 + 2 b_m (y^2 - x^2) + (x^2 + y^2)^2]`.
///
/// `L(x, y)` is approximated by `lambda(x, y + varsigma / 2)`.
pub fn lambda_fn(x: f64, y_shifted: f64, coeffs: &CoefficientSet) -> Result<f64> {
    ensure_finite("lambda_fn", x, y_shifted)?;
    Ok(lambda_unchecked(x, y_shifted, coeffs))
}

#[inline]
pub(crate) fn lambda_unchecked(x: f64, y: f64, coeffs: &CoefficientSet) -> f64 {
    let x2 = x * x;
    let y2 = y * y;
    let diff = y2 - x2;
    let r = x2 + y2;
    let r2 = r * r;
    let two_y = 2.0 * y;
    let mut sum = 0.0;
    for (a, b, g) in coeffs.terms() {
        let num = x * (a * two_y + g * (r - b));
        let den = b * b + 2.0 * b * diff + r2;
        sum += num / den;
    }
    sum
}

/// `sin(u) / u`, with `sinc(0) = 1`.
pub fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 - u2 / 6.0 + u2 * u2 / 120.0
    } else {
        u.sin() / u
    }
}

/// Dawson integral of real argument, `F(x) = (sqrt(pi)/2) lambda(x, varsigma/2)`.
pub fn dawson_real(x: f64, coeffs: &CoefficientSet) -> Result<f64> {
    ensure_finite("dawson_real", x, 0.0)?;
    Ok(dawson_real_unchecked(x, coeffs))
}

#[inline]
pub(crate) fn dawson_real_unchecked(x: f64, coeffs: &CoefficientSet) -> f64 {
    0.5 * SQRT_PI * lambda_unchecked(x, coeffs.params().shift(), coeffs)
}

/// Small-`y` Voigt form keeping every trigonometric factor:
///
/// `K ~ exp(y^2 - x^2) cos(2xy) - (2 exp(y^2)/sqrt(pi)) [y sinc(2xy) - F(x) sin(2xy)]`.
pub fn voigt_small_y_full(p: EvalPoint, coeffs: &CoefficientSet) -> Result<f64> {
    let (x, y) = (p.x, p.y);
    let f = dawson_real_unchecked(x, coeffs);
    let u = 2.0 * x * y;
    let ey2 = (y * y).exp();
    let value = (y * y - x * x).exp() * u.cos() - 2.0 * ey2 / SQRT_PI * (y * sinc(u) - f * u.sin());
    if value.is_finite() {
        Ok(value)
    } else {
        Err(DvError::Overflow {
            op: "voigt_small_y_full",
            x,
            y,
        })
    }
}

/// Simplified small-`y` Voigt form,
/// `K ~ exp(-x^2) - (2y/sqrt(pi)) [1 - sqrt(pi) x lambda(x, varsigma/2)]`.
pub fn voigt_small_y(p: EvalPoint, coeffs: &CoefficientSet) -> Result<f64> {
    Ok(voigt_small_y_unchecked(p.x, p.y, coeffs))
}

#[inline]
pub(crate) fn voigt_small_y_unchecked(x: f64, y: f64, coeffs: &CoefficientSet) -> f64 {
    let lam = lambda_unchecked(x, coeffs.params().shift(), coeffs);
    (-x * x).exp() - 2.0 * y / SQRT_PI * (1.0 - SQRT_PI * x * lam)
}

/// Voigt function `K(x, y)` with the branch that produced it.
pub fn voigt_k_with_branch(p: EvalPoint, coeffs: &CoefficientSet) -> Result<(f64, Branch)> {
    let (x, y) = (p.x, p.y);
    if p.in_rational_disk() {
        if y > SMALL_Y_THRESHOLD {
            Ok((
                kappa_unchecked(x, y + coeffs.params().shift(), coeffs),
                Branch::Rational,
            ))
        } else {
            Ok((voigt_small_y_unchecked(x, y, coeffs), Branch::SmallY))
        }
    } else {
        let w = laplace::faddeeva_far(p)?;
        Ok((w.re, Branch::ContinuedFraction))
    }
}

/// Voigt function `K(x, y)`, the real part of `w(x + iy)`, for `y >= 0`.
pub fn voigt_k(x: f64, y: f64, coeffs: &CoefficientSet) -> Result<f64> {
    let p = EvalPoint::checked("voigt_K", x, y)?;
    voigt_k_with_branch(p, coeffs).map(|(v, _)| v)
}

/// L-function `L(x, y)`, the imaginary part of `w(x + iy)`, for `y >= 0`.
///
/// The shifted `lambda` stays accurate down to `y = 0`, so there is no
/// small-`y` branch.
pub fn voigt_l(x: f64, y: f64, coeffs: &CoefficientSet) -> Result<f64> {
    let p = EvalPoint::checked("voigt_L", x, y)?;
    if p.in_rational_disk() {
        Ok(lambda_unchecked(x, y + coeffs.params().shift(), coeffs))
    } else {
        Ok(laplace::faddeeva_far(p)?.im)
    }
}

/// Faddeeva function `w(x + iy) = K + iL` on the closed upper half-plane.
pub fn faddeeva_w(p: EvalPoint, coeffs: &CoefficientSet) -> Result<ComplexValue> {
    let (x, y) = (p.x, p.y);
    if p.in_rational_disk() {
        let ys = y + coeffs.params().shift();
        let re = if y > SMALL_Y_THRESHOLD {
            kappa_unchecked(x, ys, coeffs)
        } else {
            voigt_small_y_unchecked(x, y, coeffs)
        };
        Ok(ComplexValue::new(re, lambda_unchecked(x, ys, coeffs)))
    } else {
        laplace::faddeeva_far(p)
    }
}

/// Dawson integral of complex argument, `F(z) = (i sqrt(pi)/2) [exp(-z^2) - w(z)]`,
/// for `|z| <= 15`.
pub fn dawson_complex(p: EvalPoint, coeffs: &CoefficientSet) -> Result<ComplexValue> {
    let (x, y) = (p.x, p.y);
    if !p.in_rational_disk() {
        return Err(DvError::Domain {
            op: "dawson_complex",
            detail: format!("|z| = {} exceeds {RATIONAL_RADIUS}", p.norm_sqr().sqrt()),
        });
    }
    let w = faddeeva_w(p, coeffs)?;
    // exp(-z^2) = exp(y^2 - x^2) [cos(2xy) - i sin(2xy)]
    let e = (y * y - x * x).exp();
    if !e.is_finite() {
        return Err(DvError::Overflow {
            op: "dawson_complex",
            x,
            y,
        });
    }
    let (s, c) = (2.0 * x * y).sin_cos();
    let half = 0.5 * SQRT_PI;
    Ok(ComplexValue::new(
        half * (e * s + w.im),
        half * (e * c - w.re),
    ))
}
