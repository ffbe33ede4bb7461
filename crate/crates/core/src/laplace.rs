//! Laplace continued fraction for `w(z)` outside the rational disk:
//!
//! ```text
//! w(z) = (i/sqrt(pi)) / (z - (1/2) / (z - 1 / (z - (3/2) / (z - ...))))
//! ```
//!
//! The fraction converges on the open upper half-plane; for `|z| > 15` a few
//! dozen levels reach double precision.

use crate::approx::{ComplexValue, EvalPoint, RATIONAL_RADIUS, SQRT_PI};
use crate::error::{DvError, Result};

/// Successive depths must agree to this relative tolerance, per component.
pub const CF_TOLERANCE: f64 = 1e-14;
/// Depth at which the doubling search starts.
pub const CF_START_DEPTH: usize = 4;
/// Largest depth tried before giving up.
pub const CF_MAX_DEPTH: usize = 64;

/// Evaluates the fraction bottom-up with `depth` levels of `z`.
///
/// Depth 1 is the leading asymptotic term `i / (sqrt(pi) z)`.
pub fn laplace_cf(p: EvalPoint, depth: usize) -> Result<ComplexValue> {
    if depth == 0 {
        return Err(DvError::Domain {
            op: "laplace_cf",
            detail: "depth must be at least 1".into(),
        });
    }
    if p.in_rational_disk() {
        return Err(DvError::Domain {
            op: "laplace_cf",
            detail: format!(
                "|z| = {} is inside the rational disk of radius {RATIONAL_RADIUS}",
                p.norm_sqr().sqrt()
            ),
        });
    }
    Ok(eval_depth(p, depth))
}

#[inline]
fn eval_depth(p: EvalPoint, depth: usize) -> ComplexValue {
    let z = ComplexValue::new(p.x(), p.y());
    let mut tail = z;
    for k in (1..depth).rev() {
        tail = z - ComplexValue::new(0.5 * k as f64, 0.0) / tail;
    }
    ComplexValue::new(0.0, 1.0 / SQRT_PI) / tail
}

fn agrees(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= CF_TOLERANCE * b.abs()
}

/// Doubles the depth from [`CF_START_DEPTH`] until two successive depths
/// agree to [`CF_TOLERANCE`] in both components.
pub fn laplace_cf_converged(p: EvalPoint) -> Result<ComplexValue> {
    if p.in_rational_disk() {
        // Same domain error as the fixed-depth entry point.
        return laplace_cf(p, 1);
    }
    let mut depth = CF_START_DEPTH;
    let mut prev = eval_depth(p, depth);
    while depth < CF_MAX_DEPTH {
        depth *= 2;
        let next = eval_depth(p, depth);
        if agrees(prev.re, next.re) && agrees(prev.im, next.im) {
            return Ok(next);
        }
        prev = next;
    }
    Err(DvError::NoConvergence {
        x: p.x(),
        y: p.y(),
        depth: CF_MAX_DEPTH,
    })
}

/// `w(z)` for `|z| > 15` as used by the dispatcher.
///
/// On the real axis the fraction has no real part, so `K(x, 0) = exp(-x^2)`
/// is substituted there.
pub(crate) fn faddeeva_far(p: EvalPoint) -> Result<ComplexValue> {
    let mut w = laplace_cf_converged(p)?;
    if p.y() == 0.0 {
        w.re = (-p.x() * p.x()).exp();
    }
    Ok(w)
}
