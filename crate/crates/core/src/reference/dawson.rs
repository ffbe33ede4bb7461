use std::cmp::Ordering;

use rug::ops::Pow;
use rug::{Assign, Float};

use super::gauss::{bits_for_digits, order_for_accuracy, PanelRule};
use super::OraclePrecision;
use crate::error::{DvError, Result};

/// Largest `|x|` accepted by the Dawson oracles.
pub const DAWSON_ORACLE_MAX_X: f64 = 100.0;

fn check_domain(op: &'static str, x: f64) -> Result<()> {
    if !x.is_finite() || x.abs() > DAWSON_ORACLE_MAX_X {
        return Err(DvError::Domain {
            op,
            detail: format!("|x| must be finite and at most {DAWSON_ORACLE_MAX_X}, got {x}"),
        });
    }
    Ok(())
}

/// `F(x)` from the alternating Maclaurin series
/// `F(x) = sum_n (-2)^n x^(2n+1) / (1 * 3 * ... * (2n+1))`.
///
/// Terms grow to about `exp(x^2)` before they decay, so `x^2 log10(e)` guard
/// digits are added on top of the working precision.
pub fn dawson_series(x: f64, prec: &OraclePrecision) -> Result<Float> {
    check_domain("dawson_oracle", x)?;
    let guard = x * x * std::f64::consts::LOG10_E;
    let digits = prec.working_digits as f64 + guard + 10.0;
    let bits = bits_for_digits(digits);
    let xf = Float::with_val(bits, x);
    if x == 0.0 {
        return Ok(xf);
    }
    let ratio = Float::with_val(bits, -2 * Float::with_val(bits, &xf * &xf));
    let cutoff = Float::with_val(bits, 10u32).pow(-(prec.working_digits as i32 + 10));
    let peak = (2.0 * x * x) as u64;
    let mut term = xf.clone();
    let mut sum = xf;
    let mut n: u64 = 0;
    let mut scaled = Float::new(bits);
    loop {
        n += 1;
        term *= &ratio;
        term /= 2 * n + 1;
        sum += &term;
        if n > peak {
            scaled.assign(&sum * &cutoff);
            if term.cmp_abs(&scaled) == Some(Ordering::Less) {
                break;
            }
        }
    }
    Ok(sum)
}

/// `F(x) = integral_0^x exp(t^2 - x^2) dt` by composite Gauss-Legendre
/// quadrature, with a refinement check (halved panel width) as the error
/// estimate.
pub fn dawson_quadrature(x: f64, prec: &OraclePrecision) -> Result<Float> {
    check_domain("dawson_quadrature", x)?;
    let digits = prec.working_digits as f64 + 10.0;
    let bits = bits_for_digits(digits);
    let ax = x.abs();
    if ax == 0.0 {
        return Ok(Float::new(bits));
    }
    // The integrand falls by a factor e over 1 / (2x) near the upper limit.
    let width_target = (0.5 / ax).min(0.25);
    let panels = (ax / width_target).ceil() as usize;
    let width = ax / panels as f64;
    let order = order_for_accuracy(
        width,
        2.0 * ax,
        2 * panels,
        prec.working_digits as f64 + 5.0,
    );

    let coarse = dawson_panels(ax, panels, order, bits, digits);
    let fine = dawson_panels(ax, 2 * panels, order, bits, digits);
    let diff = Float::with_val(bits, &fine - &coarse).abs();
    let bound = Float::with_val(bits, fine.clone().abs() * prec.target_rel_error);
    if diff > bound {
        return Err(DvError::PrecisionUnreachable {
            op: "dawson_quadrature",
            x,
            y: 0.0,
            detail: format!("refinement changed the value by {:.3e}", diff.to_f64()),
        });
    }
    Ok(if x < 0.0 { -fine } else { fine })
}

fn dawson_panels(x: f64, panels: usize, order: usize, bits: u32, digits: f64) -> Float {
    let rule = PanelRule::new(0.0, x, panels, order, bits);
    let width = x / panels as f64;
    // Panels whose right edge b has x^2 - b^2 beyond the working digits add nothing.
    let negligible = digits * std::f64::consts::LN_10;
    let first = (0..panels)
        .find(|&k| {
            let b = (k + 1) as f64 * width;
            x * x - b * b < negligible
        })
        .unwrap_or(0);
    let x2 = Float::with_val(bits, x) * x;
    let mut sum = Float::new(bits);
    let mut arg = Float::new(bits);
    rule.for_each_node(first..panels, |t, w| {
        arg.assign(t * t);
        arg -= &x2;
        arg.exp_mut();
        arg *= w;
        sum += &arg;
    });
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> OraclePrecision {
        OraclePrecision::standard()
    }

    #[test]
    fn series_value_at_one() {
        let f = dawson_series(1.0, &prec()).unwrap();
        let expected = Float::parse("0.53807950691276841913638742040756").unwrap();
        let e = Float::with_val(f.prec(), expected);
        let rel = Float::with_val(f.prec(), &f - &e).abs() / &e;
        assert!(rel < 1e-30);
    }

    #[test]
    fn series_is_odd_and_zero_at_origin() {
        assert_eq!(dawson_series(0.0, &prec()).unwrap(), 0);
        for x in [0.3, 2.0, 7.5] {
            let a = dawson_series(x, &prec()).unwrap();
            let b = dawson_series(-x, &prec()).unwrap();
            assert!(a.is_sign_positive() && b.is_sign_negative());
            assert_eq!(a, -b);
        }
    }

    #[test]
    fn domain_is_enforced() {
        assert!(dawson_series(101.0, &prec()).is_err());
        assert!(dawson_series(f64::NAN, &prec()).is_err());
        assert!(dawson_quadrature(-150.0, &prec()).is_err());
    }

    #[test]
    fn quadrature_matches_series_at_moderate_x() {
        for x in [0.5, 3.0] {
            let s = dawson_series(x, &prec()).unwrap();
            let q = dawson_quadrature(x, &prec()).unwrap();
            let rel = Float::with_val(s.prec(), &s - &q).abs() / s.abs();
            assert!(rel < 1e-30, "x = {x}: {}", rel.to_f64());
        }
    }
}
