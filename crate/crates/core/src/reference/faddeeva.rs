//! Reference values of `w(x + iy)`.
//!
//! The primary oracle integrates
//!
//! ```text
//! w(x, y) = (1/sqrt(pi)) integral_0^inf exp(-t^2/4) exp(-yt) exp(ixt) dt
//! ```
//!
//! with composite Gauss-Legendre panels; a second rule with halved panel
//! width serves as the error estimate. The independent cross-check sums the
//! Maclaurin series of `erf` and forms `w(z) = exp(-z^2) erfc(-iz)`.

use std::cmp::Ordering;
use std::collections::HashMap;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Assign, Complex, Float};

use super::gauss::{bits_for_digits, order_for_accuracy, PanelRule};
use super::OraclePrecision;
use crate::approx::{ComplexValue, EvalPoint};
use crate::error::{DvError, Result};

/// Largest `x^2 + y^2` accepted by [`w_oracle`].
pub const W_ORACLE_MAX_NORM_SQR: f64 = 4.0e4;

/// Panels are split into this many contiguous chunks for parallel
/// accumulation; the chunks are summed in order, so the result does not
/// depend on the thread count.
const CHUNKS: usize = 16;

/// An arbitrary-precision complex value.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexBig {
    pub re: Float,
    pub im: Float,
}

impl ComplexBig {
    pub fn to_f64(&self) -> ComplexValue {
        ComplexValue::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// Extra decimal digits needed to resolve `K` and `L` against integrand
/// values of order one.
fn guard_digits(x: f64, y: f64) -> f64 {
    let z2 = x * x + y * y;
    let two_sqrt_pi = 2.0 * std::f64::consts::PI.sqrt();
    // On the axis K = exp(-x^2); off the axis the Lorentzian wing
    // y / (sqrt(pi) |z|^2) bounds K from below.
    let mut k_loss = x * x * std::f64::consts::LOG10_E;
    if y > 0.0 {
        k_loss = k_loss.min((two_sqrt_pi * (z2 + 1.0) / y).log10() + 3.0);
    }
    let l_loss = if x != 0.0 {
        (-x.abs().log10()).max(0.0)
    } else {
        0.0
    };
    k_loss.max(0.0) + l_loss + (two_sqrt_pi * (1.0 + z2)).log10() + 5.0
}

/// Panel layout shared by every cell of one oracle evaluation.
#[derive(Debug, Clone, Copy)]
struct Layout {
    t_end: f64,
    panels: usize,
    order: usize,
    bits: u32,
}

fn layout(xs: &[f64], ys: &[f64], prec: &OraclePrecision) -> Layout {
    let x_max = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let y_min = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let y_max = ys.iter().copied().fold(0.0f64, f64::max);
    let guard = xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| guard_digits(x, y)))
        .fold(0.0f64, f64::max);
    let target_digits = -prec.target_rel_error.log10();
    let accuracy = target_digits + guard + 5.0;
    let bits = bits_for_digits(prec.working_digits as f64 + guard + 10.0);
    // Truncate where exp(-T^2/4 - y T) drops below the working precision.
    let cut = (prec.working_digits as f64 + 10.0).max(accuracy + 5.0) * std::f64::consts::LN_10;
    let t_end = 2.0 * (-y_min + (y_min * y_min + cut).sqrt());
    // At least ten panels per oscillation period 2 pi / x.
    let freq = x_max.max(y_max).max(1.0);
    let width = (0.2 * std::f64::consts::PI / freq).min(0.5);
    let panels = (t_end / width).ceil() as usize;
    let order = order_for_accuracy(t_end / panels as f64, freq, 2 * panels, accuracy);
    Layout {
        t_end,
        panels,
        order,
        bits,
    }
}

/// Factors `exp(s v_k t)` for sorted abscissae `v_k`, built as a running
/// product over the distinct gaps `v_k - v_{k-1}`.
struct Ladder {
    /// Values sorted ascending, with their original positions.
    order: Vec<usize>,
    first: f64,
    /// Index into `gaps` for each step after the first.
    steps: Vec<usize>,
    gaps: Vec<f64>,
}

impl Ladder {
    fn new(values: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(Ordering::Equal));
        let mut gaps = Vec::new();
        let mut ids: HashMap<u64, usize> = HashMap::new();
        let mut steps = Vec::with_capacity(values.len().saturating_sub(1));
        for w in order.windows(2) {
            // Exact: consecutive sorted doubles of equal sign differ by a double
            // whenever the smaller is at least half the larger; otherwise the
            // gap is still stored exactly by promoting through Float below.
            let gap = values[w[1]] - values[w[0]];
            let id = *ids.entry(gap.to_bits()).or_insert_with(|| {
                gaps.push(gap);
                gaps.len() - 1
            });
            steps.push(id);
        }
        let first = order.first().map(|&i| values[i]).unwrap_or(0.0);
        Self {
            order,
            first,
            steps,
            gaps,
        }
    }

    /// Whether every running product reproduces the exact abscissa.
    fn is_exact(&self, values: &[f64], bits: u32) -> bool {
        let mut acc = Float::with_val(bits, self.first);
        for (k, &id) in self.steps.iter().enumerate() {
            acc += self.gaps[id];
            if acc != values[self.order[k + 1]] {
                return false;
            }
        }
        true
    }
}

/// Accumulated `sum w_k exp(-t_k^2/4 - y t_k) (cos x t_k, sin x t_k)` for every
/// cell of panels `range`, row-major `[j * nx + i]`.
struct Accumulator<'a> {
    xs: &'a [f64],
    ys: &'a [f64],
    x_ladder: Option<Ladder>,
    y_ladder: Option<Ladder>,
    bits: u32,
}

impl<'a> Accumulator<'a> {
    fn new(xs: &'a [f64], ys: &'a [f64], bits: u32) -> Self {
        let x_ladder = Some(Ladder::new(xs)).filter(|l| l.is_exact(xs, bits));
        let y_ladder = Some(Ladder::new(ys)).filter(|l| l.is_exact(ys, bits));
        Self {
            xs,
            ys,
            x_ladder,
            y_ladder,
            bits,
        }
    }

    fn run(&self, rule: &PanelRule, range: std::ops::Range<usize>) -> Vec<(Float, Float)> {
        let bits = self.bits;
        let (nx, ny) = (self.xs.len(), self.ys.len());
        let mut acc: Vec<(Float, Float)> = (0..nx * ny)
            .map(|_| (Float::new(bits), Float::new(bits)))
            .collect();
        let mut cos_x: Vec<Float> = (0..nx).map(|_| Float::new(bits)).collect();
        let mut sin_x: Vec<Float> = (0..nx).map(|_| Float::new(bits)).collect();
        let mut damp: Vec<Float> = (0..ny).map(|_| Float::new(bits)).collect();
        let mut gauss = Float::new(bits);
        let mut tmp = Float::new(bits);
        let mut tmp2 = Float::new(bits);

        rule.for_each_node(range, |t, w| {
            // w exp(-t^2/4)
            gauss.assign(t * t);
            gauss /= -4i32;
            gauss.exp_mut();
            gauss *= w;

            self.fill_trig(t, &mut cos_x, &mut sin_x, &mut tmp, &mut tmp2);
            self.fill_damping(t, &gauss, &mut damp, &mut tmp);

            for (j, d) in damp.iter().enumerate() {
                let row = &mut acc[j * nx..(j + 1) * nx];
                for ((cell, c), s) in row.iter_mut().zip(&cos_x).zip(&sin_x) {
                    tmp.assign(d * c);
                    cell.0 += &tmp;
                    tmp.assign(d * s);
                    cell.1 += &tmp;
                }
            }
        });
        acc
    }

    fn fill_trig(
        &self,
        t: &Float,
        cos_x: &mut [Float],
        sin_x: &mut [Float],
        tmp: &mut Float,
        tmp2: &mut Float,
    ) {
        let bits = self.bits;
        let Some(ladder) = &self.x_ladder else {
            for (i, &x) in self.xs.iter().enumerate() {
                tmp.assign(t * x);
                (&mut sin_x[i], &mut cos_x[i]).assign(tmp.sin_cos_ref());
            }
            return;
        };
        let gap_trig: Vec<(Float, Float)> = ladder
            .gaps
            .iter()
            .map(|&g| {
                let arg = Float::with_val(bits, t * g);
                let (s, c) = arg.sin_cos(Float::new(bits));
                (c, s)
            })
            .collect();
        let i0 = ladder.order[0];
        tmp.assign(t * ladder.first);
        (&mut sin_x[i0], &mut cos_x[i0]).assign(tmp.sin_cos_ref());
        for (k, &id) in ladder.steps.iter().enumerate() {
            let (prev, next) = (ladder.order[k], ladder.order[k + 1]);
            let (gc, gs) = &gap_trig[id];
            // (c + i s)(gc + i gs)
            tmp.assign(&cos_x[prev] * gc);
            tmp2.assign(&sin_x[prev] * gs);
            *tmp -= &*tmp2;
            let new_cos = tmp.clone();
            tmp.assign(&sin_x[prev] * gc);
            tmp2.assign(&cos_x[prev] * gs);
            *tmp += &*tmp2;
            sin_x[next].assign(&*tmp);
            cos_x[next] = new_cos;
        }
    }

    fn fill_damping(&self, t: &Float, gauss: &Float, damp: &mut [Float], tmp: &mut Float) {
        let bits = self.bits;
        let Some(ladder) = &self.y_ladder else {
            for (j, &y) in self.ys.iter().enumerate() {
                tmp.assign(t * -y);
                tmp.exp_mut();
                damp[j].assign(&*tmp * gauss);
            }
            return;
        };
        let gap_exp: Vec<Float> = ladder
            .gaps
            .iter()
            .map(|&g| Float::with_val(bits, t * -g).exp())
            .collect();
        let j0 = ladder.order[0];
        tmp.assign(t * -ladder.first);
        tmp.exp_mut();
        damp[j0].assign(&*tmp * gauss);
        for (k, &id) in ladder.steps.iter().enumerate() {
            let (prev, next) = (ladder.order[k], ladder.order[k + 1]);
            tmp.assign(&damp[prev] * &gap_exp[id]);
            damp[next].assign(&*tmp);
        }
    }
}

fn integrate(acc: &Accumulator<'_>, layout: &Layout, panels: usize) -> Vec<(Float, Float)> {
    let rule = PanelRule::new(0.0, layout.t_end, panels, layout.order, layout.bits);
    let panels = rule.panels();
    let chunks: Vec<std::ops::Range<usize>> = (0..CHUNKS)
        .map(|c| (c * panels / CHUNKS)..((c + 1) * panels / CHUNKS))
        .filter(|r| !r.is_empty())
        .collect();
    let partial: Vec<Vec<(Float, Float)>> =
        chunks.into_par_iter().map(|r| acc.run(&rule, r)).collect();
    let mut total = partial
        .into_iter()
        .reduce(|mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                x.0 += y.0;
                x.1 += y.1;
            }
            a
        })
        .unwrap_or_default();
    let inv_sqrt_pi = Float::with_val(layout.bits, rug::float::Constant::Pi)
        .sqrt()
        .recip();
    for cell in &mut total {
        cell.0 *= &inv_sqrt_pi;
        cell.1 *= &inv_sqrt_pi;
    }
    total
}

fn within(coarse: &Float, fine: &Float, tol: f64) -> bool {
    if coarse == fine {
        return true;
    }
    let diff = Float::with_val(fine.prec(), coarse - fine).abs();
    let bound = Float::with_val(fine.prec(), fine.abs_ref()) * tol;
    diff <= bound
}

fn validate_point(x: f64, y: f64) -> Result<()> {
    EvalPoint::checked("w_oracle", x, y)?;
    if x * x + y * y > W_ORACLE_MAX_NORM_SQR {
        return Err(DvError::Domain {
            op: "w_oracle",
            detail: format!(
                "x^2 + y^2 = {} exceeds {W_ORACLE_MAX_NORM_SQR}",
                x * x + y * y
            ),
        });
    }
    Ok(())
}

/// Reference `w` on the tensor grid `xs x ys`, row-major `[j * xs.len() + i]`.
///
/// All cells share one quadrature layout, sized for the hardest cell.
pub fn w_oracle_grid(xs: &[f64], ys: &[f64], prec: &OraclePrecision) -> Result<Vec<ComplexBig>> {
    prec.validate()?;
    if xs.is_empty() || ys.is_empty() {
        return Ok(Vec::new());
    }
    for &y in ys {
        for &x in xs {
            validate_point(x, y)?;
        }
    }
    let layout = layout(xs, ys, prec);
    let acc = Accumulator::new(xs, ys, layout.bits);
    let coarse = integrate(&acc, &layout, layout.panels);
    let fine = integrate(&acc, &layout, 2 * layout.panels);
    let nx = xs.len();
    let mut out = Vec::with_capacity(fine.len());
    for (k, (c, f)) in coarse.iter().zip(fine).enumerate() {
        let tol = prec.target_rel_error;
        if !(within(&c.0, &f.0, tol) && within(&c.1, &f.1, tol)) {
            return Err(DvError::PrecisionUnreachable {
                op: "w_oracle",
                x: xs[k % nx],
                y: ys[k / nx],
                detail: format!(
                    "panel refinement disagrees ({} panels of order {})",
                    layout.panels, layout.order
                ),
            });
        }
        out.push(ComplexBig { re: f.0, im: f.1 });
    }
    Ok(out)
}

/// Reference `w(x + iy)` in arbitrary precision.
pub fn w_oracle_big(p: EvalPoint, prec: &OraclePrecision) -> Result<ComplexBig> {
    let mut v = w_oracle_grid(&[p.x()], &[p.y()], prec)?;
    Ok(v.remove(0))
}

/// Reference `w(x + iy)` rounded to double precision.
pub fn w_oracle(p: EvalPoint, prec: &OraclePrecision) -> Result<ComplexValue> {
    w_oracle_big(p, prec).map(|w| w.to_f64())
}

/// `w(z) = exp(-z^2) erfc(-iz)` from the Maclaurin series of `erf`, carried
/// out with `working_digits` plus `2 |z|^2 log10(e)` guard digits.
pub fn w_erfc_big(p: EvalPoint, working_digits: u32) -> Result<ComplexBig> {
    let (x, y) = (p.x(), p.y());
    let z2 = x * x + y * y;
    if z2 > 900.0 {
        return Err(DvError::Domain {
            op: "w_erfc",
            detail: format!("|z| = {} exceeds 30", z2.sqrt()),
        });
    }
    let digits = working_digits as f64 + 2.0 * z2 * std::f64::consts::LOG10_E + 20.0;
    let bits = bits_for_digits(digits);
    let z = Complex::with_val(bits, (x, y));
    // zeta = -i z
    let zeta = Complex::with_val(bits, (y, -x));
    let zeta2 = Complex::with_val(bits, &zeta * &zeta);
    let cutoff = Float::with_val(bits, 10u32).pow(-(digits as i32 + 10));

    // erf(zeta) = (2/sqrt(pi)) sum_n (-1)^n zeta^(2n+1) / (n! (2n+1))
    let mut power = zeta.clone();
    let mut sum = zeta.clone();
    let mut n: u32 = 0;
    let peak = z2 as u32 + 1;
    loop {
        n += 1;
        power *= &zeta2;
        power /= -(n as i32);
        let term = Complex::with_val(bits, &power / (2 * n + 1));
        sum += &term;
        if n > peak {
            let scale = Float::with_val(bits, sum.abs_ref()) * &cutoff;
            if Float::with_val(bits, term.abs_ref()) <= scale {
                break;
            }
        }
    }
    let two_over_sqrt_pi = Float::with_val(bits, rug::float::Constant::Pi)
        .sqrt()
        .recip()
        * 2u32;
    let erf = sum * &two_over_sqrt_pi;
    let erfc = Complex::with_val(bits, 1 - erf);
    let minus_z2 = -Complex::with_val(bits, &z * &z);
    let w = minus_z2.exp() * erfc;
    let (re, im) = w.into_real_imag();
    Ok(ComplexBig { re, im })
}

/// `K(0, y) = exp(y^2) erfc(y)` via the library `erfc` of the multiprecision backend.
pub fn voigt_axis_closed_form(y: f64, working_digits: u32) -> Float {
    let bits = bits_for_digits(working_digits as f64 + y * y * std::f64::consts::LOG10_E + 10.0);
    let yf = Float::with_val(bits, y);
    let e = Float::with_val(bits, &yf * &yf).exp();
    e * yf.erfc()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: &Float, b: &Float) -> f64 {
        if b.is_zero() {
            return a.to_f64().abs();
        }
        (Float::with_val(b.prec(), a - b) / b).abs().to_f64()
    }

    fn pt(x: f64, y: f64) -> EvalPoint {
        EvalPoint::new(x, y).unwrap()
    }

    #[test]
    fn origin_is_one() {
        let w = w_oracle_big(pt(0.0, 0.0), &OraclePrecision::standard()).unwrap();
        assert!(rel(&w.re, &Float::with_val(w.re.prec(), 1)) < 1e-40);
        assert!(w.im.is_zero());
    }

    #[test]
    fn quadrature_agrees_with_erfc_series() {
        let prec = OraclePrecision::standard();
        for (x, y) in [(1.0, 1.0), (0.5, 1e-7), (3.0, 0.2)] {
            let q = w_oracle_big(pt(x, y), &prec).unwrap();
            let e = w_erfc_big(pt(x, y), 300).unwrap();
            assert!(rel(&q.re, &e.re) < 1e-25, "re at ({x}, {y})");
            assert!(rel(&q.im, &e.im) < 1e-25, "im at ({x}, {y})");
        }
    }

    #[test]
    fn axis_closed_form_matches_erfc_route() {
        for y in [1e-7, 1e-3, 1.0] {
            let closed = voigt_axis_closed_form(y, 60);
            let e = w_erfc_big(pt(0.0, y), 60).unwrap();
            assert!(rel(&e.re, &closed) < 1e-40);
        }
    }

    #[test]
    fn grid_matches_point_evaluation() {
        let prec = OraclePrecision::standard();
        let xs = [0.0, 0.25, 0.5, 0.75];
        let ys = [0.0, 0.5];
        let grid = w_oracle_grid(&xs, &ys, &prec).unwrap();
        for (j, &y) in ys.iter().enumerate() {
            for (i, &x) in xs.iter().enumerate() {
                let p = w_erfc_big(pt(x, y), 100).unwrap();
                let g = &grid[j * xs.len() + i];
                assert!(rel(&g.re, &p.re) < 1e-28, "({x}, {y})");
                if x != 0.0 {
                    assert!(rel(&g.im, &p.im) < 1e-28, "({x}, {y})");
                } else {
                    assert!(g.im.is_zero());
                }
            }
        }
    }

    #[test]
    fn domain_checks() {
        let prec = OraclePrecision::standard();
        assert!(matches!(
            w_oracle(pt(150.0, 150.0), &prec),
            Err(DvError::Domain { .. })
        ));
        assert!(w_erfc_big(pt(40.0, 0.0), 50).is_err());
        assert!(w_oracle_grid(&[1.0], &[-1.0], &prec).is_err());
    }
}
