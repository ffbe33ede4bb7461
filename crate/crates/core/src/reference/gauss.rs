//! Composite Gauss-Legendre quadrature in arbitrary precision.

use rug::{Assign, Float};

/// Bits of binary precision that carry `digits` decimal digits.
pub(crate) fn bits_for_digits(digits: f64) -> u32 {
    (digits.max(1.0) * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub(crate) struct GaussLegendre {
    nodes: Vec<Float>,
    weights: Vec<Float>,
}

impl GaussLegendre {
    /// Roots of `P_n` by Newton iteration from the usual cosine guess.
    pub(crate) fn new(n: usize, bits: u32) -> Self {
        assert!(n >= 1);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let tol = Float::with_val(bits, Float::i_exp(1, 8 - bits as i32));
        for i in 0..n.div_ceil(2) {
            let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut x = Float::with_val(bits, guess);
            for _ in 0..200 {
                let (p, dp) = legendre_with_derivative(n, &x);
                let step = Float::with_val(bits, &p / &dp);
                x -= &step;
                if step.abs() < tol {
                    break;
                }
            }
            let (_, deriv) = legendre_with_derivative(n, &x);
            let one_minus_x2 = Float::with_val(bits, 1 - Float::with_val(bits, &x * &x));
            let denom = Float::with_val(bits, &one_minus_x2 * &deriv) * &deriv;
            let w = Float::with_val(bits, 2 / denom);
            if 2 * i + 1 == n {
                nodes.push(Float::new(bits));
                weights.push(w);
            } else {
                nodes.push(Float::with_val(bits, -&x));
                weights.push(w.clone());
                nodes.push(x);
                weights.push(w);
            }
        }
        Self { nodes, weights }
    }

    #[cfg(test)]
    pub(crate) fn order(&self) -> usize {
        self.nodes.len()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: &Float) -> (Float, Float) {
    let bits = x.prec();
    let mut p0 = Float::with_val(bits, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        // k P_k = (2k - 1) x P_{k-1} - (k - 1) P_{k-2}
        let a = Float::with_val(bits, x * &p1) * (2 * k - 1) as u32;
        let b = Float::with_val(bits, &p0 * (k - 1) as u32);
        let p2 = Float::with_val(bits, a - b) / k as u32;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (p0, Float::new(bits));
    }
    // (1 - x^2) P_n' = n (P_{n-1} - x P_n)
    let num = Float::with_val(bits, &p0 - Float::with_val(bits, x * &p1)) * n as u32;
    let den = Float::with_val(bits, 1 - Float::with_val(bits, x * x));
    let dp = Float::with_val(bits, num / den);
    (p1, dp)
}

/// A composite rule: `panels` equal panels on `[a, a + panels * width]`, each
/// carrying the same Gauss-Legendre order.
#[derive(Debug, Clone)]
pub(crate) struct PanelRule {
    start: Float,
    width: Float,
    panels: usize,
    base: GaussLegendre,
}

impl PanelRule {
    pub(crate) fn new(start: f64, end: f64, panels: usize, order: usize, bits: u32) -> Self {
        let start_f = Float::with_val(bits, start);
        let width = Float::with_val(bits, Float::with_val(bits, end) - &start_f) / panels as u32;
        Self {
            start: start_f,
            width,
            panels,
            base: GaussLegendre::new(order, bits),
        }
    }

    pub(crate) fn panels(&self) -> usize {
        self.panels
    }

    /// Calls `f(t, weight)` for every node of panels `range`, in ascending order.
    pub(crate) fn for_each_node(
        &self,
        range: std::ops::Range<usize>,
        mut f: impl FnMut(&Float, &Float),
    ) {
        let bits = self.width.prec();
        let half = Float::with_val(bits, &self.width / 2u32);
        let mut t = Float::new(bits);
        let mut w = Float::new(bits);
        for k in range {
            // Panel midpoint a + (k + 1/2) width.
            let mid = Float::with_val(bits, &self.width * (k as f64 + 0.5)) + &self.start;
            for (xi, wi) in self.base.nodes.iter().zip(&self.base.weights) {
                t.assign(&half * xi);
                t += &mid;
                w.assign(&half * wi);
                f(&t, &w);
            }
        }
    }
}

/// `log10(n!)`.
fn log10_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).log10()).sum()
}

/// Smallest Gauss-Legendre order whose a-priori error bound over `panels`
/// panels of width `width` stays below `10^-digits`.
///
/// The integrand's `2n`-th derivative is modelled as `(omega + sqrt(2n))^(2n)`:
/// `omega` covers exponential and oscillatory factors, the square-root term
/// the growth of Gaussian derivatives.
pub(crate) fn order_for_accuracy(width: f64, omega: f64, panels: usize, digits: f64) -> usize {
    let log_panels = (panels.max(1) as f64).log10();
    for n in 4..=600usize {
        let two_n = 2 * n;
        let deriv = two_n as f64 * (omega + (two_n as f64).sqrt()).log10();
        let bound = (two_n + 1) as f64 * width.log10() + 4.0 * log10_factorial(n)
            - ((two_n + 1) as f64).log10()
            - 3.0 * log10_factorial(two_n)
            + deriv;
        if bound + log_panels < -digits {
            return n;
        }
    }
    600
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn weights_sum_to_two_and_integrate_polynomials() {
        let bits = 200;
        for n in [1usize, 2, 5, 12, 31] {
            let gl = GaussLegendre::new(n, bits);
            assert_eq!(gl.order(), n);
            let sum = gl.weights.iter().fold(Float::new(bits), |acc, w| acc + w);
            assert!((sum - 2u32).abs() < 1e-55);
            // Exact for degree 2n - 1: integral of x^(2n-2) over [-1, 1].
            let deg = (2 * n - 2) as i32;
            let mut q = Float::new(bits);
            for (x, w) in gl.nodes.iter().zip(&gl.weights) {
                q += Float::with_val(bits, x.pow(deg)) * w;
            }
            let exact = Float::with_val(bits, 2) / (deg + 1) as u32;
            assert!((q - exact).abs() < 1e-55, "n = {n}");
        }
    }

    #[test]
    fn panel_rule_integrates_exponential() {
        let bits = 256;
        let rule = PanelRule::new(0.0, 3.0, 6, 20, bits);
        let mut q = Float::new(bits);
        rule.for_each_node(0..rule.panels(), |t, w| {
            q += Float::with_val(bits, t.exp_ref()) * w;
        });
        let exact = Float::with_val(bits, 3).exp() - 1u32;
        assert!((q - exact).abs() < 1e-60);
    }

    #[test]
    fn order_estimate_grows_with_accuracy() {
        let a = order_for_accuracy(0.1, 5.0, 100, 30.0);
        let b = order_for_accuracy(0.1, 5.0, 100, 120.0);
        assert!(b > a);
        assert!(a >= 4);
    }
}
