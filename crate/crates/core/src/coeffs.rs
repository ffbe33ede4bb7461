//! Tuning constants and the precomputed coefficient sequences shared by every
//! rational form in [`crate::approx`].

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{DvError, Result};

/// The four constants that define one approximation instance.
///
/// `h` is the sampling step, `m_max` the number of rational terms, `varsigma`
/// the shift that moves the evaluation line to `y + varsigma / 2`, and
/// `n_terms` the half-width `N` of the sampling sum `n = -N..=N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproximationParams {
    pub h: f64,
    pub m_max: usize,
    pub varsigma: f64,
    pub n_terms: usize,
}

impl ApproximationParams {
    pub fn new(h: f64, m_max: usize, varsigma: f64, n_terms: usize) -> Result<Self> {
        let params = Self {
            h,
            m_max,
            varsigma,
            n_terms,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(DvError::InvalidParams(format!(
                "h must be finite and positive, got {}",
                self.h
            )));
        }
        if !(self.varsigma.is_finite() && self.varsigma > 0.0) {
            return Err(DvError::InvalidParams(format!(
                "varsigma must be finite and positive, got {}",
                self.varsigma
            )));
        }
        if self.m_max == 0 {
            return Err(DvError::InvalidParams("m_max must be at least 1".into()));
        }
        if self.n_terms == 0 {
            return Err(DvError::InvalidParams("n_terms must be at least 1".into()));
        }
        Ok(())
    }

    /// Half of `varsigma`: the amount added to `y` before evaluating a rational form.
    #[inline]
    pub fn shift(&self) -> f64 {
        0.5 * self.varsigma
    }
}

impl Default for ApproximationParams {
    fn default() -> Self {
        default_params()
    }
}

/// `h = 0.293, m_max = 12, varsigma = 2.75, N = 23`.
pub fn default_params() -> ApproximationParams {
    ApproximationParams {
        h: 0.293,
        m_max: 12,
        varsigma: 2.75,
        n_terms: 23,
    }
}

/// Same as [`default_params`] with `h = 0.25` and `m_max = 16`.
pub fn high_accuracy_params() -> ApproximationParams {
    ApproximationParams {
        h: 0.25,
        m_max: 16,
        varsigma: 2.75,
        n_terms: 23,
    }
}

/// Precomputed `alpha_m`, `beta_m`, `gamma_m` for `m = 1..=m_max` (stored 0-based).
///
/// In the partial-fraction expansion of `exp(-x^2)` these appear as
/// `A_m = alpha_m`, `B_m = -i gamma_m` and `C_m^2 = beta_m`; only the real
/// triplet is stored.
///
/// Immutable once built, so a single set can be shared across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    params: ApproximationParams,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    gamma: Vec<f64>,
}

impl CoefficientSet {
    pub fn params(&self) -> &ApproximationParams {
        &self.params
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Iterates `(alpha_m, beta_m, gamma_m)` in ascending `m`.
    #[inline]
    pub(crate) fn terms(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.alpha
            .iter()
            .zip(&self.beta)
            .zip(&self.gamma)
            .map(|((&a, &b), &g)| (a, b, g))
    }
}

/// Builds the coefficient sequences for `params`.
///
/// The sampling sum runs over `n = -N..=N` in ascending order with one
/// exponential `exp(varsigma^2/4 - n^2 h^2)` per term, so the output is
/// bit-reproducible for a given floating-point profile.
pub fn build_coefficients(params: ApproximationParams) -> Result<CoefficientSet> {
    params.validate()?;
    let ApproximationParams {
        h,
        m_max,
        varsigma,
        n_terms,
    } = params;
    let mf = m_max as f64;
    let n = n_terms as i64;
    let sqrt_pi = PI.sqrt();
    let quarter_s2 = 0.25 * varsigma * varsigma;

    let mut weights = Vec::with_capacity(2 * n_terms + 1);
    for k in -n..=n {
        let nh = k as f64 * h;
        let weight = (quarter_s2 - nh * nh).exp();
        if !weight.is_finite() {
            return Err(DvError::InvalidParams(format!(
                "exp(varsigma^2/4 - n^2 h^2) overflows for varsigma = {varsigma}, n = {k}"
            )));
        }
        weights.push((nh + 0.5 * varsigma, weight));
    }

    let mut alpha = Vec::with_capacity(m_max);
    let mut beta = Vec::with_capacity(m_max);
    let mut gamma = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let half_odd = m as f64 - 0.5;
        let freq = PI * half_odd / (mf * h);
        let (mut sin_sum, mut cos_sum) = (0.0, 0.0);
        for &(arg, weight) in &weights {
            let (s, c) = (freq * arg).sin_cos();
            sin_sum += weight * s;
            cos_sum += weight * c;
        }
        let a = sqrt_pi * half_odd / (2.0 * mf * mf * h) * sin_sum;
        let b = (PI * half_odd / (2.0 * mf * h)).powi(2);
        let g = cos_sum / (mf * sqrt_pi);
        if !(a.is_finite() && b.is_finite() && g.is_finite()) {
            return Err(DvError::InvalidParams(format!(
                "non-finite coefficient at m = {m}"
            )));
        }
        alpha.push(a);
        beta.push(b);
        gamma.push(g);
    }

    Ok(CoefficientSet {
        params,
        alpha,
        beta,
        gamma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_match_published_constants() {
        let d = default_params();
        assert_eq!((d.h, d.m_max, d.varsigma, d.n_terms), (0.293, 12, 2.75, 23));
        let ha = high_accuracy_params();
        assert_eq!(
            (ha.h, ha.m_max, ha.varsigma, ha.n_terms),
            (0.25, 16, 2.75, 23)
        );
        assert!(ha.m_max > d.m_max);
        assert_eq!(default_params(), default_params());
    }

    #[test]
    fn sequences_have_m_max_entries() {
        for p in [default_params(), high_accuracy_params()] {
            let c = build_coefficients(p).unwrap();
            assert_eq!(c.alpha().len(), p.m_max);
            assert_eq!(c.beta().len(), p.m_max);
            assert_eq!(c.gamma().len(), p.m_max);
        }
    }

    #[test]
    fn first_beta_matches_closed_form() {
        // (pi * 0.5 / (2 * 12 * 0.293))^2 evaluated at 50 digits:
        // 0.049897872610637161...
        let c = build_coefficients(default_params()).unwrap();
        let expected = 4.989_787_261_063_716e-2;
        assert!((c.beta()[0] - expected).abs() <= 2e-16 * expected);
    }

    #[test]
    fn beta_ratio_is_square_of_odd_index() {
        let c = build_coefficients(high_accuracy_params()).unwrap();
        let ratio = c.beta()[15] / c.beta()[0];
        assert!((ratio - 961.0).abs() < 1e-12);
        assert!(c.beta().windows(2).all(|w| w[1] > w[0]));
        assert!(c.beta()[0] > 0.0);
    }

    #[test]
    fn rebuild_is_bit_identical() {
        let a = build_coefficients(default_params()).unwrap();
        let b = build_coefficients(default_params()).unwrap();
        for (x, y) in a.alpha().iter().zip(b.alpha()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        for (x, y) in a.gamma().iter().zip(b.gamma()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn factored_exponential_agrees_with_per_term_form() {
        for p in [default_params(), high_accuracy_params()] {
            let c = build_coefficients(p).unwrap();
            let mf = p.m_max as f64;
            let scale = (p.varsigma * p.varsigma / 4.0).exp();
            for m in 1..=p.m_max {
                let half_odd = m as f64 - 0.5;
                let freq = PI * half_odd / (mf * p.h);
                let (mut s, mut cs) = (0.0, 0.0);
                for n in -(p.n_terms as i64)..=(p.n_terms as i64) {
                    let nh = n as f64 * p.h;
                    let w = (-nh * nh).exp();
                    s += w * (freq * (nh + p.varsigma / 2.0)).sin();
                    cs += w * (freq * (nh + p.varsigma / 2.0)).cos();
                }
                let a = PI.sqrt() * half_odd / (2.0 * mf * mf * p.h) * scale * s;
                let g = scale * cs / (mf * PI.sqrt());
                let ia = m - 1;
                // alpha and gamma are sums of O(1) terms; compare against the
                // magnitude of the largest coefficient to absorb cancellation.
                let amax = c.alpha().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
                let gmax = c.gamma().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
                assert!((a - c.alpha()[ia]).abs() <= 1e-14 * amax, "alpha m={m}");
                assert!((g - c.gamma()[ia]).abs() <= 1e-14 * gmax, "gamma m={m}");
            }
        }
    }

    #[test]
    fn invalid_params_are_rejected() {
        assert!(ApproximationParams::new(0.0, 12, 2.75, 23).is_err());
        assert!(ApproximationParams::new(-0.3, 12, 2.75, 23).is_err());
        assert!(ApproximationParams::new(0.293, 0, 2.75, 23).is_err());
        assert!(ApproximationParams::new(0.293, 12, 0.0, 23).is_err());
        assert!(ApproximationParams::new(0.293, 12, f64::NAN, 23).is_err());
        assert!(ApproximationParams::new(0.293, 12, 2.75, 0).is_err());
    }

    #[test]
    fn overflowing_weight_is_detected() {
        let p = ApproximationParams {
            h: 0.293,
            m_max: 12,
            varsigma: 60.0,
            n_terms: 23,
        };
        assert!(matches!(
            build_coefficients(p),
            Err(DvError::InvalidParams(_))
        ));
    }
}
