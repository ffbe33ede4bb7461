use proptest::prelude::*;

use dv_core::analysis::fmt_num;
use dv_core::{
    build_coefficients, dawson_real, default_params, faddeeva_w, high_accuracy_params, kappa,
    lambda_fn, voigt_k, voigt_l, CoefficientSet, EvalPoint,
};

fn coeffs() -> CoefficientSet {
    build_coefficients(default_params()).unwrap()
}

proptest! {
    #[test]
    fn kappa_even_lambda_odd(x in -20.0f64..20.0, y in 0.0f64..10.0) {
        let c = coeffs();
        let y = y + c.params().shift();
        prop_assert_eq!(kappa(x, y, &c).unwrap(), kappa(-x, y, &c).unwrap());
        prop_assert_eq!(lambda_fn(x, y, &c).unwrap(), -lambda_fn(-x, y, &c).unwrap());
    }

    #[test]
    fn dawson_is_odd(x in -50.0f64..50.0) {
        let c = coeffs();
        prop_assert_eq!(dawson_real(x, &c).unwrap(), -dawson_real(-x, &c).unwrap());
    }

    #[test]
    fn denominator_is_a_sum_of_squares(x in -15.0f64..15.0, y in 0.0f64..15.0) {
        for c in [coeffs(), build_coefficients(high_accuracy_params()).unwrap()] {
            let y = y + c.params().shift();
            let (x2, y2) = (x * x, y * y);
            for &b in c.beta() {
                let expanded = b * b + 2.0 * b * (y2 - x2) + (x2 + y2) * (x2 + y2);
                let squares = (b - x2 + y2).powi(2) + 4.0 * x2 * y2;
                prop_assert!(expanded > 0.0);
                prop_assert!((expanded - squares).abs() <= 1e-12 * squares);
            }
        }
    }

    #[test]
    fn voigt_is_bounded_on_the_half_plane(x in -40.0f64..40.0, y in 0.0f64..40.0) {
        let c = coeffs();
        let k = voigt_k(x, y, &c).unwrap();
        prop_assert!(k > -1e-15 && k <= 1.0 + 1e-12, "K({x}, {y}) = {k}");
    }

    #[test]
    fn faddeeva_combines_k_and_l(x in -30.0f64..30.0, y in 0.0f64..30.0) {
        let c = coeffs();
        let w = faddeeva_w(EvalPoint::new(x, y).unwrap(), &c).unwrap();
        prop_assert_eq!(w.re, voigt_k(x, y, &c).unwrap());
        prop_assert_eq!(w.im, voigt_l(x, y, &c).unwrap());
    }

    #[test]
    fn printed_numbers_round_trip(bits in any::<u64>()) {
        let v = f64::from_bits(bits);
        prop_assume!(v.is_finite());
        let s = fmt_num(v);
        let back: f64 = s.parse().unwrap();
        prop_assert_eq!(back.to_bits(), v.to_bits());
        prop_assert_eq!(fmt_num(back), s);
    }
}
