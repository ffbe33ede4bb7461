//! Fast rational approximations of the Dawson integral, the Voigt and
//! L-functions and the Faddeeva function `w(z)` on the closed upper
//! half-plane, together with slow arbitrary-precision reference
//! implementations and tools to measure the gap between them.
//!
//! ```
//! use dv_core::{build_coefficients, default_params, voigt_k};
//!
//! let coeffs = build_coefficients(default_params()).unwrap();
//! let k = voigt_k(1.0, 0.0, &coeffs).unwrap();
//! assert!((k - (-1.0f64).exp()).abs() < 1e-12);
//! ```

pub mod analysis;
pub mod approx;
pub mod coeffs;
pub mod error;
pub mod laplace;
pub mod reference;

pub use analysis::{
    benchmark, error_grid_voigt, relative_error, sweep_dawson_error, BenchOp, ErrorGrid,
    ErrorSeries, ReferenceSource, TimingStats,
};
pub use approx::{
    dawson_complex, dawson_real, faddeeva_w, kappa, lambda_fn, sinc, voigt_k, voigt_k_with_branch,
    voigt_l, voigt_small_y, voigt_small_y_full, Branch, ComplexValue, EvalPoint, RATIONAL_RADIUS,
    SMALL_Y_THRESHOLD,
};
pub use coeffs::{
    build_coefficients, default_params, high_accuracy_params, ApproximationParams, CoefficientSet,
};
pub use error::{DvError, Result};
pub use laplace::{laplace_cf, laplace_cf_converged};
pub use reference::{dawson_oracle, w_oracle, OraclePrecision};
