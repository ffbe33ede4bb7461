//! Shared fixtures for the criterion benchmarks.

use dv_core::analysis::bench_points;
use dv_core::{build_coefficients, default_params, CoefficientSet};

/// Points per benchmark iteration.
pub const BATCH: usize = 10_000;

pub fn fixture() -> (CoefficientSet, Vec<(f64, f64)>) {
    let coeffs = build_coefficients(default_params()).expect("default parameters are valid");
    (coeffs, bench_points(BATCH))
}

/// Points with `15 < |z| <= 60`, for the continued-fraction path.
pub fn far_points(n: usize) -> Vec<(f64, f64)> {
    bench_points(n)
        .into_iter()
        .map(|(x, y)| (20.0 + 2.0 * x, 1.0 + 1e6 * y))
        .collect()
}
