use std::hint::black_box;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::approx::{
    dawson_real_unchecked, kappa_unchecked, lambda_unchecked, voigt_k_with_branch,
    voigt_small_y_unchecked, EvalPoint, SMALL_Y_THRESHOLD,
};
use crate::coeffs::CoefficientSet;
use crate::error::{DvError, Result};

/// Seed of the benchmark point set.
pub const BENCH_SEED: u64 = 0x005E_ED0F_D0A5;

/// Smallest accepted point count.
pub const MIN_BENCH_POINTS: usize = 10_000;

/// Operations that [`benchmark`] can time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchOp {
    Kappa,
    Lambda,
    VoigtSmallY,
    VoigtK,
    DawsonReal,
}

impl BenchOp {
    pub const ALL: [BenchOp; 5] = [
        BenchOp::Kappa,
        BenchOp::Lambda,
        BenchOp::VoigtSmallY,
        BenchOp::VoigtK,
        BenchOp::DawsonReal,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BenchOp::Kappa => "kappa",
            BenchOp::Lambda => "lambda",
            BenchOp::VoigtSmallY => "voigt_small_y",
            BenchOp::VoigtK => "voigt_K",
            BenchOp::DawsonReal => "dawson_real",
        }
    }
}

impl FromStr for BenchOp {
    type Err = DvError;

    fn from_str(s: &str) -> Result<Self> {
        BenchOp::ALL
            .into_iter()
            .find(|op| op.as_str() == s)
            .ok_or_else(|| DvError::UnknownSelector(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingStats {
    pub op_name: String,
    pub points_evaluated: usize,
    pub wall_seconds: f64,
    /// Evaluations per second, `points_evaluated * repetitions / wall_seconds`.
    pub throughput: f64,
    pub repetitions: usize,
    pub seed: u64,
    /// Sum of every result, kept so the evaluations cannot be optimized away.
    pub checksum: f64,
}

/// `n` points with `x` uniform on `[0, 15]` and `y` uniform on `[0, 1e-6)`,
/// drawn from ChaCha8 seeded with [`BENCH_SEED`].
pub fn bench_points(n: usize) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(BENCH_SEED);
    (0..n)
        .map(|_| {
            let x = rng.random_range(0.0..15.0);
            let y = rng.random_range(0.0..SMALL_Y_THRESHOLD);
            (x, y)
        })
        .collect()
}

/// Times `repetitions` passes of `op` over [`bench_points`]`(n_points)` on
/// the calling thread.
pub fn benchmark(
    op: &str,
    n_points: usize,
    repetitions: usize,
    coeffs: &CoefficientSet,
) -> Result<TimingStats> {
    let which: BenchOp = op.parse()?;
    if n_points < MIN_BENCH_POINTS {
        return Err(DvError::InvalidParams(format!(
            "benchmark needs at least {MIN_BENCH_POINTS} points, got {n_points}"
        )));
    }
    if repetitions == 0 {
        return Err(DvError::InvalidParams(
            "repetitions must be at least 1".into(),
        ));
    }
    let points = bench_points(n_points);
    let shift = coeffs.params().shift();
    let mut sink = 0.0;

    let start = Instant::now();
    for _ in 0..repetitions {
        let pts = black_box(points.as_slice());
        for &(x, y) in pts {
            let v = match which {
                BenchOp::Kappa => kappa_unchecked(x, y + shift, coeffs),
                BenchOp::Lambda => lambda_unchecked(x, y + shift, coeffs),
                BenchOp::VoigtSmallY => voigt_small_y_unchecked(x, y, coeffs),
                BenchOp::VoigtK => {
                    let p = EvalPoint::checked("voigt_K", x, y)?;
                    voigt_k_with_branch(p, coeffs)?.0
                }
                BenchOp::DawsonReal => dawson_real_unchecked(x, coeffs),
            };
            sink += v;
        }
    }
    let wall_seconds = start.elapsed().as_secs_f64().max(f64::MIN_POSITIVE);
    let checksum = black_box(sink);

    Ok(TimingStats {
        op_name: which.as_str().to_string(),
        points_evaluated: n_points,
        wall_seconds,
        throughput: (n_points * repetitions) as f64 / wall_seconds,
        repetitions,
        seed: BENCH_SEED,
        checksum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{build_coefficients, default_params};

    #[test]
    fn selectors_round_trip() {
        for op in BenchOp::ALL {
            assert_eq!(op.as_str().parse::<BenchOp>().unwrap(), op);
        }
        assert_eq!(
            "gamma".parse::<BenchOp>(),
            Err(DvError::UnknownSelector("gamma".into()))
        );
    }

    #[test]
    fn point_set_is_reproducible() {
        let a = bench_points(100);
        assert_eq!(a, bench_points(100));
        assert!(a
            .iter()
            .all(|&(x, y)| (0.0..15.0).contains(&x) && (0.0..1e-6).contains(&y)));
    }

    #[test]
    fn stats_are_consistent() {
        let c = build_coefficients(default_params()).unwrap();
        let s = benchmark("kappa", 10_000, 2, &c).unwrap();
        assert!(s.wall_seconds > 0.0);
        let expected = 20_000.0 / s.wall_seconds;
        assert!((s.throughput - expected).abs() <= 1e-9 * expected);
        assert!(benchmark("kappa", 100, 1, &c).is_err());
        assert!(benchmark("nope", 10_000, 1, &c).is_err());
        let again = benchmark("kappa", 10_000, 2, &c).unwrap();
        assert_eq!(again.checksum.to_bits(), s.checksum.to_bits());
    }
}
