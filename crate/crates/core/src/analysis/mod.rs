//! Error curves, error surfaces and throughput measurements of the fast
//! approximations against the oracles.

mod bench;

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::approx::{dawson_real, voigt_k_with_branch, Branch, EvalPoint};
use crate::coeffs::{ApproximationParams, CoefficientSet};
use crate::error::{DvError, Result};
use crate::reference::cache::{uniform_axis, OracleTable};
use crate::reference::{dawson_oracle, w_oracle_grid, OraclePrecision};

pub use bench::{bench_points, benchmark, BenchOp, TimingStats, BENCH_SEED};

/// Exact agreement is recorded as this value of `log10(delta)`.
pub const LOG10_DELTA_FLOOR: f64 = -17.0;

/// `|approx - reference| / |reference|`.
pub fn relative_error(approx: f64, reference: f64) -> Result<f64> {
    if reference == 0.0 {
        return Err(DvError::ZeroReference);
    }
    Ok(((approx - reference) / reference).abs())
}

/// Signed difference `approx - reference` of the Dawson integral along a
/// uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorSeries {
    pub xs: Vec<f64>,
    pub eps: Vec<f64>,
    pub params: ApproximationParams,
}

impl ErrorSeries {
    pub fn max_abs(&self) -> f64 {
        self.eps.iter().fold(0.0f64, |m, e| m.max(e.abs()))
    }

    /// `# key=value` metadata, a header row, then `x,eps` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        write_meta(&mut out, "sweep-dawson", &self.params);
        let _ = writeln!(out, "# points={}", self.xs.len());
        let _ = writeln!(out, "# max_abs_eps={}", fmt_num(self.max_abs()));
        out.push_str("x,eps\n");
        for (x, e) in self.xs.iter().zip(&self.eps) {
            let _ = writeln!(out, "{},{}", fmt_num(*x), fmt_num(*e));
        }
        out
    }
}

/// Dawson error `dawson_real(x) - F_ref(x)` at `n_points` uniform points of `[0, x_max]`.
pub fn sweep_dawson_error(
    x_max: f64,
    n_points: usize,
    coeffs: &CoefficientSet,
    prec: &OraclePrecision,
) -> Result<ErrorSeries> {
    if !(x_max.is_finite() && x_max > 0.0) {
        return Err(DvError::InvalidParams(format!(
            "x_max must be finite and positive, got {x_max}"
        )));
    }
    if n_points < 2 {
        return Err(DvError::InvalidParams(format!(
            "n_points must be at least 2, got {n_points}"
        )));
    }
    let xs = uniform_axis(x_max, n_points);
    let eps = xs
        .iter()
        .map(|&x| Ok(dawson_real(x, coeffs)? - dawson_oracle(x, prec)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorSeries {
        xs,
        eps,
        params: *coeffs.params(),
    })
}

/// Where [`error_grid_voigt`] takes its reference values from.
#[derive(Debug, Clone, Copy)]
pub enum ReferenceSource<'a> {
    /// A loaded cache file; every cell must be present.
    Cached(&'a OracleTable),
    /// Evaluate the quadrature oracle on the grid.
    Live(OraclePrecision),
}

/// `log10` of the relative error of `voigt_K` on a tensor grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Rows follow `ys`, columns `xs`. `None` where the reference is zero.
    pub log10_delta: Vec<Vec<Option<f64>>>,
    /// Branch of the dispatcher that produced each cell.
    pub branches: Vec<Vec<Branch>>,
    pub values: Vec<Vec<f64>>,
    pub references: Vec<Vec<f64>>,
    pub params: ApproximationParams,
}

impl ErrorGrid {
    /// Largest defined `log10(delta)`, or `None` if every cell is undefined.
    pub fn max_log10_delta(&self) -> Option<f64> {
        self.log10_delta
            .iter()
            .flatten()
            .flatten()
            .copied()
            .reduce(f64::max)
    }

    pub fn undefined_cells(&self) -> usize {
        self.log10_delta
            .iter()
            .flatten()
            .filter(|v| v.is_none())
            .count()
    }

    pub fn branch_counts(&self) -> HashMap<Branch, usize> {
        let mut counts = HashMap::new();
        for b in self.branches.iter().flatten() {
            *counts.entry(*b).or_insert(0) += 1;
        }
        counts
    }

    /// `# key=value` metadata, a header row, then one row per cell in
    /// row-major order over `y`, then `x`. Undefined cells print `NaN`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        write_meta(&mut out, "error-map", &self.params);
        let _ = writeln!(out, "# nx={}", self.xs.len());
        let _ = writeln!(out, "# ny={}", self.ys.len());
        if let Some(m) = self.max_log10_delta() {
            let _ = writeln!(out, "# max_log10_delta={}", fmt_num(m));
        }
        let _ = writeln!(out, "# log10_delta_floor={}", fmt_num(LOG10_DELTA_FLOOR));
        out.push_str("x,y,K,K_ref,log10_delta,branch\n");
        for (j, &y) in self.ys.iter().enumerate() {
            for (i, &x) in self.xs.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    fmt_num(x),
                    fmt_num(y),
                    fmt_num(self.values[j][i]),
                    fmt_num(self.references[j][i]),
                    fmt_num(self.log10_delta[j][i].unwrap_or(f64::NAN)),
                    self.branches[j][i].as_str()
                );
            }
        }
        out
    }
}

/// Relative error of `voigt_K` over `[0, x_max] x [0, y_max]` with `nx x ny`
/// points, axes from [`uniform_axis`].
pub fn error_grid_voigt(
    x_max: f64,
    y_max: f64,
    nx: usize,
    ny: usize,
    coeffs: &CoefficientSet,
    source: ReferenceSource<'_>,
) -> Result<ErrorGrid> {
    if nx == 0 || ny == 0 {
        return Err(DvError::InvalidParams("grid must have nx, ny >= 1".into()));
    }
    for (name, v) in [("x_max", x_max), ("y_max", y_max)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(DvError::InvalidParams(format!(
                "{name} must be finite and non-negative, got {v}"
            )));
        }
    }
    let xs = uniform_axis(x_max, nx);
    let ys = uniform_axis(y_max, ny);
    let references: Vec<Vec<f64>> = match source {
        ReferenceSource::Cached(table) => ys
            .iter()
            .map(|&y| xs.iter().map(|&x| Ok(table.get(x, y)?.k_ref)).collect())
            .collect::<Result<_>>()?,
        ReferenceSource::Live(prec) => w_oracle_grid(&xs, &ys, &prec)?
            .chunks(nx)
            .map(|row| row.iter().map(|w| w.re.to_f64()).collect())
            .collect(),
    };

    let mut log10_delta = Vec::with_capacity(ny);
    let mut branches = Vec::with_capacity(ny);
    let mut values = Vec::with_capacity(ny);
    for (j, &y) in ys.iter().enumerate() {
        let mut lrow = Vec::with_capacity(nx);
        let mut brow = Vec::with_capacity(nx);
        let mut vrow = Vec::with_capacity(nx);
        for (i, &x) in xs.iter().enumerate() {
            let (k, branch) = voigt_k_with_branch(EvalPoint::checked("voigt_K", x, y)?, coeffs)?;
            let cell = match relative_error(k, references[j][i]) {
                Ok(0.0) => Some(LOG10_DELTA_FLOOR),
                Ok(d) => Some(d.log10().max(LOG10_DELTA_FLOOR)),
                Err(DvError::ZeroReference) => None,
                Err(e) => return Err(e),
            };
            lrow.push(cell);
            brow.push(branch);
            vrow.push(k);
        }
        log10_delta.push(lrow);
        branches.push(brow);
        values.push(vrow);
    }
    Ok(ErrorGrid {
        xs,
        ys,
        log10_delta,
        branches,
        values,
        references,
        params: *coeffs.params(),
    })
}

/// Scientific notation with 17 significant digits; round-trips through `f64`.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_meta(out: &mut String, kind: &str, p: &ApproximationParams) {
    let _ = writeln!(out, "# kind={kind}");
    let _ = writeln!(out, "# h={}", fmt_num(p.h));
    let _ = writeln!(out, "# m_max={}", p.m_max);
    let _ = writeln!(out, "# varsigma={}", fmt_num(p.varsigma));
    let _ = writeln!(out, "# n_terms={}", p.n_terms);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{build_coefficients, default_params};
    use crate::reference::cache::GridSpec;

    #[test]
    fn relative_error_definition() {
        assert_eq!(relative_error(1.0, 1.0).unwrap(), 0.0);
        assert!((relative_error(1.0 + 1e-10, 1.0).unwrap() - 1e-10).abs() < 1e-16);
        assert_eq!(relative_error(0.9, -0.9).unwrap(), 2.0);
        assert_eq!(relative_error(1.0, 0.0), Err(DvError::ZeroReference));
    }

    #[test]
    fn sweep_starts_at_zero_and_validates() {
        let c = build_coefficients(default_params()).unwrap();
        let p = OraclePrecision::standard();
        let s = sweep_dawson_error(2.0, 5, &c, &p).unwrap();
        assert_eq!(s.xs, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(s.eps[0], 0.0);
        assert!(s.max_abs() < 7e-9);
        assert!(sweep_dawson_error(0.0, 5, &c, &p).is_err());
        assert!(sweep_dawson_error(1.0, 1, &c, &p).is_err());
    }

    #[test]
    fn small_grid_shape_and_branches() {
        let c = build_coefficients(default_params()).unwrap();
        let g = error_grid_voigt(
            1.0,
            1e-6,
            2,
            2,
            &c,
            ReferenceSource::Live(OraclePrecision::standard()),
        )
        .unwrap();
        assert_eq!(g.log10_delta.len(), 2);
        assert!(g.log10_delta.iter().all(|r| r.len() == 2));
        assert_eq!(g.branch_counts()[&Branch::SmallY], 4);
        assert!(g.max_log10_delta().unwrap() < -10.0);
    }

    #[test]
    fn cached_grid_requires_every_cell() {
        let dir = tempfile::tempdir().unwrap();
        let spec = GridSpec::parse("1:2,0.5:2")
            .unwrap()
            .with_precision(OraclePrecision::standard());
        let (path, _) = spec.regenerate(dir.path()).unwrap();
        let table = OracleTable::load(&path).unwrap();
        let c = build_coefficients(default_params()).unwrap();
        let g = error_grid_voigt(1.0, 0.5, 2, 2, &c, ReferenceSource::Cached(&table)).unwrap();
        assert_eq!(g.branch_counts()[&Branch::Rational], 2);
        assert!(matches!(
            error_grid_voigt(1.0, 0.5, 3, 2, &c, ReferenceSource::Cached(&table)),
            Err(DvError::MissingReference { .. })
        ));
    }

    #[test]
    fn csv_numbers_round_trip() {
        for v in [0.0, 1.0, -(-1.0f64).exp(), 6.4e-7, f64::MIN_POSITIVE, 1e300] {
            let s = fmt_num(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits());
            assert_eq!(fmt_num(back), s);
        }
        assert_eq!(fmt_num(0.0), "0.0000000000000000e0");
    }
}
