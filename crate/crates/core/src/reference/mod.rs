//! Slow arbitrary-precision reference values, independent of the rational
//! forms: Dawson by series and by quadrature, `w` by quadrature of its
//! Laplace-type integral and by the `erfc` series, plus a file cache for
//! the standard grids.

pub mod cache;
pub mod dawson;
pub mod faddeeva;
mod gauss;

use rug::Float;
use serde::Serialize;

use crate::error::{DvError, Result};

pub use crate::laplace::{laplace_cf, laplace_cf_converged};
pub use cache::{cache_dir, GridSpec, OracleRecord, OracleTable, CACHE_ENV};
pub use dawson::{dawson_quadrature, dawson_series, DAWSON_ORACLE_MAX_X};
pub use faddeeva::{
    voigt_axis_closed_form, w_erfc_big, w_oracle, w_oracle_big, w_oracle_grid, ComplexBig,
    W_ORACLE_MAX_NORM_SQR,
};

/// Working precision and accuracy goal of an oracle evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OraclePrecision {
    /// Decimal digits carried before any guard digits are added.
    pub working_digits: u32,
    pub target_rel_error: f64,
}

impl OraclePrecision {
    pub const MIN_WORKING_DIGITS: u32 = 50;
    pub const MIN_TARGET_REL_ERROR: f64 = 1e-30;

    pub fn new(working_digits: u32, target_rel_error: f64) -> Result<Self> {
        let p = Self {
            working_digits,
            target_rel_error,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.working_digits < Self::MIN_WORKING_DIGITS {
            return Err(DvError::InvalidParams(format!(
                "oracle working_digits must be at least {}, got {}",
                Self::MIN_WORKING_DIGITS,
                self.working_digits
            )));
        }
        if !(self.target_rel_error.is_finite()
            && self.target_rel_error >= Self::MIN_TARGET_REL_ERROR)
        {
            return Err(DvError::InvalidParams(format!(
                "oracle target_rel_error must be at least {:e}, got {:e}",
                Self::MIN_TARGET_REL_ERROR,
                self.target_rel_error
            )));
        }
        Ok(())
    }

    /// 50 digits, `1e-30` relative.
    pub fn standard() -> Self {
        Self {
            working_digits: 50,
            target_rel_error: 1e-30,
        }
    }

    /// 300 digits, `1e-30` relative; used for the persisted grids.
    pub fn grid() -> Self {
        Self {
            working_digits: 300,
            target_rel_error: 1e-30,
        }
    }
}

impl Default for OraclePrecision {
    fn default() -> Self {
        Self::standard()
    }
}

/// Reference Dawson integral `F(x)` for `|x| <= 100`, in arbitrary precision.
pub fn dawson_oracle_big(x: f64, prec: &OraclePrecision) -> Result<Float> {
    prec.validate()?;
    dawson_series(x, prec)
}

/// Reference Dawson integral `F(x)` rounded to double precision.
pub fn dawson_oracle(x: f64, prec: &OraclePrecision) -> Result<f64> {
    dawson_oracle_big(x, prec).map(|f| f.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_bounds() {
        assert!(OraclePrecision::new(49, 1e-30).is_err());
        assert!(OraclePrecision::new(50, 1e-31).is_err());
        assert!(OraclePrecision::new(50, f64::NAN).is_err());
        assert_eq!(
            OraclePrecision::new(50, 1e-30).unwrap(),
            OraclePrecision::standard()
        );
        assert!(OraclePrecision::grid().validate().is_ok());
    }

    #[test]
    fn dawson_oracle_basics() {
        let p = OraclePrecision::standard();
        assert_eq!(dawson_oracle(0.0, &p).unwrap(), 0.0);
        assert_eq!(dawson_oracle(1.0, &p).unwrap(), 0.538_079_506_912_768_4);
        assert!(dawson_oracle(2.0, &p).unwrap() * dawson_oracle(-2.0, &p).unwrap() < 0.0);
        let bad = OraclePrecision {
            working_digits: 10,
            target_rel_error: 1e-30,
        };
        assert!(dawson_oracle(1.0, &bad).is_err());
    }
}
