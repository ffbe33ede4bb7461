//! Persisted oracle values for the standard grids.
//!
//! One file per grid, named `<grid>.oracle`. Lines starting with `#` carry
//! `key=value` metadata; every other line is a record `x,y,K_ref,L_ref` with
//! each field written to 40 significant digits.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rug::Float;

use super::faddeeva::{w_oracle_big, w_oracle_grid, ComplexBig};
use super::OraclePrecision;
use crate::approx::EvalPoint;
use crate::error::{DvError, Result};

/// Environment variable that overrides the cache directory.
pub const CACHE_ENV: &str = "DV_ORACLE_CACHE";

const DIGITS: usize = 40;

/// The directory holding `*.oracle` files: `$DV_ORACLE_CACHE` when set,
/// otherwise the `data/oracle` directory shipped with this crate.
pub fn cache_dir() -> PathBuf {
    match std::env::var_os(CACHE_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("data")
            .join("oracle"),
    }
}

/// `n` equally spaced values from 0 to `max` inclusive, `max * i / (n - 1)`.
///
/// Grids built here and by the analysis code must agree bit for bit, so
/// both go through this function.
pub fn uniform_axis(max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| max * i as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Layout {
    /// Every `(x, y)` of `xs x ys`.
    Tensor {
        xs: Vec<f64>,
        ys: Vec<f64>,
    },
    Points(Vec<(f64, f64)>),
}

/// A named set of points whose references can be cached.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    name: String,
    description: String,
    layout: Layout,
    precision: OraclePrecision,
}

impl GridSpec {
    /// `[0, 15] x [0, 1e-6]` sampled 301 x 31.
    pub fn fig2() -> Self {
        Self::tensor("fig2", 15.0, 301, 1e-6, 31)
    }

    /// Twenty points with `15 < |z| <= 200`, spiralling from radius 15.5 at 1
    /// degree to radius 199.9 at 89 degrees with geometric radius steps.
    pub fn laplace() -> Self {
        let points = (0..20)
            .map(|k| {
                let s = k as f64 / 19.0;
                let r = 15.5 * (199.9f64 / 15.5).powf(s);
                let theta = (1.0 + 88.0 * s).to_radians();
                (r * theta.cos(), r * theta.sin())
            })
            .collect();
        Self {
            name: "laplace".into(),
            description: "20 points on a spiral, 15.5 <= |z| <= 199.9, 1 to 89 degrees".into(),
            layout: Layout::Points(points),
            precision: OraclePrecision::standard(),
        }
    }

    /// Uniform tensor grid `[0, x_max] x [0, y_max]` with `nx x ny` points.
    pub fn tensor(name: &str, x_max: f64, nx: usize, y_max: f64, ny: usize) -> Self {
        Self {
            name: name.into(),
            description: format!("uniform {nx} x {ny} on [0, {x_max}] x [0, {y_max}]"),
            layout: Layout::Tensor {
                xs: uniform_axis(x_max, nx),
                ys: uniform_axis(y_max, ny),
            },
            precision: OraclePrecision::grid(),
        }
    }

    /// Parses `fig2`, `laplace` or `XMAX:NX,YMAX:NY`.
    pub fn parse(spec: &str) -> Result<Self> {
        match spec {
            "fig2" => return Ok(Self::fig2()),
            "laplace" => return Ok(Self::laplace()),
            _ => {}
        }
        let bad = || {
            DvError::InvalidParams(format!(
                "grid spec '{spec}': expected fig2, laplace or XMAX:NX,YMAX:NY"
            ))
        };
        let (xpart, ypart) = spec.split_once(',').ok_or_else(bad)?;
        let axis = |part: &str| -> Result<(f64, usize)> {
            let (max, n) = part.split_once(':').ok_or_else(bad)?;
            let max: f64 = max.trim().parse().map_err(|_| bad())?;
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            if !(max.is_finite() && max >= 0.0) || n == 0 {
                return Err(bad());
            }
            Ok((max, n))
        };
        let (x_max, nx) = axis(xpart)?;
        let (y_max, ny) = axis(ypart)?;
        let name = format!("grid_{x_max}_{nx}_{y_max}_{ny}");
        Ok(Self::tensor(&name, x_max, nx, y_max, ny))
    }

    pub fn with_precision(mut self, precision: OraclePrecision) -> Self {
        self.precision = precision;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn precision(&self) -> &OraclePrecision {
        &self.precision
    }

    pub fn file_name(&self) -> String {
        format!("{}.oracle", self.name)
    }

    /// All points in record order (row-major over `y`, then `x`, for tensor grids).
    pub fn points(&self) -> Vec<(f64, f64)> {
        match &self.layout {
            Layout::Tensor { xs, ys } => ys
                .iter()
                .flat_map(|&y| xs.iter().map(move |&x| (x, y)))
                .collect(),
            Layout::Points(p) => p.clone(),
        }
    }

    /// Evaluates the oracle on every point. Slow.
    pub fn compute(&self) -> Result<OracleTable> {
        self.precision.validate()?;
        let values: Vec<ComplexBig> = match &self.layout {
            Layout::Tensor { xs, ys } => w_oracle_grid(xs, ys, &self.precision)?,
            Layout::Points(points) => points
                .iter()
                .map(|&(x, y)| w_oracle_big(EvalPoint::checked("oracle", x, y)?, &self.precision))
                .collect::<Result<_>>()?,
        };
        let records = self
            .points()
            .into_iter()
            .zip(&values)
            .map(|((x, y), w)| OracleRecord {
                x,
                y,
                k_ref: w.re.to_f64(),
                l_ref: w.im.to_f64(),
            })
            .collect();
        let text = render(self, &values);
        let mut table = OracleTable::from_records(records);
        table.meta = header(self);
        table.text = Some(text);
        Ok(table)
    }

    /// Computes the grid and writes `<dir>/<name>.oracle`.
    pub fn regenerate(&self, dir: &Path) -> Result<(PathBuf, OracleTable)> {
        let table = self.compute()?;
        fs::create_dir_all(dir).map_err(|e| DvError::Cache(format!("{}: {e}", dir.display())))?;
        let path = dir.join(self.file_name());
        let text = table.text.as_deref().unwrap_or_default();
        fs::write(&path, text).map_err(|e| DvError::Cache(format!("{}: {e}", path.display())))?;
        Ok((path, table))
    }

    /// Loads `<name>.oracle` from [`cache_dir`].
    pub fn load_cached(&self) -> Result<OracleTable> {
        OracleTable::load(&cache_dir().join(self.file_name()))
    }
}

fn header(spec: &GridSpec) -> Vec<(String, String)> {
    vec![
        ("grid".into(), spec.name.clone()),
        ("description".into(), spec.description.clone()),
        (
            "working_digits".into(),
            spec.precision.working_digits.to_string(),
        ),
        (
            "target_rel_error".into(),
            format!("{:e}", spec.precision.target_rel_error),
        ),
        (
            "method".into(),
            "gauss-legendre panels on (1/sqrt(pi)) int_0^inf exp(-t^2/4 - yt + ixt) dt".into(),
        ),
        ("columns".into(), "x,y,K_ref,L_ref".into()),
    ]
}

fn fmt_big(v: &Float) -> String {
    v.to_string_radix(10, Some(DIGITS))
}

fn fmt_f64(v: f64) -> String {
    fmt_big(&Float::with_val(53, v))
}

fn render(spec: &GridSpec, values: &[ComplexBig]) -> String {
    let mut out = String::new();
    for (k, v) in header(spec) {
        let _ = writeln!(out, "# {k}={v}");
    }
    for ((x, y), w) in spec.points().into_iter().zip(values) {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(x),
            fmt_f64(y),
            fmt_big(&w.re),
            fmt_big(&w.im)
        );
    }
    out
}

/// One cached reference value of `w = K + iL`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRecord {
    pub x: f64,
    pub y: f64,
    pub k_ref: f64,
    pub l_ref: f64,
}

/// Cached references indexed by the exact bit patterns of `(x, y)`.
#[derive(Debug, Clone, Default)]
pub struct OracleTable {
    meta: Vec<(String, String)>,
    records: Vec<OracleRecord>,
    index: HashMap<(u64, u64), usize>,
    text: Option<String>,
}

impl OracleTable {
    fn from_records(records: Vec<OracleRecord>) -> Self {
        let index = records
            .iter()
            .enumerate()
            .map(|(i, r)| ((r.x.to_bits(), r.y.to_bits()), i))
            .collect();
        Self {
            meta: Vec::new(),
            records,
            index,
            text: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| DvError::Cache(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            DvError::Cache(msg) => DvError::Cache(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut meta = Vec::new();
        let mut records = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((k, v)) = rest.trim().split_once('=') {
                    meta.push((k.trim().to_string(), v.trim().to_string()));
                }
                continue;
            }
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| DvError::Cache(format!("line {}: {e}", lineno + 1)))?;
            let [x, y, k_ref, l_ref] = fields[..] else {
                return Err(DvError::Cache(format!(
                    "line {}: expected 4 fields, found {}",
                    lineno + 1,
                    fields.len()
                )));
            };
            records.push(OracleRecord { x, y, k_ref, l_ref });
        }
        let mut table = Self::from_records(records);
        table.meta = meta;
        Ok(table)
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn records(&self) -> &[OracleRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, x: f64, y: f64) -> Result<&OracleRecord> {
        self.index
            .get(&(x.to_bits(), y.to_bits()))
            .map(|&i| &self.records[i])
            .ok_or(DvError::MissingReference { x, y })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_includes_endpoints() {
        let a = uniform_axis(15.0, 301);
        assert_eq!(a.len(), 301);
        assert_eq!(a[0], 0.0);
        assert_eq!(a[300], 15.0);
        assert_eq!(a[20], 1.0);
        assert_eq!(uniform_axis(1e-6, 31)[30], 1e-6);
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(GridSpec::parse("fig2").unwrap().points().len(), 301 * 31);
        assert_eq!(GridSpec::parse("laplace").unwrap().points().len(), 20);
        let g = GridSpec::parse("2:3,1e-6:2").unwrap();
        assert_eq!(g.points().len(), 6);
        assert_eq!(g.points()[4], (1.0, 1e-6));
        for bad in ["", "fig3", "2:3", "2:0,1:1", "a:3,1:1", "-1:3,1:1"] {
            assert!(GridSpec::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn laplace_points_are_outside_the_disk() {
        for (x, y) in GridSpec::laplace().points() {
            let r = x.hypot(y);
            assert!(r > 15.0 && x * x + y * y <= 4e4, "{x} {y}");
            assert!(x > 0.0 && y > 0.0);
        }
    }

    #[test]
    fn round_trip_through_file() {
        let dir = tempfile::tempdir().unwrap();
        let spec = GridSpec::parse("1:2,0.5:2")
            .unwrap()
            .with_precision(OraclePrecision::standard());
        let (path, table) = spec.regenerate(dir.path()).unwrap();
        let loaded = OracleTable::load(&path).unwrap();
        assert_eq!(loaded.len(), 4);
        assert_eq!(loaded.meta("working_digits"), Some("50"));
        assert_eq!(loaded.meta("columns"), Some("x,y,K_ref,L_ref"));
        for r in table.records() {
            assert_eq!(loaded.get(r.x, r.y).unwrap(), r);
        }
        assert_eq!(loaded.get(0.0, 0.0).unwrap().k_ref, 1.0);
        assert!(matches!(
            loaded.get(0.25, 0.0),
            Err(DvError::MissingReference { .. })
        ));
        let text = fs::read_to_string(&path).unwrap();
        let line = text.lines().find(|l| !l.starts_with('#')).unwrap();
        let digits: usize = line
            .split(',')
            .nth(2)
            .unwrap()
            .chars()
            .take_while(|c| *c != 'e')
            .filter(char::is_ascii_digit)
            .count();
        assert_eq!(digits, DIGITS);
    }

    #[test]
    fn malformed_records_are_reported() {
        assert!(matches!(
            OracleTable::parse("# a=b\n1,2,3\n"),
            Err(DvError::Cache(_))
        ));
        assert!(OracleTable::parse("1,2,x,4\n").is_err());
        assert!(OracleTable::load(Path::new("/nonexistent/x.oracle")).is_err());
    }
}
