//! `dv`: evaluate the approximations, map their error against the oracles,
//! regenerate oracle caches and time the kernels.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dv_core::analysis::fmt_num;
use dv_core::reference::cache::{cache_dir, GridSpec, OracleTable};
use dv_core::{
    benchmark, build_coefficients, dawson_complex, dawson_real, default_params, error_grid_voigt,
    faddeeva_w, high_accuracy_params, sweep_dawson_error, voigt_k, voigt_l, ApproximationParams,
    CoefficientSet, DvError, EvalPoint, OraclePrecision, ReferenceSource,
};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "dv",
    version,
    about = "Dawson, Voigt and Faddeeva functions by rational approximation"
)]
struct Cli {
    #[command(flatten)]
    params: ParamArgs,

    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ParamArgs {
    #[arg(long, global = true, value_enum, default_value_t = Preset::Default)]
    preset: Preset,
    /// Override the preset's sampling step.
    #[arg(long, global = true)]
    h: Option<f64>,
    #[arg(long, global = true)]
    m_max: Option<usize>,
    #[arg(long, global = true)]
    varsigma: Option<f64>,
    #[arg(long, global = true)]
    n_terms: Option<usize>,
}

impl ParamArgs {
    fn resolve(&self) -> Result<ApproximationParams, DvError> {
        let base = match self.preset {
            Preset::Default => default_params(),
            Preset::HighAccuracy => high_accuracy_params(),
        };
        ApproximationParams::new(
            self.h.unwrap_or(base.h),
            self.m_max.unwrap_or(base.m_max),
            self.varsigma.unwrap_or(base.varsigma),
            self.n_terms.unwrap_or(base.n_terms),
        )
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Preset {
    Default,
    HighAccuracy,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
enum Func {
    #[value(name = "K")]
    K,
    #[value(name = "L")]
    L,
    #[value(name = "w")]
    W,
    #[value(name = "F")]
    F,
    #[value(name = "Fc")]
    Fc,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one function at one point.
    #[command(allow_negative_numbers = true)]
    Eval {
        #[arg(long, value_enum)]
        func: Func,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
    /// Dawson error against the series oracle on a uniform grid.
    SweepDawson {
        #[arg(long)]
        xmax: f64,
        #[arg(long)]
        points: usize,
        /// Working digits of the oracle.
        #[arg(long, default_value_t = 50)]
        digits: u32,
    },
    /// Relative error of K on a uniform grid against cached references.
    ErrorMap {
        #[arg(long)]
        xmax: f64,
        #[arg(long)]
        ymax: f64,
        #[arg(long)]
        nx: usize,
        #[arg(long)]
        ny: usize,
        /// Compute references with the quadrature oracle instead of the cache.
        #[arg(long)]
        live: bool,
        /// Working digits of the live oracle.
        #[arg(long, default_value_t = 300)]
        digits: u32,
    },
    /// Regenerate an oracle cache file: fig2, laplace or XMAX:NX,YMAX:NY.
    Oracle {
        #[arg(long)]
        grid: String,
        /// Working digits; defaults to the grid's own setting.
        #[arg(long)]
        digits: Option<u32>,
    },
    /// Time one kernel and print the statistics as JSON.
    Bench {
        #[arg(long)]
        op: String,
        #[arg(long, default_value_t = 1_000_000)]
        points: usize,
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
}

/// Failures after argument parsing, split by exit status.
enum Failure {
    Usage(String),
    Eval(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Eval(format!("i/o: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Eval(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let params = cli
        .params
        .resolve()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let coeffs = build_coefficients(params).map_err(|e| Failure::Usage(e.to_string()))?;
    let text = match &cli.command {
        Command::Eval { func, x, y } => eval(*func, *x, *y, &coeffs, cli.format)?,
        Command::SweepDawson {
            xmax,
            points,
            digits,
        } => {
            let prec = precision(*digits)?;
            let series = sweep_dawson_error(*xmax, *points, &coeffs, &prec)
                .map_err(|e| Failure::Eval(format!("sweep-dawson: {e}")))?;
            match cli.format {
                Format::Csv => series.to_csv(),
                Format::Json => json(&series)?,
            }
        }
        Command::ErrorMap {
            xmax,
            ymax,
            nx,
            ny,
            live,
            digits,
        } => {
            let source_table;
            let source = if *live {
                ReferenceSource::Live(precision(*digits)?)
            } else {
                source_table = cached_table(*xmax, *nx, *ymax, *ny)?;
                ReferenceSource::Cached(&source_table)
            };
            let grid = error_grid_voigt(*xmax, *ymax, *nx, *ny, &coeffs, source)
                .map_err(|e| Failure::Eval(format!("error-map: {e}")))?;
            match cli.format {
                Format::Csv => grid.to_csv(),
                Format::Json => json(&grid)?,
            }
        }
        Command::Oracle { grid, digits } => {
            let mut spec = GridSpec::parse(grid).map_err(|e| Failure::Usage(e.to_string()))?;
            if let Some(d) = digits {
                spec = spec.with_precision(precision(*d)?);
            }
            let dir = cache_dir();
            let (path, table) = spec
                .regenerate(&dir)
                .map_err(|e| Failure::Eval(format!("oracle: {e}")))?;
            eprintln!("wrote {} records to {}", table.len(), path.display());
            match cli.format {
                Format::Csv => format!(
                    "# grid={}\npath,records\n{},{}\n",
                    spec.name(),
                    path.display(),
                    table.len()
                ),
                Format::Json => json(&serde_json::json!({
                    "grid": spec.name(),
                    "path": path.display().to_string(),
                    "records": table.len(),
                }))?,
            }
        }
        Command::Bench { op, points, reps } => {
            let stats = benchmark(op, *points, *reps, &coeffs).map_err(|e| match e {
                DvError::UnknownSelector(_) | DvError::InvalidParams(_) => {
                    Failure::Usage(e.to_string())
                }
                other => Failure::Eval(format!("bench: {other}")),
            })?;
            json(&stats)?
        }
    };
    emit(cli.output.as_ref(), &text)
}

fn precision(digits: u32) -> Result<OraclePrecision, Failure> {
    OraclePrecision::new(digits, OraclePrecision::standard().target_rel_error)
        .map_err(|e| Failure::Usage(e.to_string()))
}

/// The cache file covering the requested grid: `fig2` when the grid matches
/// it, otherwise the file `oracle --grid XMAX:NX,YMAX:NY` writes.
fn cached_table(xmax: f64, nx: usize, ymax: f64, ny: usize) -> Result<OracleTable, Failure> {
    let custom = GridSpec::tensor("", xmax, nx, ymax, ny);
    let named = GridSpec::parse(&format!("{xmax}:{nx},{ymax}:{ny}"))
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let fig2 = GridSpec::fig2();
    let spec = if fig2.points() == custom.points() {
        fig2
    } else {
        named
    };
    let path = cache_dir().join(spec.file_name());
    if !path.exists() {
        return Err(Failure::Eval(format!(
            "error-map: no oracle cache at {}; run `dv oracle --grid {xmax}:{nx},{ymax}:{ny}` or pass --live",
            path.display()
        )));
    }
    OracleTable::load(&path).map_err(|e| Failure::Eval(format!("error-map: {e}")))
}

#[derive(Serialize)]
struct EvalOutput {
    func: Func,
    x: f64,
    y: f64,
    re: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    im: Option<f64>,
}

fn eval(
    func: Func,
    x: f64,
    y: f64,
    coeffs: &CoefficientSet,
    format: Format,
) -> Result<String, Failure> {
    let fail = |e: DvError| Failure::Eval(format!("eval {func:?} at (x = {x}, y = {y}): {e}"));
    let point = || EvalPoint::new(x, y).map_err(fail);
    let (re, im) = match func {
        Func::K => (voigt_k(x, y, coeffs).map_err(fail)?, None),
        Func::L => (voigt_l(x, y, coeffs).map_err(fail)?, None),
        Func::F => {
            if y != 0.0 {
                return Err(fail(DvError::Domain {
                    op: "dawson_real",
                    detail: "F takes a real argument; use --func Fc for complex z".into(),
                }));
            }
            (dawson_real(x, coeffs).map_err(fail)?, None)
        }
        Func::W => {
            let w = faddeeva_w(point()?, coeffs).map_err(fail)?;
            (w.re, Some(w.im))
        }
        Func::Fc => {
            let f = dawson_complex(point()?, coeffs).map_err(fail)?;
            (f.re, Some(f.im))
        }
    };
    Ok(match format {
        Format::Csv => match im {
            Some(im) => format!("{},{}\n", fmt_num(re), fmt_num(im)),
            None => format!("{}\n", fmt_num(re)),
        },
        Format::Json => json(&EvalOutput { func, x, y, re, im })?,
    })
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s =
        serde_json::to_string_pretty(value).map_err(|e| Failure::Eval(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
