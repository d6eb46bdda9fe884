//! Experiment configuration and the small grammars used on the command line.

use std::path::PathBuf;
use std::str::FromStr;

use tanhseries_core::fixtures::{FixtureKind, REFERENCE_T_GRID, REFERENCE_X_GRID};
use tanhseries_core::TanhPoly;

use crate::error::{ReportError, Result};

/// Where the PDE system comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum SystemSource {
    Fixture(FixtureKind),
    File(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    CsvSvg,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub source: SystemSource,
    pub orders: Vec<usize>,
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    pub pade: Option<(usize, usize)>,
    pub out_dir: Option<PathBuf>,
    pub format: OutputFormat,
}

/// Samples between `0` and `t_max` inclusive are `FIGURE_SAMPLES + 1`.
pub const FIGURE_SAMPLES: usize = 200;

impl ExperimentConfig {
    /// The error-table experiment on the reference `(x, t)` grid.
    pub fn reference_table(kind: FixtureKind) -> Self {
        ExperimentConfig {
            source: SystemSource::Fixture(kind),
            orders: vec![2, 5],
            x: REFERENCE_X_GRID.to_vec(),
            t: REFERENCE_T_GRID.to_vec(),
            pade: None,
            out_dir: None,
            format: OutputFormat::Csv,
        }
    }

    /// Degree 5 and 15 partial sums at `x = 0` over `t` in `[0, 0.5]`.
    pub fn reference_figure() -> Self {
        ExperimentConfig {
            source: SystemSource::Fixture(FixtureKind::Riccati),
            orders: vec![5, 15],
            x: vec![0.0],
            t: uniform_samples(0.5, FIGURE_SAMPLES),
            pade: None,
            out_dir: None,
            format: OutputFormat::Csv,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.orders.is_empty() || self.x.is_empty() || self.t.is_empty() {
            return Err(ReportError::config(
                "orders, x and t grids must be non-empty",
            ));
        }
        if self.orders.contains(&0) {
            return Err(ReportError::config("truncation orders must be at least 1"));
        }
        if self.x.iter().chain(&self.t).any(|v| !v.is_finite()) {
            return Err(ReportError::config("grid values must be finite"));
        }
        if self.t.iter().any(|&t| t < 0.0) {
            return Err(ReportError::config("t values must be nonnegative"));
        }
        if self.format == OutputFormat::CsvSvg && self.out_dir.is_none() {
            return Err(ReportError::config("SVG output needs an output directory"));
        }
        Ok(())
    }

    /// The builtin fixture, or an error for file-based systems (which carry no
    /// exact solution to compare against).
    pub fn fixture(&self) -> Result<FixtureKind> {
        match &self.source {
            SystemSource::Fixture(kind) => Ok(*kind),
            SystemSource::File(path) => Err(ReportError::config(format!(
                "{} has no known exact solution; use a builtin fixture",
                path.display()
            ))),
        }
    }
}

/// `n + 1` equally spaced points from `0` to `t_max`.
pub fn uniform_samples(t_max: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| t_max * i as f64 / n as f64).collect()
}

/// Comma-separated values, e.g. `2,5` or `-15,-10,5`.
pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|item| {
            let item = item.trim();
            item.parse()
                .map_err(|_| ReportError::config(format!("cannot parse `{item}` in `{s}`")))
        })
        .collect()
}

/// A comma-separated list or an inclusive range `start:stop:step`.
///
/// Ranges are stepped in exact decimal arithmetic, so `0.1:0.5:0.1` yields
/// the doubles nearest to 0.1, 0.2, ..., 0.5 rather than accumulated sums.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    match parts.as_slice() {
        [_] => parse_list(s),
        [start, stop, step] => {
            let bad = || ReportError::config(format!("range `{s}` must use plain decimals"));
            let (a, da) = decimal(start).ok_or_else(bad)?;
            let (b, db) = decimal(stop).ok_or_else(bad)?;
            let (h, dh) = decimal(step).ok_or_else(bad)?;
            let digits = da.max(db).max(dh);
            let rescale = |v: i128, d: u32| v * 10i128.pow(digits - d);
            let (a, b, h) = (rescale(a, da), rescale(b, db), rescale(h, dh));
            if h <= 0 || b < a {
                return Err(ReportError::config(format!(
                    "range `{s}` needs start <= stop and a positive step"
                )));
            }
            let count = (b - a) / h + 1;
            if count > 1_000_000 {
                return Err(ReportError::config(format!("range `{s}` is too long")));
            }
            let denom = 10f64.powi(digits as i32);
            Ok((0..count).map(|i| (a + i * h) as f64 / denom).collect())
        }
        _ => Err(ReportError::config(format!(
            "`{s}` is neither a list nor start:stop:step"
        ))),
    }
}

/// `"-1.25"` -> `(-125, 2)`.
fn decimal(s: &str) -> Option<(i128, u32)> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit())
        || frac.len() > 18
    {
        return None;
    }
    let mut v: i128 = 0;
    for b in int.bytes().chain(frac.bytes()) {
        v = v.checked_mul(10)?.checked_add((b - b'0') as i128)?;
    }
    Some((if neg { -v } else { v }, frac.len() as u32))
}

/// Padé orders as `L,M`.
pub fn parse_pade(s: &str) -> Result<(usize, usize)> {
    match parse_list::<usize>(s)?.as_slice() {
        &[l, m] => Ok((l, m)),
        _ => Err(ReportError::config(format!(
            "Padé orders `{s}` must be `L,M`"
        ))),
    }
}

/// Initial data as tanh-polynomial coefficients, one `;`-separated entry per
/// field: either positional (`1,0.5;0,1`) or named (`v=0,1;u=1,0.5`).
pub fn parse_init(s: &str, fields: &[String]) -> Result<Vec<TanhPoly>> {
    let entries: Vec<&str> = s
        .split(';')
        .map(str::trim)
        .filter(|e| !e.is_empty())
        .collect();
    if entries.len() != fields.len() {
        return Err(ReportError::config(format!(
            "initial data has {} entries for {} fields",
            entries.len(),
            fields.len()
        )));
    }
    let mut out: Vec<Option<TanhPoly>> = vec![None; fields.len()];
    for (pos, entry) in entries.iter().enumerate() {
        let (slot, coeffs) = match entry.split_once('=') {
            Some((name, coeffs)) => {
                let name = name.trim();
                let slot = fields.iter().position(|f| f == name).ok_or_else(|| {
                    ReportError::config(format!("initial data names unknown field `{name}`"))
                })?;
                (slot, coeffs)
            }
            None => (pos, *entry),
        };
        if out[slot].is_some() {
            return Err(ReportError::config(format!(
                "field `{}` has initial data twice",
                fields[slot]
            )));
        }
        out[slot] = Some(TanhPoly::new(parse_list(coeffs)?));
    }
    Ok(out
        .into_iter()
        .map(|p| p.expect("every slot filled"))
        .collect())
}
