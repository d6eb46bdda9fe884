//! Reproducible experiments for time-power-series solutions of tanh traveling
//! waves: error tables over an `(x, t)` grid, divergence figures, and
//! convergence radii, written as deterministic CSV (plus optional SVG).

pub mod config;
pub mod csvdoc;
mod error;
pub mod figure;
pub mod table;

use std::fs;
use std::path::{Path, PathBuf};

use tanhseries_core::oracle::reference_tanh_wave;
use tanhseries_core::{convergence_radius, SeriesSolution};

pub use config::{ExperimentConfig, OutputFormat, SystemSource};
pub use csvdoc::CsvDoc;
pub use error::{ReportError, Result};
pub use figure::{make_divergence_figure, FigureData};
pub use table::{make_error_table, ErrorRow, ErrorTable};

use csvdoc::fmt_float;
use error::Context;

/// Every tanh-polynomial coefficient in long form: `order,field,power,coeff`.
pub fn coefficients_csv(sol: &SeriesSolution) -> Result<String> {
    let mut records = Vec::new();
    for j in 0..=sol.order() {
        for (name, series) in sol.system().fields().iter().zip(sol.series()) {
            for (k, c) in series.coeffs()[j].coeffs().iter().enumerate() {
                records.push(vec![
                    j.to_string(),
                    name.clone(),
                    k.to_string(),
                    fmt_float(*c),
                ]);
            }
        }
    }
    CsvDoc {
        metadata: vec![(
            "coeff".into(),
            "coefficient of t^order tanh(x)^power".into(),
        )],
        header: ["order", "field", "power", "coeff"]
            .map(String::from)
            .to_vec(),
        records,
    }
    .render()
}

/// Convergence radius in `t` of the tanh wave, per `x`.
pub fn radius_csv(xs: &[f64]) -> Result<String> {
    let wave = reference_tanh_wave();
    let records = xs
        .iter()
        .map(|&x| {
            let r = convergence_radius(&wave, x).context(|| format!("radius at x = {x}"))?;
            Ok(vec![fmt_float(x), fmt_float(r)])
        })
        .collect::<Result<_>>()?;
    CsvDoc {
        metadata: vec![("wave".into(), "tanh(x - 11t/2)".into())],
        header: vec!["x".into(), "radius".into()],
        records,
    }
    .render()
}

/// Writes `contents` to `dir/name`, creating `dir` if needed.
pub fn write_output(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| ReportError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(io(&path))?;
    Ok(path)
}
