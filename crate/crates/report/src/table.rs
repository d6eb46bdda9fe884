//! Truncation error of the series solution over an `(x, t)` grid.

use tanhseries_core::{convergence_radius, solve};

use crate::config::ExperimentConfig;
use crate::csvdoc::{fmt_float, parse_float, CsvDoc};
use crate::error::{Context, ReportError, Result};

pub const COLUMNS: [&str; 9] = [
    "field",
    "x",
    "t",
    "order",
    "approx",
    "exact",
    "abs_error",
    "radius",
    "t_over_radius",
];

const METRIC_NOTE: &str = "|approx - exact| (absolute, unnormalised)";

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorRow {
    pub field: String,
    pub x: f64,
    pub t: f64,
    pub order: usize,
    pub approx: f64,
    pub exact: f64,
    pub abs_error: f64,
    pub radius: f64,
    pub t_over_radius: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ErrorTable {
    pub fixture: String,
    pub rows: Vec<ErrorRow>,
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Compares degree-`N` partial sums against the fixture's exact waves.
///
/// Rows are ordered by field, then `x`, `t` and order, independent of the
/// order in which the grids were given.
pub fn make_error_table(cfg: &ExperimentConfig) -> Result<ErrorTable> {
    cfg.validate()?;
    let kind = cfg.fixture()?;
    let fx = kind.build();
    let mut orders = cfg.orders.clone();
    orders.sort_unstable();
    orders.dedup();
    let max_order = *orders.last().expect("validated non-empty");
    let sol = solve(&fx.system, &fx.initial(), max_order)
        .context(|| format!("solving the {kind} fixture to order {max_order}"))?;
    let xs = sorted(&cfg.x);
    let ts = sorted(&cfg.t);
    let mut rows = Vec::with_capacity(fx.waves.len() * xs.len() * ts.len() * orders.len());
    for ((name, series), wave) in fx.field_names().iter().zip(sol.series()).zip(&fx.waves) {
        for &x in &xs {
            let scalar = series.at(x);
            let radius =
                convergence_radius(wave, x).context(|| format!("radius of `{name}` at x = {x}"))?;
            for &t in &ts {
                let exact = wave.eval(x, t);
                for &order in &orders {
                    let approx = scalar.truncated(order).eval(t);
                    rows.push(ErrorRow {
                        field: name.clone(),
                        x,
                        t,
                        order,
                        approx,
                        exact,
                        abs_error: (approx - exact).abs(),
                        radius,
                        t_over_radius: t / radius,
                    });
                }
            }
        }
    }
    Ok(ErrorTable {
        fixture: kind.name().to_string(),
        rows,
    })
}

impl ErrorTable {
    pub fn to_doc(&self) -> CsvDoc {
        CsvDoc {
            metadata: vec![
                ("fixture".into(), self.fixture.clone()),
                ("abs_error".into(), METRIC_NOTE.into()),
            ],
            header: COLUMNS.iter().map(|c| c.to_string()).collect(),
            records: self
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.field.clone(),
                        fmt_float(r.x),
                        fmt_float(r.t),
                        r.order.to_string(),
                        fmt_float(r.approx),
                        fmt_float(r.exact),
                        fmt_float(r.abs_error),
                        fmt_float(r.radius),
                        fmt_float(r.t_over_radius),
                    ]
                })
                .collect(),
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        self.to_doc().render()
    }

    pub fn from_csv(text: &str) -> Result<ErrorTable> {
        let doc = CsvDoc::parse(text)?;
        doc.expect_header(&COLUMNS.map(String::from))?;
        let rows = doc
            .records
            .iter()
            .map(|r| {
                let f = |i: usize| parse_float(&r[i]);
                Ok(ErrorRow {
                    field: r[0].clone(),
                    x: f(1)?,
                    t: f(2)?,
                    order: r[3]
                        .parse()
                        .map_err(|_| ReportError::Csv(format!("bad order `{}`", r[3])))?,
                    approx: f(4)?,
                    exact: f(5)?,
                    abs_error: f(6)?,
                    radius: f(7)?,
                    t_over_radius: f(8)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(ErrorTable {
            fixture: doc.meta("fixture").unwrap_or_default().to_string(),
            rows,
        })
    }
}
