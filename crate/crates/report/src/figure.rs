//! Partial sums (and optionally a Padé approximant) against the exact wave
//! along a line of fixed `x`.

use tanhseries_core::{convergence_radius, solve, PadeApproximant};

use crate::config::ExperimentConfig;
use crate::csvdoc::{fmt_float, parse_float, CsvDoc};
use crate::error::{Context, ReportError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigureData {
    pub field: String,
    pub x: f64,
    pub radius: f64,
    pub t: Vec<f64>,
    pub exact: Vec<f64>,
    /// One curve per truncation order, then the Padé curve if requested.
    pub curves: Vec<Curve>,
}

pub fn partial_sum_name(order: usize) -> String {
    format!("T{order}")
}

pub fn pade_name(l: usize, m: usize) -> String {
    format!("pade_{l}_{m}")
}

/// Samples the first field of the fixture at `cfg.x[0]` over `cfg.t`.
pub fn make_divergence_figure(cfg: &ExperimentConfig) -> Result<FigureData> {
    cfg.validate()?;
    let kind = cfg.fixture()?;
    let &[x] = cfg.x.as_slice() else {
        return Err(ReportError::config("the figure needs exactly one x value"));
    };
    let fx = kind.build();
    let wave = &fx.waves[0];
    let field = fx.field_names().swap_remove(0);
    let pade_order = cfg.pade.map_or(0, |(l, m)| l + m);
    let order = cfg
        .orders
        .iter()
        .copied()
        .max()
        .unwrap_or(0)
        .max(pade_order)
        .max(1);
    let sol = solve(&fx.system, &fx.initial(), order)
        .context(|| format!("solving the {kind} fixture to order {order}"))?;
    let series = sol.series()[0].at(x);
    let radius = convergence_radius(wave, x).context(|| format!("radius at x = {x}"))?;

    let mut curves: Vec<Curve> = cfg
        .orders
        .iter()
        .map(|&n| {
            let s = series.truncated(n);
            Curve {
                name: partial_sum_name(n),
                values: cfg.t.iter().map(|&t| s.eval(t)).collect(),
            }
        })
        .collect();
    if let Some((l, m)) = cfg.pade {
        let p = PadeApproximant::fit(series.coeffs(), l, m)
            .context(|| format!("[{l}/{m}] Padé approximant at x = {x}"))?;
        let values = cfg
            .t
            .iter()
            .map(|&t| p.eval(t))
            .collect::<Result<_, _>>()
            .context(|| format!("evaluating the [{l}/{m}] Padé approximant"))?;
        curves.push(Curve {
            name: pade_name(l, m),
            values,
        });
    }
    Ok(FigureData {
        field,
        x,
        radius,
        exact: cfg.t.iter().map(|&t| wave.eval(x, t)).collect(),
        t: cfg.t.clone(),
        curves,
    })
}

impl FigureData {
    pub fn curve(&self, name: &str) -> Option<&[f64]> {
        self.curves
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn to_doc(&self) -> CsvDoc {
        let mut header = vec!["t".to_string(), "exact".to_string()];
        header.extend(self.curves.iter().map(|c| c.name.clone()));
        let records = (0..self.t.len())
            .map(|i| {
                let mut r = vec![fmt_float(self.t[i]), fmt_float(self.exact[i])];
                r.extend(self.curves.iter().map(|c| fmt_float(c.values[i])));
                r
            })
            .collect();
        CsvDoc {
            metadata: vec![
                ("field".into(), self.field.clone()),
                ("x".into(), fmt_float(self.x)),
                ("radius".into(), fmt_float(self.radius)),
            ],
            header,
            records,
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        self.to_doc().render()
    }

    pub fn from_csv(text: &str) -> Result<FigureData> {
        let doc = CsvDoc::parse(text)?;
        if doc.header.len() < 2 || doc.header[0] != "t" || doc.header[1] != "exact" {
            return Err(ReportError::Csv(
                "figure columns must start with t,exact".into(),
            ));
        }
        let meta = |key: &str| {
            doc.meta(key)
                .ok_or_else(|| ReportError::Csv(format!("missing `{key}` metadata")))
        };
        let column = |i: usize| -> Result<Vec<f64>> {
            doc.records.iter().map(|r| parse_float(&r[i])).collect()
        };
        Ok(FigureData {
            field: meta("field")?.to_string(),
            x: parse_float(meta("x")?)?,
            radius: parse_float(meta("radius")?)?,
            t: column(0)?,
            exact: column(1)?,
            curves: (2..doc.header.len())
                .map(|i| {
                    Ok(Curve {
                        name: doc.header[i].clone(),
                        values: column(i)?,
                    })
                })
                .collect::<Result<_>>()?,
        })
    }

    /// A static line plot. The vertical range follows the exact solution
    /// (padded) and diverging curves are clipped to it.
    pub fn to_svg(&self) -> String {
        const W: f64 = 720.0;
        const H: f64 = 450.0;
        const LEFT: f64 = 70.0;
        const RIGHT: f64 = 160.0;
        const TOP: f64 = 30.0;
        const BOTTOM: f64 = 50.0;
        const DASHES: [&str; 4] = ["8 5", "2 4", "10 4 2 4", "4 2"];
        const COLOURS: [&str; 4] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd"];

        let t0 = self.t.iter().copied().fold(f64::INFINITY, f64::min);
        let t1 = self.t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (t0, t1) = if t1 > t0 { (t0, t1) } else { (t0, t0 + 1.0) };
        let lo = self.exact.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.exact.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let pad = ((hi - lo) * 0.5).max(0.25);
        let (y0, y1) = (lo - pad, hi + pad);
        let px = |t: f64| LEFT + (t - t0) / (t1 - t0) * (W - LEFT - RIGHT);
        let py = |y: f64| TOP + (y1 - y) / (y1 - y0) * (H - TOP - BOTTOM);

        let mut s = String::new();
        s.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"12\">\n"
        ));
        s.push_str(&format!(
            "<clipPath id=\"plot\"><rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{:.2}\" height=\"{:.2}\"/></clipPath>\n",
            W - LEFT - RIGHT,
            H - TOP - BOTTOM
        ));
        s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        s.push_str(&format!(
            "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"black\"/>\n",
            W - LEFT - RIGHT,
            H - TOP - BOTTOM
        ));
        for i in 0..=5 {
            let t = t0 + (t1 - t0) * i as f64 / 5.0;
            let y = y0 + (y1 - y0) * i as f64 / 5.0;
            s.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{t:.2}</text>\n",
                px(t),
                H - BOTTOM + 18.0
            ));
            s.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{y:.2}</text>\n",
                LEFT - 6.0,
                py(y) + 4.0
            ));
        }
        s.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">t</text>\n",
            (LEFT + W - RIGHT) / 2.0,
            H - 10.0
        ));
        s.push_str(&format!(
            "<text x=\"{:.2}\" y=\"18\" text-anchor=\"middle\">{} at x = {}</text>\n",
            (LEFT + W - RIGHT) / 2.0,
            self.field,
            self.x
        ));

        let polyline = |values: &[f64], stroke: &str, dash: Option<&str>| {
            let points: Vec<String> = self
                .t
                .iter()
                .zip(values)
                .filter(|(_, v)| v.is_finite())
                // keep far-off values finite in SVG coordinates
                .map(|(&t, &v)| {
                    format!(
                        "{:.2},{:.2}",
                        px(t),
                        py(v.clamp(y0 - 10.0 * (y1 - y0), y1 + 10.0 * (y1 - y0)))
                    )
                })
                .collect();
            let dash = dash.map_or(String::new(), |d| format!(" stroke-dasharray=\"{d}\""));
            format!(
                "<polyline clip-path=\"url(#plot)\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\"{dash} points=\"{}\"/>\n",
                points.join(" ")
            )
        };
        let mut legend = vec![("exact".to_string(), "black", None)];
        s.push_str(&polyline(&self.exact, "black", None));
        for (i, c) in self.curves.iter().enumerate() {
            let (stroke, dash) = (COLOURS[i % 4], DASHES[i % 4]);
            s.push_str(&polyline(&c.values, stroke, Some(dash)));
            legend.push((c.name.clone(), stroke, Some(dash)));
        }
        for r in [-self.radius, self.radius] {
            if (t0..=t1).contains(&r) {
                s.push_str(&format!(
                    "<line x1=\"{0:.2}\" y1=\"{TOP}\" x2=\"{0:.2}\" y2=\"{1:.2}\" stroke=\"gray\" stroke-width=\"1\"/>\n",
                    px(r),
                    H - BOTTOM
                ));
            }
        }
        legend.push((format!("R = {:.4}", self.radius), "gray", None));
        for (i, (name, stroke, dash)) in legend.iter().enumerate() {
            let y = TOP + 20.0 + 20.0 * i as f64;
            let x = W - RIGHT + 15.0;
            let dash = dash.map_or(String::new(), |d| format!(" stroke-dasharray=\"{d}\""));
            s.push_str(&format!(
                "<line x1=\"{x:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{stroke}\" stroke-width=\"1.5\"{dash}/>\n",
                x + 30.0
            ));
            s.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\">{name}</text>\n",
                x + 36.0,
                y + 4.0
            ));
        }
        s.push_str("</svg>\n");
        s
    }
}
