use tanhseries::config::{uniform_samples, FIGURE_SAMPLES};
use tanhseries::{
    make_divergence_figure, make_error_table, ErrorTable, ExperimentConfig, FigureData,
    OutputFormat, SystemSource,
};
use tanhseries_core::fixtures::FixtureKind;

fn riccati_table(orders: Vec<usize>) -> ErrorTable {
    let mut cfg = ExperimentConfig::reference_table(FixtureKind::Riccati);
    cfg.orders = orders;
    make_error_table(&cfg).unwrap()
}

#[test]
fn table_csv_round_trips() {
    for kind in FixtureKind::ALL {
        let table = make_error_table(&ExperimentConfig::reference_table(kind)).unwrap();
        let text = table.to_csv().unwrap();
        let back = ErrorTable::from_csv(&text).unwrap();
        assert_eq!(back, table);
        assert_eq!(back.to_csv().unwrap(), text);
    }
}

#[test]
fn abs_error_matches_row() {
    let text = riccati_table(vec![2, 5]).to_csv().unwrap();
    for row in ErrorTable::from_csv(&text).unwrap().rows {
        assert_eq!(row.abs_error, (row.approx - row.exact).abs());
        assert_eq!(row.t_over_radius, row.t / row.radius);
    }
}

#[test]
fn table_rows_are_sorted_and_complete() {
    let mut cfg = ExperimentConfig::reference_table(FixtureKind::Coupled);
    cfg.x = vec![10.0, -5.0, 5.0];
    cfg.t = vec![0.3, 0.1];
    cfg.orders = vec![5, 2];
    let rows = make_error_table(&cfg).unwrap().rows;
    assert_eq!(rows.len(), 3 * 3 * 2 * 2);
    let fields = ["u", "v", "z"];
    let field = |r: &tanhseries::ErrorRow| fields.iter().position(|n| *n == r.field).unwrap();
    for w in rows.windows(2) {
        let ord = field(&w[0])
            .cmp(&field(&w[1]))
            .then(w[0].x.total_cmp(&w[1].x))
            .then(w[0].t.total_cmp(&w[1].t))
            .then(w[0].order.cmp(&w[1].order));
        assert!(ord.is_lt(), "{:?} before {:?}", w[0], w[1]);
    }
}

#[test]
fn reference_grid_lies_inside_radius() {
    let table = riccati_table(vec![5]);
    assert_eq!(table.rows.len(), 25);
    assert!(table.rows.iter().all(|r| r.t_over_radius < 1.0));
    let min = table
        .rows
        .iter()
        .map(|r| r.radius)
        .fold(f64::INFINITY, f64::min);
    assert!((min - 0.9528972974).abs() < 1e-9);
}

#[test]
fn order_five_error_grows_with_t() {
    let table = riccati_table(vec![5]);
    for x in [-15.0, -10.0, -5.0, 5.0, 10.0] {
        let errs: Vec<f64> = table
            .rows
            .iter()
            .filter(|r| r.x == x)
            .map(|r| r.abs_error)
            .collect();
        assert_eq!(errs.len(), 5);
        assert!(errs.windows(2).all(|w| w[0] <= w[1]), "x={x}: {errs:?}");
    }
}

#[test]
fn saturated_wave_is_accurate_at_order_five() {
    let table = riccati_table(vec![5]);
    let row = table
        .rows
        .iter()
        .find(|r| r.x == 10.0 && r.t == 0.1)
        .unwrap();
    assert!(row.abs_error < 1e-8, "{}", row.abs_error);
}

#[test]
fn file_systems_cannot_be_tabulated() {
    let mut cfg = ExperimentConfig::reference_table(FixtureKind::Riccati);
    cfg.source = SystemSource::File("system.pde".into());
    let err = make_error_table(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

fn figure(pade: Option<(usize, usize)>) -> FigureData {
    let mut cfg = ExperimentConfig::reference_figure();
    cfg.pade = pade;
    make_divergence_figure(&cfg).unwrap()
}

#[test]
fn figure_shape_and_metadata() {
    let fig = figure(Some((7, 8)));
    assert_eq!(fig.t, uniform_samples(0.5, FIGURE_SAMPLES));
    assert!(fig.t.len() > 200);
    let names: Vec<&str> = fig.curves.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["T5", "T15", "pade_7_8"]);
    let back = FigureData::from_csv(&fig.to_csv().unwrap()).unwrap();
    assert_eq!(back, fig);
    assert!((back.radius - 0.2855993321).abs() < 1e-9);
}

#[test]
fn figure_divergence_claims() {
    let fig = figure(None);
    let at = |t: f64| fig.t.iter().position(|&s| s == t).unwrap();
    let err = |name: &str, i: usize| (fig.curve(name).unwrap()[i] - fig.exact[i]).abs();
    let i = at(0.05);
    assert!(err("T5", i) < 1e-3);
    assert!(err("T15", i) < 1e-9);
    let i = at(0.5);
    assert!(err("T15", i) >= err("T5", i));
}

#[test]
fn pade_tracks_exact_beyond_radius() {
    let fig = figure(Some((7, 8)));
    let i = fig.t.len() - 1;
    assert!((fig.curve("pade_7_8").unwrap()[i] - fig.exact[i]).abs() < 1e-4);
}

#[test]
fn figure_validation() {
    let mut cfg = ExperimentConfig::reference_figure();
    cfg.x = vec![0.0, 1.0];
    assert_eq!(make_divergence_figure(&cfg).unwrap_err().exit_code(), 2);
    let mut cfg = ExperimentConfig::reference_figure();
    cfg.format = OutputFormat::CsvSvg;
    assert_eq!(make_divergence_figure(&cfg).unwrap_err().exit_code(), 2);
    // [0/1] divides by c_0, and u(0, 0) = tanh(0) = 0
    let mut cfg = ExperimentConfig::reference_figure();
    cfg.pade = Some((0, 1));
    assert_eq!(make_divergence_figure(&cfg).unwrap_err().exit_code(), 3);
}

#[test]
fn svg_marks_radius() {
    let svg = figure(Some((7, 8))).to_svg();
    assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    assert_eq!(svg.matches("<polyline").count(), 4);
    assert!(svg.contains("R = 0.2856"));
}
