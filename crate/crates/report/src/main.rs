use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tanhseries::config::{parse_grid, parse_init, parse_list, parse_pade, uniform_samples};
use tanhseries::{
    coefficients_csv, make_divergence_figure, make_error_table, radius_csv, write_output,
    ExperimentConfig, OutputFormat, ReportError, Result, SystemSource,
};
use tanhseries_core::fixtures::FixtureKind;
use tanhseries_core::{parse_system, residual, solve};

#[derive(Parser)]
#[command(
    name = "tanhseries",
    version,
    about = "Time-power-series solutions of tanh traveling waves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn fixture(s: &str) -> std::result::Result<FixtureKind, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Subcommand)]
enum Command {
    /// Run the coefficient recurrence for a system file.
    Solve {
        #[arg(long)]
        system: PathBuf,
        /// Initial tanh-polynomial coefficients, e.g. `u=0,1;v=1,-0.25`.
        #[arg(long, allow_hyphen_values = true)]
        init: String,
        #[arg(long)]
        order: usize,
        /// Print every coefficient as CSV instead of a summary.
        #[arg(long)]
        print_coeffs: bool,
    },
    /// Absolute error of partial sums over an (x, t) grid.
    Table {
        #[arg(long, default_value = "riccati", value_parser = fixture)]
        fixture: FixtureKind,
        #[arg(long, default_value = "2,5")]
        orders: String,
        /// List `a,b,c` or range `start:stop:step`.
        #[arg(long, default_value = "-15,-10,-5,5,10", allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value = "0.1:0.5:0.1", allow_hyphen_values = true)]
        t: String,
        /// Output directory; CSV goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partial sums against the exact wave on [0, t-max].
    Figure {
        #[arg(long, default_value = "riccati", value_parser = fixture)]
        fixture: FixtureKind,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value = "5,15")]
        orders: String,
        /// Also plot the [L/M] Padé approximant, given as `L,M`.
        #[arg(long)]
        pade: Option<String>,
        #[arg(long, default_value_t = 0.5)]
        t_max: f64,
        /// Number of intervals between t = 0 and t-max.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write an SVG plot (needs --out).
        #[arg(long)]
        svg: bool,
    },
    /// Convergence radius in t of tanh(x - 11t/2) at each x.
    Radius {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        x: String,
    },
}

fn emit(out: Option<&PathBuf>, name: &str, contents: &str) -> Result<()> {
    match out {
        Some(dir) => {
            let path = write_output(dir, name, contents)?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .map_err(|source| ReportError::Io {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    Ok(())
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Solve {
            system,
            init,
            order,
            print_coeffs,
        } => {
            let text = fs::read_to_string(&system).map_err(|source| ReportError::Io {
                path: system.clone(),
                source,
            })?;
            let core = |what: &str| {
                let what = format!("{what} {}", system.display());
                move |source| ReportError::Core {
                    context: what,
                    source,
                }
            };
            let sys = parse_system(&text).map_err(core("parsing"))?;
            let init = parse_init(&init, sys.fields())?;
            let sol = solve(&sys, &init, order).map_err(core("solving"))?;
            if print_coeffs {
                emit(None, "", &coefficients_csv(&sol)?)?;
            } else {
                let res = residual(&sys, &sol).map_err(core("checking"))?;
                print!("{sys}");
                println!("order: {order}");
                for (name, s) in sys.fields().iter().zip(sol.series()) {
                    let degree = s.coeffs().iter().map(|p| p.degree()).max().unwrap_or(0);
                    println!(
                        "{name}: max tanh degree {degree}, max |coefficient| {:e}",
                        s.max_abs()
                    );
                }
                println!("residual: {res:e}");
            }
        }
        Command::Table {
            fixture,
            orders,
            x,
            t,
            out,
        } => {
            let cfg = ExperimentConfig {
                source: SystemSource::Fixture(fixture),
                orders: parse_list(&orders)?,
                x: parse_grid(&x)?,
                t: parse_grid(&t)?,
                pade: None,
                out_dir: out,
                format: OutputFormat::Csv,
            };
            let table = make_error_table(&cfg)?;
            emit(
                cfg.out_dir.as_ref(),
                &format!("table_{fixture}.csv"),
                &table.to_csv()?,
            )?;
        }
        Command::Figure {
            fixture,
            x,
            orders,
            pade,
            t_max,
            samples,
            out,
            svg,
        } => {
            if !t_max.is_finite() || t_max <= 0.0 || samples == 0 {
                return Err(ReportError::config("t-max and samples must be positive"));
            }
            let cfg = ExperimentConfig {
                source: SystemSource::Fixture(fixture),
                orders: parse_list(&orders)?,
                x: vec![x],
                t: uniform_samples(t_max, samples),
                pade: pade.as_deref().map(parse_pade).transpose()?,
                out_dir: out,
                format: if svg {
                    OutputFormat::CsvSvg
                } else {
                    OutputFormat::Csv
                },
            };
            let fig = make_divergence_figure(&cfg)?;
            emit(
                cfg.out_dir.as_ref(),
                &format!("figure_{fixture}.csv"),
                &fig.to_csv()?,
            )?;
            if cfg.format == OutputFormat::CsvSvg {
                emit(
                    cfg.out_dir.as_ref(),
                    &format!("figure_{fixture}.svg"),
                    &fig.to_svg(),
                )?;
            }
        }
        Command::Radius { x } => emit(None, "", &radius_csv(&parse_grid(&x)?)?)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
