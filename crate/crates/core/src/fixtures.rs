//! Built-in systems whose exact solutions are the `tanh` waves of
//! [`oracle`](crate::oracle), plus the reference `(x, t)` evaluation grid.
//!
//! Every wave `a + b tanh(x - wt)` obeys `u_t = -(w/b)(b^2 - (u - a)^2)`, which
//! gives the nonlinear fixtures, and `u_t = -w u_x`, which gives the linear
//! one.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::dsl::{parse_system, PdeSystem};
use crate::oracle::{paper_solutions, reference_tanh_wave, TravelingWave};
use crate::series::TanhPoly;
use crate::{Error, Result};

/// `u' = -(11/2)(1 - u^2)`, solved by `tanh(x - 11t/2)`.
pub const RICCATI: &str = "u' = -11/2 * (1 - u^2)\n";

/// Solved by the three reference waves `u`, `v`, `z`.
pub const COUPLED: &str = "\
u' = -11/4 * (1 - 4*(u - 1)^2)
v' = 11/8 * (1 - 16*(v - 1)^2)
z' = 11/2 * (1 - (z - 2)^2)
";

/// Linear transport at speed 11/2 for each of `u`, `v`, `z`.
pub const TRANSPORT: &str = "\
u' = -11/2 * u_x
v' = -11/2 * v_x
z' = -11/2 * z_x
";

/// Spatial points of the reference error tables.
pub const REFERENCE_X_GRID: [f64; 5] = [-15.0, -10.0, -5.0, 5.0, 10.0];

/// Times of the reference error tables.
pub const REFERENCE_T_GRID: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FixtureKind {
    Riccati,
    Coupled,
    Transport,
}

impl FixtureKind {
    pub const ALL: [FixtureKind; 3] = [
        FixtureKind::Riccati,
        FixtureKind::Coupled,
        FixtureKind::Transport,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixtureKind::Riccati => "riccati",
            FixtureKind::Coupled => "coupled",
            FixtureKind::Transport => "transport",
        }
    }

    pub fn source(self) -> &'static str {
        match self {
            FixtureKind::Riccati => RICCATI,
            FixtureKind::Coupled => COUPLED,
            FixtureKind::Transport => TRANSPORT,
        }
    }

    /// Parses the system and pairs each field with its exact solution.
    pub fn build(self) -> Fixture {
        let system = parse_system(self.source()).expect("built-in fixture parses");
        let waves = match self {
            FixtureKind::Riccati => alloc::vec![reference_tanh_wave()],
            FixtureKind::Coupled | FixtureKind::Transport => paper_solutions().to_vec(),
        };
        Fixture {
            kind: self,
            system,
            waves,
        }
    }
}

impl fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FixtureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FixtureKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or(Error::InvalidArgument(
                "unknown fixture (expected riccati, coupled or transport)",
            ))
    }
}

/// A system together with the exact wave solving each of its fields.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub kind: FixtureKind,
    pub system: PdeSystem,
    pub waves: Vec<TravelingWave>,
}

impl Fixture {
    /// `u_j(x, 0) = a_j + b_j tanh(x)` for every field.
    pub fn initial(&self) -> Vec<TanhPoly> {
        self.waves
            .iter()
            .map(|w| TanhPoly::new(alloc::vec![w.a, w.b]))
            .collect()
    }

    pub fn field_names(&self) -> Vec<alloc::string::String> {
        self.system
            .fields()
            .iter()
            .map(ToString::to_string)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::TimeSeries;
    use crate::solver::{residual, solve, SeriesSolution};

    #[test]
    fn names_round_trip() {
        for k in FixtureKind::ALL {
            assert_eq!(k.name().parse::<FixtureKind>().unwrap(), k);
        }
        assert!("mkdv".parse::<FixtureKind>().is_err());
    }

    #[test]
    fn exact_waves_satisfy_their_systems() {
        for kind in FixtureKind::ALL {
            let fx = kind.build();
            let series: Vec<TimeSeries> = fx
                .waves
                .iter()
                .map(|w| w.time_series(12).unwrap())
                .collect();
            let exact = SeriesSolution::from_series(fx.system.clone(), series).unwrap();
            let scale = exact
                .series()
                .iter()
                .map(TimeSeries::max_abs)
                .fold(1.0, f64::max);
            let r = residual(&fx.system, &exact).unwrap();
            assert!(r <= 1e-12 * scale, "{kind}: residual {r}");
        }
    }

    #[test]
    fn solve_from_fixture_initial_data() {
        let fx = FixtureKind::Transport.build();
        let sol = solve(&fx.system, &fx.initial(), 4).unwrap();
        assert_eq!(sol.initial(), fx.initial().as_slice());
    }
}
