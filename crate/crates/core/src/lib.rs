//! Time-power-series solutions of polynomial evolution systems
//! `u_t = f(u, u_x, u_xx, ...)` whose spatial dependence lives in the ring of
//! polynomials in `w = tanh(x)`.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! - [`series`]: the coefficient ring [`TanhPoly`], truncated time series
//!   [`TimeSeries`] over it and plain scalar series [`ScalarSeries`].
//! - [`dsl`]: a small parser for right-hand sides such as
//!   `u' = -11/4 + 11*(u - 1)^2` and the evaluator that substitutes time
//!   series into them.
//! - [`solver`]: the coefficient recurrence producing the Taylor polynomial in
//!   `t` of the solution, and a residual check.
//! - [`oracle`]: closed-form `a + b tanh(kx - wt)` waves, their Taylor
//!   coefficients from an independent Riccati recurrence, and the radius of
//!   convergence of those series.
//! - [`pade`]: rational approximants and their poles, which continue the
//!   series past its radius of convergence.
//! - [`fixtures`]: systems with known traveling-wave solutions.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dsl;
mod error;
pub mod fixtures;
mod linalg;
pub mod oracle;
pub mod pade;
pub mod series;
pub mod solver;

pub use dsl::{eval_rhs, parse_system, Expr, PdeSystem, Rational};
pub use error::{Error, ParseErrorKind, Result};
pub use oracle::{convergence_radius, empirical_radius, paper_solutions, TravelingWave};
pub use pade::{Complex, PadeApproximant};
pub use series::{ScalarSeries, TanhPoly, TimeSeries};
pub use solver::{residual, solve, SeriesSolution};
