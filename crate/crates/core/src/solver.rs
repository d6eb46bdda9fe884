//! Taylor coefficients in `t` by recurrence.
//!
//! Substituting `u = sum_j u_j t^j` into `u_t = f(u, u_x, ...)` and matching
//! the `t^j` coefficients gives `(j + 1) u_{j+1} = [f(u)]_j`, where `[f(u)]_j`
//! only involves `u_0, ..., u_j`. Starting from `u_0 = u(x, 0)` this fixes
//! every coefficient.

use alloc::vec::Vec;

use crate::dsl::{eval_rhs, PdeSystem};
use crate::series::{TanhPoly, TimeSeries};
use crate::{Error, Result};

/// Degree-`N` Taylor polynomial in `t` of every field of a system.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSolution {
    system: PdeSystem,
    series: Vec<TimeSeries>,
    initial: Vec<TanhPoly>,
}

impl SeriesSolution {
    /// Wraps externally computed series (e.g. a known exact solution) so that
    /// [`residual`] can check them against `system`.
    pub fn from_series(system: PdeSystem, series: Vec<TimeSeries>) -> Result<Self> {
        if series.len() != system.len() {
            return Err(Error::DimensionMismatch {
                expected: system.len(),
                found: series.len(),
            });
        }
        let order = series[0].order();
        if series.iter().any(|s| s.order() != order) {
            return Err(Error::InvalidArgument(
                "all fields must share one truncation order",
            ));
        }
        let initial = series.iter().map(|s| s.coeffs()[0].clone()).collect();
        Ok(SeriesSolution {
            system,
            series,
            initial,
        })
    }

    pub fn system(&self) -> &PdeSystem {
        &self.system
    }

    pub fn order(&self) -> usize {
        self.series[0].order()
    }

    pub fn series(&self) -> &[TimeSeries] {
        &self.series
    }

    pub fn initial(&self) -> &[TanhPoly] {
        &self.initial
    }

    /// The series of a named field.
    pub fn field(&self, name: &str) -> Option<&TimeSeries> {
        self.system.field_index(name).map(|i| &self.series[i])
    }

    /// Same solution at a lower order. Coefficients are prefix-stable, so this
    /// equals a fresh solve at `order`.
    pub fn truncate(&self, order: usize) -> Result<SeriesSolution> {
        Ok(SeriesSolution {
            system: self.system.clone(),
            series: self
                .series
                .iter()
                .map(|s| s.truncate(order))
                .collect::<Result<_>>()?,
            initial: self.initial.clone(),
        })
    }
}

/// Runs the coefficient recurrence up to order `order` (at least 1).
///
/// Each step re-evaluates the right-hand side on the current truncation,
/// which costs `O(N^2)` right-hand-side evaluations overall.
pub fn solve(sys: &PdeSystem, init: &[TanhPoly], order: usize) -> Result<SeriesSolution> {
    if init.len() != sys.len() {
        return Err(Error::DimensionMismatch {
            expected: sys.len(),
            found: init.len(),
        });
    }
    if order == 0 {
        return Err(Error::InvalidArgument(
            "truncation order must be at least 1",
        ));
    }
    let mut coeffs: Vec<Vec<TanhPoly>> = init.iter().map(|p| alloc::vec![p.clone()]).collect();
    for j in 0..order {
        let state: Vec<TimeSeries> = coeffs.iter().map(|c| TimeSeries::new(c.clone())).collect();
        let rhs = eval_rhs(sys, &state, j)?;
        for (c, f) in coeffs.iter_mut().zip(&rhs) {
            c.push(next_coefficient(&f.coeffs()[j], j));
        }
    }
    Ok(SeriesSolution {
        system: sys.clone(),
        series: coeffs.into_iter().map(TimeSeries::new).collect(),
        initial: init.to_vec(),
    })
}

/// `u_{j+1} = F_j / (j + 1)`.
fn next_coefficient(rhs_j: &TanhPoly, j: usize) -> TanhPoly {
    let d = (j + 1) as f64;
    TanhPoly::new(rhs_j.coeffs().iter().map(|c| c / d).collect())
}

/// Largest coefficient of `d/dt u - f(u)` over all fields and the orders
/// `0..N-1` that a degree-`N` series determines.
///
/// The order-`j` term is formed as `(j+1) (u_{j+1} - F_j/(j+1))`, the same
/// rounding path as [`solve`], so a freshly solved series scores exactly zero
/// and any nonzero value measures a genuine mismatch.
pub fn residual(sys: &PdeSystem, sol: &SeriesSolution) -> Result<f64> {
    let n = sol.order();
    if n == 0 {
        return Ok(0.0);
    }
    let rhs = eval_rhs(sys, sol.series(), n - 1)?;
    let mut worst: f64 = 0.0;
    for (s, f) in sol.series().iter().zip(&rhs) {
        for j in 0..n {
            let mismatch = &s.coeffs()[j + 1] - &next_coefficient(&f.coeffs()[j], j);
            worst = worst.max(mismatch.max_abs() * (j + 1) as f64);
        }
    }
    Ok(worst)
}
