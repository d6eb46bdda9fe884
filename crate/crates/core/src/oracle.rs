//! Closed-form traveling waves `a + b tanh(kx - wt)` and the convergence of
//! their Taylor series in `t`.
//!
//! `tanh` has simple poles at `i(2j+1)pi/2`, so for fixed real `x` the series
//! in `t` about `t = 0` converges only for `|t| < sqrt((kx)^2 + pi^2/4) / |w|`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::series::{ScalarSeries, TanhPoly, TimeSeries};
use crate::{Error, Result};

/// `a + b tanh(k x - omega t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TravelingWave {
    pub a: f64,
    pub b: f64,
    pub k: f64,
    pub omega: f64,
}

impl TravelingWave {
    pub const fn new(a: f64, b: f64, k: f64, omega: f64) -> Self {
        TravelingWave { a, b, k, omega }
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        self.a + self.b * libm::tanh(self.k * x - self.omega * t)
    }

    /// Taylor coefficients in `t` at fixed `x`, through order `order`.
    ///
    /// Uses the scalar Riccati recurrence for `g(t) = tanh(kx - omega t)`,
    /// `g' = -omega (1 - g^2)`:
    /// `g_{j+1} = -omega / (j+1) * (delta_{j0} - (g*g)_j)`, `g_0 = tanh(kx)`.
    /// This path shares no code with the PDE solver.
    pub fn taylor(&self, x: f64, order: usize) -> ScalarSeries {
        let mut g = Vec::with_capacity(order + 1);
        g.push(libm::tanh(self.k * x));
        for j in 0..order {
            let square: f64 = (0..=j).map(|i| g[i] * g[j - i]).sum();
            let forcing = if j == 0 { 1.0 } else { 0.0 };
            g.push(-self.omega / (j + 1) as f64 * (forcing - square));
        }
        let mut c: Vec<f64> = g.iter().map(|gj| self.b * gj).collect();
        c[0] += self.a;
        ScalarSeries::new(c)
    }

    /// Time series with `tanh(x)`-polynomial coefficients, for waves with
    /// `k = 1`. Same Riccati recurrence as [`taylor`](Self::taylor), run in the
    /// polynomial ring.
    pub fn time_series(&self, order: usize) -> Result<TimeSeries> {
        if self.k != 1.0 {
            return Err(Error::UnsupportedWavenumber(self.k));
        }
        let mut g: Vec<TanhPoly> = vec![TanhPoly::tanh()];
        for j in 0..order {
            let square = (0..=j).fold(TanhPoly::zero(), |acc, i| &acc + &g[i].mul(&g[j - i]));
            let forcing = TanhPoly::constant(if j == 0 { 1.0 } else { 0.0 });
            g.push((&forcing - &square).scale(-self.omega / (j + 1) as f64));
        }
        let mut coeffs: Vec<TanhPoly> = g.iter().map(|p| p.scale(self.b)).collect();
        coeffs[0] = &coeffs[0] + &TanhPoly::constant(self.a);
        Ok(TimeSeries::new(coeffs))
    }

    /// Distance from `t = 0` to the nearest complex singularity in `t`.
    pub fn radius(&self, x: f64) -> Result<f64> {
        if self.omega == 0.0 {
            return Err(Error::DegenerateWave);
        }
        let kx = self.k * x;
        Ok(libm::sqrt(kx * kx + FRAC_PI_2 * FRAC_PI_2) / self.omega.abs())
    }
}

/// Temporal rate shared by the three reference waves.
pub const REFERENCE_OMEGA: f64 = 11.0 / 2.0;

/// The reference solutions `u = 1 + tanh(x - 11t/2)/2`,
/// `v = 1 - tanh(x - 11t/2)/4`, `z = 2 - tanh(x - 11t/2)`.
pub fn paper_solutions() -> [TravelingWave; 3] {
    [
        TravelingWave::new(1.0, 0.5, 1.0, REFERENCE_OMEGA),
        TravelingWave::new(1.0, -0.25, 1.0, REFERENCE_OMEGA),
        TravelingWave::new(2.0, -1.0, 1.0, REFERENCE_OMEGA),
    ]
}

/// `tanh(x - 11t/2)` itself.
pub fn reference_tanh_wave() -> TravelingWave {
    TravelingWave::new(0.0, 1.0, 1.0, REFERENCE_OMEGA)
}

/// Free-function form of [`TravelingWave::radius`].
pub fn convergence_radius(wave: &TravelingWave, x: f64) -> Result<f64> {
    wave.radius(x)
}

/// Radius of convergence estimated from the tail of a coefficient sequence.
///
/// Ratios `|c_j / c_{j-s}|` of consecutive nonzero coefficients approach
/// `R^{-s}` like `A (1 + B/j)`; the last two ratios are extrapolated linearly
/// in `1/j` to `j -> infinity` (a Domb-Sykes fit). `s = 2` when all nonzero
/// coefficients past `c_0` share one parity (odd or even functions), else
/// `s = 1`. A conjugate pair of nearest singularities makes plain ratios
/// oscillate, and the estimate is then unreliable.
pub fn empirical_radius(series: &ScalarSeries) -> Result<f64> {
    const MIN_ORDER: usize = 8;
    let c = series.coeffs();
    if series.order() < MIN_ORDER {
        return Err(Error::InsufficientData {
            needed: MIN_ORDER + 1,
            available: c.len(),
        });
    }
    let scale = c.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let tol = 1e-13 * scale;
    let nonzero: Vec<usize> = (1..c.len()).filter(|&j| c[j].abs() > tol).collect();
    let same_parity = nonzero.windows(2).all(|w| (w[1] - w[0]) % 2 == 0);
    let step = if same_parity { 2 } else { 1 };

    let ratios: Vec<(f64, f64)> = nonzero
        .iter()
        .filter(|&&j| j > step && c[j - step].abs() > tol)
        .map(|&j| (j as f64, (c[j] / c[j - step]).abs()))
        .collect();
    if ratios.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            available: ratios.len(),
        });
    }
    let (j1, r1) = ratios[ratios.len() - 2];
    let (j2, r2) = ratios[ratios.len() - 1];
    let mut limit = (j2 * r2 - j1 * r1) / (j2 - j1);
    if limit.is_nan() || limit <= 0.0 {
        limit = r2;
    }
    Ok(libm::pow(limit, -1.0 / step as f64))
}
