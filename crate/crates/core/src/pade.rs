//! `[L/M]` Padé approximants of scalar power series.
//!
//! The approximant `P_L(t) / Q_M(t)` with `Q(0) = 1` reproduces the series
//! through `t^{L+M}`. Its poles settle near the singularities that limit the
//! radius of convergence, so it remains usable beyond that radius.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{lu_solve, polynomial_roots};
use crate::{Error, Result};

/// Linear systems with a 1-norm condition number above this are rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// Denominators at or below this magnitude count as a pole.
pub const POLE_TOLERANCE: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    /// Modulus.
    pub fn norm(&self) -> f64 {
        libm::hypot(self.re, self.im)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im < 0.0 {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// `num(t) / den(t)` with `den[0] == 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PadeApproximant {
    num: Vec<f64>,
    den: Vec<f64>,
    condition: f64,
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * t + v)
}

impl PadeApproximant {
    /// Fits the `[l/m]` approximant to `coeffs`, which must hold at least
    /// `l + m + 1` entries.
    ///
    /// The denominator solves the `m x m` Toeplitz system
    /// `sum_{k=1..m} q_k c_{l+i-k} = -c_{l+i}`, `i = 1..m` (with `c_n = 0` for
    /// `n < 0`); the numerator is the truncated product of `c` and `q`. A
    /// singular or badly conditioned system is reported, not patched up by
    /// dropping to a lower order.
    pub fn fit(coeffs: &[f64], l: usize, m: usize) -> Result<Self> {
        let needed = l + m + 1;
        if coeffs.len() < needed {
            return Err(Error::InsufficientCoefficients {
                needed,
                available: coeffs.len(),
            });
        }
        let c = |n: isize| if n < 0 { 0.0 } else { coeffs[n as usize] };
        let mut den = vec![1.0];
        let mut condition = 1.0;
        if m > 0 {
            let li = l as isize;
            let a: Vec<Vec<f64>> = (1..=m as isize)
                .map(|i| (1..=m as isize).map(|k| c(li + i - k)).collect())
                .collect();
            let b: Vec<f64> = (1..=m as isize).map(|i| -c(li + i)).collect();
            let sol = lu_solve(a, &b);
            if sol.condition.is_nan() || sol.condition > MAX_CONDITION {
                return Err(Error::DegenerateSystem {
                    condition: sol.condition,
                });
            }
            condition = sol.condition;
            den.extend(sol.x);
        }
        let num = (0..=l)
            .map(|i| (0..=i.min(m)).map(|k| den[k] * coeffs[i - k]).sum())
            .collect();
        Ok(PadeApproximant {
            num,
            den,
            condition,
        })
    }

    pub fn numerator(&self) -> &[f64] {
        &self.num
    }

    pub fn denominator(&self) -> &[f64] {
        &self.den
    }

    /// 1-norm condition number of the denominator system (1 when `M = 0`).
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// `(L, M)`.
    pub fn orders(&self) -> (usize, usize) {
        (self.num.len() - 1, self.den.len() - 1)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let d = horner(&self.den, t);
        if d.is_nan() || d.abs() <= POLE_TOLERANCE {
            return Err(Error::PoleAtEvaluation { t });
        }
        Ok(horner(&self.num, t) / d)
    }

    /// Roots of the denominator, nearest to the origin first.
    pub fn poles(&self) -> Result<Vec<Complex>> {
        let mut den = self.den.as_slice();
        while den.len() > 1 && den[den.len() - 1] == 0.0 {
            den = &den[..den.len() - 1];
        }
        let mut roots = polynomial_roots(den).ok_or(Error::NoConvergence)?;
        roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        Ok(roots)
    }

    /// Taylor coefficients of `num/den` through `order`, by series division.
    pub fn taylor(&self, order: usize) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut v = self.num.get(n).copied().unwrap_or(0.0);
            for k in 1..=n.min(self.den.len() - 1) {
                v -= self.den[k] * out[n - k];
            }
            out.push(v);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::reference_tanh_wave;
    use core::f64::consts::PI;
    use proptest::prelude::*;

    const EXP: [f64; 3] = [1.0, 1.0, 0.5];

    #[test]
    fn constant_entry() {
        let p = PadeApproximant::fit(&[2.5, 1.0, 3.0], 0, 0).unwrap();
        assert_eq!(p.numerator(), &[2.5]);
        assert_eq!(p.denominator(), &[1.0]);
        assert_eq!(p.eval(0.7).unwrap(), 2.5);
    }

    #[test]
    fn exp_one_one() {
        let p = PadeApproximant::fit(&EXP, 1, 1).unwrap();
        assert_eq!(p.numerator(), &[1.0, 0.5]);
        assert_eq!(p.denominator(), &[1.0, -0.5]);
        assert_eq!(p.eval(0.0).unwrap(), 1.0);
        assert_eq!(p.eval(1.0).unwrap(), 3.0);
        let poles = p.poles().unwrap();
        assert_eq!(poles.len(), 1);
        assert!((poles[0].re - 2.0).abs() < 1e-12 && poles[0].im == 0.0);
        assert_eq!(p.eval(2.0), Err(Error::PoleAtEvaluation { t: 2.0 }));
    }

    #[test]
    fn insufficient_and_degenerate() {
        assert_eq!(
            PadeApproximant::fit(&EXP, 2, 1),
            Err(Error::InsufficientCoefficients {
                needed: 4,
                available: 3
            })
        );
        // Even series: [1/1] needs c_1 != 0 on the Toeplitz diagonal.
        assert!(matches!(
            PadeApproximant::fit(&[1.0, 0.0, 1.0, 0.0, 1.0], 1, 1),
            Err(Error::DegenerateSystem { .. })
        ));
    }

    #[test]
    fn no_poles_without_denominator() {
        let p = PadeApproximant::fit(&EXP, 2, 0).unwrap();
        assert!(p.poles().unwrap().is_empty());
    }

    #[test]
    fn tanh_series_structure_and_poles() {
        let c = reference_tanh_wave().taylor(0.0, 15);
        let p = PadeApproximant::fit(c.coeffs(), 7, 8).unwrap();
        // odd numerator, even denominator
        for (k, v) in p.numerator().iter().enumerate() {
            if k % 2 == 0 {
                assert!(v.abs() <= 1e-10, "num[{k}] = {v}");
            }
        }
        for (k, v) in p.denominator().iter().enumerate() {
            if k % 2 == 1 {
                assert!(v.abs() <= 1e-10, "den[{k}] = {v}");
            }
        }
        let nearest = p.poles().unwrap()[0];
        assert!((nearest.norm() - PI / 11.0).abs() < 1e-3);
        assert!(nearest.re.abs() < 1e-6);
    }

    #[test]
    fn poles_stay_outside_true_radius() {
        let r0 = PI / 11.0;
        let c = reference_tanh_wave().taylor(0.0, 16);
        for m in [4, 6, 8] {
            let p = PadeApproximant::fit(c.coeffs(), m, m).unwrap();
            for pole in p.poles().unwrap() {
                assert!(pole.norm() >= 0.9 * r0, "[{m}/{m}] pole {pole}");
            }
        }
    }

    proptest! {
        #[test]
        fn reexpansion_reproduces_input(
            coeffs in prop::collection::vec(-1.0f64..1.0, 9),
            l in 0usize..5,
            m in 0usize..5,
        ) {
            let c = &coeffs[..l + m + 1];
            // Long division is unstable when a pole sits near the origin, so
            // "well conditioned" also asks for poles outside |t| = 1/2.
            let fit = PadeApproximant::fit(c, l, m).ok().filter(|p| {
                p.condition() < 1e5
                    && p.poles().is_ok_and(|z| z.first().is_none_or(|z| z.norm() > 0.5))
            });
            if let Some(p) = fit {
                let back = p.taylor(l + m);
                for (a, b) in back.iter().zip(c) {
                    prop_assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
                }
            }
        }
    }
}
