//! Polynomials in `w = tanh(x)` and truncated power series in `t`.
//!
//! [`TanhPoly`] is closed under multiplication and under `d/dx`, because
//! `dw/dx = 1 - w^2`. A [`TimeSeries`] stores `u_0(x), ..., u_N(x)` for
//! `u(x, t) = sum_j u_j(x) t^j`, truncated at an inclusive order `N`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result};

/// `p(x) = sum_k c_k tanh(x)^k`, with trailing zeros stripped.
#[derive(Clone, Debug, PartialEq)]
pub struct TanhPoly {
    coeffs: Vec<f64>,
}

impl TanhPoly {
    /// Builds a polynomial from `c_0, c_1, ...`. An empty list is zero.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        TanhPoly { coeffs }
    }

    pub fn zero() -> Self {
        TanhPoly { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        TanhPoly { coeffs: vec![c] }
    }

    /// The polynomial `w`, i.e. `tanh(x)` itself.
    pub fn tanh() -> Self {
        TanhPoly {
            coeffs: vec![0.0, 1.0],
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| f64::max(m, c.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        TanhPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Exact convolution of the coefficient lists.
    pub fn mul(&self, other: &TanhPoly) -> TanhPoly {
        if self.is_zero() || other.is_zero() {
            return TanhPoly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        TanhPoly::new(out)
    }

    /// `d/dx`, computed as `(1 - w^2) p'(w)`.
    pub fn dx(&self) -> TanhPoly {
        let d = self.degree();
        if d == 0 {
            return TanhPoly::zero();
        }
        // p'(w) has coefficients (k+1) c_{k+1}, k = 0..d-1
        let dp: Vec<f64> = (1..=d).map(|k| k as f64 * self.coeffs[k]).collect();
        let mut out = vec![0.0; d + 2];
        for (k, c) in dp.iter().enumerate() {
            out[k] += c;
            out[k + 2] -= c;
        }
        TanhPoly::new(out)
    }

    /// `k`-fold spatial derivative.
    pub fn dx_n(&self, k: u32) -> TanhPoly {
        (0..k).fold(self.clone(), |p, _| p.dx())
    }

    /// Horner evaluation at `w = tanh(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_w(libm::tanh(x))
    }

    /// Horner evaluation at a given value of `w`.
    pub fn eval_w(&self, w: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * w + c)
    }

    fn zip_with(&self, other: &TanhPoly, f: impl Fn(f64, f64) -> f64) -> TanhPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let at = |p: &TanhPoly, k: usize| p.coeffs.get(k).copied().unwrap_or(0.0);
        TanhPoly::new((0..n).map(|k| f(at(self, k), at(other, k))).collect())
    }
}

impl Default for TanhPoly {
    fn default() -> Self {
        TanhPoly::zero()
    }
}

impl From<f64> for TanhPoly {
    fn from(c: f64) -> Self {
        TanhPoly::constant(c)
    }
}

impl Add for &TanhPoly {
    type Output = TanhPoly;
    fn add(self, rhs: &TanhPoly) -> TanhPoly {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &TanhPoly {
    type Output = TanhPoly;
    fn sub(self, rhs: &TanhPoly) -> TanhPoly {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &TanhPoly {
    type Output = TanhPoly;
    fn mul(self, rhs: &TanhPoly) -> TanhPoly {
        TanhPoly::mul(self, rhs)
    }
}

impl Neg for &TanhPoly {
    type Output = TanhPoly;
    fn neg(self) -> TanhPoly {
        TanhPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// `sum_{j=0}^{N} u_j(x) t^j` with [`TanhPoly`] coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    coeffs: Vec<TanhPoly>,
}

impl TimeSeries {
    /// Builds a series of order `coeffs.len() - 1`.
    ///
    /// # Panics
    ///
    /// If `coeffs` is empty.
    pub fn new(coeffs: Vec<TanhPoly>) -> Self {
        assert!(!coeffs.is_empty(), "a time series needs at least u_0");
        TimeSeries { coeffs }
    }

    /// The series whose only nonzero coefficient is `u_0 = p`, at `order`.
    pub fn constant(p: TanhPoly, order: usize) -> Self {
        let mut coeffs = vec![TanhPoly::zero(); order + 1];
        coeffs[0] = p;
        TimeSeries { coeffs }
    }

    /// Series with constant (x-independent) coefficients.
    pub fn from_scalars(values: &[f64]) -> Self {
        TimeSeries::new(values.iter().map(|&c| TanhPoly::constant(c)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[TanhPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Option<&TanhPoly> {
        self.coeffs.get(j)
    }

    /// Keeps coefficients `0..=order`.
    pub fn truncate(&self, order: usize) -> Result<TimeSeries> {
        if order > self.order() {
            return Err(Error::TruncationTooDeep {
                requested: order,
                available: self.order(),
            });
        }
        Ok(TimeSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    /// Cauchy product truncated at `order`; both operands must reach it.
    pub fn mul(&self, other: &TimeSeries, order: usize) -> Result<TimeSeries> {
        let available = self.order().min(other.order());
        if order > available {
            return Err(Error::TruncationTooDeep {
                requested: order,
                available,
            });
        }
        let coeffs = (0..=order)
            .map(|j| {
                (0..=j).fold(TanhPoly::zero(), |acc, i| {
                    &acc + &self.coeffs[i].mul(&other.coeffs[j - i])
                })
            })
            .collect();
        Ok(TimeSeries { coeffs })
    }

    /// Term-by-term antiderivative in `t` with zero constant term; the order
    /// grows by one.
    pub fn integrate_t(&self) -> TimeSeries {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(TanhPoly::zero());
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| c.scale(1.0 / (j + 1) as f64)),
        );
        TimeSeries { coeffs }
    }

    /// Term-by-term derivative in `t`; the order drops by one (order 0 maps to
    /// the zero series of order 0).
    pub fn derivative_t(&self) -> TimeSeries {
        if self.order() == 0 {
            return TimeSeries::constant(TanhPoly::zero(), 0);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(j, c)| c.scale((j + 1) as f64))
            .collect();
        TimeSeries { coeffs }
    }

    /// Coefficient-wise `k`-fold spatial derivative.
    pub fn dx_n(&self, k: u32) -> TimeSeries {
        TimeSeries {
            coeffs: self.coeffs.iter().map(|c| c.dx_n(k)).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> TimeSeries {
        TimeSeries {
            coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect(),
        }
    }

    /// Coefficient-wise sum, at the smaller of the two orders.
    pub fn add(&self, other: &TimeSeries) -> TimeSeries {
        self.zip_with(other, |a, b| a + b)
    }

    /// Coefficient-wise difference, at the smaller of the two orders.
    pub fn sub(&self, other: &TimeSeries) -> TimeSeries {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> TimeSeries {
        TimeSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Degree-`N` partial sum at `(x, t)`. No convergence is implied once
    /// `t` reaches the radius of convergence at `x`.
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        self.at(x).eval(t)
    }

    /// Fixes `x`, leaving a scalar series in `t`.
    pub fn at(&self, x: f64) -> ScalarSeries {
        let w = libm::tanh(x);
        ScalarSeries::new(self.coeffs.iter().map(|c| c.eval_w(w)).collect())
    }

    /// Largest coefficient magnitude over all orders.
    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .iter()
            .fold(0.0, |m, c| f64::max(m, c.max_abs()))
    }

    fn zip_with(
        &self,
        other: &TimeSeries,
        f: impl Fn(&TanhPoly, &TanhPoly) -> TanhPoly,
    ) -> TimeSeries {
        TimeSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

/// Truncated power series in `t` with real coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarSeries {
    coeffs: Vec<f64>,
}

impl ScalarSeries {
    /// # Panics
    ///
    /// If `coeffs` is empty.
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least one coefficient"
        );
        ScalarSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Keeps coefficients `0..=order` (or all of them, if fewer).
    pub fn truncated(&self, order: usize) -> ScalarSeries {
        let n = (order + 1).min(self.coeffs.len());
        ScalarSeries {
            coeffs: self.coeffs[..n].to_vec(),
        }
    }

    /// Horner evaluation of the partial sum.
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[f64]) -> TanhPoly {
        TanhPoly::new(c.to_vec())
    }

    fn ts(c: &[&[f64]]) -> TimeSeries {
        TimeSeries::new(c.iter().map(|c| p(c)).collect())
    }

    #[test]
    fn normalization() {
        assert_eq!(p(&[]).coeffs(), &[0.0]);
        assert_eq!(p(&[1.0, 2.0, 0.0, 0.0]).coeffs(), &[1.0, 2.0]);
        assert_eq!(p(&[0.0, 0.0]).degree(), 0);
        assert!(p(&[0.0, 0.0]).is_zero());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(
            p(&[0.0, 1.0]).mul(&p(&[0.0, 1.0])).coeffs(),
            &[0.0, 0.0, 1.0]
        );
        assert_eq!(
            p(&[1.0, 0.5]).mul(&p(&[2.0, -1.0])).coeffs(),
            &[2.0, 0.0, -0.5]
        );
        let (a, b) = (p(&[1.0, 0.5]), p(&[2.0, -1.0]));
        let x: f64 = 0.7;
        let direct = (1.0 + 0.5 * x.tanh()) * (2.0 - x.tanh());
        assert!((a.mul(&b).eval(x) - direct).abs() < 1e-15);
        assert!((a.mul(&b).eval(x) - a.eval(x) * b.eval(x)).abs() < 1e-15);
    }

    #[test]
    fn dx_examples() {
        assert_eq!(p(&[0.0, 1.0]).dx().coeffs(), &[1.0, 0.0, -1.0]);
        assert_eq!(p(&[3.5]).dx().coeffs(), &[0.0]);
        assert_eq!(p(&[0.0, 0.0, 1.0]).dx().coeffs(), &[0.0, 2.0, 0.0, -2.0]);
        assert_eq!(p(&[0.0, 1.0]).dx_n(2).coeffs(), &[0.0, -2.0, 0.0, 2.0]);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(&[1.0, 0.5]).eval(0.0), 1.0);
        assert_eq!(p(&[2.0, -1.0]).eval(0.0), 2.0);
        assert!((p(&[0.0, 1.0]).eval(20.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn series_mul_examples() {
        let one_plus_t = ts(&[&[1.0], &[1.0]]);
        assert_eq!(
            one_plus_t.mul(&one_plus_t, 1).unwrap(),
            ts(&[&[1.0], &[2.0]])
        );
        let a = ts(&[&[1.0], &[1.0], &[0.0]]);
        let b = ts(&[&[1.0], &[1.0], &[0.0]]);
        assert_eq!(a.mul(&b, 2).unwrap(), ts(&[&[1.0], &[2.0], &[1.0]]));
        let c = ts(&[&[1.0], &[1.0], &[1.0]]);
        assert_eq!(c.mul(&c, 2).unwrap(), ts(&[&[1.0], &[2.0], &[3.0]]));
        let a = ts(&[&[0.0, 1.0], &[1.0]]);
        let b = ts(&[&[0.0, 1.0], &[0.0]]);
        assert_eq!(a.mul(&b, 1).unwrap(), ts(&[&[0.0, 0.0, 1.0], &[0.0, 1.0]]));
    }

    #[test]
    fn series_mul_too_deep() {
        let a = ts(&[&[1.0], &[1.0]]);
        let b = ts(&[&[1.0], &[1.0], &[1.0]]);
        assert_eq!(
            a.mul(&b, 2),
            Err(Error::TruncationTooDeep {
                requested: 2,
                available: 1
            })
        );
    }

    #[test]
    fn integrate_examples() {
        assert_eq!(ts(&[&[1.0]]).integrate_t(), ts(&[&[0.0], &[1.0]]));
        let a0 = p(&[1.0, 2.0]);
        let a1 = p(&[0.0, 4.0]);
        let s = TimeSeries::new(vec![a0.clone(), a1.clone()]);
        assert_eq!(
            s.integrate_t(),
            TimeSeries::new(vec![TanhPoly::zero(), a0, a1.scale(0.5)])
        );
        assert_eq!(
            ts(&[&[0.0], &[0.0], &[3.0]]).integrate_t(),
            ts(&[&[0.0], &[0.0], &[0.0], &[1.0]])
        );
    }

    #[test]
    fn series_eval_examples() {
        assert_eq!(
            TimeSeries::from_scalars(&[1.0, 2.0, 1.0]).eval(3.0, 0.5),
            2.25
        );
        let s = ts(&[&[1.0, 0.5], &[4.0, 1.0, 7.0]]);
        assert_eq!(s.eval(0.3, 0.0), p(&[1.0, 0.5]).eval(0.3));
    }

    #[test]
    fn derivative_inverts_integral() {
        let s = ts(&[&[1.0, 0.5], &[4.0, 1.0, 7.0], &[0.0, 3.0]]);
        assert_eq!(s.integrate_t().derivative_t(), s);
    }

    // Small integers times 1/8 keep every product and sum exact in binary.
    fn exact_poly() -> impl Strategy<Value = TanhPoly> {
        prop::collection::vec(-16i32..=16, 1..5)
            .prop_map(|v| TanhPoly::new(v.into_iter().map(|c| c as f64 / 8.0).collect()))
    }

    fn real_poly() -> impl Strategy<Value = TanhPoly> {
        prop::collection::vec(-2.0f64..2.0, 1..6).prop_map(TanhPoly::new)
    }

    fn series(order: usize) -> impl Strategy<Value = TimeSeries> {
        prop::collection::vec(real_poly(), order + 1).prop_map(TimeSeries::new)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in exact_poly(), b in exact_poly(), c in exact_poly()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&(&b + &c)), &a.mul(&b) + &a.mul(&c));
        }

        #[test]
        fn leibniz(a in exact_poly(), b in exact_poly()) {
            let lhs = a.mul(&b).dx();
            let rhs = &a.dx().mul(&b) + &a.mul(&b.dx());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn eval_homomorphism(a in real_poly(), b in real_poly(), x in -3.0f64..3.0) {
            let (ea, eb) = (a.eval(x), b.eval(x));
            prop_assert!(((&a + &b).eval(x) - (ea + eb)).abs() < 1e-12);
            prop_assert!((a.mul(&b).eval(x) - ea * eb).abs() < 1e-12);
        }

        #[test]
        fn dx_matches_finite_difference(a in real_poly(), x in -3.0f64..3.0) {
            let h = 1e-5;
            let fd = (a.eval(x + h) - a.eval(x - h)) / (2.0 * h);
            prop_assert!((a.dx().eval(x) - fd).abs() < 1e-6);
        }

        #[test]
        fn bounded_by_coefficient_sum(a in real_poly(), x in -50.0f64..50.0) {
            let bound: f64 = a.coeffs().iter().map(|c| c.abs()).sum();
            prop_assert!(a.eval(x).abs() <= bound * (1.0 + 8.0 * f64::EPSILON));
        }

        #[test]
        fn integral_differentiates_back(s in series(4), x in -2.0f64..2.0) {
            let integral = s.integrate_t();
            let (t, h) = (0.05, 1e-5);
            let fd = (integral.eval(x, t + h) - integral.eval(x, t - h)) / (2.0 * h);
            prop_assert!((fd - s.eval(x, t)).abs() < 1e-6);
        }

        #[test]
        fn truncation_consistency(a in series(6), b in series(6), n in 0usize..4, k in 0usize..3) {
            let short = a.mul(&b, n).unwrap();
            let long = a.mul(&b, n + k).unwrap();
            prop_assert_eq!(&long.coeffs()[..=n], short.coeffs());
        }
    }
}
