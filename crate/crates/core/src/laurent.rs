//! Truncated Laurent expansions about `z = 0`.
//!
//! A [`LaurentPoly`] stores complex coefficients densely over the exponent
//! range `[lo, hi]`. Products keep their full support; [`LaurentPoly::exp`]
//! sums the exponential series with an explicit tail bound and reports the
//! coefficients inside a caller-chosen [`Window`].

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest exponent range a single expansion may span.
pub const MAX_WIDTH: i64 = 1 << 22;

/// Closed exponent range `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Self {
        Window { lo, hi }
    }

    pub fn contains(&self, k: i64) -> bool {
        self.lo <= k && k <= self.hi
    }
}

/// Controls for the exponential series.
#[derive(Clone, Copy, Debug)]
pub struct ExpOptions {
    /// Absolute bound on every discarded coefficient.
    pub tol: f64,
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
}

impl Default for ExpOptions {
    fn default() -> Self {
        ExpOptions {
            tol: 1e-14,
            max_terms: 500,
        }
    }
}

/// Result of [`LaurentPoly::exp_with_bound`].
#[derive(Clone, Debug)]
pub struct ExpSeries {
    pub value: LaurentPoly,
    /// Majorant of the discarded tail, `sum_{m > n} M^m / m!`.
    pub tail_bound: f64,
    /// Highest power of the argument included.
    pub terms: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly {
    lo: i64,
    coeffs: Vec<Complex64>,
}

impl LaurentPoly {
    /// Builds an expansion whose first coefficient sits at exponent `lo`.
    /// Zero coefficients at either end are trimmed.
    pub fn new(lo: i64, coeffs: Vec<Complex64>) -> Self {
        let mut p = LaurentPoly { lo, coeffs };
        p.normalize();
        p
    }

    pub fn from_real(lo: i64, coeffs: &[f64]) -> Self {
        Self::new(lo, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        LaurentPoly {
            lo: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(0, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(exponent: i64, c: Complex64) -> Self {
        Self::new(exponent, vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest stored exponent.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest stored exponent (`lo - 1` for the zero expansion).
    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`; exactly zero outside the stored range.
    pub fn coeff(&self, k: i64) -> Complex64 {
        if k < self.lo || k > self.hi() {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(k - self.lo) as usize]
    }

    /// Coefficient of `z^{-1}`.
    pub fn residue(&self) -> Complex64 {
        self.coeff(-1)
    }

    /// Sum of coefficient moduli; sub-multiplicative under [`checked_mul`](Self::checked_mul).
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.lo, self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &LaurentPoly) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let coeffs = (lo..=hi).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::new(lo, coeffs)
    }

    /// Keeps only the coefficients whose exponents lie in `window`.
    pub fn restrict(&self, window: Window) -> Self {
        if window.hi < window.lo {
            return Self::zero();
        }
        let lo = self.lo.max(window.lo);
        let hi = self.hi().min(window.hi);
        if hi < lo {
            return Self::zero();
        }
        Self::new(lo, (lo..=hi).map(|k| self.coeff(k)).collect())
    }

    /// Cauchy product with support `[a.lo + b.lo, a.hi + b.hi]`.
    pub fn checked_mul(&self, other: &LaurentPoly) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let lo = self.lo.checked_add(other.lo);
        let hi = self.hi().checked_add(other.hi());
        let (lo, hi) = match (lo, hi) {
            (Some(lo), Some(hi)) if hi - lo < MAX_WIDTH => (lo, hi),
            _ => {
                return Err(Error::WindowTooLarge {
                    lo: self.lo.saturating_add(other.lo),
                    hi: self.hi().saturating_add(other.hi()),
                })
            }
        };
        let mut out = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (j, &b) in other.coeffs.iter().enumerate() {
            if b == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (i, &a) in self.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Self::new(lo, out))
    }

    /// `exp(self)` restricted to `window`, see [`exp_with_bound`](Self::exp_with_bound).
    pub fn exp(&self, window: Window, opts: &ExpOptions) -> Result<Self> {
        self.exp_with_bound(window, opts).map(|s| s.value)
    }

    /// Sums `self^n / n!` until the majorant tail `sum_{m>n} M^m/m!`, with
    /// `M = ||self||_1`, drops below `opts.tol`.
    ///
    /// Powers are carried with their full support, since an argument with
    /// both positive and negative exponents feeds every exponent back into the
    /// window; only the accumulated sum is restricted.
    pub fn exp_with_bound(&self, window: Window, opts: &ExpOptions) -> Result<ExpSeries> {
        if window.hi < window.lo || window.hi - window.lo >= MAX_WIDTH {
            return Err(Error::WindowTooLarge {
                lo: window.lo,
                hi: window.hi,
            });
        }
        let majorant = self.l1_norm();
        let mut sum = Self::one().restrict(window).dense_over(window);
        let mut term = Self::one();
        let mut bound = tail_bound(majorant, 0);
        let mut n = 0usize;
        while bound > opts.tol {
            if n >= opts.max_terms {
                return Err(Error::ToleranceNotMet {
                    requested: opts.tol,
                    achieved: bound,
                    terms: n,
                });
            }
            n += 1;
            term = term.checked_mul(self)?.scale(Complex64::new(1.0 / n as f64, 0.0));
            let lo = term.lo.max(window.lo);
            let hi = term.hi().min(window.hi);
            for k in lo..=hi {
                sum[(k - window.lo) as usize] += term.coeff(k);
            }
            bound = tail_bound(majorant, n);
        }
        Ok(ExpSeries {
            value: Self::new(window.lo, sum),
            tail_bound: bound,
            terms: n,
        })
    }

    fn dense_over(&self, window: Window) -> Vec<Complex64> {
        (window.lo..=window.hi).map(|k| self.coeff(k)).collect()
    }

    /// Evaluates the expansion at a nonzero point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        // Horner in z from the top, then shift by z^lo.
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * z.powi(self.lo as i32)
    }

    fn normalize(&mut self) {
        let zero = Complex64::new(0.0, 0.0);
        let first = self.coeffs.iter().position(|&c| c != zero);
        match first {
            None => {
                self.coeffs.clear();
                self.lo = 0;
            }
            Some(first) => {
                let last = self.coeffs.iter().rposition(|&c| c != zero).unwrap();
                self.coeffs.truncate(last + 1);
                self.coeffs.drain(..first);
                self.lo += first as i64;
            }
        }
    }
}

/// `sum_{m > n} M^m / m!`, bounded by the geometric majorant once `n + 2 > M`.
fn tail_bound(majorant: f64, n: usize) -> f64 {
    if majorant == 0.0 {
        return 0.0;
    }
    let ratio = majorant / (n as f64 + 2.0);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    let ln_next = (n as f64 + 1.0) * majorant.ln() - ln_factorial(n + 1);
    ln_next.exp() / (1.0 - ratio)
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let k = self.lo + i as i64;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn z() -> LaurentPoly {
        LaurentPoly::monomial(1, c(1.0))
    }

    #[test]
    fn product_cancels_exponents() {
        let inv = LaurentPoly::monomial(-1, c(1.0));
        let p = z().checked_mul(&inv).unwrap();
        assert_eq!(p, LaurentPoly::one());
    }

    #[test]
    fn difference_of_squares() {
        let a = LaurentPoly::from_real(0, &[1.0, 1.0]);
        let b = LaurentPoly::from_real(0, &[1.0, -1.0]);
        let p = a.checked_mul(&b).unwrap();
        assert_eq!(p, LaurentPoly::from_real(0, &[1.0, 0.0, -1.0]));
        assert_eq!(p.lo(), 0);
        assert_eq!(p.hi(), 2);
    }

    #[test]
    fn mixed_exponent_product() {
        let a = LaurentPoly::from_real(-1, &[1.0, 2.0]);
        let b = LaurentPoly::monomial(1, c(3.0));
        let p = a.checked_mul(&b).unwrap();
        assert_eq!(p, LaurentPoly::from_real(0, &[3.0, 6.0]));
    }

    #[test]
    fn coefficient_outside_support_is_zero() {
        let p = LaurentPoly::from_real(-2, &[1.0, 2.0, 3.0]);
        assert_eq!(p.coeff(-3), c(0.0));
        assert_eq!(p.coeff(1), c(0.0));
        assert_eq!(p.coeff(-1), c(2.0));
        assert_eq!(p.coeffs().len() as i64, p.hi() - p.lo() + 1);
    }

    #[test]
    fn normalization_trims_zeros() {
        let p = LaurentPoly::from_real(-3, &[0.0, 0.0, 5.0, 0.0]);
        assert_eq!(p.lo(), -1);
        assert_eq!(p.hi(), -1);
        assert!(LaurentPoly::from_real(4, &[0.0, 0.0]).is_zero());
    }

    #[test]
    fn oversized_product_is_rejected() {
        let wide = LaurentPoly::new(0, {
            let mut v = vec![c(0.0); (MAX_WIDTH / 2 + 2) as usize];
            v[0] = c(1.0);
            *v.last_mut().unwrap() = c(1.0);
            v
        });
        assert!(matches!(
            wide.checked_mul(&wide),
            Err(Error::WindowTooLarge { .. })
        ));
        let far = LaurentPoly::monomial(i64::MAX - 1, c(1.0));
        assert!(far.checked_mul(&far).is_err());
    }

    #[test]
    fn exp_of_z() {
        let e = z().exp(Window::new(-2, 3), &ExpOptions::default()).unwrap();
        let expected = [0.0, 0.0, 1.0, 1.0, 0.5, 1.0 / 6.0];
        for (k, want) in (-2..=3).zip(expected) {
            assert!((e.coeff(k) - c(want)).norm() < 1e-15, "z^{k}");
        }
    }

    #[test]
    fn exp_of_zero_is_one() {
        let e = LaurentPoly::zero()
            .exp(Window::new(-5, 5), &ExpOptions::default())
            .unwrap();
        assert_eq!(e, LaurentPoly::one());
    }

    #[test]
    fn exp_residue_of_z_plus_inverse() {
        // Oracle: partial sums of sum_j 1/(j!(j+1)!).
        let mut oracle = 0.0;
        let mut term = 1.0;
        for j in 0..30 {
            if j > 0 {
                term /= (j * (j + 1)) as f64;
            }
            oracle += term;
        }
        let a = LaurentPoly::from_real(-1, &[1.0, 0.0, 1.0]);
        let e = a.exp(Window::new(-1, -1), &ExpOptions::default()).unwrap();
        assert!((e.residue().re - oracle).abs() < 1e-14);
        assert!((oracle - 1.590_636_854_6).abs() < 1e-10);
    }

    #[test]
    fn exp_reports_unmet_tolerance() {
        let a = LaurentPoly::monomial(1, c(40.0));
        let opts = ExpOptions {
            tol: 1e-14,
            max_terms: 20,
        };
        match a.exp(Window::new(0, 2), &opts) {
            Err(Error::ToleranceNotMet { achieved, terms, .. }) => {
                assert_eq!(terms, 20);
                assert!(achieved > 1e-14);
            }
            other => panic!("expected tolerance error, got {other:?}"),
        }
    }

    #[test]
    fn residue_of_inverse_is_one() {
        assert_eq!(LaurentPoly::monomial(-1, c(1.0)).residue(), c(1.0));
    }

    fn small_int_poly() -> impl Strategy<Value = LaurentPoly> {
        (-3i64..=3, prop::collection::vec(-4i32..=4, 1..5))
            .prop_map(|(lo, cs)| LaurentPoly::new(lo, cs.into_iter().map(|v| c(v as f64)).collect()))
    }

    fn power_series() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec(-1.0f64..1.0, 1..4).prop_map(|cs| LaurentPoly::from_real(1, &cs))
    }

    proptest! {
        #[test]
        fn mul_commutes_and_associates(a in small_int_poly(), b in small_int_poly(), d in small_int_poly()) {
            prop_assert_eq!(a.checked_mul(&b).unwrap(), b.checked_mul(&a).unwrap());
            let left = a.checked_mul(&b).unwrap().checked_mul(&d).unwrap();
            let right = a.checked_mul(&b.checked_mul(&d).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn exp_turns_sums_into_products(a in power_series(), b in power_series()) {
            let w = Window::new(0, 12);
            let opts = ExpOptions::default();
            let lhs = a.add(&b).exp(w, &opts).unwrap();
            let rhs = a.exp(w, &opts).unwrap()
                .checked_mul(&b.exp(w, &opts).unwrap()).unwrap()
                .restrict(w);
            for k in 0..=12 {
                prop_assert!((lhs.coeff(k) - rhs.coeff(k)).norm() < 1e-12);
            }
        }

        #[test]
        fn positive_support_has_no_residue(a in power_series()) {
            let e = a.exp(Window::new(-4, 4), &ExpOptions::default()).unwrap();
            prop_assert_eq!(e.residue(), c(0.0));
        }

        #[test]
        fn real_arguments_stay_real(lo in -3i64..=1, cs in prop::collection::vec(-2.0f64..2.0, 1..5)) {
            let a = LaurentPoly::from_real(lo, &cs);
            let e = a.exp(Window::new(-6, 6), &ExpOptions::default()).unwrap();
            for k in -6..=6 {
                prop_assert!(e.coeff(k).im.abs() < 1e-14);
            }
        }
    }
}
