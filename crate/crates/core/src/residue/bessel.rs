//! The Bessel function `J1` and its positive zeros.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::residue::solve::bisect;

/// Above this argument the alternating power series loses more than a few
/// digits to cancellation and the integral representation takes over.
const SERIES_LIMIT: f64 = 8.0;

/// `J1(x) = sum_m (-1)^m (x/2)^{2m+1} / (m! (m+1)!)`.
///
/// Evaluated by the defining series for `|x| <= 8` and by the periodic
/// integral `J1(x) = (1/2π) ∫ cos(τ - x sin τ) dτ` beyond.
pub fn bessel_j1(x: f64) -> f64 {
    if x.abs() <= SERIES_LIMIT {
        j1_series(x)
    } else {
        j1_integral(x)
    }
}

/// The defining power series, summed until terms stop changing the total.
pub fn j1_series(x: f64) -> f64 {
    let h = 0.5 * x;
    let h2 = h * h;
    let mut term = h;
    let mut sum = term;
    for m in 1..200 {
        term *= -h2 / (m as f64 * (m as f64 + 1.0));
        let next = sum + term;
        if next == sum {
            break;
        }
        sum = next;
    }
    sum
}

/// Trapezoid rule on the full period of `cos(τ - x sin τ)`; exponentially
/// accurate once the node count exceeds `|x|` by a margin.
pub fn j1_integral(x: f64) -> f64 {
    let n = 2 * (x.abs().ceil() as usize) + 64;
    let mut acc = 0.0;
    for j in 0..n {
        let tau = 2.0 * PI * j as f64 / n as f64;
        acc += (tau - x * tau.sin()).cos();
    }
    acc / n as f64
}

/// Bracket and refined location of a positive zero of `J1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselZero {
    pub value: f64,
    pub bracket: (f64, f64),
}

/// The first `n` positive zeros `j_{1,1} < j_{1,2} < ...`, by a sign-change
/// scan with step 0.25 followed by bisection to `xtol`.
pub fn j1_zeros(n: usize, xtol: f64) -> Result<Vec<BesselZero>> {
    const STEP: f64 = 0.25;
    let limit = 4.0 * n as f64 + 8.0 + n as f64 * PI;
    let mut zeros = Vec::with_capacity(n);
    let mut lo = STEP;
    let mut f_lo = bessel_j1(lo);
    while zeros.len() < n {
        let hi = lo + STEP;
        if hi > limit {
            return Err(Error::SearchRange { lo: STEP, hi: limit });
        }
        let f_hi = bessel_j1(hi);
        if f_lo.signum() != f_hi.signum() || f_hi == 0.0 {
            let value = bisect(|x| Ok(bessel_j1(x)), lo, hi, xtol)?;
            zeros.push(BesselZero {
                value,
                bracket: (lo, hi),
            });
        }
        lo = hi;
        f_lo = f_hi;
    }
    Ok(zeros)
}
