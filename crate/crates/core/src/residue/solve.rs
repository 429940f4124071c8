//! Root solvers for the residue condition.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::residue::bessel::j1_zeros;
use crate::residue::{residue_series, residue_series_with, EndDescriptor};

use crate::laurent::ExpOptions;

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Scan step as a fraction of the bracket width.
    pub scan_fraction: f64,
    /// Bisection stops once the bracket is narrower than this.
    pub xtol: f64,
    /// Required `|Res|` at each root (raised when the series is ill-conditioned).
    pub residual_tol: f64,
    /// A sign-change-free local minimum of `|Res|` below this is flagged.
    pub double_root_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            scan_fraction: 0.05,
            xtol: 1e-12,
            residual_tol: 1e-10,
            double_root_tol: 1e-8,
        }
    }
}

/// Roots of the residue condition in one free coefficient.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RootList {
    pub values: Vec<f64>,
    /// `|Res G|` at each root.
    pub residuals: Vec<f64>,
    pub brackets: Vec<(f64, f64)>,
    /// Scan samples `(coefficient, residue)`, kept when nothing was found.
    pub samples: Vec<(f64, f64)>,
    pub diagnostics: Vec<String>,
}

impl RootList {
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn sort_by_magnitude(&mut self) {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&i, &j| self.values[i].abs().total_cmp(&self.values[j].abs()));
        self.values = idx.iter().map(|&i| self.values[i]).collect();
        self.residuals = idx.iter().map(|&i| self.residuals[i]).collect();
        self.brackets = idx.iter().map(|&i| self.brackets[i]).collect();
    }
}

/// Bisection of a sign change on `[lo, hi]` down to width `xtol`.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::SearchRange { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= xtol || mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Tolerance for `|Res|` at a root: the requested one, raised to the rounding
/// level `16 ε e^M` of the series when `M`, the log-size of `G` on the
/// balanced circle, is large.
fn residual_tolerance(d: &EndDescriptor, requested: f64) -> f64 {
    let m = d.circle_majorant(d.balanced_radius());
    requested.max(16.0 * f64::EPSILON * m.exp() * d.balanced_radius())
}

fn check_residual(d: &EndDescriptor, value: f64, requested: f64) -> Result<f64> {
    let residual = residue_series(d)?.abs();
    let tolerance = residual_tolerance(d, requested);
    if residual > tolerance {
        return Err(Error::Residual {
            value,
            residual,
            tolerance,
        });
    }
    Ok(residual)
}

/// The first `n` values `a < 0` for which `Res exp(z + a/z) = 0`, namely
/// `a_k = -(j_{1,k} / 2)^2`.
pub fn solve_simple_family(n: usize) -> Result<RootList> {
    if n == 0 {
        return Err(Error::InvalidArgument("at least one root requested".into()));
    }
    let opts = SolveOptions::default();
    let zeros = j1_zeros(n, opts.xtol)?;
    let mut roots = RootList::default();
    for z in zeros {
        let a = -(z.value / 2.0).powi(2);
        let bracket = (-(z.bracket.1 / 2.0).powi(2), -(z.bracket.0 / 2.0).powi(2));
        let residual = check_residual(&EndDescriptor::simple_family(a), a, opts.residual_tol)?;
        roots.values.push(a);
        roots.residuals.push(residual);
        roots.brackets.push(bracket);
    }
    Ok(roots)
}

/// All simple roots of `c_{free_index} -> Res G` inside `bracket`, the other
/// coefficients held fixed. `free_index` counts from 1.
pub fn solve_coefficient(
    d: &EndDescriptor,
    free_index: usize,
    bracket: (f64, f64),
    opts: &SolveOptions,
) -> Result<RootList> {
    d.validate()?;
    if free_index == 0 || free_index > d.order() {
        return Err(Error::InvalidArgument(format!(
            "free index {free_index} outside 1..={}",
            d.order()
        )));
    }
    let (lo, hi) = bracket;
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "bracket [{lo}, {hi}] must be finite and increasing"
        )));
    }
    let with = |x: f64| {
        let mut e = d.clone();
        e.coefficients[free_index - 1] = x;
        e
    };
    let residue_at = |x: f64| -> Result<f64> {
        residue_series_with(&with(x), &ExpOptions::default()).map(|r| r.value)
    };

    let steps = (1.0 / opts.scan_fraction).round().max(1.0) as usize;
    let xs: Vec<f64> = (0..=steps)
        .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
        .collect();
    let samples: Vec<(f64, f64)> = xs
        .par_iter()
        .map(|&x| residue_at(x).map(|r| (x, r)))
        .collect::<Result<_>>()?;

    let mut roots = RootList::default();
    for (i, w) in samples.windows(2).enumerate() {
        let ((x0, f0), (x1, f1)) = (w[0], w[1]);
        let exact_left = f0 == 0.0 && (i == 0 || samples[i - 1].1 != 0.0);
        if exact_left || (f0 != 0.0 && f1 != 0.0 && f0.signum() != f1.signum()) {
            let x = if exact_left {
                x0
            } else {
                bisect(residue_at, x0, x1, opts.xtol)?
            };
            let residual = check_residual(&with(x), x, opts.residual_tol)?;
            roots.values.push(x);
            roots.residuals.push(residual);
            roots.brackets.push((x0, x1));
        }
    }
    if let Some(&(x, f)) = samples.last() {
        if f == 0.0 && !roots.values.contains(&x) {
            roots.values.push(x);
            roots.residuals.push(0.0);
            roots.brackets.push((x, x));
        }
    }
    for w in samples.windows(3) {
        let (f0, f1, f2) = (w[0].1, w[1].1, w[2].1);
        let same_sign = f0.signum() == f1.signum() && f1.signum() == f2.signum();
        if same_sign && f1.abs() < f0.abs() && f1.abs() < f2.abs() && f1.abs() < opts.double_root_tol
        {
            roots.diagnostics.push(format!(
                "suspected double root near {} (|Res| = {:e}, no sign change)",
                w[1].0,
                f1.abs()
            ));
        }
    }
    if roots.is_empty() {
        roots
            .diagnostics
            .push(format!("no sign change of the residue over [{lo}, {hi}]"));
        roots.samples = samples;
    }
    roots.sort_by_magnitude();
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt_two() {
        let r = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        assert!(bisect(|x| Ok(x * x + 1.0), 0.0, 2.0, 1e-12).is_err());
    }

    #[test]
    fn simple_family_first_two() {
        let r = solve_simple_family(2).unwrap();
        assert!((r.values[0] + 3.670_492_660_530_974).abs() < 1e-10, "{:?}", r.values);
        assert!((r.values[1] + 12.304_614_080_423_65).abs() < 1e-10, "{:?}", r.values);
        assert!(r.residuals.iter().all(|&x| x < 1e-10));
        for (v, (lo, hi)) in r.values.iter().zip(&r.brackets) {
            assert!(lo <= v && v <= hi);
        }
    }

    #[test]
    fn coefficient_solve_reduces_to_simple_family() {
        let d = EndDescriptor::simple_family(0.0);
        let r = solve_coefficient(&d, 1, (-5.0, -1.0), &SolveOptions::default()).unwrap();
        assert_eq!(r.values.len(), 1);
        let simple = solve_simple_family(1).unwrap();
        assert!((r.values[0] - simple.values[0]).abs() < 1e-10);
    }

    #[test]
    fn second_coefficient_shifts_root() {
        let d = EndDescriptor::new(1.0, vec![0.0, 0.1]).unwrap();
        let r = solve_coefficient(&d, 1, (-6.0, -1.0), &SolveOptions::default()).unwrap();
        assert_eq!(r.values.len(), 1, "{r:?}");
        let root = r.values[0];
        assert!((root + 3.6705).abs() < 1.0);
        assert!((root + 3.670_492_660_530_974).abs() > 1e-4);
        // Brute-force sampling oracle: the residue changes sign within one grid step of the root.
        let with = |x: f64| EndDescriptor::new(1.0, vec![x, 0.1]).unwrap();
        let h = 1e-6;
        let left = residue_series(&with(root - h)).unwrap();
        let right = residue_series(&with(root + h)).unwrap();
        assert!(left.signum() != right.signum());
    }

    #[test]
    fn out_of_range_index_is_an_error() {
        let d = EndDescriptor::helicoid();
        assert!(solve_coefficient(&d, 1, (-5.0, -1.0), &SolveOptions::default()).is_err());
        let d = EndDescriptor::simple_family(-1.0);
        assert!(solve_coefficient(&d, 0, (-5.0, -1.0), &SolveOptions::default()).is_err());
        assert!(solve_coefficient(&d, 1, (-1.0, -5.0), &SolveOptions::default()).is_err());
    }

    #[test]
    fn empty_bracket_keeps_samples() {
        let d = EndDescriptor::simple_family(0.0);
        let r = solve_coefficient(&d, 1, (0.5, 2.0), &SolveOptions::default()).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.samples.len(), 21);
        assert!(!r.diagnostics.is_empty());
    }

    #[test]
    fn roots_sorted_by_magnitude() {
        let d = EndDescriptor::simple_family(0.0);
        let r = solve_coefficient(&d, 1, (-30.0, -1.0), &SolveOptions::default()).unwrap();
        assert_eq!(r.values.len(), 3, "{r:?}");
        for w in r.values.windows(2) {
            assert!(w[0].abs() < w[1].abs());
        }
    }
}
