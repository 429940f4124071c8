//! Residue of `G(z) = exp(c0 z + sum c_k z^{1-2k})` at the origin.
//!
//! The series route expands `G` as a Laurent series and reads off the
//! coefficient of `z^{-1}`; the quadrature route applies the trapezoid rule
//! to `(1/2πi) ∮ G dz` on a circle. Both work in the variable `w = z / ρ`
//! for a radius `ρ` that balances the positive and negative powers.

pub mod bessel;
mod descriptor;
pub mod solve;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laurent::{ExpOptions, Window};
use crate::quadrature::periodic_mean;

pub use bessel::{bessel_j1, j1_zeros, BesselZero};
pub use descriptor::EndDescriptor;
pub use solve::{solve_coefficient, solve_simple_family, RootList, SolveOptions};

/// Largest real part of the exponent allowed on a quadrature contour.
const EXPONENT_GUARD: f64 = 700.0;

/// Series residue together with its error bookkeeping.
#[derive(Clone, Copy, Debug)]
pub struct SeriesResidue {
    pub value: f64,
    pub imag: f64,
    /// Bound on the truncated tail, in units of `z`.
    pub tail_bound: f64,
    pub terms: usize,
    pub scale: f64,
}

/// Residue of `G` at 0 by the Laurent series. `G` maps reals to reals, so the
/// residue is real.
pub fn residue_series(d: &EndDescriptor) -> Result<f64> {
    residue_series_with(d, &ExpOptions::default()).map(|r| r.value)
}

pub fn residue_series_with(d: &EndDescriptor, opts: &ExpOptions) -> Result<SeriesResidue> {
    d.validate()?;
    let scale = d.balanced_radius();
    let series = d
        .exponent_poly(scale)
        .exp_with_bound(Window::new(-1, -1), opts)?;
    let res = series.value.residue() * scale;
    assert!(
        res.im.abs() < 1e-12,
        "residue of a real-coefficient end has imaginary part {}",
        res.im
    );
    Ok(SeriesResidue {
        value: res.re,
        imag: res.im,
        tail_bound: series.tail_bound * scale,
        terms: series.terms,
        scale,
    })
}

/// `(1/2πi) ∮_{|z| = radius} G(z) dz` by the `nodes`-point trapezoid rule.
pub fn residue_quadrature(d: &EndDescriptor, radius: f64, nodes: usize) -> Result<Complex64> {
    d.validate()?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "contour radius must be positive, got {radius}"
        )));
    }
    if nodes < 16 {
        return Err(Error::InvalidArgument(format!(
            "at least 16 nodes required, got {nodes}"
        )));
    }
    // dz = i z dθ, so (1/2πi) ∮ G dz is the mean of G(z) z over the circle.
    periodic_mean(nodes, |theta| {
        let z = Complex64::from_polar(radius, theta);
        let e = d.exponent(z);
        if !(e.re <= EXPONENT_GUARD) {
            return Err(Error::RadiusTooLarge { radius });
        }
        Ok(e.exp() * z)
    })
}

#[derive(Clone, Copy, Debug)]
pub struct QuadratureResidue {
    pub value: Complex64,
    pub radius: f64,
    pub nodes: usize,
}

/// Radius 1 when every `|c_k| <= 2`, otherwise the balanced radius.
pub fn default_contour_radius(d: &EndDescriptor) -> f64 {
    if d.coefficients.iter().all(|c| c.abs() <= 2.0) && d.c0.abs() <= 2.0 {
        1.0
    } else {
        d.balanced_radius()
    }
}

/// Doubles the node count from 64 until two successive values agree to `tol`.
pub fn residue_quadrature_auto(d: &EndDescriptor, tol: f64) -> Result<QuadratureResidue> {
    const MAX_NODES: usize = 1 << 16;
    let radius = default_contour_radius(d);
    let mut nodes = 64;
    let mut prev = residue_quadrature(d, radius, nodes)?;
    loop {
        nodes *= 2;
        let next = residue_quadrature(d, radius, nodes)?;
        let diff = (next - prev).norm();
        if diff <= tol {
            return Ok(QuadratureResidue {
                value: next,
                radius,
                nodes,
            });
        }
        if nodes >= MAX_NODES {
            return Err(Error::ToleranceNotMet {
                requested: tol,
                achieved: diff,
                terms: nodes,
            });
        }
        prev = next;
    }
}

/// `G(z)` without the constant `A`.
pub fn g_normalized(d: &EndDescriptor, z: Complex64) -> Complex64 {
    d.exponent(z).exp()
}
