//! Gauss map, Weierstrass immersion and period closure of an end.
//!
//! With `dh = -i dz` the immersion is
//!
//! ```text
//! X(z) = X(z0) + Re ∫ ( -(i/2)(1/g - g), (1/2)(1/g + g), -i ) dz
//! ```
//!
//! so `x3 = Im z` up to a constant and the lines `Im z = const` map into
//! horizontal planes. Points are normalized so that `X(i y0) = (0, 0, y0)`
//! with `y0 = rmin + 1`.

pub mod path;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, periodic_mean, AdaptiveOptions};
use crate::residue::EndDescriptor;

pub use path::{route, route_via, Corner, PathPiece};

/// `|Re log g|` beyond which `g` or `1/g` would overflow.
pub const OVERFLOW_GUARD: f64 = 700.0;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub z: Complex64,
    pub x: [f64; 3],
    pub gauss: Complex64,
    /// `g'/g` at `z`.
    pub logg_deriv: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeriodReport {
    pub radius: f64,
    /// `|Re ∮ (1/g - g) dh|` and `|Re i ∮ (1/g + g) dh|`.
    pub horizontal_defect: (f64, f64),
    /// `|Re ∮ dh|`.
    pub vertical_defect: f64,
    pub nodes: usize,
}

impl PeriodReport {
    pub fn max_defect(&self) -> f64 {
        self.horizontal_defect
            .0
            .max(self.horizontal_defect.1)
            .max(self.vertical_defect)
    }
}

/// An end together with its quadrature settings and normalization.
#[derive(Clone, Debug)]
pub struct Surface {
    desc: EndDescriptor,
    quad: AdaptiveOptions,
}

impl Surface {
    pub fn new(desc: EndDescriptor) -> Result<Self> {
        desc.validate()?;
        Ok(Surface {
            desc,
            quad: AdaptiveOptions::default(),
        })
    }

    pub fn with_quadrature(mut self, quad: AdaptiveOptions) -> Self {
        self.quad = quad;
        self
    }

    pub fn descriptor(&self) -> &EndDescriptor {
        &self.desc
    }

    pub fn rmin(&self) -> f64 {
        self.desc.rmin
    }

    /// `i y0` with `y0 = rmin + 1`, where `X = (0, 0, y0)`.
    pub fn basepoint(&self) -> Complex64 {
        Complex64::new(0.0, self.desc.rmin + 1.0)
    }

    fn check_domain(&self, z: Complex64) -> Result<()> {
        if z.norm() < self.desc.rmin || !z.is_finite() {
            return Err(Error::Domain {
                z,
                rmin: self.desc.rmin,
            });
        }
        Ok(())
    }

    /// `log g = log A + c0 z + sum c_k z^{1-2k}`.
    pub fn log_gauss(&self, z: Complex64) -> Complex64 {
        self.desc.log_a() + self.desc.exponent(z)
    }

    pub fn gauss_map(&self, z: Complex64) -> Result<Complex64> {
        self.check_domain(z)?;
        let w = self.log_gauss(z);
        if w.re.abs() > OVERFLOW_GUARD {
            return Err(Error::Overflow { z });
        }
        Ok(w.exp())
    }

    /// `g'/g = c0 + sum r_{2k} z^{-2k}`.
    pub fn log_derivative(&self, z: Complex64) -> Result<Complex64> {
        self.check_domain(z)?;
        Ok(self.desc.log_derivative(z))
    }

    /// `Φ / dz`: the three complex components whose real parts are `∂X/∂t`.
    pub fn form(&self, z: Complex64) -> Result<[Complex64; 3]> {
        let w = self.log_gauss(z);
        if w.re.abs() > OVERFLOW_GUARD || !w.is_finite() {
            return Err(Error::Overflow { z });
        }
        let g = w.exp();
        let ginv = (-w).exp();
        Ok([
            -0.5 * I * (ginv - g),
            0.5 * (ginv + g),
            -I,
        ])
    }

    /// `(∂X/∂t, ∂X/∂α)` at `z = t + iα`.
    pub fn frame(&self, z: Complex64) -> Result<([f64; 3], [f64; 3])> {
        self.check_domain(z)?;
        let phi = self.form(z)?;
        Ok((phi.map(|c| c.re), phi.map(|c| (c * I).re)))
    }

    /// Conformal factor `|∂X/∂t| = (|g| + 1/|g|) / 2`.
    pub fn speed(&self, z: Complex64) -> Result<f64> {
        let g = self.gauss_map(z)?.norm();
        Ok(0.5 * (g + g.recip()))
    }

    /// Unit normal from the stereographic Gauss map.
    pub fn normal(&self, z: Complex64) -> Result<[f64; 3]> {
        let g = self.gauss_map(z)?;
        let n2 = g.norm_sqr();
        let d = n2 + 1.0;
        Ok([2.0 * g.re / d, 2.0 * g.im / d, (n2 - 1.0) / d])
    }

    /// `Re ∫ Φ` along one piece.
    pub fn integrate_piece(&self, piece: &PathPiece) -> Result<[f64; 3]> {
        let r = integrate(
            |s| {
                let z = piece.point(s);
                let v = piece.velocity(s);
                self.form(z).map(|phi| phi.map(|c| c * v))
            },
            0.0,
            1.0,
            &self.quad,
        )?;
        Ok(r.value.map(|c| c.re))
    }

    pub fn integrate_path(&self, pieces: &[PathPiece]) -> Result<[f64; 3]> {
        let mut acc = [0.0; 3];
        for p in pieces {
            add(&mut acc, &self.integrate_piece(p)?);
        }
        Ok(acc)
    }

    /// `X(z)` with `X(basepoint) = 0`, integrating along the default route.
    pub fn immersion_from(&self, z: Complex64, basepoint: Complex64) -> Result<SurfacePoint> {
        self.check_domain(z)?;
        self.check_domain(basepoint)?;
        let x = self.integrate_path(&route(basepoint, z, self.desc.rmin)?)?;
        self.surface_point(z, x)
    }

    /// `X(z)` under the normalization `X(i y0) = (0, 0, y0)`.
    pub fn point(&self, z: Complex64) -> Result<SurfacePoint> {
        self.point_via(z, None)
    }

    /// Normalized `X(z)` along an explicit corner choice (for homotopy checks).
    pub fn point_via(&self, z: Complex64, corner: Option<Corner>) -> Result<SurfacePoint> {
        self.check_domain(z)?;
        let b = self.basepoint();
        let pieces = match corner {
            None => route(b, z, self.desc.rmin)?,
            Some(c) => route_via(b, z, c, self.desc.rmin)?,
        };
        let mut x = self.integrate_path(&pieces)?;
        x[2] += b.im;
        self.surface_point(z, x)
    }

    fn surface_point(&self, z: Complex64, x: [f64; 3]) -> Result<SurfacePoint> {
        Ok(SurfacePoint {
            z,
            x,
            gauss: self.gauss_map(z)?,
            logg_deriv: self.desc.log_derivative(z),
        })
    }

    /// Normalized positions at consecutive samples. Each sample is reached
    /// from the previous one by a straight segment when that segment clears
    /// the disk, otherwise by a fresh route from the basepoint.
    pub fn trace(&self, zs: &[Complex64]) -> Result<Vec<[f64; 3]>> {
        let mut out: Vec<[f64; 3]> = Vec::with_capacity(zs.len());
        for (i, &z) in zs.iter().enumerate() {
            self.check_domain(z)?;
            let next = match i.checked_sub(1).map(|j| (zs[j], out[j])) {
                Some((prev_z, prev_x)) if path::segment_distance(prev_z, z) >= self.desc.rmin => {
                    let mut x = prev_x;
                    add(
                        &mut x,
                        &self.integrate_piece(&PathPiece::Line { from: prev_z, to: z })?,
                    );
                    x
                }
                _ => self.point(z)?.x,
            };
            out.push(next);
        }
        Ok(out)
    }

    /// Periods of `Φ` over `|z| = radius` by the trapezoid rule, doubling the
    /// node count from 64 until successive values agree.
    pub fn period_check(&self, radius: f64) -> Result<PeriodReport> {
        if !(radius >= self.desc.rmin && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "period radius {radius} below rmin {}",
                self.desc.rmin
            )));
        }
        const MAX_NODES: usize = 1 << 16;
        let mut nodes = 64;
        let (mut prev, _) = self.circle_periods(radius, nodes)?;
        loop {
            nodes *= 2;
            let (next, mass) = self.circle_periods(radius, nodes)?;
            // rounding floor of the sums, from the size of the integrand
            let scale = next.iter().map(|c| c.norm()).fold(mass, f64::max);
            let diff = next
                .iter()
                .zip(prev.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            if diff <= 1e-14 * scale || nodes >= MAX_NODES {
                return Ok(PeriodReport {
                    radius,
                    horizontal_defect: (next[0].re.abs(), next[1].re.abs()),
                    vertical_defect: next[2].re.abs(),
                    nodes,
                });
            }
            prev = next;
        }
    }

    /// `∮ (1/g - g) dh`, `i ∮ (1/g + g) dh`, `∮ dh`, and `∮ |1/g| + |g| |dz|`.
    fn circle_periods(&self, radius: f64, nodes: usize) -> Result<([Complex64; 3], f64)> {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        let mut mass = 0.0;
        for (k, slot) in out.iter_mut().enumerate() {
            // ∮ f dz = 2π · mean(f(z) i z)
            *slot = TAU
                * periodic_mean(nodes, |theta| {
                    let z = Complex64::from_polar(radius, theta);
                    let w = self.log_gauss(z);
                    if w.re.abs() > OVERFLOW_GUARD {
                        return Err(Error::Overflow { z });
                    }
                    let (g, ginv) = (w.exp(), (-w).exp());
                    if k == 0 {
                        mass += TAU * radius * (g.norm() + ginv.norm()) / nodes as f64;
                    }
                    let dh = -I;
                    let f = match k {
                        0 => (ginv - g) * dh,
                        1 => I * (ginv + g) * dh,
                        _ => dh,
                    };
                    Ok(f * I * z)
                })?;
        }
        Ok((out, mass))
    }
}

fn add(acc: &mut [f64; 3], v: &[f64; 3]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

/// `A exp(c0 z + sum c_k z^{1-2k})`.
pub fn gauss_map(d: &EndDescriptor, z: Complex64) -> Result<Complex64> {
    Surface::new(d.clone())?.gauss_map(z)
}

/// `X(z)` with `X(basepoint)` at the origin.
pub fn immersion(d: &EndDescriptor, z: Complex64, basepoint: Complex64) -> Result<SurfacePoint> {
    Surface::new(d.clone())?.immersion_from(z, basepoint)
}

pub fn period_check(d: &EndDescriptor, radius: f64) -> Result<PeriodReport> {
    Surface::new(d.clone())?.period_check(radius)
}

/// The helicoid `g = e^z`, `dh = -i dz`:
/// `(-sinh t sin α, sinh t cos α, α)` at `z = t + iα`.
pub fn helicoid_closed_form(z: Complex64) -> [f64; 3] {
    let (t, alpha) = (z.re, z.im);
    let s = t.sinh();
    [-s * alpha.sin(), s * alpha.cos(), alpha]
}
