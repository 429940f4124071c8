//! Integration paths in the punctured plane.
//!
//! Paths are axis-parallel polylines. A leg that would enter the excluded
//! disk `|z| < rmin` is rerouted around the arc `|z| = rmin + 0.5`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Clearance added to `rmin` for detour arcs.
pub const DETOUR_CLEARANCE: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathPiece {
    Line { from: Complex64, to: Complex64 },
    /// Arc of the circle `|z| = radius` centered at 0, swept from `start` to
    /// `end` (radians; `end < start` runs clockwise).
    Arc { radius: f64, start: f64, end: f64 },
}

impl PathPiece {
    /// Position at `s` in `[0, 1]`.
    pub fn point(&self, s: f64) -> Complex64 {
        match *self {
            PathPiece::Line { from, to } => from + (to - from) * s,
            PathPiece::Arc { radius, start, end } => {
                Complex64::from_polar(radius, start + s * (end - start))
            }
        }
    }

    /// `dz/ds` at `s`.
    pub fn velocity(&self, s: f64) -> Complex64 {
        match *self {
            PathPiece::Line { from, to } => to - from,
            PathPiece::Arc { start, end, .. } => {
                Complex64::new(0.0, end - start) * self.point(s)
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.point(1.0)
    }

    /// Full counterclockwise circle starting on the positive real axis.
    pub fn circle(radius: f64) -> Self {
        PathPiece::Arc {
            radius,
            start: 0.0,
            end: TAU,
        }
    }
}

/// Distance from the origin to the segment `[p, q]`.
pub fn segment_distance(p: Complex64, q: Complex64) -> f64 {
    let d = q - p;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return p.norm();
    }
    let s = (-(p * d.conj()).re / len2).clamp(0.0, 1.0);
    (p + d * s).norm()
}

/// Straight leg from `p` to `q`, detoured around the disk when needed.
pub fn leg(p: Complex64, q: Complex64, rmin: f64) -> Result<Vec<PathPiece>> {
    for z in [p, q] {
        if z.norm() < rmin {
            return Err(Error::Domain { z, rmin });
        }
    }
    if p == q {
        return Ok(Vec::new());
    }
    if segment_distance(p, q) >= rmin {
        return Ok(vec![PathPiece::Line { from: p, to: q }]);
    }
    let rho = rmin + DETOUR_CLEARANCE;
    let d = q - p;
    // |p + s d|^2 = rho^2
    let a = d.norm_sqr();
    let b = 2.0 * (p * d.conj()).re;
    let c = p.norm_sqr() - rho * rho;
    let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
    let s1 = (-b - disc) / (2.0 * a);
    let s2 = (-b + disc) / (2.0 * a);

    let mut pieces = Vec::new();
    let entry = if s1 > 0.0 {
        p + d * s1
    } else {
        p * (rho / p.norm())
    };
    let exit = if s2 < 1.0 {
        p + d * s2
    } else {
        q * (rho / q.norm())
    };
    if entry != p {
        pieces.push(PathPiece::Line { from: p, to: entry });
    }

    // Pass on the side of the closest approach, or to the right of travel
    // when the leg runs through the origin.
    let s_star = -(p * d.conj()).re / a;
    let closest = p + d * s_star;
    let side = if closest.norm() > 1e-12 * rho {
        closest
    } else {
        d * Complex64::new(0.0, -1.0)
    };
    let start = entry.arg();
    let sweep_ccw = (exit.arg() - start).rem_euclid(TAU);
    let to_side = (side.arg() - start).rem_euclid(TAU);
    let end = if to_side <= sweep_ccw {
        start + sweep_ccw
    } else {
        start + sweep_ccw - TAU
    };
    if (end - start).abs() > 0.0 {
        pieces.push(PathPiece::Arc {
            radius: rho,
            start,
            end,
        });
    }
    if exit != q {
        pieces.push(PathPiece::Line { from: exit, to: q });
    }
    Ok(pieces)
}

/// Which corner an L-shaped route turns at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corner {
    /// Move along `Re z = const` first.
    VerticalFirst,
    /// Move along `Im z = const` first.
    HorizontalFirst,
}

/// Axis-parallel route from `from` to `to` through the chosen corner.
pub fn route_via(from: Complex64, to: Complex64, corner: Corner, rmin: f64) -> Result<Vec<PathPiece>> {
    let turn = match corner {
        Corner::VerticalFirst => Complex64::new(from.re, to.im),
        Corner::HorizontalFirst => Complex64::new(to.re, from.im),
    };
    if turn.norm() < rmin {
        return Err(Error::Domain { z: turn, rmin });
    }
    let mut pieces = leg(from, turn, rmin)?;
    pieces.extend(leg(turn, to, rmin)?);
    Ok(pieces)
}

/// Default route: vertical first when the horizontal leg clears the detour
/// circle, horizontal first otherwise.
pub fn route(from: Complex64, to: Complex64, rmin: f64) -> Result<Vec<PathPiece>> {
    let rho = rmin + DETOUR_CLEARANCE;
    let corner = if to.im.abs() >= rho || Complex64::new(to.re, from.im).norm() < rmin {
        Corner::VerticalFirst
    } else {
        Corner::HorizontalFirst
    };
    route_via(from, to, corner, rmin)
}

/// Total turning of a path around the origin, in units of full turns.
pub fn winding(pieces: &[PathPiece]) -> f64 {
    let mut total = 0.0;
    for p in pieces {
        total += match *p {
            PathPiece::Arc { start, end, .. } => end - start,
            PathPiece::Line { from, to } => {
                let d = (to.arg() - from.arg() + PI).rem_euclid(TAU) - PI;
                d
            }
        };
    }
    total / TAU
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_connected(pieces: &[PathPiece], from: Complex64, to: Complex64) {
        assert!((pieces.first().unwrap().start() - from).norm() < 1e-12);
        assert!((pieces.last().unwrap().end() - to).norm() < 1e-12);
        for w in pieces.windows(2) {
            assert!((w[0].end() - w[1].start()).norm() < 1e-12, "{pieces:?}");
        }
    }

    fn min_radius(pieces: &[PathPiece]) -> f64 {
        pieces
            .iter()
            .flat_map(|p| (0..=200).map(move |i| p.point(i as f64 / 200.0).norm()))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn clear_leg_is_straight() {
        let p = leg(c(-3.0, 2.0), c(3.0, 2.0), 0.5).unwrap();
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn leg_through_origin_detours() {
        let (from, to) = (c(0.0, 1.5), c(0.0, -3.0));
        let p = leg(from, to, 0.5).unwrap();
        assert_connected(&p, from, to);
        assert!(min_radius(&p) >= 1.0 - 1e-12);
        // Travelling downward, the right-hand side is Re z < 0.
        let mid = p.iter().find(|x| matches!(x, PathPiece::Arc { .. })).unwrap().point(0.5);
        assert!(mid.re < -0.99);
    }

    #[test]
    fn leg_with_endpoint_near_disk() {
        let (from, to) = (c(-0.6, 0.1), c(3.0, 0.1));
        let p = leg(from, to, 0.5).unwrap();
        assert_connected(&p, from, to);
        assert!(min_radius(&p) >= 0.5);
        // closest approach is above the origin, so the arc stays in Im z > 0
        for piece in &p {
            if let PathPiece::Arc { .. } = piece {
                assert!(piece.point(0.5).im > 0.0);
            }
        }
    }

    #[test]
    fn endpoints_inside_disk_are_rejected() {
        assert!(leg(c(0.1, 0.0), c(3.0, 0.0), 0.5).is_err());
    }

    #[test]
    fn routes_are_connected_and_avoid_disk() {
        let base = c(0.0, 1.5);
        for to in [c(4.0, -3.0), c(0.3, -0.6), c(-2.0, 0.0), c(5.0, 0.2), c(0.0, -7.0)] {
            let p = route(base, to, 0.5).unwrap();
            assert_connected(&p, base, to);
            assert!(min_radius(&p) >= 0.5 - 1e-12, "{to}");
        }
    }

    #[test]
    fn circle_winds_once() {
        assert!((winding(&[PathPiece::circle(2.0)]) - 1.0).abs() < 1e-15);
        let p = route(c(0.0, 1.5), c(1.0, 0.0), 0.5).unwrap();
        assert!(winding(&p).abs() < 0.5);
    }
}
