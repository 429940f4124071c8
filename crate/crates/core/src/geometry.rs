//! Level curves of an end and the geometric verification suite.
//!
//! The level curve `γ_α` is the image of `Im z = α`; it lies in the plane
//! `x3 = α`. With `g = |g| e^{iθ}` its planar velocity is
//! `γ' = (|g| + 1/|g|)/2 · i g/|g|`, so its curvature is `Im(g'/g)` divided by
//! the speed and its total absolute curvature is `∫ |Im(g'/g)| dt`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, AdaptiveOptions};
use crate::report::{Check, VerificationReport};
use crate::residue::EndDescriptor;
use crate::weierstrass::Surface;

/// Samples of `γ_α` and its planar differential quantities.
#[derive(Clone, Debug, Serialize)]
pub struct LevelCurve {
    pub alpha: f64,
    pub ts: Vec<f64>,
    /// `(x1, x2)` at each sample.
    pub pts: Vec<[f64; 2]>,
    /// `x3` as computed; equal to `alpha` up to quadrature error.
    pub heights: Vec<f64>,
    /// `γ'(t)`, not normalized.
    pub tangents: Vec<[f64; 2]>,
    pub kappa: Vec<f64>,
    pub speed: Vec<f64>,
}

impl LevelCurve {
    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    /// `∫ |κ| ds` by the trapezoid rule over the samples.
    pub fn total_absolute_curvature(&self) -> f64 {
        let f: Vec<f64> = self
            .kappa
            .iter()
            .zip(&self.speed)
            .map(|(k, s)| (k * s).abs())
            .collect();
        trapezoid(&self.ts, &f)
    }
}

fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Representative of `x` modulo `2π` in `(-π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// `γ_α` sampled at `n + 1` equally spaced `t` (that is, `n` segments).
pub fn level_curve(
    d: &EndDescriptor,
    alpha: f64,
    t_range: (f64, f64),
    n: usize,
) -> Result<LevelCurve> {
    level_curve_on(&Surface::new(d.clone())?, alpha, t_range, n)
}

pub fn level_curve_on(
    s: &Surface,
    alpha: f64,
    t_range: (f64, f64),
    n: usize,
) -> Result<LevelCurve> {
    if n == 0 || !(t_range.0 < t_range.1) {
        return Err(Error::InvalidArgument(format!(
            "level curve needs n >= 1 and an increasing range, got n={n}, {t_range:?}"
        )));
    }
    let ts = linspace(t_range.0, t_range.1, n + 1);
    let zs: Vec<Complex64> = ts.iter().map(|&t| Complex64::new(t, alpha)).collect();
    let xs = s.trace(&zs)?;
    let mut curve = LevelCurve {
        alpha,
        ts,
        pts: Vec::with_capacity(n + 1),
        heights: Vec::with_capacity(n + 1),
        tangents: Vec::with_capacity(n + 1),
        kappa: Vec::with_capacity(n + 1),
        speed: Vec::with_capacity(n + 1),
    };
    for (z, x) in zs.iter().zip(xs) {
        let (xt, _) = s.frame(*z)?;
        let speed = s.speed(*z)?;
        let kappa = s.log_derivative(*z)?.im / speed;
        curve.pts.push([x[0], x[1]]);
        curve.heights.push(x[2]);
        curve.tangents.push([xt[0], xt[1]]);
        curve.kappa.push(kappa);
        curve.speed.push(speed);
    }
    Ok(curve)
}

/// `S = sum_k |r_{2k}| rmin^{2-2k}`, a bound for `|z^2 (g'/g - c0)|` on the domain.
pub fn curvature_bound_constant(d: &EndDescriptor) -> f64 {
    d.curvature_constant()
}

/// Compares `∫ |κ| ds` with `constant · S π / |α|`, and with `π` once
/// `|α| > constant · S` (the range in which the bound itself is below `π`).
pub fn total_curvature_check(c: &LevelCurve, s: f64, constant: f64) -> VerificationReport {
    let mut r = VerificationReport::new();
    let measured = c.total_absolute_curvature();
    let alpha = c.alpha;
    r.note(format!(
        "alpha={alpha}: S={s}, constant={constant}, t in [{}, {}]",
        c.ts[0],
        c.ts[c.ts.len() - 1]
    ));
    if alpha == 0.0 {
        r.note("alpha = 0: curvature bound skipped");
    } else {
        r.push(Check::at_most(
            format!("curvature alpha={alpha}: total <= {constant}*S*pi/|alpha|"),
            measured,
            constant * s * PI / alpha.abs(),
            1e-6,
        ));
    }
    if alpha.abs() > constant * s {
        r.push(Check::at_most(
            format!("curvature alpha={alpha}: total < pi"),
            measured,
            PI,
            0.0,
        ));
    }
    r
}

fn require_normalized(d: &EndDescriptor, what: &str) -> Result<()> {
    if !d.is_unitary() || d.phase != 0.0 {
        return Err(Error::Unsupported(format!(
            "{what} needs modulus 1 and phase 0 (got modulus {}, phase {})",
            d.modulus, d.phase
        )));
    }
    Ok(())
}

/// `δ(z) = |arg γ' - (π/2 + α)|` at `z = t + iα`, from the form `Φ`.
pub fn direction_deviation(s: &Surface, z: Complex64) -> Result<f64> {
    let (xt, _) = s.frame(z)?;
    let arg = xt[1].atan2(xt[0]);
    Ok(wrap_angle(arg - FRAC_PI_2 - z.im).abs())
}

/// `n_r × n_θ` points with radii equally spaced on `[r_lo, r_hi]` and angles
/// at the midpoints `-π + 2π (j + 1/2) / n_θ`.
pub fn polar_grid(r_lo: f64, r_hi: f64, n_r: usize, n_theta: usize) -> Vec<Complex64> {
    let radii = linspace(r_lo, r_hi, n_r);
    let mut out = Vec::with_capacity(n_r * n_theta);
    for &r in &radii {
        for j in 0..n_theta {
            let theta = -PI + TAU * (j as f64 + 0.5) / n_theta as f64;
            out.push(Complex64::from_polar(r, theta));
        }
    }
    out
}

/// Checks that `δ(z)|z|` stays bounded on the samples: its maximum is at most
/// ten times its median, and the outer half (by `|z|`) does not exceed twice
/// the inner half.
pub fn tangent_direction_check(d: &EndDescriptor, samples: &[Complex64]) -> Result<VerificationReport> {
    require_normalized(d, "tangent direction check")?;
    if samples.len() < 2 {
        return Err(Error::InvalidArgument("at least two samples required".into()));
    }
    let s = Surface::new(d.clone())?;
    let mut prods: Vec<(f64, f64)> = samples
        .par_iter()
        .map(|&z| direction_deviation(&s, z).map(|delta| (z.norm(), delta * z.norm())))
        .collect::<Result<_>>()?;
    prods.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut sorted: Vec<f64> = prods.iter().map(|p| p.1).collect();
    sorted.sort_by(f64::total_cmp);
    let max = sorted[sorted.len() - 1];
    let median = 0.5 * (sorted[(sorted.len() - 1) / 2] + sorted[sorted.len() / 2]);
    let half = prods.len() / 2;
    let inner = prods[..half].iter().map(|p| p.1).fold(0.0, f64::max);
    let outer = prods[half..].iter().map(|p| p.1).fold(0.0, f64::max);

    let mut r = VerificationReport::new();
    r.note(format!(
        "direction: C = max delta|z| = {max:.6e}, median {median:.6e}, {} samples",
        samples.len()
    ));
    r.push(Check::at_most("direction: max delta|z| <= 10 median", max, 10.0 * median, 1e-9));
    r.push(Check::at_most(
        "direction: outer-half max <= 2 inner-half max",
        outer,
        2.0 * inner,
        1e-12,
    ));
    Ok(r)
}

/// [`tangent_direction_check`] on the grid `t + iα`, skipping points inside
/// the disk.
pub fn tangent_direction_grid(
    d: &EndDescriptor,
    alphas: &[f64],
    ts: &[f64],
) -> Result<VerificationReport> {
    let zs: Vec<Complex64> = alphas
        .iter()
        .flat_map(|&a| ts.iter().map(move |&t| Complex64::new(t, a)))
        .filter(|z| z.norm() >= d.rmin)
        .collect();
    tangent_direction_check(d, &zs)
}

/// Largest distance from the points to their least-squares line.
pub fn collinearity_residual(pts: &[[f64; 2]]) -> f64 {
    if pts.len() < 3 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let (mx, my) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), p| (a + p[0] / n, b + p[1] / n));
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in pts {
        let (dx, dy) = (p[0] - mx, p[1] - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let angle = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let (c, s) = (angle.cos(), angle.sin());
    pts.iter()
        .map(|p| ((p[1] - my) * c - (p[0] - mx) * s).abs())
        .fold(0.0, f64::max)
}

/// Horizontal ray on the real axis, vertical segment on the imaginary axis,
/// and vanishing normal curvature `Im(g'/g)` along both, for `t` in `t_range`.
/// For a non-unitary end the vertical check is expected to fail and the
/// `|g|` diagnostic is appended.
pub fn ray_check(d: &EndDescriptor, t_range: (f64, f64)) -> Result<VerificationReport> {
    const SAMPLES: usize = 201;
    let s = Surface::new(d.clone())?;
    let ts = linspace(t_range.0, t_range.1, SAMPLES);
    let mut r = VerificationReport::new();

    let real: Vec<Complex64> = ts.iter().map(|&t| Complex64::new(t, 0.0)).collect();
    let xs = s.trace(&real)?;
    let pts: Vec<[f64; 2]> = xs.iter().map(|x| [x[0], x[1]]).collect();
    let height_drift = xs.iter().map(|x| (x[2] - xs[0][2]).abs()).fold(0.0, f64::max);
    r.push(Check::near_zero("rays: horizontal collinearity residual", collinearity_residual(&pts), 1e-8));
    r.push(Check::near_zero("rays: horizontal x3 variation", height_drift, 1e-10));

    let imag: Vec<Complex64> = ts.iter().map(|&t| Complex64::new(0.0, t)).collect();
    let ys = s.trace(&imag)?;
    let vertical = ys
        .iter()
        .zip(&ts)
        .map(|(x, &t)| x[0].abs().max(x[1].abs()).max((x[2] - t).abs()))
        .fold(0.0, f64::max);
    r.push(Check::near_zero("rays: vertical line deviation", vertical, 1e-8));

    let normal_curv = real
        .iter()
        .chain(&imag)
        .map(|&z| s.log_derivative(z).map(|w| w.im.abs()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    r.push(Check::near_zero("rays: Im(g'/g) on both axes", normal_curv, 1e-12));

    if !d.is_unitary() {
        r.note(format!(
            "modulus {} != 1: no vertical ray expected",
            d.modulus
        ));
        let y0 = d.rmin + 1.0;
        r.merge(nonunitary_diagnostic(d, 20, (-2.0, 2.0), (y0, y0 + 10.0), 200)?);
    }
    Ok(r)
}

/// Standard deviation of `|g|` along `n_lines` vertical lines `Re z = x_j`,
/// `x_j` at the midpoints of `n_lines` equal cells of `x_range`. A vertical
/// ray in the end requires `|g| = 1` on its line, so the largest `||g| - 1|`
/// per line is reported as well, including the axis `Re z = 0` where `|g|`
/// equals the modulus.
pub fn nonunitary_diagnostic(
    d: &EndDescriptor,
    n_lines: usize,
    x_range: (f64, f64),
    y_range: (f64, f64),
    samples: usize,
) -> Result<VerificationReport> {
    let s = Surface::new(d.clone())?;
    let ys = linspace(y_range.0, y_range.1, samples);
    let moduli = |x: f64| {
        ys.iter()
            .map(|&y| s.gauss_map(Complex64::new(x, y)).map(|g| g.norm()))
            .collect::<Result<Vec<f64>>>()
    };
    let off_unit = |mods: &[f64]| mods.iter().map(|m| (m - 1.0).abs()).fold(0.0, f64::max);
    let mut min_std = f64::INFINITY;
    let mut min_off_unit = off_unit(&moduli(0.0)?);
    for j in 0..n_lines {
        let x = x_range.0 + (x_range.1 - x_range.0) * (j as f64 + 0.5) / n_lines as f64;
        let mods = moduli(x)?;
        let mean = mods.iter().sum::<f64>() / mods.len() as f64;
        let var = mods.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / mods.len() as f64;
        min_std = min_std.min(var.sqrt());
        min_off_unit = min_off_unit.min(off_unit(&mods));
    }
    let mut r = VerificationReport::new();
    r.note(format!(
        "|g| along {n_lines} vertical lines: min std {min_std:.6e}, min over lines of max ||g| - 1| {min_off_unit:.6e}"
    ));
    r.push(Check::at_least("non-unitary: min std of |g| per vertical line", min_std, 0.01));
    r.push(Check::at_least(
        "non-unitary: min over lines of max ||g| - 1|",
        min_off_unit,
        0.01,
    ));
    Ok(r)
}

/// Wedge of half-angle `epsilon` around the ray of `γ_α` for `t -> +∞`,
/// which points along `(-sin α, cos α)`, the ruling of the helicoid at
/// height `α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeNeighborhood {
    pub alpha: f64,
    pub epsilon: f64,
}

impl ConeNeighborhood {
    pub fn new(alpha: f64, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < FRAC_PI_2) {
            return Err(Error::InvalidArgument(format!(
                "cone half-width {epsilon} outside (0, pi/2)"
            )));
        }
        Ok(ConeNeighborhood { alpha, epsilon })
    }

    pub fn axis_angle(&self) -> f64 {
        self.alpha + FRAC_PI_2
    }

    /// The cone around the other end of the same level curve.
    pub fn opposite(&self) -> Self {
        ConeNeighborhood {
            alpha: self.alpha + PI,
            epsilon: self.epsilon,
        }
    }

    pub fn angular_offset(&self, p: [f64; 2]) -> f64 {
        wrap_angle(p[1].atan2(p[0]) - self.axis_angle())
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        self.angular_offset(p).abs() <= self.epsilon
    }
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

/// Closed segments `ab` and `cd` share a point.
pub fn segments_intersect(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let (d1, d2) = (orient(c, d, a), orient(c, d, b));
    let (d3, d4) = (orient(a, b, c), orient(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Index pairs `(i, j)`, `j > i + 1`, of intersecting segments
/// `pts[i]pts[i+1]` and `pts[j]pts[j+1]`.
pub fn self_intersections(pts: &[[f64; 2]]) -> Vec<(usize, usize)> {
    let m = pts.len().saturating_sub(1);
    let boxes: Vec<[f64; 4]> = (0..m)
        .map(|i| {
            let (a, b) = (pts[i], pts[i + 1]);
            [a[0].min(b[0]), a[0].max(b[0]), a[1].min(b[1]), a[1].max(b[1])]
        })
        .collect();
    (0..m)
        .into_par_iter()
        .flat_map_iter(|i| {
            let boxes = &boxes;
            (i + 2..m).filter_map(move |j| {
                let (p, q) = (boxes[i], boxes[j]);
                if p[1] < q[0] || q[1] < p[0] || p[3] < q[2] || q[3] < p[2] {
                    return None;
                }
                segments_intersect(pts[i], pts[i + 1], pts[j], pts[j + 1]).then_some((i, j))
            })
        })
        .collect()
}

/// Per-curve outcome of [`embeddedness_check`].
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddednessSummary {
    pub alpha: f64,
    pub intersections: Vec<(f64, f64)>,
    /// Smallest sampled `|t|` beyond which both ends stay in their cones.
    pub t_measured: f64,
    /// Largest `| |θ(t) - θ(-t)| - π |` over the samples beyond `t_measured`.
    pub opposition: f64,
}

fn embeddedness_one(
    s: &Surface,
    alpha: f64,
    t_range: (f64, f64),
    n: usize,
    epsilon: f64,
) -> Result<EmbeddednessSummary> {
    let c = level_curve_on(s, alpha, t_range, n)?;
    let intersections = self_intersections(&c.pts)
        .into_iter()
        .map(|(i, j)| (c.ts[i], c.ts[j]))
        .collect();

    let cone = ConeNeighborhood::new(alpha, epsilon)?;
    let back = cone.opposite();
    let inside = |i: usize| {
        let t = c.ts[i];
        if t > 0.0 {
            cone.contains(c.pts[i])
        } else if t < 0.0 {
            back.contains(c.pts[i])
        } else {
            false
        }
    };
    // Scan samples by decreasing |t| until one leaves its cone.
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&i, &j| c.ts[j].abs().total_cmp(&c.ts[i].abs()));
    let mut t_measured = f64::INFINITY;
    for &i in &order {
        if !inside(i) {
            break;
        }
        t_measured = c.ts[i].abs();
    }

    let mut opposition: f64 = 0.0;
    let n_s = c.len();
    for i in 0..n_s / 2 {
        let j = n_s - 1 - i;
        if c.ts[j].abs() < t_measured || c.ts[i].abs() < t_measured {
            continue;
        }
        let (a, b) = (c.pts[i], c.pts[j]);
        let gap = wrap_angle(a[1].atan2(a[0]) - b[1].atan2(b[0])).abs();
        opposition = opposition.max((gap - PI).abs());
    }
    Ok(EmbeddednessSummary {
        alpha,
        intersections,
        t_measured,
        opposition,
    })
}

/// Self-intersection test of each `γ_α` as an `n`-segment polyline, and
/// membership of its two ends in the cones `N_α`, `N_{α+π}` of half-width
/// `epsilon` beyond a measured `T`.
pub fn embeddedness_check(
    d: &EndDescriptor,
    alphas: &[f64],
    t_range: (f64, f64),
    n: usize,
    epsilon: f64,
) -> Result<(VerificationReport, Vec<EmbeddednessSummary>)> {
    require_normalized(d, "embeddedness check")?;
    let s = Surface::new(d.clone())?;
    let extent = t_range.0.abs().min(t_range.1.abs());
    let summaries: Vec<EmbeddednessSummary> = alphas
        .par_iter()
        .map(|&a| embeddedness_one(&s, a, t_range, n, epsilon))
        .collect::<Result<_>>()?;
    let mut r = VerificationReport::new();
    for e in &summaries {
        r.push(Check::near_zero(
            format!("embed alpha={}: self-intersections", e.alpha),
            e.intersections.len() as f64,
            0.0,
        ));
        for (ti, tj) in e.intersections.iter().take(10) {
            r.note(format!("alpha={}: segments at t={ti} and t={tj} meet", e.alpha));
        }
        r.push(Check::at_most(
            format!("embed alpha={}: T_measured within sampled range", e.alpha),
            e.t_measured,
            extent,
            0.0,
        ));
        r.push(Check::at_most(
            format!("embed alpha={}: ends opposite within 2 eps", e.alpha),
            e.opposition,
            2.0 * epsilon,
            0.0,
        ));
        r.note(format!(
            "alpha={}: T_measured = {} (epsilon {epsilon}, {n} segments)",
            e.alpha, e.t_measured
        ));
    }
    Ok((r, summaries))
}

/// Distance from `p` to the helicoid `(-s sin φ, s cos φ, φ)`.
///
/// For fixed `φ` the nearest point lies on the horizontal ruling, at planar
/// distance `r |sin(θ - π/2 - φ)|`, so the search is one-dimensional:
/// `d(φ)^2 = r^2 sin^2(θ - π/2 - φ) + (x3 - φ)^2`. Its minimizer lies within
/// `π/2` of `x3`, which is scanned and then refined by golden section.
pub fn helicoid_distance(p: [f64; 3]) -> f64 {
    let r = p[0].hypot(p[1]);
    if r == 0.0 {
        return 0.0;
    }
    let theta = p[1].atan2(p[0]);
    let f = |phi: f64| {
        let s = (theta - FRAC_PI_2 - phi).sin();
        (r * s).powi(2) + (p[2] - phi).powi(2)
    };
    const SCAN: usize = 256;
    let (lo, hi) = (p[2] - FRAC_PI_2 - 0.1, p[2] + FRAC_PI_2 + 0.1);
    let h = (hi - lo) / SCAN as f64;
    let mut best = (lo, f(lo));
    for i in 1..=SCAN {
        let x = lo + h * i as f64;
        let v = f(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    // Also the exact zeros of the sine term nearest x3.
    let base = theta - FRAC_PI_2;
    let k = ((p[2] - base) / PI).round();
    for phi in [base + k * PI, base + (k - 1.0) * PI, base + (k + 1.0) * PI] {
        let v = f(phi);
        if v < best.1 {
            best = (phi, v);
        }
    }
    let mut a = best.0 - h;
    let mut b = best.0 + h;
    let gr = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - gr * (b - a);
    let mut x2 = a + gr * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if b - a <= 1e-15 * (1.0 + best.0.abs()) {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    best.1.min(f1).min(f2).sqrt()
}

/// Largest distance to the reference helicoid over `n_angles` points on each
/// circle `|z| = R`.
pub fn helicoid_distance_profile(
    d: &EndDescriptor,
    radii: &[f64],
    n_angles: usize,
) -> Result<Vec<f64>> {
    require_normalized(d, "helicoid distance check")?;
    let s = Surface::new(d.clone())?;
    radii
        .par_iter()
        .map(|&radius| {
            let zs: Vec<Complex64> = (0..=n_angles)
                .map(|j| Complex64::from_polar(radius, -PI + TAU * j as f64 / n_angles as f64))
                .collect();
            let xs = s.trace(&zs)?;
            Ok(xs.iter().map(|&x| helicoid_distance(x)).fold(0.0, f64::max))
        })
        .collect()
}

/// Maximum distance to the helicoid must not increase with `R` (beyond
/// `1e-3`) and must decay like `1/R`: `R · dist(R)` at the largest radius is at
/// most 1.1 times its value at the smallest. With `epsilon` given, the
/// distance at the largest radius must also be below it.
///
/// Positions have magnitude about `e^R / 2`, so distances are resolvable only
/// while `e^R` times the quadrature precision stays small (`R` up to about 25).
pub fn helicoid_distance_check(
    d: &EndDescriptor,
    radii: &[f64],
    epsilon: Option<f64>,
) -> Result<VerificationReport> {
    const ANGLES: usize = 256;
    let dist = helicoid_distance_profile(d, radii, ANGLES)?;
    let mut r = VerificationReport::new();
    for (radius, v) in radii.iter().zip(&dist) {
        r.note(format!(
            "helicoid distance: max over |z|={radius} is {v:.6e} (R * dist = {:.6e})",
            radius * v
        ));
    }
    if dist.len() > 1 {
        let rise = dist
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max);
        r.push(Check::at_most("helicoid distance: non-increasing in R", rise, 0.0, 1e-3));
        let first = radii[0] * dist[0];
        let last = radii[radii.len() - 1] * dist[dist.len() - 1];
        r.push(Check::at_most(
            "helicoid distance: R * dist does not grow",
            last,
            1.1 * first,
            1e-4,
        ));
    }
    if let (Some(eps), Some(&last), Some(radius)) = (epsilon, dist.last(), radii.last()) {
        r.push(Check::at_most(
            format!("helicoid distance: max at R={radius} < epsilon"),
            last,
            eps,
            0.0,
        ));
    }
    Ok(r)
}

/// `x̂1(t) = ∫_0^t sin(αa/(α²+s²)) cosh(s + a s/(α²+s²)) ds` at the samples
/// `ts` (increasing, `ts[0] >= 0`).
pub fn rotated_first_coordinate(a: f64, alpha: f64, ts: &[f64]) -> Result<Vec<f64>> {
    let opts = AdaptiveOptions::default();
    let f = |s: f64| -> Result<[Complex64; 1]> {
        let q = alpha * alpha + s * s;
        let sine = (alpha * a / q).sin();
        if sine == 0.0 {
            // cosh overflows near s = 0 when α = 0
            return Ok([Complex64::new(0.0, 0.0)]);
        }
        Ok([Complex64::new(sine * (s + a * s / q).cosh(), 0.0)])
    };
    let mut out = Vec::with_capacity(ts.len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &t in ts {
        if t < prev {
            return Err(Error::InvalidArgument("samples must be increasing and >= 0".into()));
        }
        if t > prev {
            acc += integrate(f, prev, t, &opts)?.value[0].re;
        }
        out.push(acc);
        prev = t;
    }
    Ok(out)
}

/// For the family `c = [a]`: after rotating the end by `-α`, the level curve
/// at height `α` has `|x̂1(t)| t² e^{-t} -> |αa|/2`, so it is not asymptotic
/// to any line unless `αa = 0`. Checks the ratio stays above `floor` on
/// `t_range` (or vanishes when `αa = 0`), that `|x̂1|` grows, and cross-checks
/// `x̂1` against the immersion of the rotated end.
pub fn line_asymptote_divergence(
    d: &EndDescriptor,
    alpha: f64,
    t_range: (f64, f64),
    floor: f64,
) -> Result<VerificationReport> {
    if d.c0 != 1.0 || d.order() > 1 {
        return Err(Error::Unsupported(
            "no-line check needs the one-coefficient family c0 = 1, c = [a]".into(),
        ));
    }
    if !(0.0 <= t_range.0 && t_range.0 < t_range.1) {
        return Err(Error::InvalidArgument(format!(
            "t range {t_range:?} must be increasing and non-negative"
        )));
    }
    const SAMPLES: usize = 101;
    let a = d.coefficients.first().copied().unwrap_or(0.0);
    let ts = linspace(t_range.0, t_range.1, SAMPLES);
    let xs = rotated_first_coordinate(a, alpha, &ts)?;
    let ratios: Vec<f64> = ts
        .iter()
        .zip(&xs)
        .map(|(&t, &x)| x.abs() * t * t * (-t).exp())
        .collect();
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);

    let mut r = VerificationReport::new();
    r.note(format!(
        "no-line a={a} alpha={alpha}: ratio in [{min_ratio:.6e}, {max_ratio:.6e}], limit |alpha a|/2 = {:.6e}",
        (alpha * a).abs() / 2.0
    ));
    if alpha * a == 0.0 {
        r.push(Check::near_zero(
            format!("no-line a={a} alpha={alpha}: |x1| t^2 e^-t vanishes"),
            max_ratio,
            1e-12,
        ));
        return Ok(r);
    }
    r.push(Check::at_least(
        format!("no-line a={a} alpha={alpha}: min |x1| t^2 e^-t"),
        min_ratio,
        floor,
    ));
    let decreases = xs
        .windows(2)
        .filter(|w| w[1].abs() < w[0].abs())
        .count();
    r.push(Check::near_zero(
        format!("no-line a={a} alpha={alpha}: |x1| decreasing steps"),
        decreases as f64,
        0.0,
    ));

    // x̂1(t) is X1(t + iα) - X1(iα) for the end rotated by phase -α.
    let rotated = Surface::new(d.clone().with_phase(-alpha))?;
    if alpha.abs() >= d.rmin {
        let picks = [0, SAMPLES / 2, SAMPLES - 1];
        let base = rotated.point(Complex64::new(0.0, alpha))?.x[0];
        let mut worst: f64 = 0.0;
        for &i in &picks {
            let x = rotated.point(Complex64::new(ts[i], alpha))?.x[0] - base;
            worst = worst.max((x - xs[i]).abs() / xs[i].abs().max(1.0));
        }
        r.push(Check::near_zero(
            format!("no-line a={a} alpha={alpha}: integrand vs immersion (relative)"),
            worst,
            1e-8,
        ));
    }
    Ok(r)
}
