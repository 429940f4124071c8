//! Gauss–Legendre rules and an adaptive panel integrator for vector-valued
//! complex integrands.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_n` from the Chebyshev-like initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn gl16() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

fn gl32() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(32))
}

#[derive(Clone, Copy, Debug)]
pub struct AdaptiveOptions {
    /// Absolute error target over the whole interval.
    pub abs_tol: f64,
    /// Panels are also accepted once the 16/32-point disagreement falls
    /// below this fraction of `int |f|` (the rounding floor).
    pub rel_floor: f64,
    pub max_panels: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        AdaptiveOptions {
            abs_tol: 1e-10,
            rel_floor: 1e-14,
            max_panels: 1 << 14,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Integral<const N: usize> {
    pub value: [Complex64; N],
    pub error: f64,
    pub panels: usize,
}

/// Integrates `f` over `[a, b]` with 16-point panels checked against the
/// 32-point rule; panels that disagree are bisected.
pub fn integrate<const N: usize, F>(
    mut f: F,
    a: f64,
    b: f64,
    opts: &AdaptiveOptions,
) -> Result<Integral<N>>
where
    F: FnMut(f64) -> Result<[Complex64; N]>,
{
    let zero = [Complex64::new(0.0, 0.0); N];
    if a == b {
        return Ok(Integral {
            value: zero,
            error: 0.0,
            panels: 0,
        });
    }
    let span = (b - a).abs();
    let mut total = zero;
    let mut error = 0.0;
    let mut accepted = 0usize;
    // Depth-first, left to right: the summation order is deterministic.
    let mut stack = vec![(a, b)];
    while let Some((lo, hi)) = stack.pop() {
        let (coarse, _) = apply_rule(gl16(), &mut f, lo, hi)?;
        let (fine, abs_mass) = apply_rule(gl32(), &mut f, lo, hi)?;
        let diff = coarse
            .iter()
            .zip(fine.iter())
            .map(|(c, f)| (c - f).norm())
            .fold(0.0, f64::max);
        let target = (opts.abs_tol * (hi - lo).abs() / span).max(opts.rel_floor * abs_mass);
        if diff <= target {
            for (t, v) in total.iter_mut().zip(fine.iter()) {
                *t += v;
            }
            error += diff;
            accepted += 1;
            continue;
        }
        if accepted + stack.len() + 2 > opts.max_panels {
            return Err(Error::Quadrature {
                target: opts.abs_tol,
                achieved: error + diff,
                panels: accepted + stack.len() + 1,
            });
        }
        let mid = 0.5 * (lo + hi);
        stack.push((mid, hi));
        stack.push((lo, mid));
    }
    Ok(Integral {
        value: total,
        error,
        panels: accepted,
    })
}

fn apply_rule<const N: usize, F>(
    rule: &GaussLegendre,
    f: &mut F,
    lo: f64,
    hi: f64,
) -> Result<([Complex64; N], f64)>
where
    F: FnMut(f64) -> Result<[Complex64; N]>,
{
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut acc = [Complex64::new(0.0, 0.0); N];
    let mut mass = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(rule.weights.iter()) {
        let v = f(mid + half * x)?;
        for (a, vi) in acc.iter_mut().zip(v.iter()) {
            *a += vi * (w * half);
            mass += vi.norm() * w * half.abs();
        }
    }
    Ok((acc, mass))
}

/// Equally spaced trapezoid rule for a `2π`-periodic integrand, returning
/// `(1/n) sum f(2π j / n)`, the mean value over the period.
pub fn periodic_mean<F>(n: usize, mut f: F) -> Result<Complex64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        acc += f(2.0 * PI * j as f64 / n as f64)?;
    }
    Ok(acc / n as f64)
}
