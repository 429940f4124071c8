use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// Weierstrass data of a helicoid-type end in normal form.
///
/// The Gauss map is `g = A G(z)` with `G(z) = exp(c0 z + sum_k c_k z^{1-2k})`,
/// `A = modulus * exp(i phase)`, and the height differential is `dh = -i dz`.
/// The end lives on `|z| >= rmin`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndDescriptor {
    pub c0: f64,
    /// `c_1, ..., c_K`, the coefficients of `z^{-1}, z^{-3}, ...`.
    pub coefficients: Vec<f64>,
    pub phase: f64,
    pub modulus: f64,
    pub rmin: f64,
}

impl EndDescriptor {
    pub const DEFAULT_RMIN: f64 = 0.5;

    pub fn new(c0: f64, coefficients: Vec<f64>) -> Result<Self> {
        let d = EndDescriptor {
            c0,
            coefficients,
            phase: 0.0,
            modulus: 1.0,
            rmin: Self::DEFAULT_RMIN,
        };
        d.validate()?;
        Ok(d)
    }

    /// `g = e^z`, `dh = -i dz`.
    pub fn helicoid() -> Self {
        EndDescriptor {
            c0: 1.0,
            coefficients: Vec::new(),
            phase: 0.0,
            modulus: 1.0,
            rmin: Self::DEFAULT_RMIN,
        }
    }

    /// `g = exp(z + a/z)`.
    pub fn simple_family(a: f64) -> Self {
        EndDescriptor {
            coefficients: vec![a],
            ..Self::helicoid()
        }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn with_modulus(mut self, modulus: f64) -> Self {
        self.modulus = modulus;
        self
    }

    pub fn with_rmin(mut self, rmin: f64) -> Self {
        self.rmin = rmin;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDescriptor(m));
        if !self.c0.is_finite() || self.c0 == 0.0 {
            return bad(format!("c0 must be finite and nonzero, got {}", self.c0));
        }
        if let Some((k, c)) = self
            .coefficients
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_finite())
        {
            return bad(format!("coefficient c_{} is not finite ({c})", k + 1));
        }
        if !self.phase.is_finite() {
            return bad(format!("phase must be finite, got {}", self.phase));
        }
        if !(self.modulus.is_finite() && self.modulus > 0.0) {
            return bad(format!("modulus must be positive, got {}", self.modulus));
        }
        if !(self.rmin.is_finite() && self.rmin > 0.0) {
            return bad(format!("rmin must be positive, got {}", self.rmin));
        }
        Ok(())
    }

    /// Number of coefficients `K` after `c0`.
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_unitary(&self) -> bool {
        (self.modulus - 1.0).abs() <= 1e-15
    }

    /// `r_0, r_2, ..., r_{2K}` with `r_{2k} = (1 - 2k) c_k`.
    pub fn r_coefficients(&self) -> Vec<f64> {
        std::iter::once(self.c0)
            .chain(
                self.coefficients
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (1.0 - 2.0 * (i + 1) as f64) * c),
            )
            .collect()
    }

    /// Inverse of [`r_coefficients`](Self::r_coefficients).
    pub fn from_r_coefficients(r: &[f64]) -> Result<Self> {
        let (&r0, rest) = r
            .split_first()
            .ok_or_else(|| Error::InvalidDescriptor("empty r-coefficient list".into()))?;
        let coefficients = rest
            .iter()
            .enumerate()
            .map(|(i, &rk)| rk / (1.0 - 2.0 * (i + 1) as f64))
            .collect();
        Self::new(r0, coefficients)
    }

    /// `log A = ln(modulus) + i phase`.
    pub fn log_a(&self) -> Complex64 {
        Complex64::new(self.modulus.ln(), self.phase)
    }

    /// `c0 z + sum_k c_k z^{1-2k}`, the exponent of `G`.
    pub fn exponent(&self, z: Complex64) -> Complex64 {
        z * self.c0 + self.tail(z)
    }

    /// `F(z) = sum_k c_k z^{1-2k}`, the part of the exponent vanishing at infinity.
    pub fn tail(&self, z: Complex64) -> Complex64 {
        if self.coefficients.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let w = z.inv();
        let w2 = w * w;
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coefficients.iter().rev() {
            acc = acc * w2 + c;
        }
        acc * w
    }

    /// `g'/g = c0 + sum_k r_{2k} z^{-2k}`.
    pub fn log_derivative(&self, z: Complex64) -> Complex64 {
        let w2 = z.inv() * z.inv();
        let r = self.r_coefficients();
        let mut acc = Complex64::new(0.0, 0.0);
        for &rk in r[1..].iter().rev() {
            acc = (acc + rk) * w2;
        }
        acc + self.c0
    }

    /// `S = sum_{k>=1} |r_{2k}| rmin^{2-2k}`, the supremum of
    /// `sum |r_{2k} z^{2-2k}|` over `|z| >= rmin`.
    pub fn curvature_constant(&self) -> f64 {
        self.r_coefficients()[1..]
            .iter()
            .enumerate()
            .map(|(i, r)| r.abs() * self.rmin.powi(-2 * i as i32))
            .sum()
    }

    /// The exponent of `G(scale * w)` as a Laurent expansion in `w`.
    pub fn exponent_poly(&self, scale: f64) -> LaurentPoly {
        let k = self.order() as i64;
        let lo = 1 - 2 * k;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (2 - lo) as usize];
        coeffs[(1 - lo) as usize] = Complex64::new(self.c0 * scale, 0.0);
        for (i, &c) in self.coefficients.iter().enumerate() {
            let e = 1 - 2 * (i as i64 + 1);
            coeffs[(e - lo) as usize] = Complex64::new(c * scale.powi(e as i32), 0.0);
        }
        LaurentPoly::new(lo, coeffs)
    }

    /// Radius minimizing `|c0| R + sum |c_k| R^{1-2k}`, the log-size of `G`
    /// on the circle `|z| = R`.
    pub fn balanced_radius(&self) -> f64 {
        if self.coefficients.iter().all(|&c| c == 0.0) {
            return 1.0;
        }
        let size = |log_r: f64| self.circle_majorant(log_r.exp());
        // The majorant is convex in log R.
        let (mut a, mut b) = (-12.0f64, 12.0f64);
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = b - phi * (b - a);
        let mut x2 = a + phi * (b - a);
        let (mut f1, mut f2) = (size(x1), size(x2));
        for _ in 0..200 {
            if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - phi * (b - a);
                f1 = size(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + phi * (b - a);
                f2 = size(x2);
            }
            if b - a < 1e-12 {
                break;
            }
        }
        (0.5 * (a + b)).exp()
    }

    /// `|c0| R + sum |c_k| R^{1-2k}`.
    pub fn circle_majorant(&self, radius: f64) -> f64 {
        self.c0.abs() * radius
            + self
                .coefficients
                .iter()
                .enumerate()
                .map(|(i, c)| c.abs() * radius.powi(-(2 * i as i32 + 1)))
                .sum::<f64>()
    }
}
