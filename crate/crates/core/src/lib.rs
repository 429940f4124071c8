//! Minimal annular ends of helicoid type.
//!
//! An end is given on a neighborhood of infinity by Weierstrass data
//! `dg/g = (c0 + sum r_{2k} z^{-2k}) dz`, `dh = -i dz`, so that the Gauss map is
//! `g = A exp(c0 z + sum_k c_k z^{1-2k})` with `c_k = r_{2k} / (1 - 2k)`.
//!
//! The crate is organized bottom-up:
//!
//! - [`laurent`]: truncated Laurent expansions about `z = 0`.
//! - [`residue`]: the residue of `G` by series and by contour quadrature, `J1`,
//!   and root solvers for admissible coefficients.
//! - [`weierstrass`]: Gauss map, immersion by path integration, period closure,
//!   and the closed-form helicoid.
//! - [`geometry`]: level curves and the verification checks.
//! - [`export`]: descriptor JSON, level-curve CSV and OBJ meshes.
//! - [`cli`]: the `helicoid-ends` command line.

pub mod cli;
pub mod error;
pub mod export;
pub mod geometry;
pub mod laurent;
pub mod quadrature;
pub mod report;
pub mod residue;
pub mod weierstrass;

pub use error::{Error, Result};
pub use laurent::{LaurentPoly, Window};
pub use report::{Check, VerificationReport};
pub use residue::{EndDescriptor, RootList};
pub use weierstrass::{PeriodReport, Surface, SurfacePoint};

pub use num_complex::Complex64;
