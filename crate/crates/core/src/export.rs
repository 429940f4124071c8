//! File formats: descriptor JSON, level-curve CSV and OBJ meshes.
//!
//! Floating values in CSV and OBJ are written with 17 significant digits so
//! that they read back bit-exact. Descriptor JSON uses the shortest decimal
//! that round-trips.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{linspace, LevelCurve};
use crate::residue::EndDescriptor;
use crate::weierstrass::Surface;

/// Immersion sampled on a `t × α` grid, triangulated.
#[derive(Clone, Debug, Serialize)]
pub struct SurfaceMesh {
    pub nt: usize,
    pub nalpha: usize,
    /// Row-major by `α` then `t`, skipping grid points that no face uses.
    pub vertices: Vec<[f64; 3]>,
    /// `(it, ia)` grid position of each vertex.
    pub grid: Vec<(usize, usize)>,
    /// 1-indexed, counterclockwise seen from the side the Gauss map points to.
    pub faces: Vec<[usize; 3]>,
}

impl SurfaceMesh {
    pub fn validate(&self) -> Result<()> {
        for f in &self.faces {
            if f.iter().any(|&i| i == 0 || i > self.vertices.len()) {
                return Err(Error::InvalidArgument(format!("face {f:?} out of range")));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::InvalidArgument(format!("face {f:?} is degenerate")));
            }
        }
        Ok(())
    }
}

fn rect_distance(t: (f64, f64), a: (f64, f64)) -> f64 {
    let clamp = |lo: f64, hi: f64| if lo > 0.0 { lo } else if hi < 0.0 { -hi } else { 0.0 };
    clamp(t.0, t.1).hypot(clamp(a.0, a.1))
}

/// Grid of `nt × nalpha` points over `t_range × alpha_range`. Cells that meet
/// the disk `|z| < exclude_disk` are dropped along with vertices left unused.
pub fn mesh_end(
    d: &EndDescriptor,
    t_range: (f64, f64),
    alpha_range: (f64, f64),
    nt: usize,
    nalpha: usize,
    exclude_disk: f64,
) -> Result<SurfaceMesh> {
    if nt < 2 || nalpha < 2 {
        return Err(Error::InvalidArgument(format!(
            "mesh needs at least 2 x 2 points, got {nt} x {nalpha}"
        )));
    }
    if !(exclude_disk >= d.rmin) {
        return Err(Error::InvalidArgument(format!(
            "excluded disk {exclude_disk} smaller than rmin {}",
            d.rmin
        )));
    }
    let ts = linspace(t_range.0, t_range.1, nt);
    let alphas = linspace(alpha_range.0, alpha_range.1, nalpha);

    let mut used = vec![false; nt * nalpha];
    let mut cells = Vec::new();
    for ia in 0..nalpha - 1 {
        for it in 0..nt - 1 {
            if rect_distance((ts[it], ts[it + 1]), (alphas[ia], alphas[ia + 1])) < exclude_disk {
                continue;
            }
            let v00 = ia * nt + it;
            let corners = [v00, v00 + 1, v00 + nt, v00 + nt + 1];
            for c in corners {
                used[c] = true;
            }
            cells.push(corners);
        }
    }

    let s = Surface::new(d.clone())?;
    let rows: Vec<Vec<(usize, [f64; 3])>> = (0..nalpha)
        .into_par_iter()
        .map(|ia| {
            let idx: Vec<usize> = (0..nt).filter(|&it| used[ia * nt + it]).collect();
            let zs: Vec<Complex64> = idx
                .iter()
                .map(|&it| Complex64::new(ts[it], alphas[ia]))
                .collect();
            let xs = s.trace(&zs).map_err(|e| locate(e, &zs, ts[0], alphas[ia]))?;
            Ok(idx.into_iter().map(|it| ia * nt + it).zip(xs).collect())
        })
        .collect::<Result<_>>()?;

    let mut remap = vec![0usize; nt * nalpha];
    let mut vertices = Vec::new();
    let mut grid = Vec::new();
    for (k, x) in rows.into_iter().flatten() {
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::Grid {
                t: ts[k % nt],
                alpha: alphas[k / nt],
                source: Box::new(Error::Overflow {
                    z: Complex64::new(ts[k % nt], alphas[k / nt]),
                }),
            });
        }
        vertices.push(x);
        grid.push((k % nt, k / nt));
        remap[k] = vertices.len();
    }
    let faces = cells
        .iter()
        .flat_map(|c| {
            let [v00, v10, v01, v11] = c.map(|i| remap[i]);
            [[v00, v10, v11], [v00, v11, v01]]
        })
        .collect();
    let mesh = SurfaceMesh {
        nt,
        nalpha,
        vertices,
        grid,
        faces,
    };
    mesh.validate()?;
    Ok(mesh)
}

fn locate(e: Error, zs: &[Complex64], t0: f64, alpha: f64) -> Error {
    let z = match &e {
        Error::Domain { z, .. } | Error::Overflow { z } => Some(*z),
        _ => None,
    };
    let (t, alpha) = z.map_or((zs.first().map_or(t0, |z| z.re), alpha), |z| (z.re, z.im));
    Error::Grid {
        t,
        alpha,
        source: Box::new(e),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

pub fn write_obj_to<W: Write>(m: &SurfaceMesh, mut w: W) -> Result<()> {
    for v in &m.vertices {
        writeln!(w, "v {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2])?;
    }
    for f in &m.faces {
        writeln!(w, "f {} {} {}", f[0], f[1], f[2])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_obj(m: &SurfaceMesh, path: impl AsRef<Path>) -> Result<()> {
    write_obj_to(m, create(path.as_ref())?)
}

pub fn write_curve_csv_to<W: Write>(c: &LevelCurve, mut w: W) -> Result<()> {
    writeln!(w, "t,x1,x2,x3,kappa")?;
    for i in 0..c.len() {
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            c.ts[i], c.pts[i][0], c.pts[i][1], c.heights[i], c.kappa[i]
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_curve_csv(c: &LevelCurve, path: impl AsRef<Path>) -> Result<()> {
    write_curve_csv_to(c, create(path.as_ref())?)
}

/// Parses and validates a descriptor from JSON text; `origin` labels errors.
pub fn parse_descriptor(text: &str, origin: &str) -> Result<EndDescriptor> {
    let d: EndDescriptor = serde_json::from_str(text).map_err(|source| Error::Json {
        path: origin.to_string(),
        source,
    })?;
    d.validate().map_err(|e| match e {
        Error::InvalidDescriptor(message) => {
            let field = match message.split_whitespace().next().unwrap_or("") {
                "coefficient" => "coefficients",
                other => other,
            }
            .to_string();
            Error::Schema {
                path: origin.to_string(),
                field,
                message,
            }
        }
        other => other,
    })?;
    Ok(d)
}

pub fn read_descriptor(path: impl AsRef<Path>) -> Result<EndDescriptor> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_descriptor(&text, &path.display().to_string())
}

pub fn descriptor_json(d: &EndDescriptor) -> String {
    serde_json::to_string_pretty(d).expect("descriptor serializes")
}

pub fn write_descriptor(d: &EndDescriptor, path: impl AsRef<Path>) -> Result<()> {
    d.validate()?;
    let mut w = create(path.as_ref())?;
    writeln!(w, "{}", descriptor_json(d))?;
    w.flush()?;
    Ok(())
}
