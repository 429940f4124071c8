//! The `helicoid-ends` command line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or input
//! error, 3 a numerical tolerance could not be met.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::export::{mesh_end, read_descriptor, write_curve_csv, write_descriptor, write_obj};
use crate::geometry::{
    curvature_bound_constant, embeddedness_check, helicoid_distance_check, level_curve,
    level_curve_on, line_asymptote_divergence, polar_grid, ray_check, tangent_direction_check,
    total_curvature_check,
};
use crate::report::{Check, VerificationReport};
use crate::residue::{
    j1_zeros, residue_quadrature_auto, residue_series, solve_coefficient, solve_simple_family,
    EndDescriptor, RootList, SolveOptions,
};
use crate::weierstrass::Surface;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "helicoid-ends", version, about = "Minimal annular ends of helicoid type")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// `g = exp(z + a/z)`
    Simple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Series,
    Quadrature,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum CheckKind {
    Residue,
    Periods,
    Rays,
    Curvature,
    Embed,
    Asymptote,
    NoLine,
}

impl CheckKind {
    pub const ALL: [CheckKind; 7] = [
        CheckKind::Residue,
        CheckKind::Periods,
        CheckKind::Rays,
        CheckKind::Curvature,
        CheckKind::Embed,
        CheckKind::Asymptote,
        CheckKind::NoLine,
    ];
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find coefficients satisfying the residue condition.
    Solve {
        #[arg(long, value_enum, conflicts_with_all = ["desc", "free", "bracket"])]
        family: Option<Family>,
        /// Number of roots of the family to report.
        #[arg(long, default_value_t = 2)]
        roots: usize,
        #[arg(long)]
        desc: Option<PathBuf>,
        /// 1-based index of the coefficient to solve for.
        #[arg(long, requires = "desc")]
        free: Option<usize>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, requires = "desc")]
        bracket: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.05)]
        scan_fraction: f64,
        #[arg(long, default_value_t = 1e-10)]
        residual_tol: f64,
        /// Write one descriptor file per root into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run the verification suite on a descriptor.
    Verify {
        #[arg(long)]
        desc: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',')]
        checks: Vec<CheckKind>,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        residue_tol: f64,
        #[arg(long, default_value_t = 5.0)]
        period_radius: f64,
        #[arg(long, default_value_t = 1e-8)]
        period_tol: f64,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [2.0, 10.0])]
        ray_range: Vec<f64>,
        /// Multiplier of `S π / |α|` in the curvature bound.
        #[arg(long, default_value_t = 1.0)]
        curvature_constant: f64,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [5.0, 10.0, 20.0])]
        curvature_alphas: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [-10.0, -5.0, -2.0, 2.0, 5.0, 10.0])]
        embed_alphas: Vec<f64>,
        #[arg(long, default_value_t = 15.0)]
        embed_extent: f64,
        #[arg(long, default_value_t = 2000)]
        embed_segments: usize,
        /// Cone half-width.
        #[arg(long, default_value_t = 0.2)]
        epsilon: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [5.0, 10.0, 15.0, 20.0])]
        radii: Vec<f64>,
        /// Also require the distance at the largest radius to be below this.
        #[arg(long)]
        distance_epsilon: Option<f64>,
        #[arg(long, default_value_t = 2.0)]
        noline_alpha: f64,
        #[arg(long, default_value_t = 0.01)]
        noline_floor: f64,
    },
    /// Write a triangulated grid of the end as OBJ.
    Mesh {
        #[arg(long)]
        desc: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, num_args = 2, allow_negative_numbers = true, default_values_t = [-3.0, 3.0])]
        t_range: Vec<f64>,
        #[arg(long, num_args = 2, allow_negative_numbers = true, default_values_t = [-6.0, 6.0])]
        alpha_range: Vec<f64>,
        #[arg(long, default_value_t = 61)]
        nt: usize,
        #[arg(long, default_value_t = 121)]
        nalpha: usize,
        /// Radius of the disk left out of the grid (at least rmin).
        #[arg(long)]
        exclude: Option<f64>,
    },
    /// Write one level curve `Im z = alpha` as CSV.
    Levelcurve {
        #[arg(long)]
        desc: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, num_args = 2, allow_negative_numbers = true, default_values_t = [-10.0, 10.0])]
        t_range: Vec<f64>,
        /// Number of segments.
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Residue of `G` at the origin.
    Residue {
        #[arg(long)]
        desc: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Positive zeros of the Bessel function J1.
    BesselZeros {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-13)]
        xtol: f64,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cfg.command, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

fn pair(v: &[f64], what: &str) -> Result<(f64, f64)> {
    match v {
        [lo, hi] if lo < hi => Ok((*lo, *hi)),
        _ => Err(Error::InvalidArgument(format!(
            "{what} must be two increasing values, got {v:?}"
        ))),
    }
}

/// Runs one command; `Ok(false)` means a verification check failed.
pub fn execute(cmd: &Command, out: &mut dyn Write) -> Result<bool> {
    match cmd {
        Command::Solve {
            family,
            roots,
            desc,
            free,
            bracket,
            scan_fraction,
            residual_tol,
            out_dir,
        } => {
            let (list, make): (RootList, Box<dyn Fn(f64) -> EndDescriptor>) = match (family, desc) {
                (Some(Family::Simple), _) => {
                    (solve_simple_family(*roots)?, Box::new(EndDescriptor::simple_family))
                }
                (None, Some(path)) => {
                    let free = free.ok_or_else(|| {
                        Error::InvalidArgument("--free is required with --desc".into())
                    })?;
                    let bracket = pair(
                        bracket.as_deref().ok_or_else(|| {
                            Error::InvalidArgument("--bracket is required with --desc".into())
                        })?,
                        "--bracket",
                    )?;
                    if !(*scan_fraction > 0.0 && *scan_fraction <= 1.0 && *residual_tol > 0.0) {
                        return Err(Error::InvalidArgument(
                            "scan fraction must lie in (0, 1] and tolerances be positive".into(),
                        ));
                    }
                    let d = read_descriptor(path)?;
                    let opts = SolveOptions {
                        scan_fraction: *scan_fraction,
                        residual_tol: *residual_tol,
                        ..SolveOptions::default()
                    };
                    let mut list = solve_coefficient(&d, free, bracket, &opts)?;
                    list.samples.clear();
                    let make = move |v: f64| {
                        let mut e = d.clone();
                        e.coefficients[free - 1] = v;
                        e
                    };
                    (list, Box::new(make))
                }
                (None, None) => {
                    return Err(Error::InvalidArgument(
                        "solve needs --family or --desc".into(),
                    ))
                }
            };
            print_roots(&list, out)?;
            if let Some(dir) = out_dir {
                std::fs::create_dir_all(dir)?;
                for (k, v) in list.values.iter().enumerate() {
                    let d = make(*v);
                    let path = dir.join(format!("root_{}.json", k + 1));
                    write_descriptor(&d, &path)?;
                    writeln!(out, "wrote {}", path.display())?;
                }
            }
            Ok(true)
        }
        Command::Verify { desc, json, .. } => {
            let d = read_descriptor(desc)?;
            let report = verify(&d, cmd)?;
            write!(out, "{report}")?;
            if let Some(path) = json {
                std::fs::write(path, report.to_json())?;
            }
            writeln!(
                out,
                "{}: {} checks, {} failed",
                if report.passed() { "PASS" } else { "FAIL" },
                report.checks.len(),
                report.failures().count()
            )?;
            Ok(report.passed())
        }
        Command::Mesh {
            desc,
            output,
            t_range,
            alpha_range,
            nt,
            nalpha,
            exclude,
        } => {
            let d = read_descriptor(desc)?;
            let m = mesh_end(
                &d,
                pair(t_range, "--t-range")?,
                pair(alpha_range, "--alpha-range")?,
                *nt,
                *nalpha,
                exclude.unwrap_or(d.rmin),
            )?;
            write_obj(&m, output)?;
            writeln!(
                out,
                "wrote {}: {} vertices, {} faces",
                output.display(),
                m.vertices.len(),
                m.faces.len()
            )?;
            Ok(true)
        }
        Command::Levelcurve {
            desc,
            alpha,
            t_range,
            n,
            output,
        } => {
            let d = read_descriptor(desc)?;
            let c = level_curve(&d, *alpha, pair(t_range, "--t-range")?, *n)?;
            write_curve_csv(&c, output)?;
            writeln!(
                out,
                "wrote {}: {} samples, total absolute curvature {:.12e}",
                output.display(),
                c.len(),
                c.total_absolute_curvature()
            )?;
            Ok(true)
        }
        Command::Residue { desc, method, tol } => {
            if !(*tol > 0.0) {
                return Err(Error::InvalidArgument("--tol must be positive".into()));
            }
            let d = read_descriptor(desc)?;
            let series = match method {
                Method::Quadrature => None,
                _ => Some(residue_series(&d)?),
            };
            let quad = match method {
                Method::Series => None,
                _ => Some(residue_quadrature_auto(&d, *tol)?),
            };
            if let Some(s) = series {
                writeln!(out, "series      {s:.17e}")?;
            }
            if let Some(q) = &quad {
                writeln!(
                    out,
                    "quadrature  {:.17e}  (radius {}, {} nodes, imaginary part {:.3e})",
                    q.value.re, q.radius, q.nodes, q.value.im
                )?;
            }
            if let (Some(s), Some(q)) = (series, &quad) {
                writeln!(out, "difference  {:.3e}", (s - q.value.re).abs())?;
            }
            Ok(true)
        }
        Command::BesselZeros { n, xtol } => {
            if *n == 0 {
                return Err(Error::InvalidArgument("--n must be at least 1".into()));
            }
            for (k, z) in j1_zeros(*n, *xtol)?.iter().enumerate() {
                writeln!(out, "j1,{} = {:.15}", k + 1, z.value)?;
            }
            Ok(true)
        }
    }
}

fn print_roots(list: &RootList, out: &mut dyn Write) -> Result<()> {
    if list.values.is_empty() {
        writeln!(out, "no roots found")?;
    }
    for (k, (v, r)) in list.values.iter().zip(&list.residuals).enumerate() {
        writeln!(out, "root {}: {v:.15}  |Res| = {r:.3e}", k + 1)?;
    }
    for note in &list.diagnostics {
        writeln!(out, "note: {note}")?;
    }
    Ok(())
}

/// Parameter extent and segment count for the total-curvature quadrature at
/// height `alpha`: `|t| <= min(100 |α|, 600)` with steps of `|α|/20`. The
/// neglected tails carry a fraction of order `(α / extent)^2` of the total.
pub fn curvature_sampling(alpha: f64) -> (f64, usize) {
    let a = alpha.abs().max(1.0);
    let extent = (100.0 * a).min(600.0);
    (extent, (40.0 * extent / a).ceil() as usize)
}

fn is_simple_family(d: &EndDescriptor) -> bool {
    d.c0 == 1.0 && d.order() <= 1
}

fn is_normalized(d: &EndDescriptor) -> bool {
    d.is_unitary() && d.phase == 0.0
}

/// Runs the checks selected in a `Verify` command (all when none are given).
pub fn verify(d: &EndDescriptor, cmd: &Command) -> Result<VerificationReport> {
    let Command::Verify {
        checks,
        residue_tol,
        period_radius,
        period_tol,
        ray_range,
        curvature_constant,
        curvature_alphas,
        embed_alphas,
        embed_extent,
        embed_segments,
        epsilon,
        radii,
        distance_epsilon,
        noline_alpha,
        noline_floor,
        ..
    } = cmd
    else {
        return Err(Error::InvalidArgument("not a verify command".into()));
    };
    for (name, v) in [
        ("--residue-tol", *residue_tol),
        ("--period-tol", *period_tol),
        ("--curvature-constant", *curvature_constant),
        ("--distance-epsilon", distance_epsilon.unwrap_or(1.0)),
        ("--embed-extent", *embed_extent),
    ] {
        if !(v > 0.0) {
            return Err(Error::InvalidArgument(format!("{name} must be positive")));
        }
    }
    let mut selected = if checks.is_empty() {
        CheckKind::ALL.to_vec()
    } else {
        checks.clone()
    };
    selected.sort();
    selected.dedup();

    let surface = Surface::new(d.clone())?;
    let mut report = VerificationReport::new();
    report.note(format!(
        "descriptor: c0={}, c={:?}, phase={}, modulus={}, rmin={}",
        d.c0, d.coefficients, d.phase, d.modulus, d.rmin
    ));
    let s_const = curvature_bound_constant(d);
    report.note(format!("S = {s_const}"));
    let skip = |r: &mut VerificationReport, what: &str| {
        r.note(format!(
            "{what}: skipped (needs modulus 1 and phase 0)"
        ))
    };

    for kind in selected {
        match kind {
            CheckKind::Residue => {
                let series = residue_series(d)?;
                let quad = residue_quadrature_auto(d, 1e-13)?;
                report.push(Check::near_zero("residue: series", series, *residue_tol));
                report.push(Check::near_zero(
                    "residue: series vs quadrature",
                    (series - quad.value.re).abs(),
                    *residue_tol,
                ));
                if !d.is_unitary() {
                    report.push(Check::near_zero(
                        "residue: |A| - 1 (admissible ends are unitary)",
                        d.modulus - 1.0,
                        1e-15,
                    ));
                }
            }
            CheckKind::Periods => {
                let p = surface.period_check(*period_radius)?;
                report.note(format!(
                    "periods at radius {}: {} nodes",
                    p.radius, p.nodes
                ));
                report.push(Check::near_zero("periods: |Re(P - Q)|", p.horizontal_defect.0, *period_tol));
                report.push(Check::near_zero("periods: |Im(P + Q)|", p.horizontal_defect.1, *period_tol));
                report.push(Check::near_zero("periods: vertical", p.vertical_defect, *period_tol));
            }
            CheckKind::Rays => {
                report.merge(ray_check(d, pair(ray_range, "--ray-range")?)?);
            }
            CheckKind::Curvature => {
                for &alpha in curvature_alphas {
                    let (extent, n) = curvature_sampling(alpha);
                    let c = level_curve_on(&surface, alpha, (-extent, extent), n)?;
                    report.merge(total_curvature_check(&c, s_const, *curvature_constant));
                }
            }
            CheckKind::Embed => {
                if is_normalized(d) {
                    let (r, _) = embeddedness_check(
                        d,
                        embed_alphas,
                        (-*embed_extent, *embed_extent),
                        *embed_segments,
                        *epsilon,
                    )?;
                    report.merge(r);
                } else {
                    skip(&mut report, "embed");
                }
            }
            CheckKind::Asymptote => {
                if is_normalized(d) {
                    report.merge(tangent_direction_check(d, &polar_grid(5.0, 40.0, 30, 30))?);
                    report.merge(helicoid_distance_check(d, radii, *distance_epsilon)?);
                } else {
                    skip(&mut report, "asymptote");
                }
            }
            CheckKind::NoLine => {
                if is_simple_family(d) && is_normalized(d) {
                    report.merge(line_asymptote_divergence(
                        d,
                        *noline_alpha,
                        (5.0, 15.0),
                        *noline_floor,
                    )?);
                } else {
                    report.note("no-line: skipped (only for the family c0 = 1, c = [a])");
                }
            }
        }
    }
    Ok(report)
}
