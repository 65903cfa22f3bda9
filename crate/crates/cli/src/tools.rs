//! `kernel` and `eigen`: thin wrappers with self-checks.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use fracchemo_core::eigen1d::{sigma_sweep, DEFAULT_RESOLUTION};
use fracchemo_core::kernel::{
    fit_gradient_semigroup_constant, heat_kernel_profile, kernel_peak, semigroup_blowup_slope,
};
use fracchemo_core::{Error, Grid, Result};

use crate::output::{comment, ensure_dir, write_with_header};
use crate::Status;

const MASS_TOL: f64 = 1e-8;
const GAUSSIAN_TOL: f64 = 1e-6;

#[derive(Args)]
pub struct KernelArgs {
    #[arg(long, default_value_t = 0.75)]
    alpha: f64,
    /// Comma-separated times.
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
    times: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Half-period per axis (default 10 pi in 1D, 4 pi in 2D).
    #[arg(long)]
    extent: Option<f64>,
    /// Points per axis (default 1024 in 1D, 128 in 2D).
    #[arg(long)]
    points: Option<usize>,
    /// Compare with the Gaussian heat kernel (requires alpha = 1).
    #[arg(long)]
    compare_gaussian: bool,
    /// Also fit the gradient-semigroup constant and its blow-up exponent.
    #[arg(long)]
    fit_constant: bool,
    /// Trial fields for the constant fit.
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn kernel(args: &KernelArgs) -> Result<Status> {
    if args.compare_gaussian && args.alpha != 1.0 {
        return Err(Error::Config("--compare-gaussian requires --alpha 1".into()));
    }
    if args.times.is_empty() {
        return Err(Error::Config("--times needs at least one value".into()));
    }
    let extent = args.extent.unwrap_or(if args.dim == 1 { 10.0 * PI } else { 4.0 * PI });
    let points = args.points.unwrap_or(if args.dim == 1 { 1024 } else { 128 });
    let grid = Grid::new(args.dim, &[extent, extent], &[points, points])?;
    let header = format!(
        "alpha = {}\ntimes = {:?}\ndim = {}\nextent = {extent}\npoints = {points}\n",
        args.alpha, args.times, args.dim
    );

    let mut table = String::from("t,mass,mass_err,peak,peak_closed_form,peak_rel_err");
    if args.compare_gaussian {
        table.push_str(",gaussian_max_err");
    }
    table.push('\n');
    let mut profiles = Vec::new();
    let mut pass = true;
    for &t in &args.times {
        let k = heat_kernel_profile(args.alpha, t, &grid)?;
        let mass = k.integral();
        let mass_err = (mass - 1.0).abs();
        pass &= mass_err <= MASS_TOL;
        let peak = k.max();
        let closed = kernel_peak(args.alpha, t, args.dim);
        let _ = write!(table, "{t},{mass:.15e},{mass_err:e},{peak:e},{closed:e},{:e}", (peak - closed).abs() / closed);
        if args.compare_gaussian {
            let norm = (4.0 * PI * t).powf(args.dim as f64 / 2.0);
            let err = k
                .values()
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let x = grid.node(i);
                    let r2: f64 = x[..args.dim].iter().map(|c| c * c).sum();
                    (v - (-r2 / (4.0 * t)).exp() / norm).abs()
                })
                .fold(0.0, f64::max);
            pass &= err < GAUSSIAN_TOL;
            let _ = write!(table, ",{err:e}");
        }
        table.push('\n');
        profiles.push(k);
    }
    print!("{}{table}", comment(&header));

    let mut extra = String::new();
    if args.fit_constant {
        let c1 = fit_gradient_semigroup_constant(args.alpha, &grid, args.trials, args.seed)?;
        let slope = semigroup_blowup_slope(args.alpha, &grid)?;
        let _ = writeln!(extra, "gradient_semigroup_constant = {c1:e}");
        let _ = writeln!(
            extra,
            "blowup_slope = {slope:.4} (expected {:.4})",
            -1.0 / (2.0 * args.alpha)
        );
        print!("{extra}");
    }
    println!("self-checks: {}", if pass { "PASS" } else { "FAIL" });

    if let Some(dir) = &args.out {
        ensure_dir(dir)?;
        write_with_header(&dir.join("kernel.csv"), &header, &table)?;
        if args.dim == 1 {
            let mut csv = String::from("x");
            for t in &args.times {
                let _ = write!(csv, ",K_{t}");
            }
            csv.push('\n');
            for i in 0..grid.len() {
                let _ = write!(csv, "{:e}", grid.coord(0, i));
                for k in &profiles {
                    let _ = write!(csv, ",{:e}", k.values()[i]);
                }
                csv.push('\n');
            }
            write_with_header(&dir.join("profiles.csv"), &header, &csv)?;
        }
        if !extra.is_empty() {
            write_with_header(&dir.join("semigroup.txt"), &header, &extra)?;
        }
    }
    Ok(if pass { Status::Pass } else { Status::Failed })
}

#[derive(Args)]
pub struct EigenArgs {
    #[arg(long, default_value_t = 0.75)]
    alpha: f64,
    /// Reaction rate `a0` in `-(-Laplacian)^alpha + a0`.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    a0: f64,
    /// Comma-separated, strictly increasing half-widths `L`.
    #[arg(long, value_delimiter = ',', default_value = "5,10,20,40")]
    widths: Vec<f64>,
    /// Quadrature panels per unit resolution level.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn eigen(args: &EigenArgs) -> Result<Status> {
    let sweep = sigma_sweep(&args.widths, args.alpha, args.a0, args.resolution)?;
    let header = format!(
        "alpha = {}\na0 = {}\nwidths = {:?}\nresolution = {}\n",
        args.alpha, args.a0, args.widths, args.resolution
    );
    let mut best = String::from("L,best_kind,sigma_lower\n");
    for r in &sweep.rows {
        let _ = writeln!(best, "{},{},{:e}", r.half_width, r.best_kind, r.best);
    }
    let monotone = sweep.is_nondecreasing();
    let mut checks = format!(
        "monotone (nondecreasing in L) = {monotone}\nstrictly increasing = {}\n",
        sweep.is_strictly_increasing()
    );
    match sweep.first_positive() {
        Some(l) => {
            let _ = writeln!(checks, "first positive L = {l}");
        }
        None => checks.push_str("first positive L = NA\n"),
    }
    print!("{}{best}{checks}", comment(&header));
    if let Some(dir) = &args.out {
        ensure_dir(dir)?;
        write_with_header(&dir.join("sweep.csv"), &header, &sweep.csv())?;
        write_with_header(&dir.join("best.csv"), &header, &best)?;
        write_with_header(&dir.join("checks.txt"), &header, &checks)?;
    }
    Ok(if monotone { Status::Pass } else { Status::Failed })
}
