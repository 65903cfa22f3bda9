//! Estimators linking simulated trajectories to the asymptotic claims:
//! trailing-window tail statistics, band membership, the drift-gap bound
//! and the Kato-class singular integral.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::evolve::Trajectory;
use crate::model::{Field, ModelParams};
use crate::regimes::RegimeReport;

pub const DEFAULT_WINDOW: f64 = 0.2;
pub const DEFAULT_TOL: f64 = 0.05;
/// Minimum number of samples inside the trailing window.
pub const MIN_WINDOW_SAMPLES: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailStats {
    pub limsup_est: f64,
    pub liminf_est: f64,
    pub window_start: f64,
    pub samples: usize,
}

/// Max of `sup_u` and min of `inf_u` over the trailing `window_fraction` of
/// the time span.
pub fn tail_stats(traj: &Trajectory, window_fraction: f64) -> Result<TailStats> {
    if !(window_fraction > 0.0 && window_fraction < 1.0) {
        return Err(Error::InvalidWindow(window_fraction));
    }
    let (t0, t1) = match (traj.times.first(), traj.times.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => {
            return Err(Error::WindowTooShort {
                got: 0,
                need: MIN_WINDOW_SAMPLES,
            })
        }
    };
    let window_start = t1 - window_fraction * (t1 - t0);
    let first = traj.times.partition_point(|&t| t < window_start);
    let samples = traj.len() - first;
    if samples < MIN_WINDOW_SAMPLES {
        return Err(Error::WindowTooShort {
            got: samples,
            need: MIN_WINDOW_SAMPLES,
        });
    }
    let limsup_est = traj.sup_u[first..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let liminf_est = traj.inf_u[first..].iter().copied().fold(f64::INFINITY, f64::min);
    Ok(TailStats {
        limsup_est,
        liminf_est,
        window_start,
        samples,
    })
}

/// One verified inequality. `margin >= 0` iff the check passes.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckRow {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

impl CheckRow {
    fn upper(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let margin = 1.0 + tol - lhs / rhs;
        Self {
            name: name.into(),
            lhs,
            rhs,
            margin,
            pass: margin >= 0.0,
        }
    }

    fn lower(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let margin = lhs / rhs - (1.0 - tol);
        Self {
            name: name.into(),
            lhs,
            rhs,
            margin,
            pass: margin >= 0.0,
        }
    }
}

/// Relative margins: `1 + tol - limsup/Mplus`, `limsup/lower - (1 - tol)`,
/// `1 + tol - liminf/upper`.
pub fn band_check(traj: &Trajectory, report: &RegimeReport, tol: f64, window_fraction: f64) -> Result<Vec<CheckRow>> {
    let band = report.band.ok_or(Error::BandHypothesesUnmet)?;
    let tail = tail_stats(traj, window_fraction)?;
    Ok(vec![
        CheckRow::upper("limsup_le_Mplus", tail.limsup_est, band.mplus, tol),
        CheckRow::lower("limsup_ge_lower_limsup", tail.limsup_est, band.lower_limsup, tol),
        CheckRow::upper("liminf_le_upper_liminf", tail.liminf_est, band.upper_liminf, tol),
    ])
}

/// `max drift_gap <= M C0^k (1 + 1e-6)`, with an absolute round-off floor of
/// `1e-12 max(1, (chi1 mu1 + chi2 mu2) C0^k)` so that `M = 0` cases are not
/// decided by signal-solve round-off.
pub fn drift_gap_check(traj: &Trajectory, report: &RegimeReport) -> Result<CheckRow> {
    let c0 = report.c0.ok_or(Error::NoCase)?;
    let p = &report.params;
    let ck = c0.powf(p.k);
    let rhs = report.m * ck;
    let floor = 1e-12 * 1f64.max((p.chi_mu1() + p.chi_mu2()) * ck);
    let lhs = traj.max_drift_gap();
    let margin = rhs * (1.0 + 1e-6) + floor - lhs;
    Ok(CheckRow {
        name: "drift_gap_le_MC0k".into(),
        lhs,
        rhs,
        margin,
        pass: margin >= 0.0,
    })
}

/// `sup_x int_{B_r(x)} |f(y)| / |x - y|^{N+1-2 alpha} dy` over grid centers.
///
/// 1D: product integration of the piecewise-linear interpolant of `|f|`
/// against `|z|^{2 alpha - 2}`, exact for piecewise-linear data; the cell
/// adjacent to the center uses `f(x)` frozen. 2D: node sum over the ball
/// with the center cell replaced by an equal-area disk with `f(x)` frozen.
pub fn kato_integral(f: &Field, r: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let grid = *f.grid();
    let limit = (0..grid.dim()).map(|a| grid.extent(a)).fold(f64::INFINITY, f64::min);
    if !(r > 0.0) || r > limit {
        return Err(Error::RadiusTooLarge { r, limit });
    }
    let abs: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
    let e = 2.0 * alpha - 1.0;
    match grid.dim() {
        1 => {
            let n = grid.points(0);
            let h = grid.spacing(0);
            let beta = 2.0 * alpha - 2.0;
            // weights[j] multiplies |f(x +- j h)|
            let mut weights = vec![0.0; 2];
            let mut a = h;
            let mut j = 1usize;
            while a < r * (1.0 - 1e-14) {
                let b = (a + h).min(r);
                let i0 = (b.powf(beta + 1.0) - a.powf(beta + 1.0)) / (beta + 1.0);
                let i1 = (b.powf(beta + 2.0) - a.powf(beta + 2.0)) / (beta + 2.0);
                let slope = (i1 - a * i0) / h;
                if weights.len() < j + 2 {
                    weights.resize(j + 2, 0.0);
                }
                weights[j] += i0 - slope;
                weights[j + 1] += slope;
                a += h;
                j += 1;
            }
            let core = 2.0 * h.min(r).powf(e) / e;
            let mut best = 0.0f64;
            for x in 0..n {
                let mut acc = core * abs[x];
                for (j, w) in weights.iter().enumerate().skip(1) {
                    if *w != 0.0 {
                        acc += w * (abs[(x + j) % n] + abs[(x + n - j % n) % n]);
                    }
                }
                best = best.max(acc);
            }
            Ok(best)
        }
        _ => {
            let (n0, n1) = (grid.points(0), grid.points(1));
            let (h0, h1) = (grid.spacing(0), grid.spacing(1));
            let area = h0 * h1;
            let rho = (area / std::f64::consts::PI).sqrt();
            let core = 2.0 * std::f64::consts::PI * rho.powf(e) / e;
            let s = 3.0 - 2.0 * alpha;
            let j0 = (r / h0).floor() as i64;
            let j1 = (r / h1).floor() as i64;
            let mut stencil = Vec::new();
            for di in -j0..=j0 {
                for dj in -j1..=j1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let d = ((di as f64 * h0).powi(2) + (dj as f64 * h1).powi(2)).sqrt();
                    if d <= r {
                        stencil.push((di, dj, area * d.powf(-s)));
                    }
                }
            }
            let mut best = 0.0f64;
            for i in 0..n0 {
                for j in 0..n1 {
                    let mut acc = core * abs[i * n1 + j];
                    for &(di, dj, w) in &stencil {
                        let ii = (i as i64 + di).rem_euclid(n0 as i64) as usize;
                        let jj = (j as i64 + dj).rem_euclid(n1 as i64) as usize;
                        acc += w * abs[ii * n1 + jj];
                    }
                    best = best.max(acc);
                }
            }
            Ok(best)
        }
    }
}

/// `(chi1 mu1 / sqrt(lambda1) + chi2 mu2 / sqrt(lambda2)) sqrt(N) C0^k r^{2 alpha - 1} / (2 alpha - 1)`.
pub fn kato_drift_bound(p: &ModelParams, c0: f64, r: f64) -> f64 {
    let e = 2.0 * p.alpha - 1.0;
    (p.chi_mu1() / p.lambda1.sqrt() + p.chi_mu2() / p.lambda2.sqrt())
        * (p.dim as f64).sqrt()
        * c0.powf(p.k)
        * r.powf(e)
        / e
}

/// Check rows plus the settings they were evaluated with.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub window_fraction: f64,
    pub tol: f64,
    pub rows: Vec<CheckRow>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("name,lhs,rhs,margin,pass\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{:e},{:e},{:e},{}", r.name, r.lhs, r.rhs, r.margin, r.pass);
        }
        s
    }

    pub fn summary(&self) -> String {
        let mut s = format!("window_fraction = {}, tol = {}\n", self.window_fraction, self.tol);
        for r in &self.rows {
            let _ = writeln!(
                s,
                "[{}] {}: lhs = {:.6e}, rhs = {:.6e}, margin = {:.3e}",
                if r.pass { "PASS" } else { "FAIL" },
                r.name,
                r.lhs,
                r.rhs,
                r.margin
            );
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }
}
