//! Fractional heat kernel profiles and the gradient-semigroup estimate.
//!
//! The transform of `exp(-t |xi|^{2 alpha})` gives the *periodized* kernel,
//! whose mass on the torus is exactly one. For `alpha < 1` the whole-line
//! kernel decays only like `t |x|^{-1-2 alpha}`, so the periodic images are
//! never negligible at the box edge. In 1D they are removed with the
//! large-`|x|` expansion of the kernel summed over the image lattice in
//! closed form through the Hurwitz zeta function.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{Field, Grid, InitialData};
use crate::special::{gamma, hurwitz_zeta};
use crate::spectral::SpectralWorkspace;

/// Tail level, relative to the peak, that must be met after image removal.
pub const TAIL_LIMIT: f64 = 1e-10;
/// Largest admissible semigroup multiplier at the resolved cutoff.
pub const RESOLUTION_LIMIT: f64 = 1e-12;

fn check_order(alpha: f64) -> Result<()> {
    if !(alpha > 0.5 && alpha <= 1.0) {
        return Err(Error::OrderOutOfRange(alpha));
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) {
        return Err(Error::NegativeTime(t));
    }
    Ok(())
}

/// Peak value `K_t(0)` of the whole-line kernel in dimension `dim`.
pub fn kernel_peak(alpha: f64, t: f64, dim: usize) -> f64 {
    let n = dim as f64;
    // (2 pi)^{-N} |S^{N-1}| Gamma(N / 2 alpha) / (2 alpha) t^{-N / 2 alpha}
    let sphere = 2.0 * PI.powf(n / 2.0) / gamma(n / 2.0);
    sphere * gamma(n / (2.0 * alpha)) / (2.0 * alpha * (2.0 * PI).powf(n)) * t.powf(-n / (2.0 * alpha))
}

/// Truncated large-distance expansion of the 1D kernel, summed over the
/// nonzero images of a lattice with the given period.
#[derive(Clone, Debug)]
struct ImageSeries {
    period: f64,
    /// `(coefficient * t^j, exponent)` pairs
    terms: Vec<(f64, f64)>,
    remainder: f64,
}

impl ImageSeries {
    fn new(alpha: f64, t: f64, period: f64) -> Self {
        let peak = kernel_peak(alpha, t, 1);
        let lattice_bound = |s: f64| period.powf(-s) * (hurwitz_zeta(s, 0.5) + hurwitz_zeta(s, 1.5));
        let mut terms = Vec::new();
        let mut last_bound = f64::INFINITY;
        let mut remainder = 0.0;
        let mut log_fact = 0.0;
        for j in 1..=60 {
            log_fact += (j as f64).ln();
            let sine = (PI * alpha * j as f64).sin();
            if sine.abs() < 1e-12 {
                continue;
            }
            let s = 2.0 * alpha * j as f64 + 1.0;
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            let log_mag = statrs::function::gamma::ln_gamma(s) - log_fact + j as f64 * t.ln();
            let coef = sign * sine / PI * log_mag.exp();
            let bound = coef.abs() * lattice_bound(s);
            if bound > last_bound {
                // asymptotic series has started to diverge
                remainder = last_bound;
                break;
            }
            if bound < 1e-18 * peak {
                remainder = bound;
                break;
            }
            terms.push((coef, s));
            last_bound = bound;
            remainder = bound;
        }
        Self {
            period,
            terms,
            remainder,
        }
    }

    /// Sum over `n != 0` of the expansion evaluated at `x + n P`, `|x| <= P/2`.
    fn image_sum(&self, x: f64) -> f64 {
        let q = x / self.period;
        self.terms
            .iter()
            .map(|&(c, s)| c * self.period.powf(-s) * (hurwitz_zeta(s, 1.0 + q) + hurwitz_zeta(s, 1.0 - q)))
            .sum()
    }
}

fn check_resolution(alpha: f64, t: f64, grid: &Grid) -> Result<()> {
    for axis in 0..grid.dim() {
        let xi_max = PI / grid.spacing(axis);
        let m = (-t * xi_max.powf(2.0 * alpha)).exp();
        if m > RESOLUTION_LIMIT {
            return Err(Error::KernelUnderResolved(m));
        }
    }
    Ok(())
}

/// Periodized kernel `K_t` sampled at the grid nodes, centered at the origin.
/// Its trapezoidal integral over the torus is one.
///
/// The boundary-tail check is applied to the kernel after the periodic
/// images have been removed (1D), or literally (2D, where only `alpha = 1`
/// can pass).
pub fn heat_kernel_profile(alpha: f64, t: f64, grid: &Grid) -> Result<Field> {
    check_order(alpha)?;
    check_time(t)?;
    check_resolution(alpha, t, grid)?;
    let profile = periodized_profile(alpha, t, grid);
    let peak = kernel_peak(alpha, t, grid.dim());
    let tail = if alpha == 1.0 {
        boundary_max(&profile)
    } else if grid.dim() == 1 {
        ImageSeries::new(alpha, t, grid.period(0)).remainder
    } else {
        boundary_max(&profile)
    };
    if tail > TAIL_LIMIT * peak {
        return Err(Error::TailTooFat {
            tail: tail / peak,
            limit: TAIL_LIMIT,
        });
    }
    Ok(profile)
}

/// 1D whole-line kernel on the grid nodes: the periodized profile with the
/// periodic images subtracted.
pub fn whole_line_kernel_profile(alpha: f64, t: f64, grid: &Grid) -> Result<Field> {
    if grid.dim() != 1 {
        return Err(Error::Unsupported("whole-line kernel is implemented in 1D only"));
    }
    let periodized = heat_kernel_profile(alpha, t, grid)?;
    if alpha == 1.0 {
        return Ok(periodized);
    }
    let series = ImageSeries::new(alpha, t, grid.period(0));
    let values = periodized
        .values()
        .iter()
        .enumerate()
        .map(|(i, k)| k - series.image_sum(grid.coord(0, i)))
        .collect();
    Ok(Field::from_raw(*grid, values))
}

fn boundary_max(profile: &Field) -> f64 {
    let g = profile.grid();
    let v = profile.values();
    match g.dim() {
        1 => v[0].abs(),
        _ => {
            let (n0, n1) = (g.points(0), g.points(1));
            let row = (0..n1).map(|j| v[j].abs());
            let col = (0..n0).map(|i| v[i * n1].abs());
            row.chain(col).fold(0.0, f64::max)
        }
    }
}

fn periodized_profile(alpha: f64, t: f64, grid: &Grid) -> Field {
    let ws = SpectralWorkspace::new(*grid);
    let symbol = ws.frac_symbol(alpha);
    let spec = symbol
        .iter()
        .map(|s| num_complex::Complex64::new((-t * s).exp(), 0.0))
        .collect();
    // inverse transform lands on x = i h; shift so node j sits at -L + j h
    let raw = ws.inverse(spec);
    let scale = 1.0 / grid.cell_volume();
    let shifted = |i: usize, axis: usize| (i + grid.points(axis) / 2) % grid.points(axis);
    let values = match grid.dim() {
        1 => (0..grid.len()).map(|j| raw[shifted(j, 0)] * scale).collect(),
        _ => {
            let n1 = grid.points(1);
            (0..grid.len())
                .map(|j| raw[shifted(j / n1, 0) * n1 + shifted(j % n1, 1)] * scale)
                .collect()
        }
    };
    Field::from_raw(*grid, values)
}

/// Pointwise evaluator of the 1D whole-line kernel at arbitrary `x` in the
/// central period: truncated Fourier series of the periodized kernel minus
/// the image expansion.
#[derive(Clone, Debug)]
pub struct FractionalHeatKernel1d {
    alpha: f64,
    t: f64,
    period: f64,
    modes: usize,
    images: ImageSeries,
}

impl FractionalHeatKernel1d {
    pub fn new(alpha: f64, t: f64, period: f64) -> Result<Self> {
        check_order(alpha)?;
        check_time(t)?;
        let base = 2.0 * PI / period;
        // keep modes until exp(-t xi^{2 alpha}) < 1e-18
        let xi_cut = (18.0 * 10f64.ln() / t).powf(1.0 / (2.0 * alpha));
        let modes = (xi_cut / base).ceil() as usize + 1;
        let images = ImageSeries::new(alpha, t, period);
        if images.remainder > TAIL_LIMIT * kernel_peak(alpha, t, 1) {
            return Err(Error::TailTooFat {
                tail: images.remainder / kernel_peak(alpha, t, 1),
                limit: TAIL_LIMIT,
            });
        }
        Ok(Self {
            alpha,
            t,
            period,
            modes,
            images,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Whole-line kernel at `x`, `|x| <= period / 2`.
    pub fn eval(&self, x: f64) -> f64 {
        let base = 2.0 * PI / self.period;
        let mut sum = 1.0;
        for m in 1..=self.modes {
            let xi = base * m as f64;
            sum += 2.0 * (-self.t * xi.powf(2.0 * self.alpha)).exp() * (xi * x).cos();
        }
        let periodized = sum / self.period;
        if self.alpha == 1.0 {
            periodized
        } else {
            periodized - self.images.image_sum(x)
        }
    }
}

/// Trapezoidal periodic convolution `h^N sum_y f(x - y) g(y)` of two profiles
/// centered at the origin; the result is centered likewise. Direct `O(M^2)`
/// sum, intended for checks on modest grids.
pub fn centered_convolution(f: &Field, g: &Field) -> Result<Field> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = *f.grid();
    if grid.dim() != 1 {
        return Err(Error::Unsupported("centered_convolution is implemented in 1D only"));
    }
    let n = grid.points(0);
    let half = n / 2;
    let h = grid.spacing(0);
    let (fv, gv) = (f.values(), g.values());
    // node j carries offset j - n/2
    let values = (0..n)
        .map(|j| {
            let mut acc = 0.0;
            for (i, gi) in gv.iter().enumerate() {
                let idx = (j + n + half - i) % n;
                acc += fv[idx] * gi;
            }
            acc * h
        })
        .collect();
    Ok(Field::from_raw(grid, values))
}

/// `||T(t) div u||_inf t^{1/(2 alpha)} e^t / ||u||_inf` with
/// `T(t) = e^{-t} K_t *`, for one vector field given per axis.
pub fn gradient_semigroup_ratio(
    ws: &SpectralWorkspace,
    alpha: f64,
    t: f64,
    u: &[Field],
) -> Result<f64> {
    let div = ws.divergence(u)?;
    let smoothed = ws.frac_heat(&div, t, alpha)?;
    let norm = (0..ws.grid().len())
        .map(|i| u.iter().map(|c| c.values()[i].powi(2)).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(smoothed.sup_norm() * t.powf(1.0 / (2.0 * alpha)) / norm)
}

/// Log-spaced sample times `10^{-3 + i/6}`, `i = 0..=24`, spanning `[1e-3, 10]`.
pub fn semigroup_times() -> Vec<f64> {
    (0..=24).map(|i| 10f64.powf(-3.0 + i as f64 / 6.0)).collect()
}

/// Empirical lower estimate of the gradient-semigroup constant: the largest
/// ratio over single-harmonic fields, `trial_count` random smooth vector
/// fields and [`semigroup_times`].
pub fn fit_gradient_semigroup_constant(
    alpha: f64,
    grid: &Grid,
    trial_count: usize,
    seed: u64,
) -> Result<f64> {
    check_order(alpha)?;
    if trial_count < 10 {
        return Err(Error::InvalidGrid(format!(
            "trial_count {trial_count} must be at least 10"
        )));
    }
    let ws = SpectralWorkspace::new(*grid);
    let times = semigroup_times();
    let modes = 16.min(grid.points(0) / 4);
    let mut fields: Vec<Vec<Field>> = Vec::new();
    for m in 1..=modes {
        let xi = 2.0 * PI * m as f64 / grid.period(0);
        let mut comps = vec![Field::from_fn(*grid, |x| (xi * x[0]).sin())];
        comps.extend((1..grid.dim()).map(|_| Field::zeros(*grid)));
        fields.push(comps);
    }
    for trial in 0..trial_count {
        fields.push(
            (0..grid.dim())
                .map(|axis| {
                    InitialData::RandomSmooth {
                        mean: 0.0,
                        amp: 1.0,
                        modes,
                        seed: seed
                            .wrapping_mul(6364136223846793005)
                            .wrapping_add((trial * grid.dim() + axis) as u64),
                    }
                    .sample(grid)
                })
                .collect(),
        );
    }
    let mut best = 0.0f64;
    for u in &fields {
        for &t in &times {
            best = best.max(gradient_semigroup_ratio(&ws, alpha, t, u)?);
        }
    }
    Ok(best)
}

/// Log-log slope of `||T(t) div u||_inf e^t` against `t` for a square wave
/// along the first axis, over times where the kernel width lies between
/// eight cells and an eighth of the half-period. The sharp rate is a
/// slope of `-1/(2 alpha)`.
pub fn semigroup_blowup_slope(alpha: f64, grid: &Grid) -> Result<f64> {
    check_order(alpha)?;
    let ws = SpectralWorkspace::new(*grid);
    let mut comps = vec![Field::from_fn(*grid, |x| if x[0] >= 0.0 { 1.0 } else { -1.0 })];
    comps.extend((1..grid.dim()).map(|_| Field::zeros(*grid)));
    let w_lo = 8.0 * grid.spacing(0);
    let w_hi = grid.extent(0) / 8.0;
    if w_lo >= w_hi {
        return Err(Error::InvalidGrid("grid too coarse for the slope window".into()));
    }
    let n = 16;
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for i in 0..n {
        let width = w_lo * (w_hi / w_lo).powf(i as f64 / (n - 1) as f64);
        let t = width.powf(2.0 * alpha);
        let div = ws.divergence(&comps)?;
        let val = ws.frac_heat(&div, t, alpha)?.sup_norm();
        xs.push(t.ln());
        ys.push(val.ln());
    }
    Ok(least_squares_slope(&xs, &ys))
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
