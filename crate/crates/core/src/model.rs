//! Domain types: model parameters, space-time coefficient fields, the
//! periodic grid and the scalar fields that live on it.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Scalar parameters of the chemotaxis system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Fractional order of the diffusion, in (1/2, 1).
    pub alpha: f64,
    /// Logistic damping exponent.
    pub gamma: f64,
    /// Signal production exponent.
    pub k: f64,
    /// Attractive sensitivity.
    pub chi1: f64,
    /// Repulsive sensitivity.
    pub chi2: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub dim: usize,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            alpha: 0.75,
            gamma: 2.0,
            k: 1.0,
            chi1: 1.0,
            chi2: 1.0,
            lambda1: 1.0,
            lambda2: 1.0,
            mu1: 1.0,
            mu2: 1.0,
            dim: 1,
        }
    }
}

impl ModelParams {
    pub fn chi_mu1(&self) -> f64 {
        self.chi1 * self.mu1
    }

    pub fn chi_mu2(&self) -> f64 {
        self.chi2 * self.mu2
    }

    pub fn is_chemotaxis_free(&self) -> bool {
        self.chi1 == 0.0 && self.chi2 == 0.0
    }
}

/// Checks every standing hypothesis on the parameters and hands them back
/// unchanged when they all hold.
pub fn validate_params(raw: ModelParams) -> Result<ModelParams> {
    let named = [
        ("alpha", raw.alpha),
        ("gamma", raw.gamma),
        ("k", raw.k),
        ("chi1", raw.chi1),
        ("chi2", raw.chi2),
        ("lambda1", raw.lambda1),
        ("lambda2", raw.lambda2),
        ("mu1", raw.mu1),
        ("mu2", raw.mu2),
    ];
    for (name, value) in named {
        if !value.is_finite() {
            return Err(Error::NonFiniteParameter(name));
        }
    }
    if !(raw.alpha > 0.5 && raw.alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(raw.alpha));
    }
    if raw.gamma <= 1.0 {
        return Err(Error::GammaOutOfRange(raw.gamma));
    }
    if raw.k < 1.0 {
        return Err(Error::KOutOfRange(raw.k));
    }
    for (name, value) in [("chi1", raw.chi1), ("chi2", raw.chi2)] {
        if value < 0.0 {
            return Err(Error::NegativeSensitivity { name, value });
        }
    }
    for (name, value) in [
        ("lambda1", raw.lambda1),
        ("lambda2", raw.lambda2),
        ("mu1", raw.mu1),
        ("mu2", raw.mu2),
    ] {
        if value <= 0.0 {
            return Err(Error::NonPositiveRate { name, value });
        }
    }
    if raw.dim != 1 && raw.dim != 2 {
        return Err(Error::UnsupportedDimension(raw.dim));
    }
    Ok(raw)
}

/// A closed-form coefficient a(x,t) or b(x,t).
///
/// The periodic family evaluates
/// `mean + amp_x * cos(wave . x + freq * t + phase) + amp_t * cos(freq * t)`,
/// so `amp_x` carries the travelling spatial modulation and `amp_t` a purely
/// temporal one. Both extremes are available in closed form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CoefficientField {
    Constant(f64),
    SpaceTimePeriodic {
        mean: f64,
        amp_x: f64,
        amp_t: f64,
        wave: [f64; 2],
        freq: f64,
        phase: f64,
    },
}

impl CoefficientField {
    pub fn eval(&self, x: &[f64], t: f64) -> f64 {
        match *self {
            CoefficientField::Constant(c) => c,
            CoefficientField::SpaceTimePeriodic {
                mean,
                amp_x,
                amp_t,
                wave,
                freq,
                phase,
            } => {
                let kx: f64 = x.iter().zip(wave.iter()).map(|(xi, ki)| xi * ki).sum();
                mean + amp_x * (kx + freq * t + phase).cos() + amp_t * (freq * t).cos()
            }
        }
    }

    /// Exact infimum and supremum over all of space and time.
    pub fn extremes(&self) -> (f64, f64) {
        match *self {
            CoefficientField::Constant(c) => (c, c),
            CoefficientField::SpaceTimePeriodic {
                mean,
                amp_x,
                amp_t,
                wave,
                freq,
                phase,
            } => {
                let moves_in_space = wave.iter().any(|&k| k != 0.0);
                let moves_in_time = freq != 0.0;
                match (moves_in_space, moves_in_time) {
                    // the two cosines decouple: x is free once t is fixed
                    (true, true) => (
                        mean - amp_x.abs() - amp_t.abs(),
                        mean + amp_x.abs() + amp_t.abs(),
                    ),
                    (true, false) => (mean + amp_t - amp_x.abs(), mean + amp_t + amp_x.abs()),
                    (false, true) => {
                        // amp_x e^{i phase} + amp_t as one phasor
                        let re = amp_x * phase.cos() + amp_t;
                        let im = amp_x * phase.sin();
                        let r = re.hypot(im);
                        (mean - r, mean + r)
                    }
                    (false, false) => {
                        let c = mean + amp_x * phase.cos() + amp_t;
                        (c, c)
                    }
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CoefficientField::Constant(c) if *c == 0.0)
    }

    pub fn is_time_independent(&self) -> bool {
        match *self {
            CoefficientField::Constant(_) => true,
            CoefficientField::SpaceTimePeriodic {
                amp_x,
                amp_t,
                freq,
                ..
            } => freq == 0.0 || (amp_x == 0.0 && amp_t == 0.0),
        }
    }

    /// Samples the field on every grid node at time `t`.
    pub fn sample(&self, grid: &Grid, t: f64) -> Field {
        match *self {
            CoefficientField::Constant(c) => Field::constant(*grid, c),
            _ => Field::from_fn(*grid, |x| self.eval(x, t)),
        }
    }

    /// Rejects wavevectors that would make the field discontinuous across the
    /// periodic seam of `grid`.
    pub fn check_commensurate(&self, name: &'static str, grid: &Grid) -> Result<()> {
        if let CoefficientField::SpaceTimePeriodic { wave, .. } = self {
            for (axis, &w) in wave.iter().enumerate().take(grid.dim()) {
                let base = 2.0 * PI / grid.period(axis);
                let m = w / base;
                if (m - m.round()).abs() > 1e-9 {
                    return Err(Error::IncommensurateWavevector { name, wave: w });
                }
            }
        }
        Ok(())
    }
}

/// Infima and suprema of the logistic coefficients.
///
/// All four values are strictly positive, except for the explicit
/// pure-diffusion sentinel returned by [`CoeffBounds::pure_diffusion`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoeffBounds {
    pub a_inf: f64,
    pub a_sup: f64,
    pub b_inf: f64,
    pub b_sup: f64,
}

impl CoeffBounds {
    pub fn new(a_inf: f64, a_sup: f64, b_inf: f64, b_sup: f64) -> Result<Self> {
        if !(a_inf > 0.0) {
            return Err(Error::NonPositiveInfimum { name: "a", inf: a_inf });
        }
        if !(b_inf > 0.0) {
            return Err(Error::NonPositiveInfimum { name: "b", inf: b_inf });
        }
        if a_sup < a_inf || b_sup < b_inf {
            return Err(Error::Config(format!(
                "coefficient bounds out of order: a in [{a_inf}, {a_sup}], b in [{b_inf}, {b_sup}]"
            )));
        }
        Ok(Self {
            a_inf,
            a_sup,
            b_inf,
            b_sup,
        })
    }

    /// a = b = 0, only meaningful together with chi1 = chi2 = 0.
    pub fn pure_diffusion() -> Self {
        Self {
            a_inf: 0.0,
            a_sup: 0.0,
            b_inf: 0.0,
            b_sup: 0.0,
        }
    }

    pub fn is_pure_diffusion(&self) -> bool {
        self.a_sup == 0.0 && self.b_sup == 0.0
    }
}

/// Exact bounds of two built-in coefficient fields.
pub fn coeff_bounds(a: &CoefficientField, b: &CoefficientField) -> Result<CoeffBounds> {
    if a.is_zero() && b.is_zero() {
        return Ok(CoeffBounds::pure_diffusion());
    }
    let (a_inf, a_sup) = a.extremes();
    let (b_inf, b_sup) = b.extremes();
    if !(a_inf > 0.0) {
        return Err(Error::NonPositiveInfimum { name: "a", inf: a_inf });
    }
    if !(b_inf > 0.0) {
        return Err(Error::NonPositiveInfimum { name: "b", inf: b_inf });
    }
    CoeffBounds::new(a_inf, a_sup, b_inf, b_sup)
}

/// Periodic tensor grid on the torus `[-L, L)^N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    dim: usize,
    extent: [f64; 2],
    points: [usize; 2],
}

impl Grid {
    /// `extent[i]` is the half-period `L` of axis `i`.
    pub fn new(dim: usize, extent: &[f64], points: &[usize]) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if extent.len() < dim || points.len() < dim {
            return Err(Error::InvalidGrid(format!(
                "need {dim} extents and point counts, got {} and {}",
                extent.len(),
                points.len()
            )));
        }
        let mut e = [1.0; 2];
        let mut p = [1usize; 2];
        for axis in 0..dim {
            if !(extent[axis] > 0.0 && extent[axis].is_finite()) {
                return Err(Error::InvalidGrid(format!(
                    "extent {} must be positive",
                    extent[axis]
                )));
            }
            if points[axis] < 8 || !points[axis].is_multiple_of(2) {
                return Err(Error::InvalidGrid(format!(
                    "points {} must be even and at least 8",
                    points[axis]
                )));
            }
            e[axis] = extent[axis];
            p[axis] = points[axis];
        }
        Ok(Self {
            dim,
            extent: e,
            points: p,
        })
    }

    pub fn line(extent: f64, points: usize) -> Result<Self> {
        Self::new(1, &[extent], &[points])
    }

    pub fn square(extent: f64, points: usize) -> Result<Self> {
        Self::new(2, &[extent, extent], &[points, points])
    }

    /// Default torus: total length 20 pi in 1D, 8 pi per axis in 2D.
    pub fn default_for_dim(dim: usize, points: usize) -> Result<Self> {
        match dim {
            1 => Self::line(10.0 * PI, points),
            2 => Self::square(4.0 * PI, points),
            d => Err(Error::UnsupportedDimension(d)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.extent[axis]
    }

    pub fn points(&self, axis: usize) -> usize {
        self.points[axis]
    }

    pub fn period(&self, axis: usize) -> f64 {
        2.0 * self.extent[axis]
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.period(axis) / self.points[axis] as f64
    }

    pub fn len(&self) -> usize {
        self.points[..self.dim].iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim).map(|a| self.spacing(a)).product()
    }

    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        -self.extent[axis] + i as f64 * self.spacing(axis)
    }

    pub fn coords(&self, axis: usize) -> Vec<f64> {
        (0..self.points[axis]).map(|i| self.coord(axis, i)).collect()
    }

    /// Coordinates of the node with flat (row-major) index `idx`.
    pub fn node(&self, idx: usize) -> [f64; 2] {
        match self.dim {
            1 => [self.coord(0, idx), 0.0],
            _ => {
                let n1 = self.points[1];
                [self.coord(0, idx / n1), self.coord(1, idx % n1)]
            }
        }
    }

    /// Same grid scaled by `s` in every direction.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        let ext: Vec<f64> = self.extent[..self.dim].iter().map(|e| e * s).collect();
        Self::new(self.dim, &ext, &self.points[..self.dim])
    }
}

/// A real scalar field on a [`Grid`], stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "field has {} values, grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteField(i));
        }
        Ok(Self { grid, values })
    }

    /// Builds a field without the finiteness scan; used on hot paths where
    /// the caller checks finiteness itself.
    pub(crate) fn from_raw(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|i| {
                let x = grid.node(i);
                f(&x[..grid.dim()])
            })
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Trapezoidal integral over the torus.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Field {
        self.map(|v| v * s)
    }

    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Result<Field> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Field {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// The solution triple at one instant.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub t: f64,
    pub u: Field,
    pub v1: Field,
    pub v2: Field,
}

/// Built-in initial densities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialData {
    Constant(f64),
    /// `mean + amp * cos(wave . x)`
    Cosine { mean: f64, amp: f64, wave: [f64; 2] },
    /// `mean + amp * p(x)` with `p` a random trigonometric polynomial over the
    /// lowest `modes` harmonics per axis, normalized so that `|p| <= 1`.
    RandomSmooth {
        mean: f64,
        amp: f64,
        modes: usize,
        seed: u64,
    },
}

impl InitialData {
    pub fn sample(&self, grid: &Grid) -> Field {
        match *self {
            InitialData::Constant(c) => Field::constant(*grid, c),
            InitialData::Cosine { mean, amp, wave } => Field::from_fn(*grid, |x| {
                let kx: f64 = x.iter().zip(wave.iter()).map(|(a, b)| a * b).sum();
                mean + amp * kx.cos()
            }),
            InitialData::RandomSmooth {
                mean,
                amp,
                modes,
                seed,
            } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let dim = grid.dim();
                let mut terms = Vec::new();
                for m in 1..=modes.max(1) {
                    for axis in 0..dim {
                        let c: f64 = rng.random_range(-1.0..1.0) / m as f64;
                        let ph: f64 = rng.random_range(0.0..2.0 * PI);
                        let xi = 2.0 * PI * m as f64 / grid.period(axis);
                        terms.push((axis, xi, c, ph));
                    }
                }
                let norm: f64 = terms.iter().map(|t| t.2.abs()).sum::<f64>().max(f64::MIN_POSITIVE);
                Field::from_fn(*grid, |x| {
                    let p: f64 = terms
                        .iter()
                        .map(|&(axis, xi, c, ph)| c * (xi * x[axis] + ph).cos())
                        .sum();
                    mean + amp * p / norm
                })
            }
        }
    }
}
