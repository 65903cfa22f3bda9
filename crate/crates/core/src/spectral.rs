//! Fourier-multiplier operators on the periodic grid.
//!
//! Convention: the forward transform is unnormalized and the inverse carries
//! the `1/M` factor (`M` = total number of nodes). Angular wavenumbers are
//! `2 pi m / period`, with `m` in FFT order. Odd multipliers (derivatives)
//! vanish on the Nyquist mode; even multipliers use `|xi| = pi M / period`
//! there.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::model::{Field, Grid};

/// Identifies a cached multiplier table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MultiplierKey {
    /// `|xi|^{2 alpha}`, keyed by the bit pattern of `alpha`.
    FracSymbol(u64),
    /// `1 / (lambda + |xi|^2)`, keyed by the bit pattern of `lambda`.
    HelmholtzInverse(u64),
}

impl MultiplierKey {
    pub fn frac_symbol(alpha: f64) -> Self {
        MultiplierKey::FracSymbol(alpha.to_bits())
    }

    pub fn helmholtz_inverse(lambda: f64) -> Self {
        MultiplierKey::HelmholtzInverse(lambda.to_bits())
    }
}

struct AxisPlan {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// FFT plans, wavenumber tables and eagerly built multiplier caches for one
/// grid. Immutable once constructed; every operation takes `&self`.
pub struct SpectralWorkspace {
    grid: Grid,
    plans: Vec<AxisPlan>,
    wavenumbers: Vec<Vec<f64>>,
    nyquist: Vec<usize>,
    k2: Vec<f64>,
    cache: HashMap<MultiplierKey, Vec<f64>>,
}

impl std::fmt::Debug for SpectralWorkspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralWorkspace")
            .field("grid", &self.grid)
            .field("cached", &self.cache.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl SpectralWorkspace {
    pub fn new(grid: Grid) -> Self {
        Self::with_cached(grid, &[])
    }

    /// Builds the workspace and every requested multiplier table up front.
    pub fn with_cached(grid: Grid, keys: &[MultiplierKey]) -> Self {
        let mut planner = FftPlanner::new();
        let mut plans = Vec::with_capacity(grid.dim());
        let mut wavenumbers = Vec::with_capacity(grid.dim());
        let mut nyquist = Vec::with_capacity(grid.dim());
        for axis in 0..grid.dim() {
            let n = grid.points(axis);
            plans.push(AxisPlan {
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            });
            let base = 2.0 * PI / grid.period(axis);
            wavenumbers.push(
                (0..n)
                    .map(|m| {
                        let signed = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
                        base * signed
                    })
                    .collect(),
            );
            nyquist.push(n / 2);
        }
        let mut ws = Self {
            grid,
            plans,
            wavenumbers,
            nyquist,
            k2: Vec::new(),
            cache: HashMap::new(),
        };
        ws.k2 = (0..grid.len()).map(|i| ws.mode_k2(i)).collect();
        for &key in keys {
            let table = ws.build_table(key);
            ws.cache.insert(key, table);
        }
        ws
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Angular wavenumbers of `axis`, in FFT order.
    pub fn wavenumbers(&self, axis: usize) -> &[f64] {
        &self.wavenumbers[axis]
    }

    fn mode_indices(&self, flat: usize) -> [usize; 2] {
        if self.grid.dim() == 1 {
            [flat, 0]
        } else {
            let n1 = self.grid.points(1);
            [flat / n1, flat % n1]
        }
    }

    fn mode_k2(&self, flat: usize) -> f64 {
        let idx = self.mode_indices(flat);
        (0..self.grid.dim())
            .map(|a| self.wavenumbers[a][idx[a]].powi(2))
            .sum()
    }

    /// `|xi|^2` per flat mode index.
    pub fn k2(&self) -> &[f64] {
        &self.k2
    }

    fn build_table(&self, key: MultiplierKey) -> Vec<f64> {
        match key {
            MultiplierKey::FracSymbol(bits) => {
                let alpha = f64::from_bits(bits);
                self.k2.iter().map(|&k2| k2.powf(alpha)).collect()
            }
            MultiplierKey::HelmholtzInverse(bits) => {
                let lambda = f64::from_bits(bits);
                self.k2.iter().map(|&k2| 1.0 / (lambda + k2)).collect()
            }
        }
    }

    fn table(&self, key: MultiplierKey) -> std::borrow::Cow<'_, [f64]> {
        match self.cache.get(&key) {
            Some(t) => std::borrow::Cow::Borrowed(t.as_slice()),
            None => std::borrow::Cow::Owned(self.build_table(key)),
        }
    }

    /// `|xi|^{2 alpha}` per flat mode.
    pub fn frac_symbol(&self, alpha: f64) -> std::borrow::Cow<'_, [f64]> {
        self.table(MultiplierKey::frac_symbol(alpha))
    }

    /// Unnormalized forward transform of a real array laid out on the grid.
    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut data, true);
        data
    }

    /// Inverse transform including the `1/M` factor; keeps the real part.
    pub fn inverse(&self, mut spectrum: Vec<Complex64>) -> Vec<f64> {
        self.transform(&mut spectrum, false);
        let scale = 1.0 / self.grid.len() as f64;
        spectrum.into_iter().map(|c| c.re * scale).collect()
    }

    fn transform(&self, data: &mut [Complex64], forward: bool) {
        let pick = |p: &AxisPlan| if forward { p.forward.clone() } else { p.inverse.clone() };
        match self.grid.dim() {
            1 => pick(&self.plans[0]).process(data),
            _ => {
                let (n0, n1) = (self.grid.points(0), self.grid.points(1));
                // rows are contiguous
                pick(&self.plans[1]).process(data);
                let col_fft = pick(&self.plans[0]);
                let mut column = vec![Complex64::new(0.0, 0.0); n0];
                for j in 0..n1 {
                    for i in 0..n0 {
                        column[i] = data[i * n1 + j];
                    }
                    col_fft.process(&mut column);
                    for i in 0..n0 {
                        data[i * n1 + j] = column[i];
                    }
                }
            }
        }
    }

    fn apply_real_multiplier(&self, f: &Field, mult: &[f64]) -> Field {
        let mut spec = self.forward(f.values());
        for (c, m) in spec.iter_mut().zip(mult) {
            *c *= *m;
        }
        Field::from_raw(self.grid, self.inverse(spec))
    }

    fn check_grid(&self, f: &Field) -> Result<()> {
        if f.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// `(-Delta)^alpha f`; the zero mode maps to zero.
    pub fn frac_laplacian(&self, f: &Field, alpha: f64) -> Result<Field> {
        self.check_grid(f)?;
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::OrderOutOfRange(alpha));
        }
        let symbol = self.frac_symbol(alpha);
        Ok(self.apply_real_multiplier(f, &symbol))
    }

    /// Fractional heat semigroup `exp(-t (-Delta)^alpha) f`.
    pub fn frac_heat(&self, f: &Field, t: f64, alpha: f64) -> Result<Field> {
        self.check_grid(f)?;
        if !(t >= 0.0) {
            return Err(Error::NegativeTime(t));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::OrderOutOfRange(alpha));
        }
        if t == 0.0 {
            return Ok(f.clone());
        }
        let mult: Vec<f64> = self.frac_symbol(alpha).iter().map(|s| (-t * s).exp()).collect();
        Ok(self.apply_real_multiplier(f, &mult))
    }

    /// `(lambda I - Delta)^{-1} f`.
    pub fn helmholtz_inverse(&self, f: &Field, lambda: f64) -> Result<Field> {
        self.check_grid(f)?;
        if !(lambda > 0.0) {
            return Err(Error::NonPositiveLambda(lambda));
        }
        let mult = self.table(MultiplierKey::helmholtz_inverse(lambda));
        Ok(self.apply_real_multiplier(f, &mult))
    }

    /// `(lambda I - Delta) f`.
    pub fn helmholtz_apply(&self, f: &Field, lambda: f64) -> Result<Field> {
        self.check_grid(f)?;
        let mult: Vec<f64> = self.k2.iter().map(|k2| lambda + k2).collect();
        Ok(self.apply_real_multiplier(f, &mult))
    }

    fn derivative_symbol(&self, flat: usize, axis: usize) -> f64 {
        let idx = self.mode_indices(flat);
        if idx[axis] == self.nyquist[axis] {
            0.0
        } else {
            self.wavenumbers[axis][idx[axis]]
        }
    }

    /// Spectral gradient, one field per axis.
    pub fn gradient(&self, f: &Field) -> Result<Vec<Field>> {
        self.check_grid(f)?;
        let spec = self.forward(f.values());
        Ok((0..self.grid.dim())
            .map(|axis| {
                let d: Vec<Complex64> = spec
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c * Complex64::new(0.0, self.derivative_symbol(i, axis)))
                    .collect();
                Field::from_raw(self.grid, self.inverse(d))
            })
            .collect())
    }

    /// Spectral divergence of a vector field given per axis.
    pub fn divergence(&self, components: &[Field]) -> Result<Field> {
        if components.len() != self.grid.dim() {
            return Err(Error::InvalidGrid(format!(
                "divergence needs {} components, got {}",
                self.grid.dim(),
                components.len()
            )));
        }
        let mut acc = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        for (axis, comp) in components.iter().enumerate() {
            self.check_grid(comp)?;
            let spec = self.forward(comp.values());
            for (i, c) in spec.iter().enumerate() {
                acc[i] += c * Complex64::new(0.0, self.derivative_symbol(i, axis));
            }
        }
        Ok(Field::from_raw(self.grid, self.inverse(acc)))
    }

    /// Two-thirds rule: zeroes every mode with `|m| > M/3` on some axis.
    pub fn dealias(&self, f: &Field) -> Result<Field> {
        self.check_grid(f)?;
        let mut spec = self.forward(f.values());
        for (i, c) in spec.iter_mut().enumerate() {
            let idx = self.mode_indices(i);
            let keep = (0..self.grid.dim()).all(|a| {
                let n = self.grid.points(a);
                let m = if idx[a] < n / 2 { idx[a] } else { n - idx[a] };
                3 * m <= n
            });
            if !keep {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        Ok(Field::from_raw(self.grid, self.inverse(spec)))
    }
}
