//! Time integration of the cell density in drift form.
//!
//! One step is a Lie splitting: explicit Euler on the reaction-advection
//! tendency, a clamp of tiny negative undershoot, then the exact fractional
//! heat semigroup. Both signals are re-solved from the new density.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::model::{coeff_bounds, validate_params, CoeffBounds, CoefficientField, Field, Grid, ModelParams, State};
use crate::regimes::c0_candidate;
use crate::signal::{drift_field, production, state_from_u};
use crate::spectral::{MultiplierKey, SpectralWorkspace};

/// Blow-up is suspected once `sup u` exceeds this multiple of the reference bound.
pub const BLOWUP_FACTOR: f64 = 1e3;
/// Accepted runs keep total clamped mass below this fraction of `mean(u0) * t_end`.
pub const CLAMP_MASS_FRACTION: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct StepperConfig {
    pub t_end: f64,
    pub dt_max: f64,
    pub cfl_safety: f64,
    pub positivity_tol: f64,
    pub dealias: bool,
    /// Keep a full state every this many steps (0 disables snapshots).
    pub snapshot_every: usize,
    /// Use this step instead of the adaptive one; must respect the CFL bound.
    pub fixed_dt: Option<f64>,
}

impl Default for StepperConfig {
    fn default() -> Self {
        Self {
            t_end: 50.0,
            dt_max: 0.02,
            cfl_safety: 0.5,
            positivity_tol: 1e-10,
            dealias: true,
            snapshot_every: 0,
            fixed_dt: None,
        }
    }
}

impl StepperConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt_max > 0.0 && self.dt_max.is_finite()) {
            return Err(Error::InvalidStepper(format!("dt_max = {} must be positive", self.dt_max)));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(Error::InvalidStepper(format!(
                "cfl_safety = {} must lie in (0, 1]",
                self.cfl_safety
            )));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidStepper(format!("t_end = {} must be positive", self.t_end)));
        }
        if !(self.positivity_tol >= 0.0) {
            return Err(Error::InvalidStepper("positivity_tol must be nonnegative".into()));
        }
        if let Some(dt) = self.fixed_dt {
            if !(dt > 0.0) {
                return Err(Error::InvalidStepper(format!("fixed_dt = {dt} must be positive")));
            }
        }
        Ok(())
    }
}

/// Per-step diagnostics of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub sup_u: Vec<f64>,
    pub inf_u: Vec<f64>,
    pub clamp_mass: Vec<f64>,
    pub drift_gap_max: Vec<f64>,
    pub snapshots: Vec<State>,
    pub final_state: State,
    /// Reference level used for blow-up detection.
    pub c0_candidate: f64,
    /// The initial density was not bounded away from zero.
    pub u0_touches_zero: bool,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn total_clamp_mass(&self) -> f64 {
        self.clamp_mass.iter().sum()
    }

    pub fn max_sup(&self) -> f64 {
        self.sup_u.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_inf(&self) -> f64 {
        self.inf_u.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_drift_gap(&self) -> f64 {
        self.drift_gap_max.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn csv_header() -> &'static str {
        "t,sup_u,inf_u,clamp_mass,drift_gap_max"
    }

    /// Rows in full round-trip precision.
    pub fn csv_rows(&self) -> impl Iterator<Item = String> + '_ {
        (0..self.len()).map(move |i| {
            format!(
                "{:e},{:e},{:e},{:e},{:e}",
                self.times[i], self.sup_u[i], self.inf_u[i], self.clamp_mass[i], self.drift_gap_max[i]
            )
        })
    }
}

/// Result of one splitting step.
#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome {
    pub state: State,
    pub clamp_mass: f64,
}

/// Everything needed to advance one parameter set on one grid.
#[derive(Debug)]
pub struct Simulator {
    params: ModelParams,
    a: CoefficientField,
    b: CoefficientField,
    bounds: CoeffBounds,
    cfg: StepperConfig,
    ws: SpectralWorkspace,
}

impl Simulator {
    pub fn new(
        params: ModelParams,
        a: CoefficientField,
        b: CoefficientField,
        grid: Grid,
        cfg: StepperConfig,
    ) -> Result<Self> {
        let params = validate_params(params)?;
        if params.dim != grid.dim() {
            return Err(Error::InvalidGrid(format!(
                "parameters are {}-dimensional but the grid is {}-dimensional",
                params.dim,
                grid.dim()
            )));
        }
        cfg.validate()?;
        let bounds = coeff_bounds(&a, &b)?;
        a.check_commensurate("a", &grid)?;
        b.check_commensurate("b", &grid)?;
        let ws = SpectralWorkspace::with_cached(
            grid,
            &[
                MultiplierKey::frac_symbol(params.alpha),
                MultiplierKey::helmholtz_inverse(params.lambda1),
                MultiplierKey::helmholtz_inverse(params.lambda2),
            ],
        );
        Ok(Self {
            params,
            a,
            b,
            bounds,
            cfg,
            ws,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn bounds(&self) -> &CoeffBounds {
        &self.bounds
    }

    pub fn config(&self) -> &StepperConfig {
        &self.cfg
    }

    pub fn workspace(&self) -> &SpectralWorkspace {
        &self.ws
    }

    pub fn grid(&self) -> &Grid {
        self.ws.grid()
    }

    /// State with both signals solved from `u`.
    pub fn state_at(&self, t: f64, u: Field) -> Result<State> {
        state_from_u(&self.ws, t, u, &self.params, self.cfg.positivity_tol)
    }

    /// Non-diffusive tendency
    /// `grad(chi2 v2 - chi1 v1) . grad u + u (a + gap - b u^{gamma-1} + (chi1 mu1 - chi2 mu2) u^k)`,
    /// dealiased when configured, together with the per-axis drift sup.
    fn tendency_and_drift(&self, state: &State) -> Result<(Field, Vec<f64>)> {
        let p = &self.params;
        let grid = *self.grid();
        let df = drift_field(&self.ws, state, p)?;
        let grad_u = self.ws.gradient(&state.u)?;
        let a = self.a.sample(&grid, state.t);
        let b = self.b.sample(&grid, state.t);
        let uk = production(&state.u, p.k);
        let net = p.chi_mu1() - p.chi_mu2();
        let g1 = p.gamma - 1.0;
        let n = grid.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let u = state.u.values()[i];
            let up = u.max(0.0);
            let adv: f64 = (0..grid.dim())
                .map(|ax| df.drift[ax].values()[i] * grad_u[ax].values()[i])
                .sum();
            let logistic = b.values()[i] * if up > 0.0 { up.powf(g1) } else { 0.0 };
            let react = u * (a.values()[i] + df.potential_gap.values()[i] - logistic + net * uk.values()[i]);
            out.push(adv + react);
        }
        let mut f = Field::new(grid, out).map_err(|e| match e {
            Error::NonFiniteField(i) => Error::NonFiniteTendency(i),
            other => other,
        })?;
        if self.cfg.dealias {
            f = self.ws.dealias(&f)?;
        }
        let drift_sup = df.drift.iter().map(Field::sup_norm).collect();
        Ok((f, drift_sup))
    }

    pub fn tendency(&self, state: &State) -> Result<Field> {
        Ok(self.tendency_and_drift(state)?.0)
    }

    fn dt_from_drift(&self, state: &State, drift_sup: &[f64]) -> f64 {
        let p = &self.params;
        let cb = &self.bounds;
        let grid = self.grid();
        let mut dt = self.cfg.dt_max;
        for (ax, &d) in drift_sup.iter().enumerate() {
            if d > 0.0 {
                dt = dt.min(self.cfg.cfl_safety * grid.spacing(ax) / d);
            }
        }
        let u = state.u.sup_norm();
        let uk = u.powf(p.k);
        let rate = cb.a_sup
            + (p.chi_mu1() + p.chi_mu2()) * uk
            + p.gamma * cb.b_sup * u.powf(p.gamma - 1.0)
            + (p.k + 1.0) * (p.chi_mu1() - p.chi_mu2()).abs() * uk;
        if rate > 0.0 {
            dt = dt.min(self.cfg.cfl_safety / rate);
        }
        dt
    }

    /// Adaptive step: `min(safety h / |drift|_inf per axis, safety / rate, dt_max)`,
    /// where `rate` bounds the reaction Jacobian through `a_sup`, `b_sup` and
    /// the current `sup u`.
    pub fn cfl_dt(&self, state: &State) -> Result<f64> {
        let df = drift_field(&self.ws, state, &self.params)?;
        let sups: Vec<f64> = df.drift.iter().map(Field::sup_norm).collect();
        Ok(self.dt_from_drift(state, &sups))
    }

    /// One splitting step of length `dt`.
    pub fn step(&self, state: &State, dt: f64) -> Result<StepOutcome> {
        let (f, _) = self.tendency_and_drift(state)?;
        self.finish_step(state, &f, dt)
    }

    fn finish_step(&self, state: &State, f: &Field, dt: f64) -> Result<StepOutcome> {
        let grid = *self.grid();
        let scale = state.u.sup_norm();
        let limit = self.cfg.positivity_tol * scale;
        let mut w: Vec<f64> = state
            .u
            .values()
            .iter()
            .zip(f.values())
            .map(|(u, f)| u + dt * f)
            .collect();
        let min = w.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -limit {
            return Err(Error::PositivityBreach { t: state.t, min, limit });
        }
        let mut clamp = 0.0;
        for x in w.iter_mut() {
            if *x < 0.0 {
                clamp -= *x;
                *x = 0.0;
            }
        }
        let clamp_mass = clamp * grid.cell_volume();
        let w = Field::new(grid, w).map_err(|_| Error::NonFinite(state.t + dt))?;
        let u = self.ws.frac_heat(&w, dt, self.params.alpha)?;
        if !u.is_finite() {
            return Err(Error::NonFinite(state.t + dt));
        }
        // diffusion of a nonnegative field may undershoot at round-off level
        let u = u.map(|x| x.max(0.0));
        let next = self.state_at(state.t + dt, u)?;
        Ok(StepOutcome {
            state: next,
            clamp_mass,
        })
    }

    /// Runs to `t_end`, recording diagnostics after every step.
    pub fn integrate(&self, u0: Field) -> Result<Trajectory> {
        if u0.grid() != self.grid() {
            return Err(Error::GridMismatch);
        }
        let u0_min = u0.min();
        if u0_min < 0.0 {
            return Err(Error::NegativeInput {
                min: u0_min,
                tol: 0.0,
            });
        }
        let mean0 = u0.mean();
        let u0_sup = u0.sup_norm();
        let c0 = c0_candidate(&self.params, &self.bounds, u0_sup);
        let threshold = BLOWUP_FACTOR * c0;
        let t_end = self.cfg.t_end;
        let mut state = self.state_at(0.0, u0)?;
        let gap0 = drift_field(&self.ws, &state, &self.params)?.potential_gap.max();
        let mut traj = Trajectory {
            times: vec![0.0],
            sup_u: vec![state.u.max()],
            inf_u: vec![state.u.min()],
            clamp_mass: vec![0.0],
            drift_gap_max: vec![gap0],
            snapshots: Vec::new(),
            final_state: state.clone(),
            c0_candidate: c0,
            u0_touches_zero: u0_min <= 0.0,
        };
        if self.cfg.snapshot_every > 0 {
            traj.snapshots.push(state.clone());
        }
        let mut steps = 0usize;
        while state.t < t_end {
            let (f, drift_sup) = self.tendency_and_drift(&state)?;
            let cfl = self.dt_from_drift(&state, &drift_sup);
            let mut dt = match self.cfg.fixed_dt {
                Some(fixed) => {
                    if fixed > cfl * (1.0 + 1e-12) {
                        return Err(Error::InvalidStepper(format!(
                            "fixed_dt = {fixed} exceeds the stability bound {cfl} at t = {}",
                            state.t
                        )));
                    }
                    fixed
                }
                None => cfl,
            };
            let remaining = t_end - state.t;
            // avoid a sliver step from rounding
            if dt >= remaining || remaining - dt < 1e-9 * t_end {
                dt = remaining;
            }
            let out = self.finish_step(&state, &f, dt)?;
            state = out.state;
            if remaining == dt {
                state.t = t_end;
            }
            steps += 1;
            let sup = state.u.max();
            if sup > threshold {
                return Err(Error::BlowUpSuspected {
                    t: state.t,
                    sup,
                    threshold,
                });
            }
            let gap = drift_field(&self.ws, &state, &self.params)?.potential_gap.max();
            traj.times.push(state.t);
            traj.sup_u.push(sup);
            traj.inf_u.push(state.u.min());
            traj.clamp_mass.push(out.clamp_mass);
            traj.drift_gap_max.push(gap);
            if self.cfg.snapshot_every > 0 && steps.is_multiple_of(self.cfg.snapshot_every) {
                traj.snapshots.push(state.clone());
            }
        }
        let total = traj.total_clamp_mass();
        let limit = CLAMP_MASS_FRACTION * mean0 * t_end;
        if total > 0.0 && total >= limit {
            return Err(Error::ClampMassExceeded { total, limit });
        }
        traj.final_state = state;
        Ok(traj)
    }
}

const SNAPSHOT_MAGIC: &[u8; 8] = b"FXS1\0\0\0\0";

/// Writes `FXS1` snapshot: magic (8 bytes), dim, points per axis, extent per
/// axis, time, then `u`, `v1`, `v2` row-major, all little-endian 8-byte words.
pub fn write_snapshot<W: Write>(mut w: W, state: &State) -> Result<()> {
    let g = state.u.grid();
    w.write_all(SNAPSHOT_MAGIC)?;
    w.write_all(&(g.dim() as u64).to_le_bytes())?;
    for ax in 0..g.dim() {
        w.write_all(&(g.points(ax) as u64).to_le_bytes())?;
    }
    for ax in 0..g.dim() {
        w.write_all(&g.extent(ax).to_le_bytes())?;
    }
    w.write_all(&state.t.to_le_bytes())?;
    for f in [&state.u, &state.v1, &state.v2] {
        for v in f.values() {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_snapshot<R: Read>(mut r: R) -> Result<State> {
    let mut word = [0u8; 8];
    r.read_exact(&mut word)?;
    if &word != SNAPSHOT_MAGIC {
        return Err(Error::Io("not an FXS1 snapshot".into()));
    }
    let next = |r: &mut R| -> Result<[u8; 8]> {
        let mut b = [0u8; 8];
        r.read_exact(&mut b)?;
        Ok(b)
    };
    let dim = u64::from_le_bytes(next(&mut r)?) as usize;
    if dim != 1 && dim != 2 {
        return Err(Error::UnsupportedDimension(dim));
    }
    let mut points = Vec::with_capacity(dim);
    for _ in 0..dim {
        points.push(u64::from_le_bytes(next(&mut r)?) as usize);
    }
    let mut extent = Vec::with_capacity(dim);
    for _ in 0..dim {
        extent.push(f64::from_le_bytes(next(&mut r)?));
    }
    let grid = Grid::new(dim, &extent, &points)?;
    let t = f64::from_le_bytes(next(&mut r)?);
    let read_field = |r: &mut R| -> Result<Field> {
        let mut vals = Vec::with_capacity(grid.len());
        for _ in 0..grid.len() {
            vals.push(f64::from_le_bytes(next(r)?));
        }
        Field::new(grid, vals)
    };
    let u = read_field(&mut r)?;
    let v1 = read_field(&mut r)?;
    let v2 = read_field(&mut r)?;
    Ok(State { t, u, v1, v2 })
}
