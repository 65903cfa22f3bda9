//! Elliptic signal solves `0 = Delta v - lambda v + mu u^k` and the bounds
//! built on them.

use crate::error::{Error, Result};
use crate::model::{Field, ModelParams, State};
use crate::spectral::SpectralWorkspace;

/// Default absolute tolerance for negative undershoot of `u`.
pub const DEFAULT_POSITIVITY_TOL: f64 = 1e-10;

/// Pointwise `u^k`, with slightly negative values mapped to zero.
pub fn production(u: &Field, k: f64) -> Field {
    if k == 1.0 {
        return u.map(|x| x.max(0.0));
    }
    u.map(|x| if x > 0.0 { x.powf(k) } else { 0.0 })
}

/// `v = mu (lambda I - Delta)^{-1} u^k`.
pub fn solve_signal(
    ws: &SpectralWorkspace,
    u: &Field,
    lambda: f64,
    mu: f64,
    k: f64,
    positivity_tol: f64,
) -> Result<Field> {
    let min = u.min();
    if min < -positivity_tol {
        return Err(Error::NegativeInput {
            min,
            tol: positivity_tol,
        });
    }
    let src = production(u, k).scale(mu);
    ws.helmholtz_inverse(&src, lambda)
}

/// `||(lambda - Delta) v - mu u^k||_inf / ||mu u^k||_inf` (absolute when the
/// source vanishes).
pub fn signal_residual(ws: &SpectralWorkspace, u: &Field, v: &Field, lambda: f64, mu: f64, k: f64) -> Result<f64> {
    let src = production(u, k).scale(mu);
    let lhs = ws.helmholtz_apply(v, lambda)?;
    let err = lhs.max_abs_diff(&src);
    let scale = src.sup_norm();
    Ok(if scale > 0.0 { err / scale } else { err })
}

/// Outcome of the elliptic gradient estimate on one field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradientBound {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `max |grad v|` against `sqrt(N) mu / sqrt(lambda) ||u^k||_inf`.
pub fn gradient_bound_check(
    ws: &SpectralWorkspace,
    u: &Field,
    lambda: f64,
    mu: f64,
    k: f64,
) -> Result<GradientBound> {
    let v = solve_signal(ws, u, lambda, mu, k, DEFAULT_POSITIVITY_TOL)?;
    let grad = ws.gradient(&v)?;
    let lhs = euclidean_sup(&grad);
    let n = ws.grid().dim() as f64;
    let rhs = n.sqrt() * mu / lambda.sqrt() * production(u, k).sup_norm();
    Ok(GradientBound {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + 1e-8),
    })
}

/// Pointwise Euclidean norm of a vector field.
pub fn euclidean_norm(components: &[Field]) -> Field {
    let first = &components[0];
    let values = (0..first.len())
        .map(|i| components.iter().map(|c| c.values()[i].powi(2)).sum::<f64>().sqrt())
        .collect();
    Field::from_raw(*first.grid(), values)
}

/// Maximum over nodes of the Euclidean norm of a vector field.
pub fn euclidean_sup(components: &[Field]) -> f64 {
    euclidean_norm(components).max()
}

/// Chemotactic drift `grad(chi2 v2 - chi1 v1)` and the potential gap
/// `chi2 lambda2 v2 - chi1 lambda1 v1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DriftField {
    pub drift: Vec<Field>,
    pub potential_gap: Field,
}

pub fn drift_field(ws: &SpectralWorkspace, state: &State, p: &ModelParams) -> Result<DriftField> {
    let potential = state.v2.zip_with(&state.v1, |v2, v1| p.chi2 * v2 - p.chi1 * v1)?;
    let drift = ws.gradient(&potential)?;
    let potential_gap = state
        .v2
        .zip_with(&state.v1, |v2, v1| p.chi2 * p.lambda2 * v2 - p.chi1 * p.lambda1 * v1)?;
    Ok(DriftField {
        drift,
        potential_gap,
    })
}

/// Builds a consistent state by solving both signals from `u`.
pub fn state_from_u(
    ws: &SpectralWorkspace,
    t: f64,
    u: Field,
    p: &ModelParams,
    positivity_tol: f64,
) -> Result<State> {
    let v1 = solve_signal(ws, &u, p.lambda1, p.mu1, p.k, positivity_tol)?;
    let v2 = solve_signal(ws, &u, p.lambda2, p.mu2, p.k, positivity_tol)?;
    Ok(State { t, u, v1, v2 })
}
