//! Spectral simulation and regime analysis for the fractional
//! attraction-repulsion chemotaxis system with a space-time logistic source
//! and nonlinear signal production, posed on a periodic box.

// `!(x > 0.0)` is the intended guard: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod diagnostics;
pub mod eigen1d;
pub mod error;
pub mod evolve;
pub mod kernel;
pub mod model;
pub mod regimes;
pub mod signal;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
pub use model::{
    coeff_bounds, validate_params, CoeffBounds, CoefficientField, Field, Grid, InitialData,
    ModelParams, State,
};
pub use spectral::{MultiplierKey, SpectralWorkspace};
