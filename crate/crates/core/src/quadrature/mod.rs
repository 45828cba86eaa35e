//! Adaptive Gauss–Kronrod integration on the circle and the disc, bracketed
//! root finding, and derivative-free local search.

mod adaptive;
mod optimize;
mod region;
mod root;

pub use adaptive::{integrate_interval, integrate_interval_vec, Integral};
pub use optimize::{compass_search, maximize_on_disc, nelder_mead, DiscMaximum, MaximizeConfig, NelderMeadResult};
pub use region::{
    circle_integral, circle_integral_guarded, circle_integral_vec, disc_integral, disc_integral_vec,
    weighted_disc_integral, weighted_disc_integral_family, weighted_disc_integral_vec,
};
pub use root::bracketed_root;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Panels whose smallest sampled guard magnitude falls below this are split.
pub const GUARD_THRESHOLD: f64 = 1e-8;
/// Guarded splitting stops at this panel width (in radians on the circle).
pub const GUARD_MIN_WIDTH: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Bisections allowed beyond the initial uniform partition.
    pub max_subdivisions: usize,
    pub singularity_guard: bool,
    pub initial_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 2000, singularity_guard: false, initial_panels: 8 }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let cfg = Self { abs_tol, rel_tol, max_subdivisions, ..Self::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(domain("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions < 1 || self.initial_panels < 1 {
            return Err(domain("max_subdivisions and initial_panels must be at least 1"));
        }
        Ok(())
    }

    /// Both tolerances divided by `factor`, with a proportionally larger subdivision budget.
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol / factor,
            rel_tol: self.rel_tol / factor,
            max_subdivisions: self.max_subdivisions.saturating_mul(4),
            ..*self
        }
    }

    pub fn with_guard(&self, on: bool) -> Self {
        Self { singularity_guard: on, ..*self }
    }

    /// Tolerances for integrals nested inside an outer integral.
    pub(crate) fn inner(&self) -> Self {
        Self { abs_tol: self.abs_tol * 0.1, rel_tol: self.rel_tol * 0.1, ..*self }
    }

    /// Allowed error for a value of the given magnitude.
    pub fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}
