use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Numerical thresholds shared by every decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Relative singular-value cutoff for span and rank decisions.
    pub rank_cut: f64,
    /// Residual allowed in consistency checks and equality of maps.
    pub residual_tol: f64,
    /// Eigenvalue slack for positivity.
    pub psd_slack: f64,
    /// Eigenvalues at or below this are treated as outside the support.
    pub entropy_support_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_cut: 1e-9,
            residual_tol: 1e-9,
            psd_slack: 1e-10,
            entropy_support_tol: 1e-12,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("rank_cut", self.rank_cut),
            ("residual_tol", self.residual_tol),
            ("psd_slack", self.psd_slack),
            ("entropy_support_tol", self.entropy_support_tol),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::input(format!("tolerance {name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }

    pub fn with_rank_cut(mut self, rank_cut: f64) -> Self {
        self.rank_cut = rank_cut;
        self
    }

    pub fn with_residual_tol(mut self, residual_tol: f64) -> Self {
        self.residual_tol = residual_tol;
        self
    }
}
