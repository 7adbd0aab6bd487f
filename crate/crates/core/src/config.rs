use alloc::format;

use crate::error::{Error, Result};

/// Numerical policy shared by every evaluation routine.
///
/// All integrals over `[0, 1]` are taken on `[endpoint_eps, 1 - endpoint_eps]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    pub quad_rel_tol: f64,
    pub quad_abs_tol: f64,
    pub endpoint_eps: f64,
    pub root_tol: f64,
    pub fd_step: f64,
    pub max_subdivisions: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            quad_rel_tol: 1e-9,
            quad_abs_tol: 1e-12,
            endpoint_eps: 1e-10,
            root_tol: 1e-12,
            fd_step: 1e-5,
            max_subdivisions: 200,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("quad_rel_tol", self.quad_rel_tol),
            ("quad_abs_tol", self.quad_abs_tol),
            ("endpoint_eps", self.endpoint_eps),
            ("root_tol", self.root_tol),
            ("fd_step", self.fd_step),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Param(format!("{name} must be positive, got {v}")));
            }
        }
        if self.endpoint_eps >= 1e-3 {
            return Err(Error::Param(format!(
                "endpoint_eps must be below 1e-3, got {}",
                self.endpoint_eps
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Param("max_subdivisions must be positive".into()));
        }
        Ok(())
    }

    /// Lower and upper clipped integration limits for the unit interval.
    pub fn unit_limits(&self) -> (f64, f64) {
        (self.endpoint_eps, 1.0 - self.endpoint_eps)
    }
}
