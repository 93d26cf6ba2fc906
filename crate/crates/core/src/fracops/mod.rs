//! Discrete fractional calculus on uniform time grids.
//!
//! The Caputo derivative is discretized by the L1 scheme (product integration
//! of the piecewise-linear interpolant), the Riemann-Liouville integral by
//! piecewise-linear product integration. Both are exact on data that is linear
//! in time. [`soe`] provides the compressed history used for long runs.

mod gamma;
mod gauss;
mod l1;
pub mod soe;

pub use gamma::gamma;
pub use gauss::{gauss_jacobi, gauss_legendre, GaussRule};
pub use l1::{
    caputo_l1, caputo_l1_series, l1_weights, rescale_check, rl_integral, L1Weights, ScalarHistory,
};
pub use soe::{FastCaputo, SoeKernel};

use crate::error::{invalid, Result};

/// Order `α ∈ (0, 1]` of the Caputo derivative, with the Gamma factors the
/// discretizations need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalOrder {
    alpha: f64,
    gamma_2ma: f64,
    gamma_1ma: f64,
}

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return invalid(format!("fractional order must lie in (0, 1], got {alpha}"));
        }
        // Γ(1) is pinned so that α = 1 reproduces the backward difference exactly.
        let (gamma_2ma, gamma_1ma) = if alpha == 1.0 {
            (1.0, f64::INFINITY)
        } else {
            (gamma(2.0 - alpha), gamma(1.0 - alpha))
        };
        Ok(Self {
            alpha,
            gamma_2ma,
            gamma_1ma,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Γ(2 - α).
    pub fn gamma_2ma(&self) -> f64 {
        self.gamma_2ma
    }

    /// Γ(1 - α); infinite for α = 1.
    pub fn gamma_1ma(&self) -> f64 {
        self.gamma_1ma
    }

    pub fn is_classical(&self) -> bool {
        self.alpha == 1.0
    }

    /// Leading L1 coefficient `τ^{-α} / Γ(2 - α)`.
    pub fn l1_leading(&self, tau: f64) -> f64 {
        tau.powf(-self.alpha) / self.gamma_2ma
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(FractionalOrder::new(0.0).is_err());
        assert!(FractionalOrder::new(1.2).is_err());
        assert!(FractionalOrder::new(f64::NAN).is_err());
        assert!(FractionalOrder::new(1.0).is_ok());
    }

    #[test]
    fn cached_gammas() {
        for &a in &[0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
            let o = FractionalOrder::new(a).unwrap();
            let r2 = statrs::function::gamma::gamma(2.0 - a);
            let r1 = statrs::function::gamma::gamma(1.0 - a);
            assert!(((o.gamma_2ma() - r2) / r2).abs() < 2e-14);
            assert!(((o.gamma_1ma() - r1) / r1).abs() < 2e-14);
        }
        let classical = FractionalOrder::new(1.0).unwrap();
        assert_eq!(classical.gamma_2ma(), 1.0);
        assert!(classical.gamma_1ma().is_infinite());
    }
}
