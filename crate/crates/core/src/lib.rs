//! Pseudo-spectral simulation of the time-fractional Cahn-Hilliard equation
//!
//! ```text
//! ∂_t^α u = ∇·(M(u) ∇μ),   μ = -ε² Δu + F'(u),   F(u) = (u² - 1)² / 4
//! ```
//!
//! on periodic rectangles, with constant (`M = 1`) or one-sided degenerate
//! (`M = 1 + u`) mobility, together with the measurements used to compare
//! diffuse-interface runs against their sharp-interface limits: coarsening
//! power laws, the Gibbs-Thomson relation and the fractional flux balance.
//!
//! Module map:
//! - [`fracops`]: L1 Caputo derivative, Riemann-Liouville integral, sum-of-exponentials history.
//! - [`field`]: grids, FFTs and spectral differential operators.
//! - [`chmodel`]: potential, mobility, chemical potential and free energy.
//! - [`stepper`]: semi-implicit stabilized time integration.
//! - [`diagnostics`]: length scales, power-law fits and interface residuals.
//! - [`oracle`]: closed forms and independent reference implementations.

// NaN-rejecting guards are written as negated comparisons on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chmodel;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod fracops;
pub mod oracle;
pub mod stepper;

pub use error::{Error, Result};
