//! Double-well potential, mobility laws, chemical potential and free energy.

use crate::error::{invalid, Result};
use crate::field::{Field, Grid2D, Spectral};
use crate::fracops::FractionalOrder;

/// `F(u) = (u² − 1)² / 4`.
pub fn potential(u: f64) -> f64 {
    let w = u * u - 1.0;
    0.25 * w * w
}

/// `F'(u) = u³ − u`.
pub fn potential_deriv(u: f64) -> f64 {
    u * (u * u - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MobilityKind {
    Constant,
    /// `M(u) = max(1 + u, 0)`.
    OneSided,
}

impl MobilityKind {
    pub fn eval(self, u: f64) -> f64 {
        match self {
            MobilityKind::Constant => 1.0,
            MobilityKind::OneSided => (1.0 + u).max(0.0),
        }
    }
}

pub fn mobility(u: &Field, kind: MobilityKind) -> Field {
    u.map(|v| kind.eval(v))
}

/// Default linear stabilization, `max |F''|` on `[-1, 1]`.
pub const DEFAULT_STABILIZATION: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub epsilon: f64,
    pub mobility: MobilityKind,
    pub stabilization: f64,
    pub order: FractionalOrder,
}

impl ModelParams {
    pub fn new(
        epsilon: f64,
        mobility: MobilityKind,
        stabilization: f64,
        order: FractionalOrder,
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return invalid(format!("epsilon must be positive, got {epsilon}"));
        }
        if !(stabilization >= 0.0 && stabilization.is_finite()) {
            return invalid(format!("stabilization must be >= 0, got {stabilization}"));
        }
        Ok(Self {
            epsilon,
            mobility,
            stabilization,
            order,
        })
    }

    /// Whether `ε ≥ 2 max(dx, dy)`; logs a warning when the interface is under-resolved.
    pub fn check_resolution(&self, grid: &Grid2D) -> bool {
        let h = if grid.is_1d() {
            grid.dx()
        } else {
            grid.dx().max(grid.dy())
        };
        let ok = self.epsilon >= 2.0 * h;
        if !ok {
            log::warn!(
                "interface under-resolved: epsilon = {} < 2 * grid spacing = {}",
                self.epsilon,
                2.0 * h
            );
        }
        ok
    }
}

/// `μ = −ε² Δu + F'(u)`.
pub fn chemical_potential(sp: &Spectral, u: &Field, p: &ModelParams) -> Result<Field> {
    let lap = sp.laplacian(u)?;
    let e2 = p.epsilon * p.epsilon;
    let vals = u
        .values()
        .iter()
        .zip(lap.values())
        .map(|(&v, &l)| -e2 * l + potential_deriv(v))
        .collect();
    Field::from_values(*u.grid(), vals)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyValue {
    pub total: f64,
    pub per_area: f64,
}

/// `E = Σ [(ε²/2)|∇u|² + F(u)] dx dy` with a spectral gradient.
pub fn energy(sp: &Spectral, u: &Field, p: &ModelParams) -> Result<EnergyValue> {
    let (gx, gy) = sp.gradient(u)?;
    let half_e2 = 0.5 * p.epsilon * p.epsilon;
    let density: f64 = u
        .values()
        .iter()
        .zip(gx.values().iter().zip(gy.values()))
        .map(|(&v, (&a, &b))| half_e2 * (a * a + b * b) + potential(v))
        .sum();
    let g = u.grid();
    let total = density * g.cell_area();
    Ok(EnergyValue {
        total,
        per_area: total / g.area(),
    })
}
