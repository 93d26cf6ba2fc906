//! Measurements on simulation output: series of energy, mass and length
//! scales, power-law fits, and sharp-interface residuals for radial
//! benchmarks.

mod interface;

pub use interface::{
    bilinear, circle_mean, disk_center, flux_law_residual, gibbs_thomson_residual, radial_slope,
    track_radius, track_radius_within, FitWindows, FluxLaw, FluxSide, GibbsThomson, InterfaceTrack,
    Snapshot,
};

use std::f64::consts::PI;

use crate::chmodel::{energy, ModelParams};
use crate::error::{Error, Result};
use crate::field::{Field, Spectral};
use crate::oracle::S;
use crate::stepper::SolverState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub step: usize,
    pub t: f64,
    pub energy_total: f64,
    pub energy_per_area: f64,
    pub mass: f64,
    pub length_sf: f64,
    pub length_energy: f64,
}

impl SeriesRow {
    /// Measures the current state. Undefined lengths are recorded as NaN.
    pub fn measure(state: &SolverState) -> Result<Self> {
        let e = energy(state.spectral(), state.u(), state.params())?;
        let (length_sf, length_energy) =
            match characteristic_length(state.spectral(), state.u(), state.params()) {
                Ok(l) => l,
                Err(Error::UndefinedLength(_)) => (f64::NAN, f64::NAN),
                Err(e) => return Err(e),
            };
        Ok(Self {
            step: state.step_index(),
            t: state.time(),
            energy_total: e.total,
            energy_per_area: e.per_area,
            mass: state.mass(),
            length_sf,
            length_energy,
        })
    }
}

/// Rows with strictly increasing time.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TimeSeries {
    rows: Vec<SeriesRow>,
}

impl TimeSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, row: SeriesRow) -> Result<()> {
        if let Some(last) = self.rows.last() {
            if !(row.t > last.t) {
                return Err(Error::InvalidInput(format!(
                    "series times must increase: {} after {}",
                    row.t, last.t
                )));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> &[SeriesRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.column(|r| r.t)
    }

    pub fn column(&self, f: impl Fn(&SeriesRow) -> f64) -> Vec<f64> {
        self.rows.iter().map(f).collect()
    }
}

/// Structure-factor and energy length scales.
///
/// `length_sf = 2π Σ_{k≠0} S(k) / Σ_{k≠0} |k| S(k)` with `S(k) = |û_k|²`;
/// `length_energy = S ε |Ω| / E`.
pub fn characteristic_length(sp: &Spectral, u: &Field, p: &ModelParams) -> Result<(f64, f64)> {
    let spec = sp.forward(u)?;
    let (mut s0, mut s1) = (0.0, 0.0);
    for (i, c) in spec.coeffs().iter().enumerate().skip(1) {
        let w = c.norm_sqr();
        s0 += w;
        s1 += sp.k2(i).sqrt() * w;
    }
    let n = u.values().len() as f64;
    let scale = (u.mean() * u.mean()).max(1.0) * n * n;
    if !(s0 > 1e-24 * scale) || s1 == 0.0 {
        return Err(Error::UndefinedLength("field is spatially constant".into()));
    }
    let e = energy(sp, u, p)?.total;
    if !(e > 0.0) {
        return Err(Error::UndefinedLength("free energy vanishes".into()));
    }
    let g = u.grid();
    Ok((2.0 * PI * s0 / s1, S * p.epsilon * g.area() / e))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub points: usize,
}

/// Least-squares line through `(ln t, ln y)` for samples with `t` in the closed window.
pub fn fit_power_law(t: &[f64], y: &[f64], window: (f64, f64)) -> Result<SlopeFit> {
    if t.len() != y.len() {
        return Err(Error::ShapeMismatch {
            expected: t.len(),
            found: y.len(),
        });
    }
    let (lo, hi) = window;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&ti, &yi) in t.iter().zip(y) {
        if ti >= lo && ti <= hi {
            if !(ti > 0.0 && yi > 0.0) {
                return Err(Error::Fit(format!(
                    "non-positive sample (t = {ti}, y = {yi}) inside the window"
                )));
            }
            xs.push(ti.ln());
            ys.push(yi.ln());
        }
    }
    if xs.len() < 8 {
        return Err(Error::Fit(format!(
            "{} points in window [{lo}, {hi}], need at least 8",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::Fit("all window samples share one time".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(SlopeFit {
        slope,
        intercept,
        r_squared,
        window,
        points: xs.len(),
    })
}
