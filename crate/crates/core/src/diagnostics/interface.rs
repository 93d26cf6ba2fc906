//! Radial-benchmark interface measurements.
//!
//! Orientation: the normal points out of the `u > 0` region. For a disk of
//! the `+1` phase in a `−1` matrix the predicted chemical potential on the
//! interface is `+ε S / ([U] R)`; flipping `u → −u` flips its sign. The flux
//! balance is expressed through `Ṙ`, the rate of change of the disk radius.

use std::f64::consts::PI;

use crate::chmodel::ModelParams;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::fracops::{rl_integral, ScalarHistory};
use crate::oracle::{S, U_JUMP};

/// Area-equivalent radius `sqrt(A/π)` of the set `{u > 0}`.
pub fn track_radius(u: &Field) -> Result<f64> {
    let count = u.values().iter().filter(|&&v| v > 0.0).count();
    radius_from_count(u, count)
}

/// Area-equivalent radius of the phase found at `center`, counting only
/// cells within periodic distance `max_r` of it.
pub fn track_radius_within(u: &Field, center: (f64, f64), max_r: f64) -> Result<f64> {
    let g = u.grid();
    let sign = orientation(u, center);
    let mut count = 0;
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            let (x, y) = g.coords(i, j);
            if sign * u.get(i, j) > 0.0
                && periodic_distance(g.lx(), g.ly(), (x, y), center) <= max_r
            {
                count += 1;
            }
        }
    }
    radius_from_count(u, count)
}

fn radius_from_count(u: &Field, count: usize) -> Result<f64> {
    if count == 0 {
        return Err(Error::Interface("no cell has u > 0".into()));
    }
    if count == u.values().len() {
        return Err(Error::Interface("every cell has u > 0".into()));
    }
    Ok((count as f64 * u.grid().cell_area() / PI).sqrt())
}

fn wrap_delta(d: f64, l: f64) -> f64 {
    d - l * (d / l).round()
}

fn periodic_distance(lx: f64, ly: f64, a: (f64, f64), b: (f64, f64)) -> f64 {
    wrap_delta(a.0 - b.0, lx).hypot(wrap_delta(a.1 - b.1, ly))
}

/// Center of the `u > 0` region by circular means along each axis.
pub fn disk_center(u: &Field) -> Result<(f64, f64)> {
    let g = u.grid();
    let (mut cx, mut sx, mut cy, mut sy) = (0.0, 0.0, 0.0, 0.0);
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            if u.get(i, j) > 0.0 {
                let (x, y) = g.coords(i, j);
                let (ax, ay) = (2.0 * PI * x / g.lx(), 2.0 * PI * y / g.ly());
                cx += ax.cos();
                sx += ax.sin();
                cy += ay.cos();
                sy += ay.sin();
            }
        }
    }
    if cx == 0.0 && sx == 0.0 {
        return Err(Error::Interface("no cell has u > 0".into()));
    }
    let x = sx.atan2(cx).rem_euclid(2.0 * PI) * g.lx() / (2.0 * PI);
    let y = sy.atan2(cy).rem_euclid(2.0 * PI) * g.ly() / (2.0 * PI);
    Ok((x, y))
}

/// Periodic bilinear interpolation at physical coordinates.
pub fn bilinear(f: &Field, x: f64, y: f64) -> f64 {
    let g = f.grid();
    let (nx, ny) = (g.nx() as i64, g.ny() as i64);
    let fx = x / g.dx();
    let fy = if g.is_1d() { 0.0 } else { y / g.dy() };
    let (i0, j0) = (fx.floor(), fy.floor());
    let (ax, ay) = (fx - i0, fy - j0);
    let at = |i: i64, j: i64| f.get(i.rem_euclid(nx) as usize, j.rem_euclid(ny) as usize);
    let (i0, j0) = (i0 as i64, j0 as i64);
    (1.0 - ax) * (1.0 - ay) * at(i0, j0)
        + ax * (1.0 - ay) * at(i0 + 1, j0)
        + (1.0 - ax) * ay * at(i0, j0 + 1)
        + ax * ay * at(i0 + 1, j0 + 1)
}

/// Mean of `f` over `n` equally spaced points on a circle.
pub fn circle_mean(f: &Field, center: (f64, f64), r: f64, n: usize) -> f64 {
    (0..n)
        .map(|k| {
            let th = 2.0 * PI * k as f64 / n as f64;
            bilinear(f, center.0 + r * th.cos(), center.1 + r * th.sin())
        })
        .sum::<f64>()
        / n as f64
}

/// Radial derivative of the angular mean of `f`, fitted on `[r_lo, r_hi]`.
///
/// Without `extrapolate_to` this is the least-squares line slope. With it, a
/// quadratic in `r − r₀` is fitted and its derivative at `r₀` returned.
pub fn radial_slope(
    f: &Field,
    center: (f64, f64),
    r_lo: f64,
    r_hi: f64,
    extrapolate_to: Option<f64>,
) -> f64 {
    const RADII: usize = 21;
    let samples = angular_samples(f, r_hi);
    let r0 = extrapolate_to.unwrap_or(0.5 * (r_lo + r_hi));
    let pts: Vec<(f64, f64)> = (0..RADII)
        .map(|k| {
            let r = r_lo + (r_hi - r_lo) * k as f64 / (RADII - 1) as f64;
            (r - r0, circle_mean(f, center, r, samples))
        })
        .collect();
    let degree = if extrapolate_to.is_some() { 2 } else { 1 };
    polyfit(&pts, degree)[1]
}

/// Least-squares polynomial coefficients, lowest order first.
fn polyfit(pts: &[(f64, f64)], degree: usize) -> Vec<f64> {
    let m = degree + 1;
    let a = nalgebra::DMatrix::from_fn(pts.len(), m, |i, j| pts[i].0.powi(j as i32));
    let b = nalgebra::DVector::from_iterator(pts.len(), pts.iter().map(|p| p.1));
    let sol = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .expect("SVD with both factors computed");
    sol.iter().copied().collect()
}

/// At least 64 samples, and at least one per cell along the circumference.
fn angular_samples(f: &Field, r: f64) -> usize {
    let h = f.grid().dx().min(f.grid().dy());
    ((2.0 * PI * r / h).ceil() as usize).max(64)
}

fn min_spacing(f: &Field) -> f64 {
    let g = f.grid();
    if g.is_1d() {
        g.dx()
    } else {
        g.dx().max(g.dy())
    }
}

/// Sign of the disk phase: `+1` when `u > 0` at the center.
fn orientation(u: &Field, center: (f64, f64)) -> f64 {
    if bilinear(u, center.0, center.1) > 0.0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GibbsThomson {
    pub measured: f64,
    pub predicted: f64,
    pub residual: f64,
}

/// Compares the mean of `mu` on the circle of radius `radius` with
/// `±ε S / ([U] R)`.
pub fn gibbs_thomson_residual(
    u: &Field,
    mu: &Field,
    center: (f64, f64),
    radius: f64,
    p: &ModelParams,
) -> Result<GibbsThomson> {
    if !(radius >= 3.0 * min_spacing(u)) {
        return Err(Error::Interface(format!(
            "radius {radius} is below three grid cells"
        )));
    }
    let sign = orientation(u, center);
    let predicted = sign * p.epsilon * S / (U_JUMP * radius);
    let measured = circle_mean(mu, center, radius, angular_samples(mu, radius));
    Ok(GibbsThomson {
        measured,
        predicted,
        residual: (measured - predicted).abs() / predicted.abs(),
    })
}

/// Radius history of a disk with finite-differenced `Ṙ` and curvature `1/R`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceTrack {
    pub times: Vec<f64>,
    pub radius: Vec<f64>,
    pub velocity: Vec<f64>,
    pub curvature: Vec<f64>,
}

impl InterfaceTrack {
    /// Central differences inside, one-sided at both ends.
    pub fn new(times: Vec<f64>, radius: Vec<f64>) -> Result<Self> {
        let n = times.len();
        if n != radius.len() {
            return Err(Error::ShapeMismatch {
                expected: n,
                found: radius.len(),
            });
        }
        if n < 2 {
            return Err(Error::Interface(
                "a track needs at least two samples".into(),
            ));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Interface("track times must increase".into()));
        }
        if radius.iter().any(|&r| !(r > 0.0)) {
            return Err(Error::Interface("radius must stay positive".into()));
        }
        let velocity = (0..n)
            .map(|i| {
                let (a, b) = (i.saturating_sub(1), (i + 1).min(n - 1));
                (radius[b] - radius[a]) / (times[b] - times[a])
            })
            .collect();
        let curvature = radius.iter().map(|r| 1.0 / r).collect();
        Ok(Self {
            times,
            radius,
            velocity,
            curvature,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// One stored state of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub u: Field,
    pub mu: Field,
}

/// Which sides of the interface carry flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxSide {
    /// Constant mobility: `Ṙ`-balance uses half the jump of `∂_r μ`.
    Both,
    /// One-sided mobility `1 + u`: only the `+1` phase conducts.
    PlusPhase,
}

/// Fit windows for `∂_r μ`, as offsets from the interface in grid cells.
/// With `extrapolate`, each side is fitted by a quadratic whose derivative
/// is taken at the interface, which allows windows clear of the diffuse layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitWindows {
    pub inner: (f64, f64),
    pub outer: (f64, f64),
    pub extrapolate: bool,
}

impl Default for FitWindows {
    fn default() -> Self {
        Self {
            inner: (3.0, 8.0),
            outer: (3.0, 8.0),
            extrapolate: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluxLaw {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub slope_inner: f64,
    pub slope_outer: f64,
    /// Time and radius at which both sides were evaluated.
    pub t_eval: f64,
    pub radius: f64,
    pub track: InterfaceTrack,
}

/// Residual floor of the flux balance.
pub const FLUX_FLOOR: f64 = 1e-8;

/// Minimum number of snapshots for a flux-law measurement.
pub const MIN_FLUX_SNAPSHOTS: usize = 32;

/// Compares `I^{1−α} Ṙ` with the interface flux measured on `μ`.
///
/// The snapshots must start at `t = 0` with uniform cadence. The radius is
/// tracked for the phase at `center` within `region` of it. Both sides are
/// evaluated at the second-to-last snapshot, where `Ṙ` is a central
/// difference. With `FluxSide::Both`, `rhs = ±(∂_r μ_out − ∂_r μ_in)/[U]`
/// (sign `+` for a `+1` disk); with `FluxSide::PlusPhase`, `rhs = −∂_r μ` on
/// the `+1` side.
pub fn flux_law_residual(
    snaps: &[Snapshot],
    center: (f64, f64),
    region: f64,
    p: &ModelParams,
    side: FluxSide,
    windows: FitWindows,
) -> Result<FluxLaw> {
    let n = snaps.len();
    if n < MIN_FLUX_SNAPSHOTS {
        return Err(Error::Interface(format!(
            "{n} snapshots, need at least {MIN_FLUX_SNAPSHOTS}"
        )));
    }
    let dt = snaps[1].t - snaps[0].t;
    if !(dt > 0.0) || snaps[0].t.abs() > 1e-9 * dt {
        return Err(Error::Interface("snapshots must start at t = 0".into()));
    }
    if snaps
        .windows(2)
        .any(|w| ((w[1].t - w[0].t) - dt).abs() > 1e-6 * dt)
    {
        return Err(Error::Interface("snapshot cadence must be uniform".into()));
    }
    let radii = snaps
        .iter()
        .map(|s| track_radius_within(&s.u, center, region))
        .collect::<Result<Vec<_>>>()?;
    let track = InterfaceTrack::new(snaps.iter().map(|s| s.t).collect(), radii)?;
    let e = n - 2;
    let (u, mu) = (&snaps[e].u, &snaps[e].mu);
    let r = track.radius[e];
    let h = min_spacing(mu);
    let g = mu.grid();
    let reach = if g.is_1d() {
        g.lx()
    } else {
        g.lx().min(g.ly())
    } / 2.0;
    if r - windows.inner.1 * h <= 0.0 || r + windows.outer.1 * h >= reach.min(region) {
        return Err(Error::Interface(format!(
            "fit windows around R = {r} leave the disk or the tracked region"
        )));
    }
    let alpha = p.order.alpha();
    let lhs = if alpha == 1.0 {
        track.velocity[e]
    } else {
        let hist = ScalarHistory::new(dt, track.velocity[..=e].to_vec())?;
        rl_integral(1.0 - alpha, &hist, dt)?
    };
    let at = windows.extrapolate.then_some(r);
    let slope_inner = radial_slope(
        mu,
        center,
        r - windows.inner.1 * h,
        r - windows.inner.0 * h,
        at,
    );
    let slope_outer = radial_slope(
        mu,
        center,
        r + windows.outer.0 * h,
        r + windows.outer.1 * h,
        at,
    );
    let sign = orientation(u, center);
    let rhs = match side {
        FluxSide::Both => sign * (slope_outer - slope_inner) / U_JUMP,
        FluxSide::PlusPhase => {
            if sign > 0.0 {
                -slope_inner
            } else {
                -slope_outer
            }
        }
    };
    Ok(FluxLaw {
        lhs,
        rhs,
        residual: flux_residual(lhs, rhs),
        slope_inner,
        slope_outer,
        t_eval: snaps[e].t,
        radius: r,
        track,
    })
}

/// `|lhs − rhs| / (|rhs| + floor)`.
pub fn flux_residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / (rhs.abs() + FLUX_FLOOR)
}
