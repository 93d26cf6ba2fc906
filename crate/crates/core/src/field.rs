//! Periodic rectangular grids, 2D FFTs and spectral differential operators.
//!
//! Storage is row-major with `x` fastest: value `(i, j)` lives at `j * nx + i`.
//! The forward transform is the unnormalized DFT; the inverse divides by
//! `nx * ny`. A grid with `ny = 1` is a 1D problem with `ky ≡ 0`.
//!
//! Odd derivatives drop the Nyquist mode (its `sin` partner vanishes on the
//! grid); even derivatives keep it.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
}

impl Grid2D {
    /// Periodic grid. Sizes must be even and at least 8 along `x`;
    /// `ny` is either 1 (1D) or at least 8.
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        let ok_size = |n: usize| n >= 8 && n.is_multiple_of(2);
        if !ok_size(nx) || !(ny == 1 || ok_size(ny)) {
            return invalid(format!(
                "grid sizes must be even and >= 8 (ny = 1 allowed for 1D), got {nx} x {ny}"
            ));
        }
        if !(lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite()) {
            return invalid(format!("domain lengths must be positive, got {lx} x {ly}"));
        }
        Ok(Self { nx, ny, lx, ly })
    }

    pub fn new_1d(nx: usize, lx: f64) -> Result<Self> {
        Self::new(nx, 1, lx, 1.0)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_1d(&self) -> bool {
        self.ny == 1
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    /// `|Ω|`; for 1D grids this is the length times the nominal `ly`.
    pub fn area(&self) -> f64 {
        self.lx * self.ly
    }

    /// Coordinates of node `(i, j)`.
    pub fn coords(&self, i: usize, j: usize) -> (f64, f64) {
        (i as f64 * self.dx(), j as f64 * self.dy())
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }
}

/// Real scalar field on a [`Grid2D`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid2D,
    values: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: Grid2D) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid2D, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    pub fn from_values(grid: Grid2D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    /// Samples `f(x, y)` at the grid nodes.
    pub fn from_fn(grid: Grid2D, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                let (x, y) = grid.coords(i, j);
                values.push(f(x, y));
            }
        }
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// `Σ f dx dy`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Periodic shift by `(di, dj)` cells.
    pub fn shifted(&self, di: usize, dj: usize) -> Field {
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        let mut out = vec![0.0; self.values.len()];
        for j in 0..ny {
            for i in 0..nx {
                out[((j + dj) % ny) * nx + (i + di) % nx] = self.values[j * nx + i];
            }
        }
        Field {
            grid: self.grid,
            values: out,
        }
    }

    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Forward-transform coefficients of a field.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumField {
    grid: Grid2D,
    coeffs: Vec<Complex64>,
}

impl SpectrumField {
    pub fn from_coeffs(grid: Grid2D, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                found: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Coefficient for integer wave indices `(m, n)`, negative values wrapped.
    pub fn at(&self, m: i64, n: i64) -> Complex64 {
        let nx = self.grid.nx() as i64;
        let ny = self.grid.ny() as i64;
        let i = m.rem_euclid(nx) as usize;
        let j = n.rem_euclid(ny) as usize;
        self.coeffs[self.grid.index(i, j)]
    }
}

fn wave_index(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// FFT plans and wavenumber tables for one grid. Immutable once built and
/// cheap to share between threads.
#[derive(Clone)]
pub struct Spectral {
    grid: Grid2D,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
    /// Wavenumbers with Nyquist kept (even derivatives).
    kx: Vec<f64>,
    ky: Vec<f64>,
    /// Wavenumbers with Nyquist zeroed (odd derivatives).
    kx_odd: Vec<f64>,
    ky_odd: Vec<f64>,
    dealias_x: Vec<bool>,
    dealias_y: Vec<bool>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral")
            .field("grid", &self.grid)
            .finish()
    }
}

impl Spectral {
    pub fn new(grid: Grid2D) -> Self {
        let mut planner = FftPlanner::new();
        let (nx, ny) = (grid.nx(), grid.ny());
        let table = |n: usize, l: f64| -> (Vec<f64>, Vec<f64>, Vec<bool>) {
            let mut k = Vec::with_capacity(n);
            let mut k_odd = Vec::with_capacity(n);
            let mut keep = Vec::with_capacity(n);
            for i in 0..n {
                let m = wave_index(i, n);
                let kk = 2.0 * PI * m as f64 / l;
                k.push(kk);
                k_odd.push(if n > 1 && 2 * i == n { 0.0 } else { kk });
                keep.push(3 * m.unsigned_abs() < n as u64 || n == 1);
            }
            (k, k_odd, keep)
        };
        let (kx, kx_odd, dealias_x) = table(nx, grid.lx());
        let (ky, ky_odd, dealias_y) = table(ny, grid.ly());
        Self {
            grid,
            fwd_x: planner.plan_fft_forward(nx),
            inv_x: planner.plan_fft_inverse(nx),
            fwd_y: planner.plan_fft_forward(ny),
            inv_y: planner.plan_fft_inverse(ny),
            kx,
            ky,
            kx_odd,
            ky_odd,
            dealias_x,
            dealias_y,
        }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    /// `(kx, ky)` of flat spectral index `idx`, Nyquist included.
    pub fn wavenumber(&self, idx: usize) -> (f64, f64) {
        let nx = self.grid.nx();
        (self.kx[idx % nx], self.ky[idx / nx])
    }

    /// `|k|²` at flat spectral index `idx`.
    pub fn k2(&self, idx: usize) -> f64 {
        let (kx, ky) = self.wavenumber(idx);
        kx * kx + ky * ky
    }

    /// `|k|²` for every spectral index.
    pub fn k2_table(&self) -> Vec<f64> {
        (0..self.grid.len()).map(|i| self.k2(i)).collect()
    }

    /// Whether index `idx` survives the 2/3 dealiasing rule.
    pub fn dealias_keep(&self, idx: usize) -> bool {
        let nx = self.grid.nx();
        self.dealias_x[idx % nx] && self.dealias_y[idx / nx]
    }

    fn transform(&self, data: &mut [Complex64], forward: bool) {
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        let (fx, fy) = if forward {
            (&self.fwd_x, &self.fwd_y)
        } else {
            (&self.inv_x, &self.inv_y)
        };
        batched(fx.as_ref(), data, nx);
        if ny > 1 {
            let mut t = vec![Complex64::default(); data.len()];
            transpose(data, &mut t, nx, ny);
            batched(fy.as_ref(), &mut t, ny);
            transpose(&t, data, ny, nx);
        }
    }

    /// In-place unnormalized forward DFT of a complex buffer.
    pub fn forward_in_place(&self, data: &mut [Complex64]) {
        self.transform(data, true);
    }

    /// In-place inverse DFT including the `1/(nx ny)` factor.
    pub fn inverse_in_place(&self, data: &mut [Complex64]) {
        self.transform(data, false);
        let s = 1.0 / data.len() as f64;
        data.iter_mut().for_each(|c| *c *= s);
    }

    /// Forward transform of real samples into `out`.
    pub fn forward_real(&self, values: &[f64], out: &mut [Complex64]) {
        for (o, &v) in out.iter_mut().zip(values) {
            *o = Complex64::new(v, 0.0);
        }
        self.forward_in_place(out);
    }

    /// Inverse transform of `spec` (consumed as scratch); writes the real part.
    pub fn inverse_real(&self, spec: &mut [Complex64], out: &mut [f64]) {
        self.inverse_in_place(spec);
        for (o, c) in out.iter_mut().zip(spec.iter()) {
            *o = c.re;
        }
    }

    pub fn forward(&self, f: &Field) -> Result<SpectrumField> {
        self.check(f.grid())?;
        let mut coeffs = vec![Complex64::default(); f.values().len()];
        self.forward_real(f.values(), &mut coeffs);
        Ok(SpectrumField {
            grid: self.grid,
            coeffs,
        })
    }

    pub fn inverse(&self, s: &SpectrumField) -> Result<Field> {
        self.check(s.grid())?;
        let mut buf = s.coeffs.clone();
        let mut values = vec![0.0; buf.len()];
        self.inverse_real(&mut buf, &mut values);
        Ok(Field {
            grid: self.grid,
            values,
        })
    }

    fn check(&self, g: &Grid2D) -> Result<()> {
        if g != &self.grid {
            return Err(Error::ShapeMismatch {
                expected: self.grid.len(),
                found: g.len(),
            });
        }
        Ok(())
    }

    fn apply(&self, f: &Field, symbol: impl Fn(usize) -> Complex64) -> Result<Field> {
        let mut s = self.forward(f)?;
        for (i, c) in s.coeffs.iter_mut().enumerate() {
            *c *= symbol(i);
        }
        self.inverse(&s)
    }

    /// Spectral Laplacian (multiplication by `-|k|²`).
    pub fn laplacian(&self, f: &Field) -> Result<Field> {
        self.apply(f, |i| Complex64::new(-self.k2(i), 0.0))
    }

    pub fn gradient(&self, f: &Field) -> Result<(Field, Field)> {
        let nx = self.grid.nx();
        let gx = self.apply(f, |i| Complex64::new(0.0, self.kx_odd[i % nx]))?;
        let gy = self.apply(f, |i| Complex64::new(0.0, self.ky_odd[i / nx]))?;
        Ok((gx, gy))
    }

    pub fn divergence(&self, gx: &Field, gy: &Field) -> Result<Field> {
        self.check(gx.grid())?;
        self.check(gy.grid())?;
        let nx = self.grid.nx();
        let mut sx = self.forward(gx)?;
        let sy = self.forward(gy)?;
        for (i, (a, b)) in sx.coeffs.iter_mut().zip(&sy.coeffs).enumerate() {
            let ikx = Complex64::new(0.0, self.kx_odd[i % nx]);
            let iky = Complex64::new(0.0, self.ky_odd[i / nx]);
            *a = ikx * *a + iky * *b;
        }
        self.inverse(&sx)
    }

    /// `∇·(m ∇μ)` with both gradients and the divergence taken spectrally.
    /// With `dealias`, the spectra of the flux components are truncated by
    /// the 2/3 rule before the divergence.
    pub fn variable_flux_div(&self, m: &Field, mu: &Field, dealias: bool) -> Result<Field> {
        self.check(m.grid())?;
        if let Some(v) = m.values().iter().find(|v| !(**v >= 0.0)) {
            return invalid(format!("mobility must be non-negative, found {v}"));
        }
        let n = self.grid.len();
        let mut scratch = FluxScratch::new(n);
        let mut mu_hat = vec![Complex64::default(); n];
        self.forward_real(mu.values(), &mut mu_hat);
        let mut out = vec![Complex64::default(); n];
        self.flux_div_hat(m.values(), &mu_hat, dealias, &mut scratch, &mut out);
        let mut vals = vec![0.0; n];
        self.inverse_real(&mut out, &mut vals);
        Field::from_values(self.grid, vals)
    }

    /// Spectrum of `∇·(m ∇μ)` given `μ̂`, reusing `scratch`; no sign check on `m`.
    pub fn flux_div_hat(
        &self,
        m: &[f64],
        mu_hat: &[Complex64],
        dealias: bool,
        scratch: &mut FluxScratch,
        out: &mut [Complex64],
    ) {
        let nx = self.grid.nx();
        let two_d = !self.grid.is_1d();
        let FluxScratch { a, b, ra, rb } = scratch;
        for (i, &c) in mu_hat.iter().enumerate() {
            let (kx, ky) = (self.kx_odd[i % nx], self.ky_odd[i / nx]);
            a[i] = Complex64::new(-kx * c.im, kx * c.re);
            b[i] = Complex64::new(-ky * c.im, ky * c.re);
        }
        self.inverse_real(a, ra);
        for (x, &mm) in ra.iter_mut().zip(m) {
            *x *= mm;
        }
        self.forward_real(ra, a);
        if two_d {
            self.inverse_real(b, rb);
            for (y, &mm) in rb.iter_mut().zip(m) {
                *y *= mm;
            }
            self.forward_real(rb, b);
        }
        for (i, o) in out.iter_mut().enumerate() {
            if dealias && !self.dealias_keep(i) {
                *o = Complex64::default();
                continue;
            }
            let (kx, ky) = (self.kx_odd[i % nx], self.ky_odd[i / nx]);
            let (ca, cb) = (a[i], if two_d { b[i] } else { Complex64::default() });
            *o = Complex64::new(-kx * ca.im - ky * cb.im, kx * ca.re + ky * cb.re);
        }
    }

    /// Zeroes every coefficient outside the 2/3 band.
    pub fn dealias_in_place(&self, spec: &mut [Complex64]) {
        for (i, c) in spec.iter_mut().enumerate() {
            if !self.dealias_keep(i) {
                *c = Complex64::default();
            }
        }
    }
}

/// Scratch buffers for repeated flux divergences on one grid.
#[derive(Debug, Clone)]
pub struct FluxScratch {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    ra: Vec<f64>,
    rb: Vec<f64>,
}

impl FluxScratch {
    pub fn new(len: usize) -> Self {
        Self {
            a: vec![Complex64::default(); len],
            b: vec![Complex64::default(); len],
            ra: vec![0.0; len],
            rb: vec![0.0; len],
        }
    }
}

fn batched(fft: &dyn Fft<f64>, data: &mut [Complex64], n: usize) {
    let rows = data.len() / n;
    let threads = rayon::current_num_threads().max(1);
    if threads == 1 || rows < 2 {
        fft.process(data);
    } else {
        let per = rows.div_ceil(threads);
        data.par_chunks_mut(per * n).for_each(|c| fft.process(c));
    }
}

/// `dst[c * rows + r] = src[r * cols + c]` for a `rows x cols` source.
fn transpose(src: &[Complex64], dst: &mut [Complex64], cols: usize, rows: usize) {
    const B: usize = 16;
    for r0 in (0..rows).step_by(B) {
        for c0 in (0..cols).step_by(B) {
            for r in r0..(r0 + B).min(rows) {
                for c in c0..(c0 + B).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize) -> Grid2D {
        Grid2D::new(n, n, 1.0, 1.0).unwrap()
    }

    fn rect() -> Grid2D {
        Grid2D::new(32, 16, 2.0, 1.5).unwrap()
    }

    /// Smooth random field: random coefficients on every non-Nyquist mode.
    fn random_band_limited(g: Grid2D, seed: u64) -> Field {
        let mut state = seed;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let sp = Spectral::new(g);
        let raw = Field::from_fn(g, |_, _| next());
        let mut s = sp.forward(&raw).unwrap();
        let (nx, ny) = (g.nx(), g.ny());
        for (i, c) in s.coeffs_mut().iter_mut().enumerate() {
            if 2 * (i % nx) == nx || (ny > 1 && 2 * (i / nx) == ny) {
                *c = Complex64::default();
            }
        }
        sp.inverse(&s).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(Grid2D::new(6, 8, 1.0, 1.0).is_err());
        assert!(Grid2D::new(13, 16, 1.0, 1.0).is_err());
        assert!(Grid2D::new(96, 96, 1.0, 1.0).is_ok());
        assert!(Grid2D::new(16, 4, 1.0, 1.0).is_err());
        assert!(Grid2D::new(16, 16, 0.0, 1.0).is_err());
        assert!(Grid2D::new(16, 1, 1.0, 1.0).unwrap().is_1d());
    }

    #[test]
    fn constant_transform() {
        let g = unit(16);
        let s = Spectral::new(g).forward(&Field::constant(g, 1.0)).unwrap();
        assert!((s.at(0, 0).re - 256.0).abs() < 1e-12);
        let others = s
            .coeffs()
            .iter()
            .skip(1)
            .fold(0.0f64, |m, c| m.max(c.norm()));
        assert!(others < 1e-12);
    }

    #[test]
    fn cosine_has_two_coefficients() {
        let g = rect();
        let f = Field::from_fn(g, |x, _| (2.0 * PI * x / g.lx()).cos());
        let s = Spectral::new(g).forward(&f).unwrap();
        let n = g.len() as f64;
        assert!((s.at(1, 0).re - n / 2.0).abs() < 1e-10);
        assert!((s.at(-1, 0).re - n / 2.0).abs() < 1e-10);
        let big = s.coeffs().iter().filter(|c| c.norm() > 1e-9).count();
        assert_eq!(big, 2);
    }

    #[test]
    fn round_trip() {
        let g = rect();
        let sp = Spectral::new(g);
        let f = Field::from_fn(g, |x, y| (3.0 * x).sin() * (y * y).cos() + 0.1 * x);
        let back = sp.inverse(&sp.forward(&f).unwrap()).unwrap();
        assert!(back.max_abs_diff(&f) <= 1e-12 * f.max_abs());
    }

    #[test]
    fn laplacian_eigenfunctions() {
        let g = rect();
        let sp = Spectral::new(g);
        assert!(sp.laplacian(&Field::constant(g, 2.0)).unwrap().max_abs() < 1e-12);
        let kx = 2.0 * PI / g.lx();
        let ky = 4.0 * PI / g.ly();
        let f = Field::from_fn(g, |x, y| (kx * x).sin() + (ky * y).sin());
        let want = Field::from_fn(g, |x, y| {
            -kx * kx * (kx * x).sin() - ky * ky * (ky * y).sin()
        });
        assert!(sp.laplacian(&f).unwrap().max_abs_diff(&want) < 1e-10);
    }

    #[test]
    fn gradient_of_sine() {
        let g = rect();
        let sp = Spectral::new(g);
        let k = 2.0 * PI / g.lx();
        let (gx, gy) = sp
            .gradient(&Field::from_fn(g, |x, _| (k * x).sin()))
            .unwrap();
        let want = Field::from_fn(g, |x, _| k * (k * x).cos());
        assert!(gx.max_abs_diff(&want) < 1e-10);
        assert!(gy.max_abs() < 1e-10);
        let (cx, cy) = sp.gradient(&Field::constant(g, 5.0)).unwrap();
        assert!(cx.max_abs() < 1e-12 && cy.max_abs() < 1e-12);
    }

    #[test]
    fn div_grad_is_laplacian() {
        for g in [rect(), unit(32), Grid2D::new_1d(64, 3.0).unwrap()] {
            let sp = Spectral::new(g);
            let f = random_band_limited(g, 7);
            let (gx, gy) = sp.gradient(&f).unwrap();
            let dg = sp.divergence(&gx, &gy).unwrap();
            let lap = sp.laplacian(&f).unwrap();
            assert!(dg.max_abs_diff(&lap) < 1e-10 * lap.max_abs().max(1.0));
        }
    }

    #[test]
    fn variable_flux_examples() {
        let g = rect();
        let sp = Spectral::new(g);
        let mu = random_band_limited(g, 3);
        let one = Field::constant(g, 1.0);
        let lap = sp.laplacian(&mu).unwrap();
        let flux = sp.variable_flux_div(&one, &mu, false).unwrap();
        assert!(flux.max_abs_diff(&lap) < 1e-10 * lap.max_abs().max(1.0));
        assert!(
            sp.variable_flux_div(&one, &Field::constant(g, 3.0), true)
                .unwrap()
                .max_abs()
                < 1e-12
        );
        let k = 2.0 * PI / g.lx();
        let m = Field::from_fn(g, |x, _| 1.0 + 0.5 * (k * x).sin());
        let c = Field::from_fn(g, |x, _| (k * x).cos());
        for dealias in [false, true] {
            let d = sp.variable_flux_div(&m, &c, dealias).unwrap();
            assert!(d.integral().abs() < 1e-10);
        }
        let neg = Field::constant(g, -0.1);
        assert!(sp.variable_flux_div(&neg, &c, false).is_err());
    }

    #[test]
    fn parseval() {
        let g = rect();
        let sp = Spectral::new(g);
        let f = Field::from_fn(g, |x, y| (x * 2.0).exp().sin() + y);
        let s = sp.forward(&f).unwrap();
        let phys: f64 = f.values().iter().map(|v| v * v).sum::<f64>() * g.cell_area();
        let spec: f64 =
            s.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>() / g.len() as f64 * g.cell_area();
        assert!(((phys - spec) / phys).abs() < 1e-10);
    }

    #[test]
    fn conjugate_symmetry_of_real_input() {
        let g = rect();
        let sp = Spectral::new(g);
        let f = random_band_limited(g, 11);
        let s = sp.forward(&f).unwrap();
        for m in -5..5 {
            for n in -4..4 {
                let d = s.at(m, n) - s.at(-m, -n).conj();
                assert!(d.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let sp = Spectral::new(unit(16));
        assert!(sp.forward(&Field::zeros(unit(32))).is_err());
        assert!(Field::from_values(unit(16), vec![0.0; 10]).is_err());
    }
}
