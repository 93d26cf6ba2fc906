//! Independent ground truths: the tanh inner profile and its constants,
//! closed-form fractional calculus of monomials, brute-force Caputo
//! quadrature and a classical Cahn-Hilliard reference step.
//!
//! Nothing here calls into `fracops` or `stepper`; Γ comes from `statrs` and
//! the reference step plans its own FFTs.

mod quad;

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rustfft::FftPlanner;
use statrs::function::gamma::gamma;

use crate::chmodel::ModelParams;
use crate::error::{invalid, Result};
use crate::field::Field;

pub use quad::{gauss_kronrod_adaptive, tanh_sinh};

/// Line tension integral `∫ U'(z)² dz` of the tanh profile, `2√2/3`.
pub const S: f64 = 2.0 * SQRT_2 / 3.0;
/// Jump `u⁺ − u⁻` across the interface.
pub const U_JUMP: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileConstants {
    pub s: f64,
    pub u_jump: f64,
}

impl ProfileConstants {
    pub const CLOSED_FORM: ProfileConstants = ProfileConstants {
        s: S,
        u_jump: U_JUMP,
    };

    /// Constants with `S` obtained by quadrature.
    pub fn by_quadrature() -> Self {
        Self {
            s: compute_s(),
            u_jump: U_JUMP,
        }
    }

    /// Interfacial energy per unit length, `S ε`.
    pub fn sigma_int(&self, epsilon: f64) -> f64 {
        self.s * epsilon
    }
}

/// `U(z) = tanh(z/√2)`.
pub fn tanh_profile(z: f64) -> f64 {
    (z / SQRT_2).tanh()
}

/// `U'(z) = sech²(z/√2)/√2`.
pub fn tanh_profile_deriv(z: f64) -> f64 {
    let c = (z / SQRT_2).cosh();
    1.0 / (SQRT_2 * c * c)
}

/// `U''(z) = −U(z) (1 − U²)`, i.e. `F'(U)`.
pub fn tanh_profile_second_deriv(z: f64) -> f64 {
    let u = tanh_profile(z);
    -u * (1.0 - u * u)
}

/// `∫_{−L}^{L} U'(z)² dz` by adaptive Gauss-Kronrod.
pub fn compute_s_on(half_width: f64) -> f64 {
    let f = |z: f64| tanh_profile_deriv(z).powi(2);
    // symmetric integrand; split at the origin so both halves see the peak at an endpoint
    2.0 * gauss_kronrod_adaptive(f, 0.0, half_width, 1e-16)
}

/// `S` by quadrature over `[−40, 40]`; the neglected tail is below 1e−40.
pub fn compute_s() -> f64 {
    compute_s_on(40.0)
}

/// `S` from the antiderivative `(tanh − tanh³/3)/√2` of `U'²`.
pub fn s_closed_form() -> f64 {
    let x: f64 = 1.0;
    2.0 * (x - x.powi(3) / 3.0) / SQRT_2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FracKind {
    /// Caputo derivative of order `α ∈ (0, 1]`.
    CaputoDeriv,
    /// Riemann-Liouville integral of order `γ > 0`.
    RlIntegral,
}

/// Fractional derivative or integral of `t^β` evaluated at `t`.
pub fn frac_power(kind: FracKind, order: f64, beta: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return invalid(format!("t must be positive, got {t}"));
    }
    match kind {
        FracKind::CaputoDeriv => {
            if !(order > 0.0 && order <= 1.0) {
                return invalid(format!("derivative order must lie in (0, 1], got {order}"));
            }
            if !(beta >= 1.0) {
                return invalid(format!("Caputo closed form needs beta >= 1, got {beta}"));
            }
            Ok(gamma(beta + 1.0) / gamma(beta + 1.0 - order) * t.powf(beta - order))
        }
        FracKind::RlIntegral => {
            if !(order > 0.0) {
                return invalid(format!("integral order must be positive, got {order}"));
            }
            if !(beta > -1.0) {
                return invalid(format!("RL closed form needs beta > -1, got {beta}"));
            }
            Ok(gamma(beta + 1.0) / gamma(beta + 1.0 + order) * t.powf(beta + order))
        }
    }
}

/// `(1/Γ(1−α)) ∫₀ᵗ v'(s) (t − s)^{−α} ds` by tanh-sinh quadrature with
/// `n_quad` nodes after the substitution `t − s = t x^{1/(1−α)}`, which
/// removes the kernel singularity. `dv` is the derivative of `v`.
pub fn brute_force_caputo(
    alpha: f64,
    dv: impl Fn(f64) -> f64,
    t: f64,
    n_quad: usize,
) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return invalid(format!("alpha must lie in (0, 1], got {alpha}"));
    }
    if n_quad < 1000 {
        return invalid(format!("n_quad must be at least 1000, got {n_quad}"));
    }
    if alpha == 1.0 {
        return Ok(dv(t));
    }
    let p = 1.0 / (1.0 - alpha);
    let integral = tanh_sinh(|x| dv(t - t * x.powf(p)), 0.0, 1.0, n_quad);
    Ok(t.powf(1.0 - alpha) / (1.0 - alpha) * integral / gamma(1.0 - alpha))
}

/// One classical stabilized backward-Euler step with unit mobility:
/// `(1/τ + ε²|k|⁴ + s|k|²) û^n = û^{n−1}/τ − |k|² F'(u^{n−1})^ + s|k|² û^{n−1}`.
pub fn classical_ch_step(u: &Field, p: &ModelParams, tau: f64) -> Result<Field> {
    if !(tau > 0.0) {
        return invalid(format!("time step must be positive, got {tau}"));
    }
    let g = *u.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let mut planner = FftPlanner::<f64>::new();
    let row_f = planner.plan_fft_forward(nx);
    let row_i = planner.plan_fft_inverse(nx);
    let col_f = planner.plan_fft_forward(ny);
    let col_i = planner.plan_fft_inverse(ny);

    // naive 2D transform: rows in place, columns via a gather buffer
    let fft2 = |data: &mut Vec<Complex64>, forward: bool| {
        let (r, c) = if forward {
            (&row_f, &col_f)
        } else {
            (&row_i, &col_i)
        };
        for row in data.chunks_mut(nx) {
            r.process(row);
        }
        let mut col = vec![Complex64::default(); ny];
        for i in 0..nx {
            for j in 0..ny {
                col[j] = data[j * nx + i];
            }
            c.process(&mut col);
            for j in 0..ny {
                data[j * nx + i] = col[j];
            }
        }
    };
    let wave = |i: usize, n: usize, l: f64| {
        let m = if 2 * i <= n {
            i as f64
        } else {
            i as f64 - n as f64
        };
        2.0 * PI * m / l
    };

    let mut uh: Vec<Complex64> = u.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut fh: Vec<Complex64> = u
        .values()
        .iter()
        .map(|&v| Complex64::new(v * v * v - v, 0.0))
        .collect();
    fft2(&mut uh, true);
    fft2(&mut fh, true);
    let e2 = p.epsilon * p.epsilon;
    let s = p.stabilization;
    for j in 0..ny {
        let ky = if ny == 1 { 0.0 } else { wave(j, ny, g.ly()) };
        for i in 0..nx {
            let kx = wave(i, nx, g.lx());
            let q = kx * kx + ky * ky;
            let idx = j * nx + i;
            let rhs = uh[idx] / tau - q * fh[idx] + s * q * uh[idx];
            uh[idx] = rhs / (1.0 / tau + e2 * q * q + s * q);
        }
    }
    fft2(&mut uh, false);
    let scale = 1.0 / (nx * ny) as f64;
    Field::from_values(g, uh.iter().map(|c| c.re * scale).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chmodel::MobilityKind;
    use crate::field::Grid2D;
    use crate::fracops::FractionalOrder;

    #[test]
    fn profile_values() {
        assert_eq!(tanh_profile(0.0), 0.0);
        assert_eq!(tanh_profile(50.0), 1.0);
        assert_eq!(tanh_profile(-50.0), -1.0);
    }

    #[test]
    fn profile_solves_the_inner_equation() {
        let mut worst: f64 = 0.0;
        for i in 0..=2000 {
            let z = -10.0 + 0.01 * i as f64;
            let u = tanh_profile(z);
            worst = worst.max((u * u * u - u - tanh_profile_second_deriv(z)).abs());
            // second derivative independently by differentiating U' = (1 − U²)/√2
            let d2 = -SQRT_2 * u * tanh_profile_deriv(z);
            worst = worst.max((u * u * u - u - d2).abs());
        }
        assert!(worst <= 1e-12, "{worst}");
    }

    #[test]
    fn s_by_quadrature_matches_closed_form() {
        assert!((compute_s() - S).abs() <= 1e-12);
        assert!((s_closed_form() - S).abs() <= 1e-15);
        assert!((compute_s_on(20.0) - compute_s_on(40.0)).abs() < 1e-14);
        let c = ProfileConstants::by_quadrature();
        assert!((c.sigma_int(0.05) - S * 0.05).abs() < 1e-14);
        assert_eq!(c.u_jump, 2.0);
    }

    #[test]
    fn frac_power_examples() {
        let c = frac_power(FracKind::CaputoDeriv, 0.5, 1.0, 1.0).unwrap();
        assert!((c - 2.0 / PI.sqrt()).abs() < 1e-14);
        assert!((frac_power(FracKind::RlIntegral, 1.0, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-14);
        assert!((frac_power(FracKind::CaputoDeriv, 1.0, 2.0, 1.0).unwrap() - 2.0).abs() < 1e-14);
        assert!(frac_power(FracKind::CaputoDeriv, 0.5, 0.5, 1.0).is_err());
        assert!(frac_power(FracKind::RlIntegral, 0.5, 1.0, 0.0).is_err());
    }

    #[test]
    fn brute_force_matches_closed_forms() {
        let v = brute_force_caputo(0.5, |t| 2.0 * t, 1.0, 2000).unwrap();
        assert!((v - 1.504_505_556_127_308).abs() < 1e-8, "{v}");
        assert_eq!(brute_force_caputo(0.3, |_| 0.0, 2.0, 1000).unwrap(), 0.0);
        for alpha in [0.25, 0.5, 0.75] {
            for beta in [1.0f64, 2.0, 3.0] {
                for t in [0.5, 1.0, 3.0] {
                    let got =
                        brute_force_caputo(alpha, |s| beta * s.powf(beta - 1.0), t, 2000).unwrap();
                    let want = frac_power(FracKind::CaputoDeriv, alpha, beta, t).unwrap();
                    assert!(
                        (got - want).abs() <= 1e-8 * want.abs(),
                        "{alpha} {beta} {t}: {got} vs {want}"
                    );
                }
            }
        }
        assert!(brute_force_caputo(0.5, |t| t, 1.0, 10).is_err());
    }

    fn params(eps: f64) -> ModelParams {
        ModelParams::new(
            eps,
            MobilityKind::Constant,
            2.0,
            FractionalOrder::new(1.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn classical_step_fixed_point_and_energy_decay() {
        let g = Grid2D::new(32, 32, 2.0 * PI, 2.0 * PI).unwrap();
        let p = params(0.2);
        let c = Field::constant(g, -0.4);
        let next = classical_ch_step(&c, &p, 0.1).unwrap();
        assert!(next.max_abs_diff(&c) < 1e-14);

        let mut x: u64 = 17;
        let mut u = Field::from_fn(g, |_, _| {
            x = x
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            0.1 * (2.0 * ((x >> 11) as f64 / (1u64 << 53) as f64) - 1.0)
        });
        let sp = crate::field::Spectral::new(g);
        let mut e = crate::chmodel::energy(&sp, &u, &p).unwrap().total;
        for _ in 0..100 {
            u = classical_ch_step(&u, &p, 0.05).unwrap();
            let e_new = crate::chmodel::energy(&sp, &u, &p).unwrap().total;
            assert!(e_new <= e * (1.0 + 1e-12), "{e_new} > {e}");
            e = e_new;
        }
    }
}
