//! Sum-of-exponentials approximation of the Caputo kernel and the resulting
//! fast history recurrence.
//!
//! The kernel is written as a Laplace integral,
//! `t^{-α} = (1/Γ(α)) ∫_0^∞ s^{α-1} e^{-s t} ds`, and discretized with
//! - a Gauss-Jacobi rule (weight `s^{α-1}`) on `[0, 1/t_max]`, and
//! - Gauss-Legendre panels in `ln s` on the dyadic intervals
//!   `[2^j / t_max, 2^{j+1} / t_max]` up to the cutoff where `e^{-s t_min}`
//!   is negligible.
//!
//! The common panel order is raised until a dense log-spaced sample of the
//! window certifies the requested relative tolerance.

use super::{gamma, gauss_jacobi, gauss_legendre, FractionalOrder};
use crate::error::{invalid, Error, Result};

/// Number of log-spaced points used to certify a kernel.
pub const CERTIFY_SAMPLES: usize = 10_000;

/// Mode budget constant `C` in `modes ≤ C · ln(t_max/t_min) · ln(1/tol)`.
pub const MODE_BUDGET_CONSTANT: f64 = 1.0;

const MAX_PANEL_ORDER: usize = 48;
const PRUNE_RELATIVE: f64 = 1e-18;

#[derive(Debug, Clone, PartialEq)]
pub struct SoeKernel {
    alpha: f64,
    weights: Vec<f64>,
    exponents: Vec<f64>,
    t_min: f64,
    t_max: f64,
    tol: f64,
    achieved: f64,
}

impl SoeKernel {
    pub fn build(order: FractionalOrder, t_min: f64, t_max: f64, tol: f64) -> Result<Self> {
        if !(t_min > 0.0 && t_max > t_min && t_max.is_finite()) {
            return invalid(format!(
                "SOE window must satisfy 0 < t_min < t_max, got [{t_min}, {t_max}]"
            ));
        }
        if !(1e-12..=1e-3).contains(&tol) {
            return invalid(format!(
                "SOE tolerance must lie in [1e-12, 1e-3], got {tol}"
            ));
        }
        let alpha = order.alpha();
        let budget = Self::mode_budget(t_min, t_max, tol);
        let mut best = f64::INFINITY;
        for n in 2..=MAX_PANEL_ORDER {
            let (weights, exponents) = assemble(alpha, t_min, t_max, tol, n);
            if weights.len() > budget {
                break;
            }
            let mut kernel = Self {
                alpha,
                weights,
                exponents,
                t_min,
                t_max,
                tol,
                achieved: f64::NAN,
            };
            let err = kernel.max_relative_error(CERTIFY_SAMPLES);
            kernel.achieved = err;
            if err <= tol {
                return Ok(kernel);
            }
            best = best.min(err);
        }
        Err(Error::SoeUnattainable {
            tol,
            achieved: best,
            max_modes: budget,
        })
    }

    /// Largest mode count accepted for a window and tolerance.
    pub fn mode_budget(t_min: f64, t_max: f64, tol: f64) -> usize {
        let c = MODE_BUDGET_CONSTANT * (t_max / t_min).ln().max(1.0) * (1.0 / tol).ln();
        // Small windows still need a handful of modes.
        (c.ceil() as usize).max(32)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.weights
            .iter()
            .zip(&self.exponents)
            .map(|(w, s)| w * (-s * t).exp())
            .sum()
    }

    /// Sup of `|Σ w_i e^{-s_i t} - t^{-α}| / t^{-α}` over `samples` log-spaced points.
    pub fn max_relative_error(&self, samples: usize) -> f64 {
        let samples = samples.max(2);
        let (lo, hi) = (self.t_min.ln(), self.t_max.ln());
        (0..samples)
            .map(|i| {
                let t = (lo + (hi - lo) * i as f64 / (samples - 1) as f64).exp();
                let exact = t.powf(-self.alpha);
                ((self.eval(t) - exact) / exact).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn window(&self) -> (f64, f64) {
        (self.t_min, self.t_max)
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Error measured at certification time.
    pub fn achieved(&self) -> f64 {
        self.achieved
    }

    /// Per-mode coefficients of the L1 far-history recurrence at step `tau`.
    pub fn recurrence(&self, order: FractionalOrder, tau: f64) -> Result<SoeRecurrence> {
        if (order.alpha() - self.alpha).abs() > 0.0 {
            return invalid("kernel was built for a different fractional order");
        }
        if tau < self.t_min * (1.0 - 1e-12) {
            return invalid(format!(
                "time step {tau} lies below the kernel window start {}",
                self.t_min
            ));
        }
        if order.is_classical() {
            return Ok(SoeRecurrence::default());
        }
        let scale = 1.0 / order.gamma_1ma();
        let mut rec = SoeRecurrence::default();
        for (&w, &s) in self.weights.iter().zip(&self.exponents) {
            let x = s * tau;
            let decay = (-x).exp();
            let frac = if x == 0.0 { 1.0 } else { -(-x).exp_m1() / x };
            rec.decay.push(decay);
            rec.gain.push(decay * frac);
            rec.weight.push(w * scale);
        }
        Ok(rec)
    }
}

fn assemble(alpha: f64, t_min: f64, t_max: f64, tol: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let inv_gamma = 1.0 / gamma(alpha);
    let s0 = 1.0 / t_max;
    let mut weights = Vec::new();
    let mut exponents = Vec::new();

    // [0, s0]: s = s0 (1 + ξ)/2, ∫ s^{α-1} f ds = (s0/2)^α Σ w_i f(s_i).
    let jac = gauss_jacobi(n, 0.0, alpha - 1.0);
    let jscale = (0.5 * s0).powf(alpha) * inv_gamma;
    for (xi, w) in jac.nodes.iter().zip(&jac.weights) {
        exponents.push(0.5 * s0 * (1.0 + xi));
        weights.push(jscale * w);
    }

    // Dyadic panels in y = ln s, integrand e^{α y} e^{-t e^y}.
    let x_hi = tail_cutoff(alpha, tol);
    let s_hi = x_hi / t_min;
    let panels = (s_hi / s0).log2().ceil().max(1.0) as usize;
    let leg = gauss_legendre(n);
    let h = std::f64::consts::LN_2;
    for p in 0..panels {
        let y0 = s0.ln() + p as f64 * h;
        for (xi, w) in leg.nodes.iter().zip(&leg.weights) {
            let y = y0 + 0.5 * h * (1.0 + xi);
            exponents.push(y.exp());
            weights.push(0.5 * h * w * (alpha * y).exp() * inv_gamma);
        }
    }

    let floor = PRUNE_RELATIVE * t_min.powf(-alpha);
    let (w, s): (Vec<f64>, Vec<f64>) = weights
        .into_iter()
        .zip(exponents)
        .filter(|(w, s)| w * (-s * t_min).exp() > floor)
        .unzip();
    (w, s)
}

/// `x` with `Γ(α, x)/Γ(α) ≤ tol/20`, using `Γ(α, x) ≤ x^{α-1} e^{-x}` for `α ≤ 1`.
fn tail_cutoff(alpha: f64, tol: f64) -> f64 {
    let g = gamma(alpha);
    let mut x: f64 = 1.0;
    while x.powf(alpha - 1.0) * (-x).exp() / g > 0.05 * tol {
        x += 0.25;
    }
    x
}

/// Per-mode coefficients of `U_i^n = decay_i U_i^{n-1} + gain_i (v^{n-1} - v^{n-2})`;
/// the far history is `Σ weight_i U_i^n`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SoeRecurrence {
    pub decay: Vec<f64>,
    pub gain: Vec<f64>,
    pub weight: Vec<f64>,
}

impl SoeRecurrence {
    pub fn len(&self) -> usize {
        self.decay.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decay.is_empty()
    }
}

/// Scalar fast L1 Caputo derivative: the last interval is integrated directly,
/// older intervals through exponentially decaying accumulators.
#[derive(Debug, Clone)]
pub struct FastCaputo {
    leading: f64,
    rec: SoeRecurrence,
    acc: Vec<f64>,
    pending: f64,
}

impl FastCaputo {
    pub fn new(order: FractionalOrder, kernel: &SoeKernel, tau: f64) -> Result<Self> {
        let rec = kernel.recurrence(order, tau)?;
        Ok(Self {
            leading: order.l1_leading(tau),
            acc: vec![0.0; rec.len()],
            rec,
            pending: 0.0,
        })
    }

    /// Far-history part of the derivative at the next step, before `v_new` is known.
    pub fn far_history(&self) -> f64 {
        let r = &self.rec;
        (0..r.len())
            .map(|i| r.weight[i] * (r.decay[i] * self.acc[i] + r.gain[i] * self.pending))
            .sum()
    }

    /// Advances one step and returns the L1 derivative at the new time level.
    pub fn step(&mut self, v_new: f64, v_prev: f64) -> f64 {
        let r = &self.rec;
        let mut far = 0.0;
        for i in 0..r.len() {
            self.acc[i] = r.decay[i] * self.acc[i] + r.gain[i] * self.pending;
            far += r.weight[i] * self.acc[i];
        }
        let inc = v_new - v_prev;
        self.pending = inc;
        self.leading * inc + far
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracops::{caputo_l1, ScalarHistory};

    fn ord(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn certified_on_dense_sample() {
        let k = SoeKernel::build(ord(0.5), 1e-3, 10.0, 1e-8).unwrap();
        assert!(k.max_relative_error(CERTIFY_SAMPLES) <= 1e-8);
        assert!(k.len() <= SoeKernel::mode_budget(1e-3, 10.0, 1e-8));
    }

    #[test]
    fn looser_tolerance_uses_fewer_modes() {
        let loose = SoeKernel::build(ord(0.9), 1e-3, 10.0, 1e-6).unwrap();
        let tight = SoeKernel::build(ord(0.9), 1e-3, 10.0, 1e-10).unwrap();
        assert!(
            loose.len() < tight.len(),
            "{} vs {}",
            loose.len(),
            tight.len()
        );
    }

    #[test]
    fn rejects_bad_windows() {
        assert!(SoeKernel::build(ord(0.5), 1.0, 1.0, 1e-8).is_err());
        assert!(SoeKernel::build(ord(0.5), 0.0, 1.0, 1e-8).is_err());
        assert!(SoeKernel::build(ord(0.5), 1e-3, 1.0, 1e-2).is_err());
    }

    #[test]
    fn fast_matches_direct_on_smooth_history() {
        let o = ord(0.6);
        let tau = 1e-2;
        let n = 400;
        let k = SoeKernel::build(o, tau, n as f64 * tau, 1e-10).unwrap();
        let mut fast = FastCaputo::new(o, &k, tau).unwrap();
        let f = |t: f64| (2.0 * t).sin() + t * t;
        let mut hist = ScalarHistory::new(tau, vec![f(0.0)]).unwrap();
        for j in 1..=n {
            let v = f(j as f64 * tau);
            let prev = *hist.values().last().unwrap();
            hist.push(v);
            let got = fast.step(v, prev);
            if j % 50 == 0 {
                let want = caputo_l1(o, &hist, tau).unwrap();
                assert!(
                    (got - want).abs() <= 1e-8 * (want.abs() + 1.0),
                    "step {j}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn classical_order_has_no_far_history() {
        let o = ord(1.0);
        let k = SoeKernel::build(o, 1e-3, 1.0, 1e-8).unwrap();
        let mut fast = FastCaputo::new(o, &k, 1e-3).unwrap();
        fast.step(1.0, 0.0);
        fast.step(3.0, 1.0);
        assert_eq!(fast.far_history(), 0.0);
        assert_eq!(fast.step(4.0, 3.0), 1.0 / 1e-3);
    }

    #[test]
    fn constant_history_gives_zero() {
        let o = ord(0.3);
        let k = SoeKernel::build(o, 0.1, 10.0, 1e-8).unwrap();
        let mut fast = FastCaputo::new(o, &k, 0.1).unwrap();
        for _ in 0..50 {
            assert_eq!(fast.step(2.5, 2.5), 0.0);
        }
    }
}
