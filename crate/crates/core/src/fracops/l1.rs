use super::{gamma, FractionalOrder};
use crate::error::{invalid, Result};

/// L1 weights `a_j = (j+1)^{1-α} - j^{1-α}`, `j = 0..n-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Weights(Vec<f64>);

impl L1Weights {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, j: usize) -> f64 {
        self.0[j]
    }
}

pub fn l1_weights(order: FractionalOrder, n: usize) -> L1Weights {
    let beta = 1.0 - order.alpha();
    let w = (0..n)
        .map(|j| {
            if j == 0 {
                1.0
            } else if beta == 0.0 {
                0.0
            } else {
                // (j+1)^β - j^β without cancellation for large j.
                let jf = j as f64;
                jf.powf(beta) * (beta * (1.0 / jf).ln_1p()).exp_m1()
            }
        })
        .collect();
    L1Weights(w)
}

/// Samples `v_j = v(j τ)`, `j = 0..=n`, on a uniform grid starting at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarHistory {
    tau: f64,
    values: Vec<f64>,
}

impl ScalarHistory {
    pub fn new(tau: f64, values: Vec<f64>) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return invalid(format!("time step must be positive, got {tau}"));
        }
        Ok(Self { tau, values })
    }

    pub fn from_fn(tau: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(tau, (0..=n).map(|j| f(j as f64 * tau)).collect())
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Index of the last sample.
    pub fn last_index(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn final_time(&self) -> f64 {
        self.last_index() as f64 * self.tau
    }

    pub fn push(&mut self, v: f64) {
        self.values.push(v);
    }

    fn check_spacing(&self, tau: f64) -> Result<()> {
        if ((tau - self.tau) / self.tau).abs() > 1e-12 {
            return invalid(format!(
                "history spacing {} does not match requested step {tau}",
                self.tau
            ));
        }
        Ok(())
    }
}

/// L1 approximation of the Caputo derivative at the last sample of `hist`.
pub fn caputo_l1(order: FractionalOrder, hist: &ScalarHistory, tau: f64) -> Result<f64> {
    hist.check_spacing(tau)?;
    let n = hist.last_index();
    if n < 1 {
        return invalid("Caputo derivative needs at least two samples");
    }
    let a = l1_weights(order, n);
    Ok(l1_sum(order, a.as_slice(), hist.values(), n, tau))
}

fn l1_sum(order: FractionalOrder, a: &[f64], v: &[f64], n: usize, tau: f64) -> f64 {
    let sum: f64 = (0..n).map(|j| a[j] * (v[n - j] - v[n - j - 1])).sum();
    order.l1_leading(tau) * sum
}

/// L1 Caputo derivative at every sample `t_1..t_n` (entry 0 is the value at t = 0, i.e. zero).
pub fn caputo_l1_series(order: FractionalOrder, hist: &ScalarHistory) -> Vec<f64> {
    let n = hist.last_index();
    let a = l1_weights(order, n.max(1));
    let v = hist.values();
    let mut out = vec![0.0; n + 1];
    for (m, o) in out.iter_mut().enumerate().skip(1) {
        *o = l1_sum(order, a.as_slice(), v, m, hist.tau());
    }
    out
}

/// Riemann-Liouville integral `I^γ v(t_n) = (1/Γ(γ)) ∫_0^{t_n} (t_n - s)^{γ-1} v(s) ds`
/// by product integration of the piecewise-linear interpolant of `v`.
///
/// `γ = 1` reduces to the cumulative trapezoidal rule.
pub fn rl_integral(gamma_order: f64, hist: &ScalarHistory, tau: f64) -> Result<f64> {
    if !(gamma_order > 0.0 && gamma_order <= 1.0) {
        return invalid(format!(
            "integral order must lie in (0, 1], got {gamma_order}"
        ));
    }
    hist.check_spacing(tau)?;
    let v = hist.values();
    let n = hist.last_index();
    if v.is_empty() {
        return invalid("empty history");
    }
    if n == 0 {
        return Ok(0.0);
    }
    let g1 = gamma_order + 1.0;
    let p = |x: f64| if x <= 0.0 { 0.0 } else { x.powf(g1) };
    let nf = n as f64;
    let mut acc = (p(nf - 1.0) - (nf - 1.0 - gamma_order) * nf.powf(gamma_order)) * v[0];
    for (j, &vj) in v.iter().enumerate().take(n).skip(1) {
        let d = (n - j) as f64;
        acc += (p(d + 1.0) - 2.0 * p(d) + p(d - 1.0)) * vj;
    }
    acc += v[n];
    Ok(tau.powf(gamma_order) / gamma(gamma_order + 2.0) * acc)
}

/// Compares both sides of the time-rescaling identity
/// `∂_t^α [v(c t)] = c^α (∂^α v)(c t)`.
///
/// `hist` samples `v` on `[0, T]` with spacing `τ`. The left side is the L1
/// derivative of `w(t) = v(c t)`, whose samples on the grid of spacing `τ / c`
/// coincide with those of `v`, evaluated at `t = T / c`; the right side is
/// `c^α` times the L1 derivative of `v` at `T`.
pub fn rescale_check(order: FractionalOrder, hist: &ScalarHistory, c: f64) -> Result<(f64, f64)> {
    if !(c > 0.0 && c.is_finite()) {
        return invalid(format!("rescaling factor must be positive, got {c}"));
    }
    let tau = hist.tau();
    let rescaled = ScalarHistory::new(tau / c, hist.values().to_vec())?;
    let lhs = caputo_l1(order, &rescaled, tau / c)?;
    let rhs = c.powf(order.alpha()) * caputo_l1(order, hist, tau)?;
    Ok((lhs, rhs))
}
