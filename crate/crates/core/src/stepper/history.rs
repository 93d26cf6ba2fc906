//! Per-mode memory of the L1 Caputo derivative.

use num_complex::Complex64;

use crate::error::Result;
use crate::fracops::soe::SoeRecurrence;
use crate::fracops::{l1_weights, FractionalOrder, SoeKernel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HistoryMode {
    /// Every past spectrum is kept and the full L1 sum is formed each step.
    Direct,
    /// Sum-of-exponentials compression with target relative kernel error `tol`.
    Soe { tol: f64 },
}

/// Past states of a spectral field, from which the far-history part
/// `H^n = c₀ Σ_{j≥1} a_j (û^{n−j} − û^{n−j−1})` of the L1 derivative is formed.
#[derive(Debug, Clone)]
pub enum HistoryStore {
    Direct {
        leading: f64,
        weights: Vec<f64>,
        order: FractionalOrder,
        /// `û^0 … û^n`.
        states: Vec<Vec<Complex64>>,
    },
    Soe {
        tol: f64,
        modes: usize,
        rec: SoeRecurrence,
        /// Mode-major per wavenumber: `acc[k * modes + i]`.
        acc: Vec<Complex64>,
        /// Latest increment `û^n − û^{n−1}`, not yet folded into `acc`.
        pending: Vec<Complex64>,
        steps: usize,
        max_steps: usize,
    },
}

impl HistoryStore {
    /// Store for a run of at most `max_steps` steps of size `tau`, starting from `u0_hat`.
    pub fn new(
        mode: HistoryMode,
        order: FractionalOrder,
        tau: f64,
        max_steps: usize,
        u0_hat: &[Complex64],
    ) -> Result<Self> {
        match mode {
            HistoryMode::Direct => Ok(HistoryStore::Direct {
                leading: order.l1_leading(tau),
                weights: Vec::new(),
                order,
                states: vec![u0_hat.to_vec()],
            }),
            HistoryMode::Soe { tol } => {
                let horizon = (max_steps.max(2) as f64) * tau * (1.0 + 1e-9);
                let kernel = SoeKernel::build(order, tau, horizon, tol)?;
                let rec = kernel.recurrence(order, tau)?;
                let modes = rec.len();
                log::debug!("SOE history: {modes} exponentials on [{tau}, {horizon}]");
                Ok(HistoryStore::Soe {
                    tol,
                    modes,
                    rec,
                    acc: vec![Complex64::default(); u0_hat.len() * modes],
                    pending: vec![Complex64::default(); u0_hat.len()],
                    steps: 0,
                    max_steps: max_steps.max(2),
                })
            }
        }
    }

    pub fn mode(&self) -> HistoryMode {
        match self {
            HistoryStore::Direct { .. } => HistoryMode::Direct,
            HistoryStore::Soe { tol, .. } => HistoryMode::Soe { tol: *tol },
        }
    }

    /// Number of completed steps recorded.
    pub fn steps(&self) -> usize {
        match self {
            HistoryStore::Direct { states, .. } => states.len() - 1,
            HistoryStore::Soe { steps, .. } => *steps,
        }
    }

    /// Number of stored spectra (direct) or exponential modes (SOE).
    pub fn len(&self) -> usize {
        match self {
            HistoryStore::Direct { states, .. } => states.len(),
            HistoryStore::Soe { modes, .. } => *modes,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether another step fits inside the horizon the store was built for.
    pub fn has_capacity(&self) -> bool {
        match self {
            HistoryStore::Direct { .. } => true,
            HistoryStore::Soe {
                steps, max_steps, ..
            } => steps < max_steps,
        }
    }

    /// Writes `H^{n+1}` for the upcoming step into `out`. For the SOE store
    /// this folds the pending increment into the accumulators.
    pub fn far_history(&mut self, out: &mut [Complex64]) {
        match self {
            HistoryStore::Direct {
                leading,
                weights,
                order,
                states,
            } => {
                // upcoming level n+1 = states.len()
                let n1 = states.len();
                if weights.len() < n1 {
                    *weights = l1_weights(*order, 2 * n1).as_slice().to_vec();
                }
                out.iter_mut().for_each(|v| *v = Complex64::default());
                for j in 1..n1 {
                    let w = *leading * weights[j];
                    if w == 0.0 {
                        continue;
                    }
                    let (hi, lo) = (&states[n1 - j], &states[n1 - j - 1]);
                    for ((o, a), b) in out.iter_mut().zip(hi).zip(lo) {
                        *o += w * (a - b);
                    }
                }
            }
            HistoryStore::Soe {
                modes,
                rec,
                acc,
                pending,
                ..
            } => {
                let m = *modes;
                if m == 0 {
                    out.iter_mut().for_each(|v| *v = Complex64::default());
                    return;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    let p = pending[k];
                    let row = &mut acc[k * m..(k + 1) * m];
                    let mut far = Complex64::default();
                    let coeffs = rec.decay.iter().zip(&rec.gain).zip(&rec.weight);
                    for (r, ((&d, &g), &w)) in row.iter_mut().zip(coeffs) {
                        let a = d * *r + g * p;
                        *r = a;
                        far += w * a;
                    }
                    *o = far;
                }
                pending.iter_mut().for_each(|v| *v = Complex64::default());
            }
        }
    }

    /// Records the new level after a completed step.
    pub fn push(&mut self, new_hat: &[Complex64], prev_hat: &[Complex64]) {
        match self {
            HistoryStore::Direct { states, .. } => states.push(new_hat.to_vec()),
            HistoryStore::Soe { pending, steps, .. } => {
                for ((p, a), b) in pending.iter_mut().zip(new_hat).zip(prev_hat) {
                    *p = a - b;
                }
                *steps += 1;
            }
        }
    }
}
