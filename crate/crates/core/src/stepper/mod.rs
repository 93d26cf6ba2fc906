//! L1-in-time, linearly stabilized, semi-implicit pseudo-spectral integration.
//!
//! With `c₀ = τ^{−α}/Γ(2−α)` and the far-history term `H^n`, the constant
//! mobility step solves per wavenumber
//!
//! ```text
//! (c₀ + ε²|k|⁴ + s|k|²) û^n = c₀ û^{n−1} − Ĥ^n − |k|² F'(u^{n−1})^ + s|k|² û^{n−1}
//! ```
//!
//! and the one-sided step freezes `M = max(1 + u^{n−1}, 0)` and solves
//!
//! ```text
//! c₀ u^n − ∇·(M ∇(−ε²Δu^n + s u^n)) = c₀ u^{n−1} − H^n + ∇·(M ∇(F'(u^{n−1}) − s u^{n−1}))
//! ```
//!
//! with GMRES in spectral space, right-preconditioned by the constant
//! coefficient operator `c₀ + M̄(ε²|k|⁴ + s|k|²)`, `M̄ = max M`.
//!
//! The zero mode is advanced by `û₀^n = û₀^{n−1} − Ĥ₀^n / c₀`, which keeps the
//! mean exactly constant.

mod history;
mod krylov;

pub use history::{HistoryMode, HistoryStore};
pub use krylov::{gmres, GmresParams, KrylovOutcome};

use num_complex::Complex64;

use crate::chmodel::{chemical_potential, potential_deriv, MobilityKind, ModelParams};
use crate::error::{invalid, Error, Result};
use crate::field::{Field, FluxScratch, Spectral};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub tau: f64,
    pub t_end: f64,
    pub history: HistoryMode,
    /// Relative residual target of the degenerate-mobility solve.
    pub krylov_tol: f64,
    pub krylov_maxiter: usize,
    pub krylov_restart: usize,
    /// Apply the 2/3 rule to the nonlinear terms and project the initial state
    /// onto the retained band.
    pub dealias: bool,
}

pub const DEFAULT_KRYLOV_TOL: f64 = 1e-10;
pub const DEFAULT_KRYLOV_MAXITER: usize = 400;
pub const DEFAULT_KRYLOV_RESTART: usize = 40;

impl SchemeConfig {
    pub fn new(tau: f64, t_end: f64, history: HistoryMode) -> Self {
        Self {
            tau,
            t_end,
            history,
            krylov_tol: DEFAULT_KRYLOV_TOL,
            krylov_maxiter: DEFAULT_KRYLOV_MAXITER,
            krylov_restart: DEFAULT_KRYLOV_RESTART,
            dealias: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return invalid(format!("time step must be positive, got {}", self.tau));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return invalid(format!("t_end must be >= 0, got {}", self.t_end));
        }
        if self.t_end > 0.0 && self.t_end < self.tau * (1.0 - 1e-12) {
            return invalid("time step exceeds t_end");
        }
        if !(self.krylov_tol > 0.0 && self.krylov_tol <= 1e-8) {
            return invalid(format!(
                "krylov_tol must lie in (0, 1e-8], got {}",
                self.krylov_tol
            ));
        }
        if self.krylov_maxiter == 0 || self.krylov_restart == 0 {
            return invalid("krylov_maxiter and krylov_restart must be positive");
        }
        if let HistoryMode::Soe { tol } = self.history {
            if !(1e-12..=1e-3).contains(&tol) {
                return invalid(format!(
                    "SOE tolerance must lie in [1e-12, 1e-3], got {tol}"
                ));
            }
        }
        Ok(())
    }

    /// Number of steps to reach `t_end`, rounded to the nearest integer.
    pub fn n_steps(&self) -> usize {
        (self.t_end / self.tau).round() as usize
    }
}

/// Simulation state: current field, its spectrum and the L1 memory.
#[derive(Debug, Clone)]
pub struct SolverState {
    u: Field,
    u_hat: Vec<C>,
    history: HistoryStore,
    step_index: usize,
    tau: f64,
    params: ModelParams,
    sp: Spectral,
    k2: Vec<f64>,
    leading: f64,
    krylov: GmresParams,
    dealias: bool,
    last_krylov: Option<KrylovOutcome>,
}

impl SolverState {
    pub fn new(init: Field, params: ModelParams, scheme: &SchemeConfig) -> Result<Self> {
        scheme.validate()?;
        let grid = *init.grid();
        if !init.is_finite() {
            return invalid("initial field contains non-finite values");
        }
        params.check_resolution(&grid);
        let sp = Spectral::new(grid);
        let mut u_hat = vec![C::default(); grid.len()];
        sp.forward_real(init.values(), &mut u_hat);
        let u = if scheme.dealias {
            sp.dealias_in_place(&mut u_hat);
            let mut buf = u_hat.clone();
            let mut vals = vec![0.0; grid.len()];
            sp.inverse_real(&mut buf, &mut vals);
            Field::from_values(grid, vals)?
        } else {
            init
        };
        let history = HistoryStore::new(
            scheme.history,
            params.order,
            scheme.tau,
            scheme.n_steps(),
            &u_hat,
        )?;
        Ok(Self {
            u,
            k2: sp.k2_table(),
            u_hat,
            history,
            step_index: 0,
            tau: scheme.tau,
            leading: params.order.l1_leading(scheme.tau),
            params,
            sp,
            krylov: GmresParams {
                tol: scheme.krylov_tol,
                max_iter: scheme.krylov_maxiter,
                restart: scheme.krylov_restart,
            },
            dealias: scheme.dealias,
            last_krylov: None,
        })
    }

    pub fn u(&self) -> &Field {
        &self.u
    }

    pub fn u_hat(&self) -> &[C] {
        &self.u_hat
    }

    pub fn history(&self) -> &HistoryStore {
        &self.history
    }

    pub fn step_index(&self) -> usize {
        self.step_index
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn time(&self) -> f64 {
        self.step_index as f64 * self.tau
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn spectral(&self) -> &Spectral {
        &self.sp
    }

    /// Iteration count and residual of the most recent degenerate solve.
    pub fn last_krylov(&self) -> Option<KrylovOutcome> {
        self.last_krylov
    }

    pub fn mass(&self) -> f64 {
        self.u.mean()
    }

    /// `μ = −ε²Δu + F'(u)` of the current state.
    pub fn chemical_potential(&self) -> Result<Field> {
        chemical_potential(&self.sp, &self.u, &self.params)
    }

    /// Advances one step with the scheme matching the mobility law.
    pub fn step(&mut self) -> Result<()> {
        match self.params.mobility {
            MobilityKind::Constant => self.step_constant(),
            MobilityKind::OneSided => self.step_degenerate(),
        }
    }

    fn begin_step(&mut self) -> Result<Vec<C>> {
        if !self.history.has_capacity() {
            return invalid(format!(
                "history was sized for {} steps; cannot advance further",
                self.step_index
            ));
        }
        let mut far = vec![C::default(); self.u_hat.len()];
        self.history.far_history(&mut far);
        Ok(far)
    }

    /// Spectrum of `F'(u^{n−1})`, dealiased when configured.
    fn nonlinear_hat(&self) -> Vec<C> {
        let vals: Vec<f64> = self
            .u
            .values()
            .iter()
            .map(|&v| potential_deriv(v))
            .collect();
        let mut out = vec![C::default(); vals.len()];
        self.sp.forward_real(&vals, &mut out);
        if self.dealias {
            self.sp.dealias_in_place(&mut out);
        }
        out
    }

    fn finish_step(&mut self, mut new_hat: Vec<C>, far0: C) -> Result<()> {
        new_hat[0] = self.u_hat[0] - far0 / self.leading;
        self.history.push(&new_hat, &self.u_hat);
        let mut buf = new_hat.clone();
        self.sp.inverse_real(&mut buf, self.u.values_mut());
        self.u_hat = new_hat;
        self.step_index += 1;
        if !self.u.is_finite() {
            return Err(Error::Divergence {
                step: self.step_index,
                t: self.time(),
            });
        }
        Ok(())
    }

    pub fn step_constant(&mut self) -> Result<()> {
        if self.params.mobility != MobilityKind::Constant {
            return invalid("step_constant requires constant mobility");
        }
        let far = self.begin_step()?;
        let nl = self.nonlinear_hat();
        let (c0, e2, s) = (
            self.leading,
            self.params.epsilon.powi(2),
            self.params.stabilization,
        );
        let new_hat: Vec<C> = (0..far.len())
            .map(|i| {
                let k2 = self.k2[i];
                let prev = self.u_hat[i];
                let rhs = c0 * prev - far[i] - k2 * nl[i] + s * k2 * prev;
                rhs / (c0 + e2 * k2 * k2 + s * k2)
            })
            .collect();
        self.finish_step(new_hat, far[0])
    }

    pub fn step_degenerate(&mut self) -> Result<()> {
        if self.params.mobility != MobilityKind::OneSided {
            return invalid("step_degenerate requires one-sided mobility");
        }
        let m: Vec<f64> = self
            .u
            .values()
            .iter()
            .map(|&v| MobilityKind::OneSided.eval(v))
            .collect();
        self.step_with_mobility(&m)
    }

    /// Variable-mobility step with a given frozen mobility field.
    pub(crate) fn step_with_mobility(&mut self, m: &[f64]) -> Result<()> {
        let far = self.begin_step()?;
        let nl = self.nonlinear_hat();
        let n = far.len();
        let (c0, e2, s) = (
            self.leading,
            self.params.epsilon.powi(2),
            self.params.stabilization,
        );
        let dealias = self.dealias;
        let sp = &self.sp;
        let k2 = &self.k2;
        let mut scratch = FluxScratch::new(n);

        // explicit flux ∇·(M∇(F' − s u^{n−1}))
        let explicit: Vec<C> = nl.iter().zip(&self.u_hat).map(|(f, u)| f - s * u).collect();
        let mut flux = vec![C::default(); n];
        sp.flux_div_hat(m, &explicit, dealias, &mut scratch, &mut flux);
        let b: Vec<C> = (0..n)
            .map(|i| c0 * self.u_hat[i] - far[i] + flux[i])
            .collect();

        let m_bar = m.iter().fold(0.0f64, |a, &v| a.max(v));
        let symbol: Vec<f64> = k2.iter().map(|&q| e2 * q + s).collect();
        let precond: Vec<f64> = k2
            .iter()
            .map(|&q| 1.0 / (c0 + m_bar * (e2 * q * q + s * q)))
            .collect();

        let mut mu = vec![C::default(); n];
        let mut div = vec![C::default(); n];
        let apply = |x: &[C], out: &mut [C]| {
            for i in 0..n {
                mu[i] = symbol[i] * x[i];
            }
            sp.flux_div_hat(m, &mu, dealias, &mut scratch, &mut div);
            for i in 0..n {
                out[i] = c0 * x[i] - div[i];
            }
        };
        let pre = |v: &[C], out: &mut [C]| {
            for i in 0..n {
                out[i] = v[i] * precond[i];
            }
        };
        let mut x = self.u_hat.clone();
        let outcome = gmres(apply, pre, &b, &mut x, self.krylov);
        self.last_krylov = Some(outcome);
        if !outcome.converged {
            return Err(Error::KrylovNotConverged {
                step: self.step_index + 1,
                t: self.time() + self.tau,
                residual: outcome.residual,
                iterations: outcome.iterations,
            });
        }
        self.finish_step(x, far[0])
    }
}

/// Advances `init` to `config.t_end`, calling `sink` on the initial state and
/// after every step. The sink decides its own output cadence.
pub fn run<F>(
    config: &SchemeConfig,
    init: Field,
    params: ModelParams,
    mut sink: F,
) -> Result<SolverState>
where
    F: FnMut(&SolverState) -> Result<()>,
{
    let mut state = SolverState::new(init, params, config)?;
    sink(&state)?;
    let n = config.n_steps();
    for _ in 0..n {
        state.step()?;
        sink(&state)?;
        if state.step_index % 1000 == 0 {
            log::debug!("step {} / {n}, t = {}", state.step_index, state.time());
        }
    }
    Ok(state)
}
