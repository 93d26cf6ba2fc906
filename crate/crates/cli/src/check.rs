//! Self-contained invariant suite behind `tfche check`.

use std::f64::consts::{PI, TAU};

use tfche_core::chmodel::{energy, MobilityKind, ModelParams};
use tfche_core::field::{Field, Grid2D, Spectral};
use tfche_core::fracops::{caputo_l1, FastCaputo, FractionalOrder, ScalarHistory, SoeKernel};
use tfche_core::oracle::{classical_ch_step, compute_s, frac_power, s_closed_form, FracKind};
use tfche_core::stepper::{HistoryMode, SchemeConfig, SolverState};

use crate::config::{InitConfig, RunConfig};
use crate::init::{init_field, SplitMix64};
use crate::io::{gray_level, SnapshotFile};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type CheckFn = fn() -> Result<String, String>;

const CHECKS: &[(&str, CheckFn)] = &[
    ("l1_exact_on_linear_data", l1_exact_on_linear_data),
    ("l1_classical_limit", l1_classical_limit),
    ("soe_kernel_certified", soe_kernel_certified),
    ("soe_matches_direct_history", soe_matches_direct_history),
    ("fft_round_trip", fft_round_trip),
    ("parseval", parseval),
    ("laplacian_eigenfunction", laplacian_eigenfunction),
    ("operators_preserve_mass", operators_preserve_mass),
    ("classical_limit_stepper", classical_limit_stepper),
    ("mass_and_energy_short_runs", mass_and_energy_short_runs),
    ("profile_constant", profile_constant),
    ("prng_golden_values", prng_golden_values),
    ("snapshot_round_trip", snapshot_round_trip),
    ("config_round_trip", config_round_trip),
    ("pgm_gray_levels", pgm_gray_levels),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

pub fn run_checks() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(name, f)| {
            let (passed, detail) = match f() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckOutcome {
                name,
                passed,
                detail,
            }
        })
        .collect()
}

fn ensure(ok: bool, detail: String) -> Result<String, String> {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn core<T>(r: tfche_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn order(alpha: f64) -> FractionalOrder {
    FractionalOrder::new(alpha).expect("valid order")
}

fn random_field(grid: Grid2D, seed: u64, amplitude: f64) -> Field {
    let cfg = InitConfig {
        seed,
        amplitude,
        ..InitConfig::default()
    };
    init_field(&cfg, grid, 0.1).expect("random init")
}

fn l1_exact_on_linear_data() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for k in 1..=9 {
        let alpha = k as f64 / 10.0;
        for n in [1usize, 10, 1000] {
            let tau = 1.0 / n as f64;
            let hist = core(ScalarHistory::from_fn(tau, n, |t| 0.5 + 2.0 * t))?;
            let got = core(caputo_l1(order(alpha), &hist, tau))?;
            let want = 2.0 * core(frac_power(FracKind::CaputoDeriv, alpha, 1.0, 1.0))?;
            worst = worst.max((got - want).abs() / want);
        }
    }
    ensure(worst <= 1e-12, format!("max relative error {worst:.2e}"))
}

fn l1_classical_limit() -> Result<String, String> {
    let tau = 0.01;
    let hist = core(ScalarHistory::from_fn(tau, 50, |t| (3.0 * t).sin()))?;
    let v = hist.values();
    let got = core(caputo_l1(order(1.0), &hist, tau))?;
    let want = (v[50] - v[49]) / tau;
    let err = (got - want).abs();
    ensure(
        err <= 1e-12,
        format!("deviation from backward difference {err:.2e}"),
    )
}

fn soe_kernel_certified() -> Result<String, String> {
    let k = core(SoeKernel::build(order(0.5), 1e-3, 10.0, 1e-8))?;
    let err = k.max_relative_error(10_000);
    ensure(
        err <= 1e-8,
        format!("{} modes, sup relative error {err:.2e}", k.len()),
    )
}

fn soe_matches_direct_history() -> Result<String, String> {
    let (n, tau) = (1000, 1e-3);
    let v = crate::commands::random_walk(11, n);
    let kernel = core(SoeKernel::build(
        order(0.5),
        tau,
        n as f64 * tau * (1.0 + 1e-9),
        1e-8,
    ))?;
    let mut fast = core(FastCaputo::new(order(0.5), &kernel, tau))?;
    let mut worst: f64 = 0.0;
    for m in 1..=n {
        let f = fast.step(v[m], v[m - 1]);
        if m % 50 == 0 || m == n {
            let hist = core(ScalarHistory::new(tau, v[..=m].to_vec()))?;
            let d = core(caputo_l1(order(0.5), &hist, tau))?;
            worst = worst.max((f - d).abs() / (d.abs() + 1.0));
        }
    }
    ensure(worst <= 1e-6, format!("max deviation {worst:.2e}"))
}

fn fft_round_trip() -> Result<String, String> {
    let g = core(Grid2D::new(32, 16, 2.0, 1.0))?;
    let sp = Spectral::new(g);
    let u = random_field(g, 5, 1.0);
    let back = core(sp.inverse(&core(sp.forward(&u))?))?;
    let err = back.max_abs_diff(&u);
    ensure(err <= 1e-14, format!("max round-trip error {err:.2e}"))
}

fn parseval() -> Result<String, String> {
    let g = core(Grid2D::new(32, 32, 1.0, 1.0))?;
    let sp = Spectral::new(g);
    let u = random_field(g, 6, 1.0);
    let s = core(sp.forward(&u))?;
    let physical: f64 = u.values().iter().map(|v| v * v).sum();
    let spectral: f64 = s.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>() / g.len() as f64;
    let rel = (physical - spectral).abs() / physical;
    ensure(rel <= 1e-12, format!("relative mismatch {rel:.2e}"))
}

fn laplacian_eigenfunction() -> Result<String, String> {
    let g = core(Grid2D::new(32, 32, TAU, 2.0 * TAU))?;
    let sp = Spectral::new(g);
    let u = Field::from_fn(g, |x, y| (3.0 * x).sin() * (2.0 * y).cos());
    let lap = core(sp.laplacian(&u))?;
    let want = u.map(|v| -13.0 * v);
    let err = lap.max_abs_diff(&want);
    ensure(err <= 1e-11, format!("max error {err:.2e}"))
}

fn operators_preserve_mass() -> Result<String, String> {
    let g = core(Grid2D::new(32, 32, 1.0, 1.0))?;
    let sp = Spectral::new(g);
    let u = random_field(g, 7, 1.0);
    let m = random_field(g, 8, 0.5).map(|v| v + 1.0);
    let lap = core(sp.laplacian(&u))?;
    let flux = core(sp.variable_flux_div(&m, &u, true))?;
    let worst = lap.mean().abs().max(flux.mean().abs());
    ensure(
        worst <= 1e-12,
        format!("max mean of Δu and ∇·(M∇u): {worst:.2e}"),
    )
}

fn classical_limit_stepper() -> Result<String, String> {
    let g = core(Grid2D::new(32, 32, TAU, TAU))?;
    let p = core(ModelParams::new(
        0.1,
        MobilityKind::Constant,
        2.0,
        order(1.0),
    ))?;
    let tau = 1e-3;
    let cfg = SchemeConfig::new(tau, 10.0 * tau, HistoryMode::Direct);
    let u0 = random_field(g, 9, 0.1);
    let mut state = core(SolverState::new(u0.clone(), p, &cfg))?;
    let mut reference = u0;
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        core(state.step())?;
        reference = core(classical_ch_step(&reference, &p, tau))?;
        worst = worst.max(state.u().max_abs_diff(&reference));
    }
    ensure(
        worst <= 1e-12,
        format!("max deviation from classical stepper {worst:.2e}"),
    )
}

fn mass_and_energy_short_runs() -> Result<String, String> {
    let g = core(Grid2D::new(32, 32, PI, PI))?;
    let mut report = Vec::new();
    for kind in [MobilityKind::Constant, MobilityKind::OneSided] {
        let p = core(ModelParams::new(0.05, kind, 2.0, order(0.9)))?;
        let mut cfg = SchemeConfig::new(0.01, 0.5, HistoryMode::Soe { tol: 1e-9 });
        cfg.dealias = kind == MobilityKind::OneSided;
        let mut state = core(SolverState::new(random_field(g, 10, 0.05), p, &cfg))?;
        let m0 = state.mass();
        let e0 = core(energy(state.spectral(), state.u(), &p))?.total;
        let (mut drift, mut e_max): (f64, f64) = (0.0, e0);
        for _ in 0..cfg.n_steps() {
            core(state.step())?;
            drift = drift.max((state.mass() - m0).abs());
            e_max = e_max.max(core(energy(state.spectral(), state.u(), &p))?.total);
        }
        if drift > 1e-10 || e_max > e0 * (1.0 + 1e-8) {
            return Err(format!(
                "{kind:?}: mass drift {drift:.2e}, energy {e_max:.6e} > {e0:.6e}"
            ));
        }
        report.push(format!("{kind:?}: mass drift {drift:.1e}"));
    }
    Ok(report.join(", "))
}

fn profile_constant() -> Result<String, String> {
    let err = (compute_s() - s_closed_form()).abs();
    ensure(err <= 1e-12, format!("quadrature vs closed form {err:.2e}"))
}

fn prng_golden_values() -> Result<String, String> {
    let mut r = SplitMix64::new(42);
    let got = [r.next_u64(), r.next_u64(), r.next_u64()];
    let want = [
        0xBDD7_3226_2FEB_6E95,
        0x28EF_E333_B266_F103,
        0x4752_6757_130F_9F52,
    ];
    let g = core(Grid2D::new(8, 8, 1.0, 1.0))?;
    let first = random_field(g, 42, 0.05).values()[0];
    ensure(
        got == want && first == 0.024_156_487_877_182_33,
        format!("seed 42 first cell {first}"),
    )
}

fn snapshot_round_trip() -> Result<String, String> {
    let g = core(Grid2D::new(16, 8, 1.0, 1.0))?;
    let u = random_field(g, 12, 1.0);
    let snap = SnapshotFile::from_field(&u, 0.7, 0.03, 12.5);
    let mut bytes = Vec::new();
    snap.write_to(&mut bytes).map_err(|e| e.to_string())?;
    let back = SnapshotFile::read_from(&mut bytes.as_slice())?;
    let mut again = Vec::new();
    back.write_to(&mut again).map_err(|e| e.to_string())?;
    ensure(
        back == snap && again == bytes,
        format!("{} bytes", bytes.len()),
    )
}

fn config_round_trip() -> Result<String, String> {
    let text = r#"{"alpha": 0.9, "epsilon": 0.05, "grid": {"nx": 128, "lx": 6.283185307179586},
        "dt": 0.01, "t_end": 100, "init": {"seed": 42}}"#;
    let a = RunConfig::from_json(text).map_err(|e| e.to_string())?;
    let b = RunConfig::from_json(&a.to_json()).map_err(|e| e.to_string())?;
    ensure(a == b, "parse, serialize, parse is the identity".into())
}

fn pgm_gray_levels() -> Result<String, String> {
    let levels = [gray_level(-1.0), gray_level(0.0), gray_level(1.0)];
    ensure(
        levels == [0, 128, 255],
        format!("levels of -1, 0, 1: {levels:?}"),
    )
}
