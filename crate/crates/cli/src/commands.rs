//! Subcommand implementations. Each returns data; printing is left to `main`.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use tfche_core::diagnostics::{fit_power_law, SeriesRow, SlopeFit};
use tfche_core::fracops::{
    caputo_l1_series, FastCaputo, FractionalOrder, ScalarHistory, SoeKernel,
};
use tfche_core::stepper::{run, SolverState};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::init::{init_field, SplitMix64};
use crate::io::{write_pgm, SeriesWriter, SnapshotFile};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub steps: usize,
    pub t_final: f64,
    pub mass_initial: f64,
    pub mass_final: f64,
    pub energy_initial: f64,
    pub energy_final: f64,
    pub snapshots: usize,
}

pub fn snapshot_name(step: usize) -> String {
    format!("snapshot_{step:08}.tfch")
}

/// Runs a configured simulation, writing `config.json`, `series.csv` and
/// snapshots into the output directory. Series rows are written every
/// `series_every` steps, snapshots every `snapshot_every` steps (never when
/// zero); the initial and final states always get both.
pub fn cmd_run(cfg: &RunConfig) -> CliResult<RunSummary> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let params = cfg.model_params()?;
    let scheme = cfg.scheme();
    params.check_resolution(&grid);

    let dir = cfg.output_dir();
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let cfg_path = dir.join("config.json");
    std::fs::write(&cfg_path, cfg.to_json()).map_err(|e| CliError::io(&cfg_path, e))?;

    let u0 = init_field(&cfg.init, grid, cfg.epsilon)?;
    let n_steps = scheme.n_steps();
    let mut series = SeriesWriter::create(&dir.join("series.csv"))?;
    let mut first: Option<SeriesRow> = None;
    let mut last: Option<SeriesRow> = None;
    let mut snapshots = 0;
    // Sink errors are ours, not the solver's; stash them and stop the run.
    let mut failure: Option<CliError> = None;

    let outcome = run(&scheme, u0, params, |s: &SolverState| {
        let k = s.step_index();
        let is_end = k == 0 || k == n_steps;
        let result = (|| -> CliResult<()> {
            if is_end || k.is_multiple_of(cfg.output.series_every) {
                let row = SeriesRow::measure(s)?;
                series.write(&row)?;
                first.get_or_insert(row);
                last = Some(row);
            }
            if is_end
                || (cfg.output.snapshot_every > 0 && k.is_multiple_of(cfg.output.snapshot_every))
            {
                let snap = SnapshotFile::from_field(s.u(), cfg.alpha, cfg.epsilon, s.time());
                snap.save(&dir.join(snapshot_name(k)))?;
                snapshots += 1;
            }
            Ok(())
        })();
        result.map_err(|e| {
            let msg = e.to_string();
            failure = Some(e);
            tfche_core::Error::InvalidInput(msg)
        })
    });
    let state = match (outcome, failure) {
        (_, Some(e)) => return Err(e),
        (Err(e), None) => return Err(e.into()),
        (Ok(s), None) => s,
    };
    series.finish()?;
    let (first, last) = (first.expect("initial row"), last.expect("final row"));
    Ok(RunSummary {
        out_dir: dir,
        steps: state.step_index(),
        t_final: state.time(),
        mass_initial: first.mass,
        mass_final: last.mass,
        energy_initial: first.energy_per_area,
        energy_final: last.energy_per_area,
        snapshots,
    })
}

/// Power-law fit of a series column against `t` on `[t_lo, t_hi]`.
pub fn cmd_fit(csv: &Path, column: &str, t_lo: f64, t_hi: f64) -> CliResult<SlopeFit> {
    if !(t_lo > 0.0 && t_hi > t_lo) {
        return Err(CliError::Usage(format!(
            "fit window must satisfy 0 < t_lo < t_hi, got [{t_lo}, {t_hi}]"
        )));
    }
    let (t, y) = crate::io::read_series_column(csv, column)?;
    Ok(fit_power_law(&t, &y, (t_lo, t_hi))?)
}

pub fn fit_json(column: &str, fit: &SlopeFit) -> String {
    serde_json::json!({
        "column": column,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "window": [fit.window.0, fit.window.1],
        "points": fit.points,
    })
    .to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub alpha: f64,
    pub n_steps: usize,
    pub soe_tol: f64,
    pub modes: usize,
    pub direct_seconds: f64,
    pub soe_seconds: f64,
    pub speedup: f64,
    /// max over steps of |fast − direct| / (|direct| + 1)
    pub max_deviation: f64,
}

pub const BENCH_TAU: f64 = 1e-3;

/// Random-walk scalar history of `n_steps` steps, reproducible from `seed`.
pub fn random_walk(seed: u64, n_steps: usize) -> Vec<f64> {
    let mut rng = SplitMix64::new(seed);
    let mut v = Vec::with_capacity(n_steps + 1);
    let mut x = 0.0;
    v.push(x);
    for _ in 0..n_steps {
        x += rng.next_f64() - 0.5;
        v.push(x);
    }
    v
}

/// Times the L1 derivative at every step of a random-walk history, once by
/// the direct O(N²) sum and once through the sum-of-exponentials recurrence
/// (kernel construction included).
pub fn cmd_bench(alpha: f64, n_steps: usize, soe_tol: f64, seed: u64) -> CliResult<BenchReport> {
    if n_steps < 2 {
        return Err(CliError::Usage("bench needs at least 2 steps".into()));
    }
    let order = FractionalOrder::new(alpha).map_err(|e| CliError::Usage(e.to_string()))?;
    let v = random_walk(seed, n_steps);
    let hist = ScalarHistory::new(BENCH_TAU, v.clone())?;

    let start = Instant::now();
    let direct = caputo_l1_series(order, &hist);
    let direct_seconds = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let t_max = n_steps as f64 * BENCH_TAU * (1.0 + 1e-9);
    let kernel = SoeKernel::build(order, BENCH_TAU, t_max, soe_tol)?;
    let mut fast = FastCaputo::new(order, &kernel, BENCH_TAU)?;
    let soe: Vec<f64> = (1..=n_steps).map(|n| fast.step(v[n], v[n - 1])).collect();
    let soe_seconds = start.elapsed().as_secs_f64();

    let max_deviation = soe
        .iter()
        .zip(&direct[1..])
        .map(|(f, d)| (f - d).abs() / (d.abs() + 1.0))
        .fold(0.0, f64::max);
    Ok(BenchReport {
        alpha,
        n_steps,
        soe_tol,
        modes: kernel.len(),
        direct_seconds,
        soe_seconds,
        speedup: direct_seconds / soe_seconds.max(1e-12),
        max_deviation,
    })
}

/// Converts a snapshot to PGM and returns the snapshot header.
pub fn cmd_snapshot(snapshot: &Path, pgm: &Path) -> CliResult<SnapshotFile> {
    let snap = SnapshotFile::load(snapshot)?;
    write_pgm(pgm, &snap)?;
    Ok(snap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bench_small_run_is_consistent() {
        let r = cmd_bench(0.5, 10, 1e-8, 1).unwrap();
        assert_eq!(r.n_steps, 10);
        assert!(r.max_deviation <= 1e-7, "{}", r.max_deviation);
        let json = serde_json::to_string(&r).unwrap();
        let back: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(back["n_steps"], 10);
    }

    #[test]
    fn bench_is_reproducible_and_accurate() {
        let a = cmd_bench(0.7, 2000, 1e-8, 3).unwrap();
        let b = cmd_bench(0.7, 2000, 1e-8, 3).unwrap();
        assert_eq!(a.max_deviation, b.max_deviation);
        assert!(a.max_deviation <= 1e-7, "{}", a.max_deviation);
        assert!(cmd_bench(0.7, 1, 1e-8, 3).is_err());
        assert!(cmd_bench(1.7, 10, 1e-8, 3).is_err());
    }

    #[test]
    fn random_walk_starts_at_zero() {
        let v = random_walk(9, 100);
        assert_eq!(v.len(), 101);
        assert_eq!(v[0], 0.0);
        assert_eq!(v, random_walk(9, 100));
    }
}
