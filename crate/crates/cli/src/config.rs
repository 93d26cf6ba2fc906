//! Run configuration, one JSON file per run.
//!
//! Required keys: `alpha`, `epsilon`, `grid.nx`, `grid.lx`, `dt`, `t_end`.
//! Every other key is optional; unknown keys are rejected.
//!
//! | key | default |
//! |---|---|
//! | `grid.ny` | `grid.nx` |
//! | `grid.ly` | `grid.lx` |
//! | `mobility` | `"constant"` |
//! | `stabilization` | `2.0` |
//! | `history.mode` | `"soe"` |
//! | `history.tol` | `1e-8` |
//! | `init.kind` | `"random"` |
//! | `init.seed` | `0` |
//! | `init.mean` | `0.0` |
//! | `init.amplitude` | `0.05` |
//! | `init.radius` | `0.25` |
//! | `init.center` | domain center |
//! | `init.outer_radius` | none |
//! | `output.dir` | `"tfche_out"` |
//! | `output.snapshot_every` | `0` (initial and final snapshot only) |
//! | `output.series_every` | `1` |
//! | `solver.krylov_tol` | `1e-10` |
//! | `solver.krylov_maxiter` | `400` |
//! | `solver.krylov_restart` | `40` |
//! | `solver.dealias` | `true` for `"one_sided"`, `false` for `"constant"` |

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tfche_core::chmodel::{MobilityKind, ModelParams, DEFAULT_STABILIZATION};
use tfche_core::field::Grid2D;
use tfche_core::fracops::FractionalOrder;
use tfche_core::stepper::{
    HistoryMode, SchemeConfig, DEFAULT_KRYLOV_MAXITER, DEFAULT_KRYLOV_RESTART, DEFAULT_KRYLOV_TOL,
};

use crate::error::{CliError, CliResult};

/// Environment variable that replaces `output.dir`.
pub const OUT_DIR_ENV: &str = "TFCHE_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: f64,
    pub epsilon: f64,
    pub grid: GridConfig,
    #[serde(default)]
    pub mobility: Mobility,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_stabilization")]
    pub stabilization: f64,
    #[serde(default)]
    pub history: HistoryConfig,
    #[serde(default)]
    pub init: InitConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub solver: SolverConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub nx: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ny: Option<usize>,
    pub lx: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ly: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mobility {
    #[default]
    Constant,
    OneSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HistoryKind {
    Direct,
    #[default]
    Soe,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistoryConfig {
    #[serde(default)]
    pub mode: HistoryKind,
    #[serde(default = "default_soe_tol")]
    pub tol: f64,
}

impl Default for HistoryConfig {
    fn default() -> Self {
        Self {
            mode: HistoryKind::Soe,
            tol: default_soe_tol(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    #[default]
    Random,
    Circle,
    Tanh1d,
}

/// Initial condition. `radius` is the disk radius for `circle` and the
/// stripe half-width for `tanh1d`; `outer_radius` surrounds a circle with a
/// `+1` reservoir beyond that distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitConfig {
    #[serde(default)]
    pub kind: InitKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mean: f64,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_radius: Option<f64>,
}

impl Default for InitConfig {
    fn default() -> Self {
        Self {
            kind: InitKind::Random,
            seed: 0,
            mean: 0.0,
            amplitude: default_amplitude(),
            radius: default_radius(),
            center: None,
            outer_radius: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_out_dir")]
    pub dir: PathBuf,
    #[serde(default)]
    pub snapshot_every: usize,
    #[serde(default = "default_series_every")]
    pub series_every: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: default_out_dir(),
            snapshot_every: 0,
            series_every: default_series_every(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub krylov_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub krylov_maxiter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub krylov_restart: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dealias: Option<bool>,
}

fn default_stabilization() -> f64 {
    DEFAULT_STABILIZATION
}

fn default_soe_tol() -> f64 {
    1e-8
}

fn default_amplitude() -> f64 {
    0.05
}

fn default_radius() -> f64 {
    0.25
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("tfche_out")
}

fn default_series_every() -> usize {
    1
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks everything the solver would reject, so a bad file fails before
    /// any output is written.
    pub fn validate(&self) -> CliResult<()> {
        self.grid()?;
        self.model_params()?;
        self.scheme()
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        if self.output.series_every == 0 {
            return Err(CliError::Config(
                "output.series_every must be positive".into(),
            ));
        }
        let init = &self.init;
        if !init.mean.is_finite() || !(init.amplitude >= 0.0 && init.amplitude.is_finite()) {
            return Err(CliError::Config(
                "init.mean must be finite and init.amplitude >= 0".into(),
            ));
        }
        if matches!(init.kind, InitKind::Circle | InitKind::Tanh1d) && !(init.radius > 0.0) {
            return Err(CliError::Config("init.radius must be positive".into()));
        }
        if let Some(r2) = init.outer_radius {
            if !(r2 > init.radius) {
                return Err(CliError::Config(
                    "init.outer_radius must exceed init.radius".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> CliResult<Grid2D> {
        let g = &self.grid;
        Grid2D::new(g.nx, g.ny.unwrap_or(g.nx), g.lx, g.ly.unwrap_or(g.lx))
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn mobility_kind(&self) -> MobilityKind {
        match self.mobility {
            Mobility::Constant => MobilityKind::Constant,
            Mobility::OneSided => MobilityKind::OneSided,
        }
    }

    pub fn model_params(&self) -> CliResult<ModelParams> {
        let order =
            FractionalOrder::new(self.alpha).map_err(|e| CliError::Config(e.to_string()))?;
        ModelParams::new(
            self.epsilon,
            self.mobility_kind(),
            self.stabilization,
            order,
        )
        .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn scheme(&self) -> SchemeConfig {
        let history = match self.history.mode {
            HistoryKind::Direct => HistoryMode::Direct,
            HistoryKind::Soe => HistoryMode::Soe {
                tol: self.history.tol,
            },
        };
        let mut s = SchemeConfig::new(self.dt, self.t_end, history);
        s.krylov_tol = self.solver.krylov_tol.unwrap_or(DEFAULT_KRYLOV_TOL);
        s.krylov_maxiter = self.solver.krylov_maxiter.unwrap_or(DEFAULT_KRYLOV_MAXITER);
        s.krylov_restart = self.solver.krylov_restart.unwrap_or(DEFAULT_KRYLOV_RESTART);
        s.dealias = self
            .solver
            .dealias
            .unwrap_or(self.mobility == Mobility::OneSided);
        s
    }

    /// Output directory, honoring the environment override.
    pub fn output_dir(&self) -> PathBuf {
        match std::env::var_os(OUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => self.output.dir.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "alpha": 0.9, "epsilon": 0.05,
        "grid": {"nx": 32, "lx": 6.283185307179586},
        "dt": 0.01, "t_end": 1.0
    }"#;

    #[test]
    fn defaults_are_filled() {
        let c = RunConfig::from_json(MINIMAL).unwrap();
        assert_eq!(c.mobility, Mobility::Constant);
        assert_eq!(c.stabilization, 2.0);
        assert_eq!(
            c.history,
            HistoryConfig {
                mode: HistoryKind::Soe,
                tol: 1e-8
            }
        );
        assert_eq!(c.init, InitConfig::default());
        assert_eq!(c.output.series_every, 1);
        let g = c.grid().unwrap();
        assert_eq!((g.nx(), g.ny()), (32, 32));
        assert_eq!(g.ly(), g.lx());
        assert!(!c.scheme().dealias);
    }

    #[test]
    fn one_sided_dealiases_by_default() {
        let text = MINIMAL.replace("\"dt\"", "\"mobility\": \"one_sided\", \"dt\"");
        let c = RunConfig::from_json(&text).unwrap();
        assert!(c.scheme().dealias);
        assert_eq!(c.model_params().unwrap().mobility, MobilityKind::OneSided);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = MINIMAL.replace("\"dt\"", "\"colour\": 3, \"dt\"");
        assert!(matches!(
            RunConfig::from_json(&text),
            Err(CliError::Config(_))
        ));
        let nested = MINIMAL.replace("\"nx\": 32", "\"nx\": 32, \"nz\": 4");
        assert!(RunConfig::from_json(&nested).is_err());
    }

    #[test]
    fn invalid_values_are_rejected() {
        for (from, to) in [
            ("\"alpha\": 0.9", "\"alpha\": 1.5"),
            ("\"epsilon\": 0.05", "\"epsilon\": -1"),
            ("\"nx\": 32", "\"nx\": 31"),
            ("\"dt\": 0.01", "\"dt\": 0.0"),
            ("\"dt\": 0.01", "\"dt\": 0.01, \"mobility\": \"quadratic\""),
        ] {
            let text = MINIMAL.replace(from, to);
            assert!(RunConfig::from_json(&text).is_err(), "{to}");
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let full = r#"{
            "alpha": 0.5, "epsilon": 0.02,
            "grid": {"nx": 64, "ny": 32, "lx": 2.0, "ly": 1.0},
            "mobility": "one_sided", "dt": 0.001, "t_end": 0.5, "stabilization": 3.0,
            "history": {"mode": "direct"},
            "init": {"kind": "circle", "seed": 18446744073709551615, "radius": 0.2,
                     "center": [1.0, 0.5], "outer_radius": 0.45},
            "output": {"dir": "runs/a", "snapshot_every": 10, "series_every": 5},
            "solver": {"krylov_tol": 1e-9, "dealias": false}
        }"#;
        for text in [MINIMAL, full] {
            let a = RunConfig::from_json(text).unwrap();
            let b = RunConfig::from_json(&a.to_json()).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.to_json(), b.to_json());
        }
        let c = RunConfig::from_json(full).unwrap();
        assert_eq!(c.init.seed, u64::MAX);
        assert_eq!(c.scheme().krylov_tol, 1e-9);
    }
}
