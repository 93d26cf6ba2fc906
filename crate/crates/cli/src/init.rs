//! Seeded initial conditions.

use std::f64::consts::SQRT_2;

use tfche_core::field::{Field, Grid2D};

use crate::config::{InitConfig, InitKind};
use crate::error::{CliError, CliResult};

/// SplitMix64 generator, specified by algorithm so initial conditions are
/// reproducible bit for bit across implementations.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform double in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Shortest periodic displacement.
fn min_image(d: f64, l: f64) -> f64 {
    d - l * (d / l).round()
}

pub fn init_field(cfg: &InitConfig, grid: Grid2D, epsilon: f64) -> CliResult<Field> {
    if !(epsilon > 0.0) {
        return Err(CliError::Config("epsilon must be positive".into()));
    }
    let (lx, ly) = (grid.lx(), grid.ly());
    let [cx, cy] = cfg.center.unwrap_or([lx / 2.0, ly / 2.0]);
    let w = SQRT_2 * epsilon;
    let field = match cfg.kind {
        InitKind::Random => {
            let mut rng = SplitMix64::new(cfg.seed);
            let values = (0..grid.len())
                .map(|_| cfg.mean + cfg.amplitude * (2.0 * rng.next_f64() - 1.0))
                .collect();
            Field::from_values(grid, values)?
        }
        InitKind::Circle => {
            if !(cfg.radius > 0.0) {
                return Err(CliError::Config("circle radius must be positive".into()));
            }
            Field::from_fn(grid, |x, y| {
                let d = min_image(x - cx, lx).hypot(min_image(y - cy, ly));
                let disk = ((cfg.radius - d) / w).tanh();
                match cfg.outer_radius {
                    Some(r2) => disk.max(((d - r2) / w).tanh()),
                    None => disk,
                }
            })
        }
        InitKind::Tanh1d => {
            if !(cfg.radius > 0.0 && 2.0 * cfg.radius < lx) {
                return Err(CliError::Config(
                    "stripe half-width must be positive and below half the domain".into(),
                ));
            }
            Field::from_fn(grid, |x, _| {
                ((cfg.radius - min_image(x - cx, lx).abs()) / w).tanh()
            })
        }
    };
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random(seed: u64, mean: f64, amplitude: f64) -> InitConfig {
        InitConfig {
            seed,
            mean,
            amplitude,
            ..InitConfig::default()
        }
    }

    #[test]
    fn splitmix_golden_values() {
        let mut r = SplitMix64::new(42);
        assert_eq!(r.next_u64(), 0xBDD7_3226_2FEB_6E95);
        assert_eq!(r.next_u64(), 0x28EF_E333_B266_F103);
        assert_eq!(r.next_u64(), 0x4752_6757_130F_9F52);
        let mut r = SplitMix64::new(42);
        assert_eq!(r.next_f64(), 0.741_564_878_771_823_3);
    }

    #[test]
    fn random_field_golden_first_cells() {
        let g = Grid2D::new(16, 16, 1.0, 1.0).unwrap();
        let u = init_field(&random(42, 0.0, 0.05), g, 0.05).unwrap();
        assert_eq!(u.values()[0], 0.024_156_487_877_182_33);
        assert_eq!(u.values()[1], -0.034_008_960_712_307_99);
        assert_eq!(u.values()[2], -0.022_139_886_974_486_135);
        assert!(u.max_abs() <= 0.05);
    }

    #[test]
    fn zero_amplitude_is_uniform() {
        let g = Grid2D::new(8, 8, 1.0, 1.0).unwrap();
        let u = init_field(&random(7, 0.3, 0.0), g, 0.05).unwrap();
        assert!(u.values().iter().all(|&v| v == 0.3));
    }

    #[test]
    fn circle_profile() {
        let g = Grid2D::new(64, 64, 1.0, 1.0).unwrap();
        let cfg = InitConfig {
            kind: InitKind::Circle,
            radius: 0.25,
            center: Some([0.5, 0.5]),
            ..InitConfig::default()
        };
        let u = init_field(&cfg, g, 0.02).unwrap();
        assert!((u.get(32, 32) - 1.0).abs() < 1e-7);
        assert!((u.get(0, 0) + 1.0).abs() < 1e-7);
        // Periodic distance: a disk centered at the corner wraps around.
        let corner = InitConfig {
            center: Some([0.0, 0.0]),
            ..cfg.clone()
        };
        let v = init_field(&corner, g, 0.02).unwrap();
        assert!((v.get(63, 63) - 1.0).abs() < 1e-6);
        assert!((v.get(32, 32) + 1.0).abs() < 1e-7);
    }

    #[test]
    fn reservoir_surrounds_disk() {
        let g = Grid2D::new(64, 64, 1.0, 1.0).unwrap();
        let cfg = InitConfig {
            kind: InitKind::Circle,
            radius: 0.2,
            outer_radius: Some(0.4),
            center: Some([0.5, 0.5]),
            ..InitConfig::default()
        };
        let u = init_field(&cfg, g, 0.01).unwrap();
        assert!(u.get(32, 32) > 0.999);
        assert!(u.get(32 + 19, 32) < -0.999);
        assert!(u.get(0, 0) > 0.999);
    }

    #[test]
    fn stripe_has_two_interfaces() {
        let g = Grid2D::new_1d(128, 2.0).unwrap();
        let cfg = InitConfig {
            kind: InitKind::Tanh1d,
            radius: 0.5,
            center: Some([1.0, 0.0]),
            ..InitConfig::default()
        };
        let u = init_field(&cfg, g, 0.02).unwrap();
        let crossings = (0..128)
            .filter(|&i| u.values()[i].signum() != u.values()[(i + 1) % 128].signum())
            .count();
        assert_eq!(crossings, 2);
        assert!(u.get(64, 0) > 0.99 && u.get(0, 0) < -0.99);
        let bad = InitConfig { radius: 1.5, ..cfg };
        assert!(init_field(&bad, g, 0.02).is_err());
    }
}
