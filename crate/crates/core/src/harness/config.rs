use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::picard::TimeGrid;
use crate::randomization::DataFamily;
use crate::spectral::{Derivative, Grid};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n_points: usize,
    pub box_length: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub t_final: f64,
    pub n_steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub n_max: usize,
    pub samples: usize,
    pub base_seed: u64,
    #[serde(default)]
    pub derivative: Derivative,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentSection {
    pub p_list: Vec<u32>,
    #[serde(default = "default_bootstrap")]
    pub bootstrap: usize,
}

fn default_bootstrap() -> usize {
    200
}

impl Default for MomentSection {
    fn default() -> Self {
        MomentSection {
            p_list: vec![4, 6, 8],
            bootstrap: default_bootstrap(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingSection {
    /// Interval lengths, each half the previous.
    pub intervals: Vec<f64>,
    /// Iterate orders to fit; defaults to `0..=min(n_max, 1)`.
    #[serde(default)]
    pub orders: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailSection {
    pub n: usize,
    #[serde(default = "default_p0")]
    pub p0: f64,
    #[serde(default = "default_lambda_points")]
    pub lambda_points: usize,
}

fn default_p0() -> f64 {
    4.0
}

fn default_lambda_points() -> usize {
    48
}

impl Default for TailSection {
    fn default() -> Self {
        TailSection {
            n: 1,
            p0: default_p0(),
            lambda_points: default_lambda_points(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationSection {
    /// Frozen constant; measured from the zeroth iterate when absent.
    pub c_cal: Option<f64>,
}

/// Declarative experiment description, read from TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_output")]
    pub output: PathBuf,
    pub grid: GridSection,
    pub time: TimeSection,
    pub run: RunSection,
    pub data: DataFamily,
    #[serde(default)]
    pub moments: MomentSection,
    #[serde(default)]
    pub scaling: ScalingSection,
    #[serde(default)]
    pub tails: TailSection,
    #[serde(default)]
    pub calibration: CalibrationSection,
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid.n_points, self.grid.box_length)
    }

    pub fn time_grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.time.t_final, self.time.n_steps)
    }

    /// Structural checks plus finite propagation safety:
    /// every interval must be shorter than the distance from the data's
    /// support to the box boundary.
    pub fn validate(&self) -> Result<()> {
        let grid = self.grid()?;
        self.time_grid()?;
        if self.time.n_steps < 1 {
            return Err(Error::Config("time.n_steps must be at least 1".into()));
        }
        if self.moments.p_list.iter().any(|&p| p < 2) {
            return Err(Error::Config("moment orders must be at least 2".into()));
        }
        if let Some(c) = self.calibration.c_cal {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::Config(format!("calibration.c_cal must be positive, got {c}")));
            }
        }
        let t_max = self
            .scaling
            .intervals
            .iter()
            .copied()
            .fold(self.time.t_final, f64::max);
        if let Some(margin) = self.support_margin(grid) {
            if t_max >= margin {
                return Err(Error::Config(format!(
                    "interval {t_max} reaches the box boundary (support margin {margin:.3})"
                )));
            }
        }
        Ok(())
    }

    /// Distance from the data's essential support to the box boundary.
    pub fn support_margin(&self, grid: Grid) -> Option<f64> {
        let (c, r) = self.data.localization(grid)?;
        let l = grid.box_length();
        Some([c[0], l - c[0], c[1], l - c[1]].into_iter().fold(f64::INFINITY, f64::min) - r)
    }

    /// First 16 hex digits of the SHA-256 of the canonical TOML form.
    pub fn hash(&self) -> Result<String> {
        let digest = Sha256::digest(self.to_toml()?.as_bytes());
        Ok(hex::encode(&digest[..8]))
    }
}
