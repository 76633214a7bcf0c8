//! Run configuration: TOML file (key = value sections) merged with CLI
//! overrides; flags win and the override is logged.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config {path}: {reason}")]
    Parse { path: PathBuf, reason: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Everything the harness needs to run; every field has a default so an
/// empty file (or no file) is a valid configuration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub run: RunSection,
    pub sweep: SweepSection,
    pub tolerances: ToleranceSection,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    /// "delta" (weight 12) or "delta_e4" (weight 16).
    pub form: String,
    pub out_dir: PathBuf,
    /// 0 = all cores.
    pub workers: usize,
    pub cache_dir: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub n_min: u64,
    pub n_max: u64,
    /// log-spaced grid size between n_min and n_max
    pub n_points: usize,
    pub p_max: u64,
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceSection {
    pub voronoi: f64,
    pub poisson: f64,
    pub stilde: f64,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            form: "delta".to_string(),
            out_dir: PathBuf::from("out"),
            workers: 0,
            cache_dir: default_cache_dir(),
        }
    }
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            n_min: 1000,
            n_max: 100_000,
            n_points: 9,
            p_max: 3000,
            theta: vec![0.05],
        }
    }
}

impl Default for ToleranceSection {
    fn default() -> Self {
        ToleranceSection {
            voronoi: crate::tolerances::VORONOI_RESIDUAL,
            poisson: crate::tolerances::POISSON_RESIDUAL,
            stilde: crate::tolerances::STILDE_CONSISTENCY,
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            run: RunSection::default(),
            sweep: SweepSection::default(),
            tolerances: ToleranceSection::default(),
        }
    }
}

/// Cache directory: env override, else a dot directory next to the run.
pub fn default_cache_dir() -> PathBuf {
    std::env::var_os("WEYLSUM_CACHE_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".weylsum-cache"))
}

/// Parse and validate a config file.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let cfg: RunConfig = toml::from_str(&text).map_err(|e| ConfigError::Parse {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.run.form != "delta" && self.run.form != "delta_e4" {
            return Err(ConfigError::Invalid(format!(
                "form must be delta or delta_e4, got {:?}",
                self.run.form
            )));
        }
        for &t in &self.sweep.theta {
            if !(t > 0.0 && t < 0.1) {
                return Err(ConfigError::Invalid(format!(
                    "theta = {t} outside the admissible range (0, 1/10)"
                )));
            }
        }
        if self.sweep.theta.is_empty() || self.sweep.n_points == 0 {
            return Err(ConfigError::Invalid("sweep grid is empty".to_string()));
        }
        if self.sweep.n_min < 8 || self.sweep.n_max < self.sweep.n_min {
            return Err(ConfigError::Invalid(format!(
                "bad N range [{}, {}]",
                self.sweep.n_min, self.sweep.n_max
            )));
        }
        for t in [
            self.tolerances.voronoi,
            self.tolerances.poisson,
            self.tolerances.stilde,
        ] {
            if t <= 0.0 {
                return Err(ConfigError::Invalid(format!("tolerance {t} must be > 0")));
            }
        }
        Ok(())
    }

    /// Log-spaced N grid (deduplicated, ascending).
    pub fn n_grid(&self) -> Vec<u64> {
        let s = &self.sweep;
        if s.n_points == 1 || s.n_min == s.n_max {
            return vec![s.n_min];
        }
        let (a, b) = ((s.n_min as f64).ln(), (s.n_max as f64).ln());
        let mut grid: Vec<u64> = (0..s.n_points)
            .map(|i| {
                (a + (b - a) * i as f64 / (s.n_points - 1) as f64)
                    .exp()
                    .round() as u64
            })
            .collect();
        grid.dedup();
        grid
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn empty_file_gives_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.toml");
        std::fs::File::create(&path).unwrap();
        let cfg = load_config(&path).unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.sweep.p_max, 3000);
        assert_eq!(cfg.run.form, "delta");
    }

    #[test]
    fn theta_outside_window_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "[sweep]\ntheta = [0.15]").unwrap();
        match load_config(&path) {
            Err(ConfigError::Invalid(msg)) => assert!(msg.contains("0.15")),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn malformed_file_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        std::fs::write(&path, "[sweep\nn_min = ").unwrap();
        assert!(matches!(load_config(&path), Err(ConfigError::Parse { .. })));
    }

    #[test]
    fn log_grid_is_ascending_and_hits_endpoints() {
        let mut cfg = RunConfig::default();
        cfg.sweep.n_min = 1000;
        cfg.sweep.n_max = 100_000;
        cfg.sweep.n_points = 9;
        let g = cfg.n_grid();
        assert_eq!(*g.first().unwrap(), 1000);
        assert_eq!(*g.last().unwrap(), 100_000);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
