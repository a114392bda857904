//! Sweep configuration files.
//!
//! A config file is TOML (or JSON) whose keys mirror [`SweepConfig`]. Every
//! key is optional and overlays the command's built-in defaults. A run
//! manifest is also accepted, in which case its recorded `config` is used,
//! so `--config out.csv.manifest.json` replays a previous run.

use std::path::Path;

use allometry_core::sweeps::{Fig2Grid, SweepCell, SweepConfig};
use allometry_core::{Estimator, PopulationGrid, RescaleMode};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub estimator: Option<Estimator>,
    pub entropy_mode: Option<RescaleMode>,
    pub entropy_users: Option<u64>,
    pub grid: Option<PopulationGrid>,
    pub fig2: Option<Fig2Grid>,
    pub cells: Option<Vec<SweepCell>>,
    /// Step-count factor applied to every parameter axis.
    pub scale: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let bad = |msg: String| CliError::BadInput(format!("{}: {msg}", path.display()));
        let is_json = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            let mut value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
            if value.get("config_digest").is_some() {
                value = value
                    .get_mut("config")
                    .map(serde_json::Value::take)
                    .unwrap_or_default();
            }
            serde_json::from_value(value).map_err(|e| bad(e.to_string()))
        } else {
            toml::from_str(&text).map_err(|e| bad(e.to_string()))
        }
    }

    /// Overlays the keys that are set onto `base`.
    pub fn apply(&self, mut base: SweepConfig) -> SweepConfig {
        if let Some(v) = self.seed {
            base.seed = v;
        }
        if let Some(v) = self.estimator {
            base.estimator = v;
        }
        if let Some(v) = self.entropy_mode {
            base.entropy_mode = v;
        }
        if let Some(v) = self.entropy_users {
            base.entropy_users = v;
        }
        if let Some(v) = self.grid {
            base.grid = v;
        }
        if let Some(v) = self.fig2 {
            base.fig2 = v;
        }
        if let Some(v) = &self.cells {
            base.cells = v.clone();
        }
        base
    }
}

/// Checks a `--scale` factor.
pub fn check_scale(scale: f64) -> Result<f64> {
    if scale.is_finite() && scale > 0.0 {
        Ok(scale)
    } else {
        Err(CliError::BadInput(format!(
            "scale must be positive, got {scale}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use allometry_core::sweeps::SweepFamily;

    #[test]
    fn toml_overlay() {
        let file: ConfigFile = toml::from_str(
            r#"
            seed = 7
            entropy_mode = "standard"
            [grid]
            p_min = 20
            p_max = 2000
            n_points = 50
            "#,
        )
        .unwrap();
        let cfg = file.apply(SweepConfig::table1());
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.entropy_mode, RescaleMode::Standard);
        assert_eq!(cfg.grid.p_max, 2000);
        assert_eq!(cfg.cells.len(), 7);
        assert_eq!(cfg.estimator, Estimator::Analytic);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<ConfigFile>("seeed = 3").is_err());
    }

    #[test]
    fn serialized_config_parses_back() {
        let cfg = SweepConfig::h_gamma().scaled(0.1);
        let value = serde_json::to_value(&cfg).unwrap();
        let file: ConfigFile = serde_json::from_value(value).unwrap();
        let back = file.apply(SweepConfig::table1());
        assert_eq!(back, cfg);
        assert_eq!(back.cells[0].family, SweepFamily::Pareto1);
    }
}
