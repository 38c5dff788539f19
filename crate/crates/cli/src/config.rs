use std::path::Path;

use serde::Deserialize;

/// Environment variable naming an optional TOML config file.
pub const CONFIG_ENV: &str = "MOTFACT_CONFIG";

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub tolerance: f64,
    pub backtrack_budget: usize,
    pub family_samples: usize,
    /// Parameter interval for sampled output.
    pub sample_range: [f64; 2],
    pub sample_count: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tolerance: 1e-9,
            backtrack_budget: 10_000,
            family_samples: 3,
            sample_range: [-5.0, 5.0],
            sample_count: 25,
            seed: 0,
        }
    }
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Config, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(format!("tolerance must be positive, got {}", self.tolerance));
        }
        if self.backtrack_budget == 0 {
            return Err("backtrack_budget must be positive".into());
        }
        let [lo, hi] = self.sample_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(format!("sample_range must be an increasing pair, got [{lo}, {hi}]"));
        }
        if self.sample_count == 0 {
            return Err("sample_count must be positive".into());
        }
        Ok(())
    }
}
