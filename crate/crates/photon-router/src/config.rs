//! Flat key-value configuration files.
//!
//! Format: one `key = value` pair per line, `#` starts a comment. Keys are
//! the `RateSet` field names plus `scenario`, `photon_number`, `engine`,
//! `pulse_shape`, `detuning`, `grid_points`. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Result, RouterError};
use crate::types::{
    set_rate_field, PulseShape, RateSet, Scenario, ScenarioConfig,
};

/// Raw parsed file: ordered key-value pairs.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    pub entries: BTreeMap<String, String>,
}

const KNOWN_KEYS: &[&str] = &[
    "scenario",
    "photon_number",
    "engine",
    "pulse_shape",
    "detuning",
    "grid_points",
    "kappa_s",
    "gamma_c",
    "gamma_s",
    "gamma_c1",
    "gamma_c2",
    "gamma_ch",
    "gamma_cv",
    "gamma",
    "kappa_i",
    "kappa_ex",
    "g",
];

impl ConfigFile {
    pub fn parse(text: &str) -> Result<ConfigFile> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(RouterError::ConfigParse {
                line: lineno + 1,
                message: format!("expected 'key = value', got '{line}'"),
            })?;
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(RouterError::ConfigParse {
                    line: lineno + 1,
                    message: format!("unknown key '{key}'"),
                });
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { entries })
    }

    pub fn load(path: &Path) -> Result<ConfigFile> {
        ConfigFile::parse(&std::fs::read_to_string(path)?)
    }

    /// Merge overrides (e.g. CLI flags) on top of the file: overrides win.
    pub fn merged_with(&self, overrides: &ConfigFile) -> ConfigFile {
        let mut entries = self.entries.clone();
        for (k, v) in &overrides.entries {
            entries.insert(k.clone(), v.clone());
        }
        ConfigFile { entries }
    }

    fn parse_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<f64>().map(Some).map_err(|_| {
                RouterError::InvalidConfig(format!("{key}: '{v}' is not a number"))
            }),
        }
    }

    /// Assemble the rate set from the present keys.
    pub fn rates(&self) -> Result<RateSet> {
        let mut rates = RateSet::default();
        for key in KNOWN_KEYS.iter().skip(6) {
            if let Some(v) = self.parse_f64(key)? {
                set_rate_field(&mut rates, key, v)?;
            }
        }
        Ok(rates)
    }

    pub fn scenario(&self) -> Result<Option<Scenario>> {
        match self.entries.get("scenario") {
            None => Ok(None),
            Some(name) => Scenario::parse(name).map(Some).ok_or_else(|| {
                RouterError::InvalidConfig(format!("unknown scenario '{name}'"))
            }),
        }
    }

    pub fn photon_number(&self) -> Result<u32> {
        match self.entries.get("photon_number") {
            None => Ok(2),
            Some(v) => v.parse().map_err(|_| {
                RouterError::InvalidConfig(format!("photon_number: '{v}' is not an integer"))
            }),
        }
    }

    pub fn pulse_shape(&self) -> Result<PulseShape> {
        match self.entries.get("pulse_shape") {
            None => Ok(PulseShape::Exponential),
            Some(v) => PulseShape::parse(v).ok_or_else(|| {
                RouterError::InvalidConfig(format!("unknown pulse shape '{v}'"))
            }),
        }
    }

    pub fn scenario_config(&self) -> Result<ScenarioConfig> {
        let scenario = self.scenario()?.ok_or_else(|| {
            RouterError::InvalidConfig("missing required key 'scenario'".into())
        })?;
        ScenarioConfig::new(scenario, self.rates()?, self.photon_number()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_merges() {
        let base = ConfigFile::parse(
            "# two-level example\nscenario = two-level\nkappa_s = 1.0\ngamma_c = 1.0\n",
        )
        .unwrap();
        let config = base.scenario_config().unwrap();
        assert_eq!(config.scenario, Scenario::TwoLevelRouter);
        assert_eq!(config.rates.kappa_s, 1.0);

        let overrides = ConfigFile::parse("kappa_s = 2.5\n").unwrap();
        let merged = base.merged_with(&overrides).scenario_config().unwrap();
        assert_eq!(merged.rates.kappa_s, 2.5);
        assert_eq!(merged.rates.gamma_c, 1.0);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_lines() {
        assert!(ConfigFile::parse("bogus_key = 1\n").is_err());
        assert!(ConfigFile::parse("kappa_s 1.0\n").is_err());
    }
}
