use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use skilltrace_core::metrics::{ActiveSprints, MetricsConfig, MoodMissingPolicy};

/// Environment variable that overrides `data_dir` from the config file.
pub const DATA_DIR_ENV: &str = "SKILLTRACE_DATA_DIR";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ServiceConfig {
    /// `host:port`; port 0 picks a free port.
    pub listen_address: String,
    pub data_dir: PathBuf,
    /// Defaults to `<data_dir>/tokens.json`.
    pub token_file: Option<PathBuf>,
    pub sprint_length_days: u32,
    pub top_k_flag: usize,
    pub mood_missing_policy: MoodMissingPolicy,
    pub active_sprints: ActiveSprints,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            listen_address: "127.0.0.1:8080".into(),
            data_dir: PathBuf::from("data"),
            token_file: None,
            sprint_length_days: 7,
            top_k_flag: 3,
            mood_missing_policy: MoodMissingPolicy::default(),
            active_sprints: ActiveSprints::default(),
        }
    }
}

impl ServiceConfig {
    /// Reads a JSON config file, then applies the environment override.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        let config: ServiceConfig = serde_json::from_str(&text)?;
        let config = config.with_env_override(std::env::var_os(DATA_DIR_ENV).map(PathBuf::from));
        config.validate()?;
        Ok(config)
    }

    pub fn with_env_override(mut self, data_dir: Option<PathBuf>) -> Self {
        if let Some(dir) = data_dir {
            self.data_dir = dir;
        }
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.sprint_length_days == 0 {
            return Err(ConfigError::Invalid("sprint_length_days must be at least 1".into()));
        }
        if self.top_k_flag == 0 {
            return Err(ConfigError::Invalid("top_k_flag must be at least 1".into()));
        }
        if !self.listen_address.contains(':') {
            return Err(ConfigError::Invalid(format!("listen_address {:?} is not host:port", self.listen_address)));
        }
        Ok(())
    }

    pub fn token_path(&self) -> PathBuf {
        self.token_file.clone().unwrap_or_else(|| self.data_dir.join("tokens.json"))
    }

    pub fn metrics(&self) -> MetricsConfig {
        MetricsConfig {
            active_sprints: self.active_sprints,
            mood_missing: self.mood_missing_policy,
            ..Default::default()
        }
    }
}
