//! Experiment files: one TOML document per run.
//!
//! ```toml
//! schema_version = 1
//! experiment = "ghse-moments"
//! seed = 7
//!
//! [parameters]
//! n = [1, 2]
//! m = [0, 1, 2]
//! t = [2]
//! ```

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("schema_version {found} is not supported (expected {SCHEMA_VERSION})")]
    Version { found: u32 },
    #[error("config describes experiment `{found}` but `{expected}` was requested")]
    WrongExperiment { expected: String, found: String },
    #[error("parameter `{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    schema_version: u32,
    experiment: String,
    seed: Option<u64>,
    output: Option<PathBuf>,
    #[serde(default)]
    parameters: toml::Table,
}

/// A parsed experiment file with typed parameters.
#[derive(Debug, Clone)]
pub struct ExperimentConfig<P> {
    pub experiment: String,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub parameters: P,
}

/// Experiment parameter sets declare their schema through serde: every
/// field has a default and unknown keys are rejected.
pub trait Parameters: DeserializeOwned + Default + serde::Serialize {
    fn validate(&self) -> Result<(), ConfigError> {
        Ok(())
    }
}

pub fn parse<P: Parameters>(text: &str, expected: &str) -> Result<ExperimentConfig<P>, ConfigError> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| ConfigError::Parse(e.message().to_string()))?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(ConfigError::Version {
            found: file.schema_version,
        });
    }
    if file.experiment != expected {
        return Err(ConfigError::WrongExperiment {
            expected: expected.to_string(),
            found: file.experiment,
        });
    }
    let parameters = P::deserialize(toml::Value::Table(file.parameters))
        .map_err(|e| ConfigError::Parse(format!("[parameters]: {}", e.message())))?;
    parameters.validate()?;
    Ok(ExperimentConfig {
        experiment: file.experiment,
        seed: file.seed.unwrap_or(DEFAULT_SEED),
        output: file.output,
        parameters,
    })
}

pub fn load<P: Parameters>(path: Option<&Path>, expected: &str) -> Result<ExperimentConfig<P>, ConfigError> {
    match path {
        None => {
            let parameters = P::default();
            parameters.validate()?;
            Ok(ExperimentConfig {
                experiment: expected.to_string(),
                seed: DEFAULT_SEED,
                output: None,
                parameters,
            })
        }
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Io {
                path: p.to_path_buf(),
                source,
            })?;
            parse(&text, expected)
        }
    }
}

pub(crate) fn ensure(cond: bool, key: &'static str, reason: impl Into<String>) -> Result<(), ConfigError> {
    if cond {
        Ok(())
    } else {
        Err(ConfigError::Invalid {
            key,
            reason: reason.into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Serialize;

    #[derive(Debug, Default, Deserialize, Serialize)]
    #[serde(deny_unknown_fields, default)]
    struct Demo {
        n: Vec<usize>,
        p: f64,
    }

    impl Parameters for Demo {
        fn validate(&self) -> Result<(), ConfigError> {
            ensure(self.p <= 1.0, "p", "must be at most 1")
        }
    }

    #[test]
    fn parses_and_defaults_seed() {
        let cfg: ExperimentConfig<Demo> = parse(
            "schema_version = 1\nexperiment = \"demo\"\n[parameters]\nn = [1, 2]\n",
            "demo",
        )
        .unwrap();
        assert_eq!(cfg.parameters.n, vec![1, 2]);
        assert_eq!(cfg.seed, DEFAULT_SEED);
    }

    #[test]
    fn unknown_parameter_is_named() {
        let err = parse::<Demo>(
            "schema_version = 1\nexperiment = \"demo\"\n[parameters]\nbogus = 3\n",
            "demo",
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("bogus"), "{err}");
    }

    #[test]
    fn unknown_top_level_key_is_named() {
        let err = parse::<Demo>("schema_version = 1\nexperiment = \"demo\"\nextra = 1\n", "demo")
            .unwrap_err()
            .to_string();
        assert!(err.contains("extra"), "{err}");
    }

    #[test]
    fn wrong_experiment_and_version() {
        assert!(matches!(
            parse::<Demo>("schema_version = 1\nexperiment = \"other\"\n", "demo"),
            Err(ConfigError::WrongExperiment { .. })
        ));
        assert!(matches!(
            parse::<Demo>("schema_version = 9\nexperiment = \"demo\"\n", "demo"),
            Err(ConfigError::Version { found: 9 })
        ));
    }

    #[test]
    fn semantic_validation_runs() {
        let err = parse::<Demo>(
            "schema_version = 1\nexperiment = \"demo\"\n[parameters]\np = 2.0\n",
            "demo",
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("`p`"), "{err}");
    }
}
