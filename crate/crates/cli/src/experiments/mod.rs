//! One runner per subcommand. Each takes a parsed config and returns rows
//! plus checks; nothing is written here.

pub mod efi;
pub mod ghse;
pub mod memoryless;
pub mod money;
pub mod noise;
pub mod resources;
pub mod selftest;

use std::path::Path;

use thiserror::Error;

use crate::config::{load, ConfigError, ExperimentConfig, Parameters};
use crate::output::RunOutput;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] prdm_core::Error),
}

pub const EXPERIMENTS: [&str; 7] = [
    "ghse-moments",
    "resources",
    "noise-robustness",
    "efi",
    "money",
    "memoryless",
    "selftest",
];

fn run_with<P: Parameters>(
    name: &str,
    path: Option<&Path>,
    seed: Option<u64>,
    body: fn(&ExperimentConfig<P>) -> Result<RunOutput, RunError>,
) -> Result<(ExperimentConfig<P>, RunOutput), RunError> {
    let mut cfg = load::<P>(path, name)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let out = body(&cfg)?;
    Ok((cfg, out))
}

/// Loads the config for `name`, applies the seed override, and runs it.
/// Returns the effective seed, the configured output path, and the rows.
pub fn run(
    name: &str,
    path: Option<&Path>,
    seed: Option<u64>,
) -> Result<(u64, Option<std::path::PathBuf>, RunOutput), RunError> {
    macro_rules! go {
        ($body:path) => {{
            let (cfg, out) = run_with(name, path, seed, $body)?;
            Ok((cfg.seed, cfg.output, out))
        }};
    }
    match name {
        "ghse-moments" => go!(ghse::run),
        "resources" => go!(resources::run),
        "noise-robustness" => go!(noise::run),
        "efi" => go!(efi::run),
        "money" => go!(money::run),
        "memoryless" => go!(memoryless::run),
        "selftest" => go!(selftest::run),
        other => Err(ConfigError::Parse(format!("unknown experiment `{other}`")).into()),
    }
}

pub(crate) fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_mean() {
        let (m, se) = mean_and_se(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((se - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn unknown_experiment_is_a_config_error() {
        assert!(matches!(run("nope", None, None), Err(RunError::Config(_))));
    }
}
