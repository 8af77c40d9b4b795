//! Optimizer settings from a key-value file, the environment and flags.
//!
//! The file holds one `key = value` pair per line; `#` starts a comment.
//! Recognized keys are `restarts`, `max_iterations`, `tolerance` and
//! `rng_seed` (alias `seed`). Precedence, lowest first: defaults, file,
//! `CHANNEL_PAYOUT_SEED`, command-line flags.

use std::path::Path;

use crate::optim::OptimizerConfig;
use crate::{Error, Result};

pub const SEED_ENV: &str = "CHANNEL_PAYOUT_SEED";

/// Applies the pairs in `text` on top of `base`.
pub fn parse_config(text: &str, base: OptimizerConfig) -> Result<OptimizerConfig> {
    let mut config = base;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| Error::Usage(format!("config line {}: expected key = value", n + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = || Error::Usage(format!("config line {}: invalid value '{value}' for {key}", n + 1));
        match key {
            "restarts" => config.restarts = value.parse().map_err(|_| bad())?,
            "max_iterations" => config.max_iterations = value.parse().map_err(|_| bad())?,
            "tolerance" => config.tolerance = value.parse().map_err(|_| bad())?,
            "rng_seed" | "seed" => config.rng_seed = value.parse().map_err(|_| bad())?,
            other => return Err(Error::Usage(format!("config line {}: unknown key '{other}'", n + 1))),
        }
    }
    config.validate().map_err(|e| Error::Usage(e.to_string()))?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<OptimizerConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text, OptimizerConfig::default())
}

/// Final configuration for one invocation. `env_seed` is the raw value of
/// [`SEED_ENV`], if set.
pub fn resolve(
    file: Option<&Path>,
    env_seed: Option<&str>,
    seed_flag: Option<u64>,
    restarts_flag: Option<usize>,
) -> Result<OptimizerConfig> {
    let mut config = match file {
        Some(path) => load_config(path)?,
        None => OptimizerConfig::default(),
    };
    if let Some(raw) = env_seed {
        config.rng_seed =
            raw.trim().parse().map_err(|_| Error::Usage(format!("{SEED_ENV}='{raw}' is not an unsigned integer")))?;
    }
    if let Some(seed) = seed_flag {
        config.rng_seed = seed;
    }
    if let Some(restarts) = restarts_flag {
        config.restarts = restarts;
    }
    config.validate().map_err(|e| Error::Usage(e.to_string()))?;
    Ok(config)
}
