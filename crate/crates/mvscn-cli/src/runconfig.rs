//! Flat `key = value` experiment config files.
//!
//! Recognized keys: `arch`, `c`, `l`, `w_max`, `density` or `M`, `ce`,
//! `deletion_rate`, `addition_rate`, `iterations`, `trials`, `seed`.
//! Lines starting with `#` (or inline `#` tails) are comments. `c`, `l`,
//! `arch` and exactly one of `density`/`M` are required; everything else has
//! a default. When `trials` is absent, enough trials are run to pool at
//! least 100_000 queries.

use anyhow::{bail, Context, Result};
use mvscn::{ExperimentSpec, Load, NetworkConfig};
use std::collections::HashMap;
use std::path::Path;

pub const DEFAULT_MIN_QUERIES: usize = 100_000;

/// A parsed config, remembering whether the trial count was pinned
/// explicitly (sweeps re-derive automatic trial counts per point).
pub struct ParsedConfig {
    pub spec: ExperimentSpec,
    pub explicit_trials: Option<usize>,
}

pub fn parse_config_file(path: &Path) -> Result<ParsedConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    parse_config(&text).with_context(|| format!("in config {}", path.display()))
}

pub fn parse_config(text: &str) -> Result<ParsedConfig> {
    let mut keys: HashMap<String, String> = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {}: expected `key = value`, got {raw:?}", lineno + 1);
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if keys.insert(key.clone(), value).is_some() {
            bail!("line {}: duplicate key {key:?}", lineno + 1);
        }
    }
    build_spec(&keys)
}

fn build_spec(keys: &HashMap<String, String>) -> Result<ParsedConfig> {
    const KNOWN: &[&str] = &[
        "arch",
        "c",
        "l",
        "w_max",
        "density",
        "M",
        "m",
        "ce",
        "deletion_rate",
        "addition_rate",
        "iterations",
        "trials",
        "seed",
    ];
    for key in keys.keys() {
        if !KNOWN.contains(&key.as_str()) {
            bail!("unknown key {key:?}");
        }
    }

    let get = |key: &str| keys.get(key).map(String::as_str);
    let parse_num = |key: &str, value: &str| -> Result<f64> {
        value
            .parse::<f64>()
            .with_context(|| format!("key {key:?}: bad number {value:?}"))
    };

    let require = |key: &str| -> Result<&str> {
        get(key).with_context(|| format!("missing required key {key:?}"))
    };

    let clusters = parse_num("c", require("c")?)? as usize;
    let cluster_size = parse_num("l", require("l")?)? as usize;
    let w_max = match get("w_max") {
        Some(v) => parse_num("w_max", v)? as u32,
        None => 1,
    };
    let arch = require("arch")?.parse().map_err(anyhow::Error::from)?;

    let density = get("density");
    let count = get("M").or_else(|| get("m"));
    let load = match (density, count) {
        (Some(d), None) => Load::DensityTarget(parse_num("density", d)?),
        (None, Some(m)) => Load::Count(parse_num("M", m)? as usize),
        (Some(_), Some(_)) => bail!("give either `density` or `M`, not both"),
        (None, None) => bail!("missing required key: one of `density` or `M`"),
    };

    let config = NetworkConfig::new(clusters, cluster_size, w_max)?;
    let mut spec = ExperimentSpec {
        config,
        load,
        erasure_fraction: match get("ce") {
            Some(v) => parse_num("ce", v)?,
            None => 0.5,
        },
        deletion_rate: match get("deletion_rate") {
            Some(v) => parse_num("deletion_rate", v)?,
            None => 0.0,
        },
        addition_rate: match get("addition_rate") {
            Some(v) => parse_num("addition_rate", v)?,
            None => 0.0,
        },
        iterations: match get("iterations") {
            Some(v) => parse_num("iterations", v)? as usize,
            None => 4,
        },
        arch,
        trials: 0,
        master_seed: match get("seed") {
            Some(v) => parse_num("seed", v)? as u64,
            None => 0,
        },
    };
    let explicit_trials = match get("trials") {
        Some(v) => Some(parse_num("trials", v)? as usize),
        None => None,
    };
    spec.trials = match explicit_trials {
        Some(t) => t,
        None => spec.trials_for_queries(DEFAULT_MIN_QUERIES)?,
    };
    spec.validate()?;
    Ok(ParsedConfig {
        spec,
        explicit_trials,
    })
}
