//! Experiment configuration: a TOML file whose every field can be
//! overridden from the command line. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::market_model::{FundamentalFn, MicroParams, PredictorFn};
use crate::sim::{RunSettings, DEFAULT_BURN_IN, DEFAULT_LENGTH};
use crate::stats::DEFAULT_SIGNIFICANCE;

use super::CliError;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "MICROGARCH_CONFIG";
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    params: ParamsSection,
    #[serde(default)]
    run: RunSection,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsSection {
    rho: Option<f64>,
    k: Option<f64>,
    s_liquidity: Option<f64>,
    p1: Option<f64>,
    p2: Option<f64>,
    lambda: Option<f64>,
    gamma: Option<f64>,
    g_fn: Option<FundamentalFn>,
    h_fn: Option<PredictorFn>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunSection {
    length: Option<usize>,
    burn_in: Option<usize>,
    seeds: Option<Vec<u64>>,
    significance: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    dir: Option<PathBuf>,
}

/// Command-line overrides shared by the config-driven subcommands.
/// Flags win over file values.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Config file (TOML). Defaults to $MICROGARCH_CONFIG, else built-in defaults.
    #[arg(long, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub rho: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub s_liquidity: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub p1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub p2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Fundamental expectation function: log | identity.
    #[arg(long)]
    pub g_fn: Option<FundamentalFn>,
    /// AI predictor: ar | ar:<coef> | zero.
    #[arg(long)]
    pub h_fn: Option<PredictorFn>,
    #[arg(long)]
    pub length: Option<usize>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Comma-separated seeds.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    #[arg(long, allow_negative_numbers = true)]
    pub significance: Option<f64>,
    /// Directory for output files.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

/// Fully resolved, validated experiment configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub params: MicroParams,
    pub length: usize,
    pub burn_in: usize,
    pub seeds: Vec<u64>,
    pub significance: f64,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            params: MicroParams::default(),
            length: DEFAULT_LENGTH,
            burn_in: DEFAULT_BURN_IN,
            seeds: vec![DEFAULT_SEED],
            significance: DEFAULT_SIGNIFICANCE,
            out_dir: PathBuf::from("."),
        }
    }
}

impl ExperimentConfig {
    pub fn settings(&self) -> RunSettings {
        RunSettings {
            length: self.length,
            burn_in: self.burn_in,
        }
    }

    /// Parse a config document without touching the filesystem.
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        let file = parse(text, Path::new("<string>"))?;
        resolve(file, &Overrides::default())
    }

    pub fn load(overrides: &Overrides) -> Result<Self, CliError> {
        let file = match &overrides.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::config(format!("cannot read config {}: {e}", path.display()))
                })?;
                parse(&text, path)?
            }
            None => ConfigFile::default(),
        };
        resolve(file, overrides)
    }
}

fn parse(text: &str, path: &Path) -> Result<ConfigFile, CliError> {
    toml::from_str(text)
        .map_err(|e| CliError::config(format!("invalid config {}: {e}", path.display())))
}

fn resolve(file: ConfigFile, o: &Overrides) -> Result<ExperimentConfig, CliError> {
    let d = ExperimentConfig::default();
    let fp = file.params;
    let params = MicroParams {
        rho: o.rho.or(fp.rho).unwrap_or(d.params.rho),
        k: o.k.or(fp.k).unwrap_or(d.params.k),
        s_liquidity: o
            .s_liquidity
            .or(fp.s_liquidity)
            .unwrap_or(d.params.s_liquidity),
        p1: o.p1.or(fp.p1).unwrap_or(d.params.p1),
        p2: o.p2.or(fp.p2).unwrap_or(d.params.p2),
        lambda: o.lambda.or(fp.lambda).unwrap_or(d.params.lambda),
        gamma: o.gamma.or(fp.gamma).unwrap_or(d.params.gamma),
        g_fn: o.g_fn.or(fp.g_fn).unwrap_or(d.params.g_fn),
        h_fn: o.h_fn.or(fp.h_fn).unwrap_or(d.params.h_fn),
    };
    params.validate()?;

    let cfg = ExperimentConfig {
        params,
        length: o.length.or(file.run.length).unwrap_or(d.length),
        burn_in: o.burn_in.or(file.run.burn_in).unwrap_or(d.burn_in),
        seeds: o.seeds.clone().or(file.run.seeds).unwrap_or(d.seeds),
        significance: o
            .significance
            .or(file.run.significance)
            .unwrap_or(d.significance),
        out_dir: o.out_dir.clone().or(file.output.dir).unwrap_or(d.out_dir),
    };
    if cfg.length == 0 {
        return Err(CliError::config("length must be at least 1"));
    }
    if cfg.seeds.is_empty() {
        return Err(CliError::config("seed list is empty"));
    }
    if !(cfg.significance > 0.0 && cfg.significance < 1.0) {
        return Err(CliError::config(format!(
            "significance must lie in (0, 1), got {}",
            cfg.significance
        )));
    }
    Ok(cfg)
}
