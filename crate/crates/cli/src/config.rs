use std::path::{Path, PathBuf};

use clap::ValueEnum;
use divgap::{PrimalityConfig, SearchCaps};
use serde::Deserialize;

/// Environment variable naming a TOML file with default settings.
pub const CONFIG_ENV: &str = "DIVGAP_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliConfig {
    pub caps: SearchCaps,
    pub primality: PrimalityConfig,
    pub output: OutputFormat,
    /// Series sampling step for `scan` and `chen`.
    pub stride: u64,
}

impl Default for CliConfig {
    fn default() -> Self {
        Self {
            caps: SearchCaps::default(),
            primality: PrimalityConfig::default(),
            output: OutputFormat::Text,
            stride: 1,
        }
    }
}

/// Contents of a config file. Every key is optional.
///
/// ```toml
/// output = "json"
/// stride = 10
/// max_prime_steps = 100000
/// max_bits = 65536
/// probabilistic_rounds = 40
/// deterministic_threshold = 18446744073709551615
/// base_seed = 7
/// ```
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub output: Option<OutputFormat>,
    pub stride: Option<u64>,
    pub max_prime_steps: Option<u64>,
    pub max_bits: Option<u64>,
    pub probabilistic_rounds: Option<u32>,
    pub deterministic_threshold: Option<u64>,
    pub base_seed: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Later sources win: `self` is overridden by `other`'s present keys.
    pub fn merge(self, other: FileConfig) -> FileConfig {
        FileConfig {
            output: other.output.or(self.output),
            stride: other.stride.or(self.stride),
            max_prime_steps: other.max_prime_steps.or(self.max_prime_steps),
            max_bits: other.max_bits.or(self.max_bits),
            probabilistic_rounds: other.probabilistic_rounds.or(self.probabilistic_rounds),
            deterministic_threshold: other.deterministic_threshold.or(self.deterministic_threshold),
            base_seed: other.base_seed.or(self.base_seed),
        }
    }

    pub fn resolve(self) -> Result<CliConfig, String> {
        let d = CliConfig::default();
        let caps = SearchCaps::new(
            self.max_prime_steps.unwrap_or(d.caps.max_prime_steps),
            self.max_bits.unwrap_or(d.caps.max_bits),
        )
        .map_err(|e| e.to_string())?;
        let primality = PrimalityConfig::new(
            self.deterministic_threshold.unwrap_or(d.primality.deterministic_threshold),
            self.probabilistic_rounds.unwrap_or(d.primality.probabilistic_rounds),
            self.base_seed.unwrap_or(d.primality.base_seed),
        )
        .map_err(|e| e.to_string())?;
        let stride = self.stride.unwrap_or(d.stride);
        if stride == 0 {
            return Err("stride must be >= 1".into());
        }
        Ok(CliConfig {
            caps,
            primality,
            output: self.output.unwrap_or(d.output),
            stride,
        })
    }
}

/// Config file named by `--config`, else by the environment variable.
pub fn config_path(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
}
