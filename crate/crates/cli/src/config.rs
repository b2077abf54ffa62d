use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub const PRECISION_ENV: &str = "ORBIT_DESIGNS_PRECISION";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Text => "text",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Config {
    pub precision_bits: usize,
    /// Residuals below `2^-tolerance_exponent` (relative) count as zero.
    pub tolerance_exponent: usize,
    pub output_format: OutputFormat,
    pub orbit_rank_cap: usize,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("precision must be at least 64 bits, got {0}")]
    Precision(usize),
    #[error("{PRECISION_ENV} is not an integer: {0}")]
    Env(String),
    #[error("orbit rank cap must be at least 2, got {0}")]
    RankCap(usize),
    #[error("tolerance exponent must lie in 1..=precision, got {0}")]
    Tolerance(usize),
}

/// Values given on the command line; `None` means not given.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub precision_bits: Option<usize>,
    pub tolerance_exponent: Option<usize>,
    pub output_format: Option<OutputFormat>,
    pub orbit_rank_cap: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            precision_bits: 256,
            tolerance_exponent: 128,
            output_format: OutputFormat::Json,
            orbit_rank_cap: 10,
        }
    }
}

impl Config {
    /// Flags first, then the environment, then defaults.
    pub fn resolve(flags: &Overrides, env_precision: Option<&str>) -> Result<Config, ConfigError> {
        let env = env_precision
            .map(|s| usize::from_str(s.trim()).map_err(|_| ConfigError::Env(s.to_string())))
            .transpose()?;
        let base = Config::default();
        let precision_bits = flags.precision_bits.or(env).unwrap_or(base.precision_bits);
        let cfg = Config {
            precision_bits,
            tolerance_exponent: flags.tolerance_exponent.unwrap_or(precision_bits / 2),
            output_format: flags.output_format.unwrap_or(base.output_format),
            orbit_rank_cap: flags.orbit_rank_cap.unwrap_or(base.orbit_rank_cap),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.precision_bits < 64 {
            return Err(ConfigError::Precision(self.precision_bits));
        }
        if self.orbit_rank_cap < 2 {
            return Err(ConfigError::RankCap(self.orbit_rank_cap));
        }
        if self.tolerance_exponent == 0 || self.tolerance_exponent > self.precision_bits {
            return Err(ConfigError::Tolerance(self.tolerance_exponent));
        }
        Ok(())
    }
}
