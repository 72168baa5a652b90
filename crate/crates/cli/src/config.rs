//! Flat key-value experiment files.
//!
//! One experiment per file, written as top-level `key = value` pairs (a flat
//! TOML document). Every field is optional; values given on the command line
//! take precedence over the file.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Price,
    Table,
    Hedge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TableName {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EngineKind {
    Analytic,
    Lattice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Style {
    European,
    American,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Right {
    Call,
    Put,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    BsmDual,
    WuZhu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Table,
    Csv,
}

macro_rules! experiment_config {
    ($($(#[$doc:meta])* $field:ident: $ty:ty,)*) => {
        /// Declarative description of one run.
        #[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct ExperimentConfig {
            $(
                $(#[$doc])*
                #[serde(default, skip_serializing_if = "Option::is_none")]
                pub $field: Option<$ty>,
            )*
            #[serde(default, skip_serializing_if = "Option::is_none", with = "seed_repr")]
            pub seed: Option<u64>,
        }

        impl ExperimentConfig {
            /// Field-wise merge; values set in `top` win.
            pub fn overlay(self, top: ExperimentConfig) -> ExperimentConfig {
                ExperimentConfig {
                    $($field: top.$field.or(self.$field),)*
                    seed: top.seed.or(self.seed),
                }
            }
        }
    };
}

experiment_config! {
    command: CommandKind,
    table: TableName,
    engine: EngineKind,
    style: Style,
    right: Right,
    spot: f64,
    strike: f64,
    rate: f64,
    dividend_yield: f64,
    /// Volatility; the local volatility for hedges.
    vol: f64,
    maturity: f64,
    steps: usize,
    dual: bool,
    greeks: bool,
    scheme: Scheme,
    target_strike: f64,
    target_maturity: f64,
    strike_down: f64,
    strike_center: f64,
    strike_up: f64,
    front_maturity: f64,
    center_maturity: f64,
    horizon: f64,
    spot0: f64,
    spot_at_horizon: f64,
    sim: bool,
    drift: f64,
    paths: usize,
    format: Format,
    output: PathBuf,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("bad config: {}", e.message())))
    }

    pub fn to_toml_string(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Usage(format!("cannot write config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {}", path.display(), e.message())))
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_toml_string()?).map_err(|e| CliError::io(path.to_path_buf(), e))
    }
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CommandKind::Price => "price",
            CommandKind::Table => "table",
            CommandKind::Hedge => "hedge",
        })
    }
}

/// Seeds above `i64::MAX` do not fit a TOML integer and are written as strings.
mod seed_repr {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(seed: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
        match seed {
            Some(v) => match i64::try_from(*v) {
                Ok(small) => s.serialize_i64(small),
                Err(_) => s.serialize_str(&v.to_string()),
            },
            None => s.serialize_none(),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
        use serde::de::Error;
        match Repr::deserialize(d)? {
            Repr::Int(v) => u64::try_from(v).map(Some).map_err(D::Error::custom),
            Repr::Text(s) => s.trim().parse().map(Some).map_err(D::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlay_prefers_top() {
        let base = ExperimentConfig {
            spot: Some(36.0),
            strike: Some(40.0),
            seed: Some(1),
            ..Default::default()
        };
        let top = ExperimentConfig {
            spot: Some(38.0),
            dual: Some(true),
            ..Default::default()
        };
        let m = base.overlay(top);
        assert_eq!(m.spot, Some(38.0));
        assert_eq!(m.strike, Some(40.0));
        assert_eq!(m.dual, Some(true));
        assert_eq!(m.seed, Some(1));
    }

    #[test]
    fn awkward_values_round_trip() {
        let cfg = ExperimentConfig {
            command: Some(CommandKind::Hedge),
            horizon: Some(1.0 / 12.0 - 5.0 / 365.0),
            rate: Some(0.1 + 0.2),
            vol: Some(f64::MIN_POSITIVE),
            spot0: Some(1e300),
            seed: Some(u64::MAX),
            paths: Some(usize::MAX >> 2),
            scheme: Some(Scheme::WuZhu),
            output: Some(PathBuf::from("out dir/t7.csv")),
            ..Default::default()
        };
        let text = cfg.to_toml_string().unwrap();
        assert_eq!(ExperimentConfig::from_toml_str(&text).unwrap(), cfg);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(ExperimentConfig::from_toml_str("spott = 3.0").is_err());
        assert!(ExperimentConfig::from_toml_str("table = \"t9\"").is_err());
        assert!(ExperimentConfig::from_toml_str("seed = -1").is_err());
        let c = ExperimentConfig::from_toml_str("seed = \"18446744073709551615\"\nstyle = \"american\"").unwrap();
        assert_eq!(c.seed, Some(u64::MAX));
        assert_eq!(c.style, Some(Style::American));
    }
}
