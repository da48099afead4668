//! JSON form of [`RiskConfig`].

use std::collections::BTreeMap;
use std::path::Path;

use microrisk::model::DEFAULT_HIGH_RISK_THRESHOLD;
use microrisk::{AttributeConfig, RiskConfig, ValueWeightMap, WeightRange};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub alpha: f64,
    pub epsilon: f64,
    #[serde(default = "default_threshold")]
    pub high_risk_threshold: f64,
    pub attributes: Vec<AttributeEntry>,
}

fn default_threshold() -> f64 {
    DEFAULT_HIGH_RISK_THRESHOLD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeEntry {
    pub name: String,
    pub public_prob: f64,
    pub attr_weight: f64,
    #[serde(default)]
    pub values: ValuesEntry,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValuesEntry {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub exact: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ranges: Vec<RangeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    pub weight: f64,
}

impl From<ConfigFile> for RiskConfig {
    fn from(file: ConfigFile) -> Self {
        let attributes = file
            .attributes
            .into_iter()
            .map(|a| {
                AttributeConfig::new(a.name, a.public_prob, a.attr_weight).with_values(
                    ValueWeightMap {
                        exact: a.values.exact,
                        ranges: a
                            .values
                            .ranges
                            .into_iter()
                            .map(|r| WeightRange::new(r.min, r.max, r.weight))
                            .collect(),
                        default_weight: a.values.default,
                    },
                )
            })
            .collect();
        RiskConfig {
            attributes,
            alpha: file.alpha,
            epsilon: file.epsilon,
            high_risk_threshold: file.high_risk_threshold,
        }
    }
}

impl From<&RiskConfig> for ConfigFile {
    fn from(config: &RiskConfig) -> Self {
        ConfigFile {
            alpha: config.alpha,
            epsilon: config.epsilon,
            high_risk_threshold: config.high_risk_threshold,
            attributes: config
                .attributes
                .iter()
                .map(|a| AttributeEntry {
                    name: a.name.clone(),
                    public_prob: a.public_prob,
                    attr_weight: a.attr_weight,
                    values: ValuesEntry {
                        exact: a.value_weights.exact.clone(),
                        ranges: a
                            .value_weights
                            .ranges
                            .iter()
                            .map(|r| RangeEntry {
                                min: r.min,
                                max: r.max,
                                weight: r.weight,
                            })
                            .collect(),
                        default: a.value_weights.default_weight,
                    },
                })
                .collect(),
        }
    }
}

pub fn parse_config(text: &str) -> Result<RiskConfig, CliError> {
    let file: ConfigFile = serde_json::from_str(text)
        .map_err(|e| CliError::Validation(format!("invalid configuration: {e}")))?;
    Ok(file.into())
}

pub fn load_config(path: &Path) -> Result<RiskConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}
