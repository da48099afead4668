//! Dataset, configuration and their validation.

mod config;
mod dataset;
mod validate;

pub use config::{
    parse_numeric, resolve_value_weight, AttributeConfig, RiskConfig, ValueWeightMap,
    WeightRange, DEFAULT_HIGH_RISK_THRESHOLD,
};
pub use dataset::{Cell, Dataset, DatasetBuilder, Record, MAX_ATTRIBUTES};
pub use validate::{validate_config, validate_parameters, Violation};
