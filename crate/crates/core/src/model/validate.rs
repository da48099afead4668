use std::fmt;

use crate::error::ValidationError;
use crate::model::{AttributeConfig, Dataset, RiskConfig, MAX_ATTRIBUTES};

/// A single broken rule. Violations are collected, not raised one at a time.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    AlphaNotAboveOne { alpha: f64 },
    EpsilonOutOfRange { epsilon: f64 },
    ThresholdInvalid { threshold: f64 },
    NoAttributes,
    TooManyAttributes { found: usize, max: usize },
    EmptyAttributeName { position: usize },
    DuplicateAttribute { attribute: String },
    ProbabilityOutOfRange { attribute: String, value: f64 },
    AttributeWeightOutOfRange { attribute: String, value: f64 },
    ValueWeightOutOfRange { attribute: String, rule: String, value: f64 },
    InvalidRange { attribute: String, index: usize },
    OverlappingRanges { attribute: String, first: usize, second: usize },
    AttributeCountMismatch { expected: usize, found: usize },
    AttributeNameMismatch { position: usize, expected: String, found: String },
    MissingAttribute { attribute: String },
    UnresolvableValue { attribute: String, value: String },
}

impl Violation {
    /// Attribute the violation is about, when it concerns a single one.
    pub fn attribute(&self) -> Option<&str> {
        use Violation::*;
        match self {
            DuplicateAttribute { attribute }
            | ProbabilityOutOfRange { attribute, .. }
            | AttributeWeightOutOfRange { attribute, .. }
            | ValueWeightOutOfRange { attribute, .. }
            | InvalidRange { attribute, .. }
            | OverlappingRanges { attribute, .. }
            | MissingAttribute { attribute }
            | UnresolvableValue { attribute, .. } => Some(attribute),
            AttributeNameMismatch { expected, .. } => Some(expected),
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            AlphaNotAboveOne { alpha } => write!(f, "alpha must exceed 1 (got {alpha})"),
            EpsilonOutOfRange { epsilon } => {
                write!(f, "epsilon must lie in [0, 1] (got {epsilon})")
            }
            ThresholdInvalid { threshold } => write!(
                f,
                "high_risk_threshold must be a finite value >= 0 (got {threshold})"
            ),
            NoAttributes => f.write_str("configuration lists no attributes"),
            TooManyAttributes { found, max } => {
                write!(f, "{found} attributes configured, at most {max} supported")
            }
            EmptyAttributeName { position } => {
                write!(f, "attribute name at position {position} is empty")
            }
            DuplicateAttribute { attribute } => {
                write!(f, "attribute `{attribute}` is configured more than once")
            }
            ProbabilityOutOfRange { attribute, value } => write!(
                f,
                "attribute `{attribute}`: public_prob must lie in [0, 1] (got {value})"
            ),
            AttributeWeightOutOfRange { attribute, value } => write!(
                f,
                "attribute `{attribute}`: attr_weight must lie in [0, 1] (got {value})"
            ),
            ValueWeightOutOfRange {
                attribute,
                rule,
                value,
            } => write!(
                f,
                "attribute `{attribute}`: value weight for {rule} must lie in [0, 1] (got {value})"
            ),
            InvalidRange { attribute, index } => write!(
                f,
                "attribute `{attribute}`: range #{index} has min > max or a non-finite bound"
            ),
            OverlappingRanges {
                attribute,
                first,
                second,
            } => write!(
                f,
                "attribute `{attribute}`: ranges #{first} and #{second} overlap"
            ),
            AttributeCountMismatch { expected, found } => write!(
                f,
                "dataset has {expected} attributes but the configuration lists {found}"
            ),
            AttributeNameMismatch {
                position,
                expected,
                found,
            } => write!(
                f,
                "attribute at position {position} is `{expected}` in the dataset but `{found}` in the configuration"
            ),
            MissingAttribute { attribute } => write!(
                f,
                "attribute `{attribute}` is present in the data but absent from the configuration"
            ),
            UnresolvableValue { attribute, value } => write!(
                f,
                "attribute `{attribute}`: value \"{value}\" has no sensitivity weight"
            ),
        }
    }
}

fn in_unit(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}

fn check_attribute(attr: &AttributeConfig, out: &mut Vec<Violation>) {
    let name = || attr.name.clone();
    if !in_unit(attr.public_prob) {
        out.push(Violation::ProbabilityOutOfRange {
            attribute: name(),
            value: attr.public_prob,
        });
    }
    if !in_unit(attr.attr_weight) {
        out.push(Violation::AttributeWeightOutOfRange {
            attribute: name(),
            value: attr.attr_weight,
        });
    }
    let vw = &attr.value_weights;
    for (token, &w) in &vw.exact {
        if !in_unit(w) {
            out.push(Violation::ValueWeightOutOfRange {
                attribute: name(),
                rule: format!("value \"{token}\""),
                value: w,
            });
        }
    }
    for (i, r) in vw.ranges.iter().enumerate() {
        if !in_unit(r.weight) {
            out.push(Violation::ValueWeightOutOfRange {
                attribute: name(),
                rule: format!("range #{i}"),
                value: r.weight,
            });
        }
        let finite = r.min.is_none_or(f64::is_finite) && r.max.is_none_or(f64::is_finite);
        let ordered = match (r.min, r.max) {
            (Some(lo), Some(hi)) => lo <= hi,
            _ => true,
        };
        if !finite || !ordered {
            out.push(Violation::InvalidRange {
                attribute: name(),
                index: i,
            });
        }
    }
    for i in 0..vw.ranges.len() {
        for j in i + 1..vw.ranges.len() {
            let (a, b) = (&vw.ranges[i], &vw.ranges[j]);
            // half-open intervals [lo, hi) overlap iff each starts before the other ends
            let a_before_b_ends = match (a.min, b.max) {
                (Some(lo), Some(hi)) => lo < hi,
                _ => true,
            };
            let b_before_a_ends = match (b.min, a.max) {
                (Some(lo), Some(hi)) => lo < hi,
                _ => true,
            };
            let nonempty = |r: &crate::model::WeightRange| match (r.min, r.max) {
                (Some(lo), Some(hi)) => lo < hi,
                _ => true,
            };
            if a_before_b_ends && b_before_a_ends && nonempty(a) && nonempty(b) {
                out.push(Violation::OverlappingRanges {
                    attribute: name(),
                    first: i,
                    second: j,
                });
            }
        }
    }
    if let Some(w) = vw.default_weight {
        if !in_unit(w) {
            out.push(Violation::ValueWeightOutOfRange {
                attribute: name(),
                rule: "default".to_string(),
                value: w,
            });
        }
    }
}

/// Checks every rule that does not need the data: scalar ranges, attribute
/// names and per-attribute weights.
pub fn validate_parameters(config: &RiskConfig) -> Result<(), ValidationError> {
    let violations = parameter_violations(config);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ValidationError { violations })
    }
}

fn parameter_violations(config: &RiskConfig) -> Vec<Violation> {
    let mut out = Vec::new();
    if !(config.alpha > 1.0 && config.alpha.is_finite()) {
        out.push(Violation::AlphaNotAboveOne {
            alpha: config.alpha,
        });
    }
    if !in_unit(config.epsilon) {
        out.push(Violation::EpsilonOutOfRange {
            epsilon: config.epsilon,
        });
    }
    if !(config.high_risk_threshold >= 0.0 && config.high_risk_threshold.is_finite()) {
        out.push(Violation::ThresholdInvalid {
            threshold: config.high_risk_threshold,
        });
    }
    if config.attributes.is_empty() {
        out.push(Violation::NoAttributes);
    }
    if config.attributes.len() > MAX_ATTRIBUTES {
        out.push(Violation::TooManyAttributes {
            found: config.attributes.len(),
            max: MAX_ATTRIBUTES,
        });
    }
    for (i, attr) in config.attributes.iter().enumerate() {
        if attr.name.is_empty() {
            out.push(Violation::EmptyAttributeName { position: i });
        }
        if config.attributes[..i].iter().any(|a| a.name == attr.name) {
            out.push(Violation::DuplicateAttribute {
                attribute: attr.name.clone(),
            });
        }
        check_attribute(attr, &mut out);
    }
    out
}

/// Full check of `config` against `dataset`, including that every value of
/// every sensitive attribute resolves to a weight.
pub fn validate_config(dataset: &Dataset, config: &RiskConfig) -> Result<(), ValidationError> {
    let mut out = parameter_violations(config);

    let schema = dataset.schema();
    for name in schema {
        if !config.attributes.iter().any(|a| &a.name == name) {
            out.push(Violation::MissingAttribute {
                attribute: name.clone(),
            });
        }
    }
    if schema.len() != config.attributes.len() {
        out.push(Violation::AttributeCountMismatch {
            expected: schema.len(),
            found: config.attributes.len(),
        });
    }
    let mut aligned = true;
    for (position, (expected, attr)) in schema.iter().zip(&config.attributes).enumerate() {
        if *expected != attr.name {
            aligned = false;
            out.push(Violation::AttributeNameMismatch {
                position,
                expected: expected.clone(),
                found: attr.name.clone(),
            });
        }
    }

    if aligned {
        for (j, attr) in config.attributes.iter().enumerate().take(schema.len()) {
            if !attr.is_sensitive() {
                continue;
            }
            for value in dataset.distinct_values(j) {
                if attr.value_weights.lookup(value).is_none() {
                    out.push(Violation::UnresolvableValue {
                        attribute: attr.name.clone(),
                        value: value.to_string(),
                    });
                }
            }
        }
    }

    if out.is_empty() {
        Ok(())
    } else {
        Err(ValidationError { violations: out })
    }
}
