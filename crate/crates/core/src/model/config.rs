use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::Cell;

pub const DEFAULT_HIGH_RISK_THRESHOLD: f64 = 0.01;

/// Half-open numeric interval `[min, max)` with a sensitivity weight.
/// A missing bound is unbounded on that side.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightRange {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub weight: f64,
}

impl WeightRange {
    pub fn new(min: Option<f64>, max: Option<f64>, weight: f64) -> Self {
        Self { min, max, weight }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.min.is_none_or(|lo| x >= lo) && self.max.is_none_or(|hi| x < hi)
    }
}

/// Per-value sensitivity weights of one attribute.
///
/// Lookup order is exact token, then the first range containing the numeric
/// reading of the token, then `default_weight`. The exact key `""` addresses
/// missing cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValueWeightMap {
    pub exact: BTreeMap<String, f64>,
    pub ranges: Vec<WeightRange>,
    pub default_weight: Option<f64>,
}

impl ValueWeightMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_exact(mut self, token: impl Into<String>, weight: f64) -> Self {
        self.exact.insert(token.into(), weight);
        self
    }

    pub fn with_range(mut self, min: Option<f64>, max: Option<f64>, weight: f64) -> Self {
        self.ranges.push(WeightRange::new(min, max, weight));
        self
    }

    pub fn with_default(mut self, weight: f64) -> Self {
        self.default_weight = Some(weight);
        self
    }

    /// Weight for `cell`, or `None` when no rule applies.
    pub fn lookup(&self, cell: &Cell) -> Option<f64> {
        if let Some(&w) = self.exact.get(cell.token()) {
            return Some(w);
        }
        if !self.ranges.is_empty() {
            if let Some(x) = parse_numeric(cell.token()) {
                if let Some(r) = self.ranges.iter().find(|r| r.contains(x)) {
                    return Some(r.weight);
                }
            }
        }
        self.default_weight
    }
}

/// Numeric reading of a token for range lookup: a plain decimal number with
/// an optional `k`/`K` (thousand) or `m`/`M` (million) suffix, e.g. `"50K"`.
pub fn parse_numeric(token: &str) -> Option<f64> {
    let t = token.trim();
    let (digits, scale) = match t.as_bytes().last()? {
        b'k' | b'K' => (&t[..t.len() - 1], 1e3),
        b'm' | b'M' => (&t[..t.len() - 1], 1e6),
        _ => (t, 1.0),
    };
    let x: f64 = digits.trim_end().parse().ok()?;
    let x = x * scale;
    x.is_finite().then_some(x)
}

/// Publisher-assigned parameters for one attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeConfig {
    pub name: String,
    /// Probability that the attribute is publicly known.
    pub public_prob: f64,
    /// Sensitivity of the attribute as a whole; zero marks it non-sensitive.
    pub attr_weight: f64,
    pub value_weights: ValueWeightMap,
}

impl AttributeConfig {
    pub fn new(name: impl Into<String>, public_prob: f64, attr_weight: f64) -> Self {
        Self {
            name: name.into(),
            public_prob,
            attr_weight,
            value_weights: ValueWeightMap::default(),
        }
    }

    pub fn with_values(mut self, value_weights: ValueWeightMap) -> Self {
        self.value_weights = value_weights;
        self
    }

    pub fn is_sensitive(&self) -> bool {
        self.attr_weight > 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskConfig {
    /// One entry per dataset attribute, in schema order.
    pub attributes: Vec<AttributeConfig>,
    /// Consequence coefficient, strictly greater than 1.
    pub alpha: f64,
    /// Known sets with publicly-known probability `<= epsilon` are pruned.
    pub epsilon: f64,
    /// Records with risk strictly above this value are reported as high risk.
    pub high_risk_threshold: f64,
}

impl RiskConfig {
    pub fn new(attributes: Vec<AttributeConfig>, alpha: f64, epsilon: f64) -> Self {
        Self {
            attributes,
            alpha,
            epsilon,
            high_risk_threshold: DEFAULT_HIGH_RISK_THRESHOLD,
        }
    }

    pub fn n_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn public_probs(&self) -> Vec<f64> {
        self.attributes.iter().map(|a| a.public_prob).collect()
    }

    pub fn attribute_names(&self) -> Vec<&str> {
        self.attributes.iter().map(|a| a.name.as_str()).collect()
    }
}

/// Sensitivity weight of `value` under `config`.
///
/// Non-sensitive attributes (`attr_weight == 0`) always resolve to 0.
pub fn resolve_value_weight(config: &AttributeConfig, value: &Cell) -> Result<f64> {
    if !config.is_sensitive() {
        return Ok(0.0);
    }
    config
        .value_weights
        .lookup(value)
        .ok_or_else(|| Error::UnresolvableValue {
            attribute: config.name.clone(),
            value: value.to_string(),
        })
}
