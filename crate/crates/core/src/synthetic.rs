//! Seeded synthetic microdata for benchmarks and scale checks.
//!
//! The default layout has 27 attributes: three likely-public demographics
//! (gender, ethnicity, age) and 24 rarely-public yes/no flags, half of them
//! sensitive with weight 1 on "Yes" and 0 on "No".

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::model::{AttributeConfig, Dataset, DatasetBuilder, RiskConfig, ValueWeightMap};

#[derive(Debug, Clone, PartialEq)]
pub enum ValueKind {
    /// Tokens `v0..v{cardinality}`, skewed towards low indices.
    Categorical { cardinality: usize },
    /// `"Yes"` with probability `yes_rate`, otherwise `"No"`.
    Flag { yes_rate: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticAttribute {
    pub name: String,
    pub public_prob: f64,
    pub attr_weight: f64,
    pub kind: ValueKind,
}

impl SyntheticAttribute {
    fn config(&self) -> AttributeConfig {
        let values = match (&self.kind, self.attr_weight > 0.0) {
            (ValueKind::Flag { .. }, true) => {
                ValueWeightMap::new().with_exact("Yes", 1.0).with_exact("No", 0.0)
            }
            (ValueKind::Categorical { .. }, true) => ValueWeightMap::new().with_default(1.0),
            (_, false) => ValueWeightMap::new(),
        };
        AttributeConfig::new(self.name.clone(), self.public_prob, self.attr_weight)
            .with_values(values)
    }

    fn sample(&self, rng: &mut impl Rng) -> String {
        match self.kind {
            ValueKind::Categorical { cardinality } => {
                let u: f64 = rng.random();
                let k = ((u * u) * cardinality as f64) as usize;
                format!("v{}", k.min(cardinality - 1))
            }
            ValueKind::Flag { yes_rate } => {
                if rng.random_bool(yes_rate) { "Yes" } else { "No" }.to_string()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticWorkload {
    pub n_records: usize,
    pub attributes: Vec<SyntheticAttribute>,
    pub alpha: f64,
    pub epsilon: f64,
    pub seed: u64,
}

impl SyntheticWorkload {
    /// 27 attributes: gender (0.8), ethnicity (0.5), age (0.05) and 24 flags
    /// with public probabilities between 0.001 and 0.005. `alpha = 100`,
    /// `epsilon = 0.01`.
    pub fn table3_pattern(n_records: usize, seed: u64) -> Self {
        let mut attributes = vec![
            SyntheticAttribute {
                name: "Gender".into(),
                public_prob: 0.8,
                attr_weight: 0.0,
                kind: ValueKind::Categorical { cardinality: 2 },
            },
            SyntheticAttribute {
                name: "Ethnicity".into(),
                public_prob: 0.5,
                attr_weight: 0.0,
                kind: ValueKind::Categorical { cardinality: 6 },
            },
            SyntheticAttribute {
                name: "Age".into(),
                public_prob: 0.05,
                attr_weight: 0.0,
                kind: ValueKind::Categorical { cardinality: 16 },
            },
        ];
        for i in 0..24 {
            attributes.push(SyntheticAttribute {
                name: format!("Flag{:02}", i + 1),
                public_prob: 0.001 + 0.004 * (i % 5) as f64 / 4.0,
                attr_weight: if i % 2 == 0 { 1.0 } else { 0.0 },
                kind: ValueKind::Flag {
                    yes_rate: 0.02 + 0.01 * (i % 7) as f64,
                },
            });
        }
        Self {
            n_records,
            attributes,
            alpha: 100.0,
            epsilon: 0.01,
            seed,
        }
    }

    /// Same shape with more public attributes, so that on the order of a
    /// hundred known sets survive pruning.
    pub fn many_public(n_records: usize, seed: u64) -> Self {
        let mut w = Self::table3_pattern(n_records, seed);
        let probs = [0.9, 0.7, 0.5, 0.4, 0.3, 0.25, 0.2];
        for (attr, &p) in w.attributes.iter_mut().zip(&probs) {
            attr.public_prob = p;
        }
        w
    }

    pub fn config(&self) -> RiskConfig {
        RiskConfig::new(
            self.attributes.iter().map(SyntheticAttribute::config).collect(),
            self.alpha,
            self.epsilon,
        )
    }

    pub fn header(&self) -> Vec<String> {
        self.attributes.iter().map(|a| a.name.clone()).collect()
    }

    /// Deterministic rows for this workload's seed.
    pub fn rows(&self) -> impl Iterator<Item = Vec<String>> + '_ {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.n_records).map(move |_| {
            self.attributes
                .iter()
                .map(|a| a.sample(&mut rng))
                .collect()
        })
    }

    pub fn dataset(&self) -> Result<Dataset> {
        let mut builder = DatasetBuilder::new(self.header())?;
        for row in self.rows() {
            builder.push_row(row)?;
        }
        builder.finish()
    }
}
