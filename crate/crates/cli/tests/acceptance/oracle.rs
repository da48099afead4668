//! Straight-line reference scorer and random instance generator.
//!
//! Works on plain strings: no dictionary encoding, no pruning, no shared code
//! with the engine beyond the input types it converts into.

use std::collections::HashMap;

use microrisk::{AttributeConfig, Dataset, DatasetBuilder, RiskConfig, ValueWeightMap};
use rand::Rng;

#[derive(Debug, Clone)]
pub enum Column {
    Categorical { tokens: Vec<String>, missing_rate: f64 },
    Numeric { max: u32 },
}

#[derive(Debug, Clone)]
pub struct Weights {
    pub exact: Vec<(String, f64)>,
    /// `[lo, hi)` with optional bounds.
    pub ranges: Vec<(Option<f64>, Option<f64>, f64)>,
    pub default: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub rows: Vec<Vec<String>>,
    pub probs: Vec<f64>,
    pub attr_weights: Vec<f64>,
    pub weights: Vec<Weights>,
    pub alpha: f64,
}

impl Instance {
    pub fn m(&self) -> usize {
        self.probs.len()
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.m()).map(|j| format!("A{j}")).collect()
    }

    pub fn dataset(&self) -> Dataset {
        let mut b = DatasetBuilder::new(self.names()).unwrap();
        for row in &self.rows {
            b.push_row(row).unwrap();
        }
        b.finish().unwrap()
    }

    pub fn config(&self, epsilon: f64) -> RiskConfig {
        let attributes = (0..self.m())
            .map(|j| {
                let w = &self.weights[j];
                let mut map = ValueWeightMap::new();
                for (t, v) in &w.exact {
                    map = map.with_exact(t.clone(), *v);
                }
                for &(lo, hi, v) in &w.ranges {
                    map = map.with_range(lo, hi, v);
                }
                if let Some(d) = w.default {
                    map = map.with_default(d);
                }
                AttributeConfig::new(format!("A{j}"), self.probs[j], self.attr_weights[j])
                    .with_values(map)
            })
            .collect();
        RiskConfig::new(attributes, self.alpha, epsilon)
    }

    fn value_weight(&self, j: usize, token: &str) -> f64 {
        if self.attr_weights[j] == 0.0 {
            return 0.0;
        }
        let w = &self.weights[j];
        for (t, v) in &w.exact {
            if t == token {
                return *v;
            }
        }
        if let Ok(x) = token.parse::<f64>() {
            for &(lo, hi, v) in &w.ranges {
                let above = lo.is_none_or(|lo| x >= lo);
                let below = hi.is_none_or(|hi| x < hi);
                if above && below {
                    return v;
                }
            }
        }
        w.default.expect("generator always makes values resolvable")
    }

    /// Risk of every record summed over all `2^m` splits whose known side has
    /// probability above `epsilon`.
    pub fn risks(&self, epsilon: f64) -> Vec<f64> {
        let m = self.m();
        let n = self.rows.len();
        let mut out = vec![0.0; n];
        for mask in 0u32..1 << m {
            let known: Vec<usize> = (0..m).filter(|j| mask >> j & 1 == 1).collect();
            let mut pk = 1.0;
            for &j in &known {
                pk *= self.probs[j];
            }
            if pk <= epsilon {
                continue;
            }
            let mut classes: HashMap<Vec<&str>, usize> = HashMap::new();
            for row in &self.rows {
                let key: Vec<&str> = known.iter().map(|&j| row[j].as_str()).collect();
                *classes.entry(key).or_default() += 1;
            }
            for (i, row) in self.rows.iter().enumerate() {
                let key: Vec<&str> = known.iter().map(|&j| row[j].as_str()).collect();
                let likelihood = pk / classes[&key] as f64;
                let mut consequence = 0.0;
                for j in (0..m).filter(|j| mask >> j & 1 == 0) {
                    consequence += self.attr_weights[j] * self.value_weight(j, &row[j]);
                }
                out[i] += likelihood * self.alpha * consequence;
            }
        }
        out
    }
}

fn unit(rng: &mut impl Rng) -> f64 {
    rng.random_range(0.0..=1.0)
}

pub fn random_instance(rng: &mut impl Rng, max_m: usize, max_n: usize) -> Instance {
    let m = rng.random_range(1..=max_m);
    let n = rng.random_range(1..=max_n);
    let columns: Vec<Column> = (0..m)
        .map(|_| {
            if rng.random_bool(0.7) {
                let k = rng.random_range(1..=6);
                Column::Categorical {
                    tokens: (0..k).map(|t| format!("t{t}")).collect(),
                    missing_rate: if rng.random_bool(0.3) { 0.1 } else { 0.0 },
                }
            } else {
                Column::Numeric {
                    max: rng.random_range(1..=100),
                }
            }
        })
        .collect();
    let rows = (0..n)
        .map(|_| {
            columns
                .iter()
                .map(|c| match c {
                    Column::Categorical {
                        tokens,
                        missing_rate,
                    } => {
                        if rng.random_bool(*missing_rate) {
                            String::new()
                        } else {
                            tokens[rng.random_range(0..tokens.len())].clone()
                        }
                    }
                    Column::Numeric { max } => rng.random_range(0..=*max).to_string(),
                })
                .collect()
        })
        .collect();
    let probs = (0..m)
        .map(|_| match rng.random_range(0..6) {
            0 => 1.0,
            1 => 0.0,
            _ => unit(rng),
        })
        .collect();
    let attr_weights = (0..m)
        .map(|_| if rng.random_bool(0.3) { 0.0 } else { unit(rng) })
        .collect();
    let weights = columns
        .iter()
        .map(|c| match c {
            Column::Categorical { tokens, .. } => {
                let mut exact = Vec::new();
                for t in tokens {
                    if rng.random_bool(0.7) {
                        exact.push((t.clone(), unit(rng)));
                    }
                }
                if rng.random_bool(0.5) {
                    exact.push((String::new(), unit(rng)));
                }
                Weights {
                    exact,
                    ranges: Vec::new(),
                    default: Some(unit(rng)),
                }
            }
            Column::Numeric { max } => {
                let cut = rng.random_range(0..=*max) as f64;
                Weights {
                    exact: vec![("0".to_string(), unit(rng))],
                    ranges: vec![
                        (None, Some(cut), unit(rng)),
                        (Some(cut), Some(cut + 10.0), unit(rng)),
                    ],
                    default: Some(unit(rng)),
                }
            }
        })
        .collect();
    Instance {
        rows,
        probs,
        attr_weights,
        weights,
        alpha: rng.random_range(1.0001..=200.0),
    }
}
