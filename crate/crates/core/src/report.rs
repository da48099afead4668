//! Summaries of an assessment: log-scale histogram, high-risk listing and
//! basic statistics.

use crate::error::{Error, Result};
use crate::model::RiskConfig;
use crate::risk::RecordRisk;

/// Decade histogram layout: a zero bin, then `(0, 10^min_exponent]`, then one
/// bin per decade up to the first power of ten at or above the maximum risk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinSpec {
    pub min_exponent: i32,
}

impl Default for BinSpec {
    fn default() -> Self {
        Self { min_exponent: -12 }
    }
}

/// Bin `(lower, upper]`; the zero bin is `[0, 0]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Lower-middle element for even counts.
    pub median: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskReport {
    pub n_records: usize,
    pub retained_set_count: usize,
    pub epsilon: f64,
    pub alpha: f64,
    pub high_risk_threshold: f64,
    pub histogram: Vec<HistogramBin>,
    /// Records with risk strictly above the threshold, highest first.
    pub high_risk: Vec<RecordRisk>,
    pub summary: Summary,
}

impl RiskReport {
    pub fn high_risk_count(&self) -> usize {
        self.high_risk.len()
    }

    /// Share of records above the threshold, in percent.
    pub fn high_risk_percent(&self) -> f64 {
        100.0 * self.high_risk.len() as f64 / self.n_records as f64
    }
}

/// Exact double nearest to `10^exp`.
fn power_of_ten(exp: i32) -> f64 {
    format!("1e{exp}").parse().expect("valid float literal")
}

pub fn histogram(risks: &[f64], spec: BinSpec) -> Vec<HistogramBin> {
    let zeros = risks.iter().filter(|&&r| r == 0.0).count();
    let mut bins = vec![HistogramBin {
        lower: 0.0,
        upper: 0.0,
        count: zeros,
    }];
    let max = risks.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return bins;
    }
    let mut edges = vec![power_of_ten(spec.min_exponent)];
    let mut exp = spec.min_exponent;
    while *edges.last().unwrap() < max {
        exp += 1;
        edges.push(power_of_ten(exp));
    }
    let mut counts = vec![0usize; edges.len()];
    for &r in risks.iter().filter(|&&r| r > 0.0) {
        counts[edges.partition_point(|&e| e < r)] += 1;
    }
    let mut lower = 0.0;
    for (&upper, count) in edges.iter().zip(counts) {
        bins.push(HistogramBin {
            lower,
            upper,
            count,
        });
        lower = upper;
    }
    bins
}

fn summarize(risks: &[f64]) -> Summary {
    let mut sorted = risks.to_vec();
    sorted.sort_by(f64::total_cmp);
    Summary {
        min: sorted[0],
        max: sorted[sorted.len() - 1],
        mean: risks.iter().sum::<f64>() / risks.len() as f64,
        median: sorted[(sorted.len() - 1) / 2],
    }
}

/// Aggregates per-record risks. `risks` must be non-empty.
pub fn build_report(
    risks: &[RecordRisk],
    retained_set_count: usize,
    config: &RiskConfig,
    bins: BinSpec,
) -> Result<RiskReport> {
    if risks.is_empty() {
        return Err(Error::EmptyRisks);
    }
    let values: Vec<f64> = risks.iter().map(|r| r.risk).collect();
    let mut high_risk: Vec<RecordRisk> = risks
        .iter()
        .filter(|r| r.risk > config.high_risk_threshold)
        .cloned()
        .collect();
    high_risk.sort_by(|a, b| {
        b.risk
            .total_cmp(&a.risk)
            .then(a.record_index.cmp(&b.record_index))
    });
    Ok(RiskReport {
        n_records: risks.len(),
        retained_set_count,
        epsilon: config.epsilon,
        alpha: config.alpha,
        high_risk_threshold: config.high_risk_threshold,
        histogram: histogram(&values, bins),
        high_risk,
        summary: summarize(&values),
    })
}
