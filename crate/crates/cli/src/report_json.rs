//! Report document written by `compute` and read back by `histogram`.
//!
//! Every real number is written in scientific notation with 17 significant
//! digits, so a report round-trips exactly and identical runs produce
//! identical bytes.

use std::fmt;

use microrisk::{KnownSetSource, RiskReport};
use serde::de::Deserializer;
use serde::ser::{Error as _, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

pub const TOOL_NAME: &str = "microrisk";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `f64` that serializes with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Real(pub f64);

pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_real(self.0))
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom("non-finite number in report"));
        }
        RawValue::from_string(format_real(self.0))
            .map_err(S::Error::custom)?
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        f64::deserialize(deserializer).map(Real)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub known_set_source: String,
    pub retained_rule: String,
    pub retained_count_includes_empty_set: bool,
    pub high_risk_rule: String,
    pub histogram_bins: String,
    pub median: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryJson {
    pub min: Real,
    pub max: Real,
    pub mean: Real,
    pub median: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinJson {
    pub lower: Real,
    pub upper: Real,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContributionJson {
    pub known_set: Vec<String>,
    pub pk: Real,
    pub likelihood: Real,
    pub consequence: Real,
    pub term: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HighRiskJson {
    pub record_index: usize,
    pub risk: Real,
    pub top_contributions: Vec<ContributionJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: ToolInfo,
    pub n_records: usize,
    pub retained_set_count: usize,
    pub epsilon: Real,
    pub alpha: Real,
    pub high_risk_threshold: Real,
    pub high_risk_count: usize,
    pub high_risk_percent: Real,
    pub summary: SummaryJson,
    pub histogram: Vec<BinJson>,
    pub high_risk: Vec<HighRiskJson>,
    pub conventions: Conventions,
}

impl ReportDocument {
    pub fn new(report: &RiskReport, attribute_names: &[String], source: KnownSetSource, min_exponent: i32) -> Self {
        ReportDocument {
            tool: ToolInfo {
                name: TOOL_NAME.to_string(),
                version: TOOL_VERSION.to_string(),
            },
            n_records: report.n_records,
            retained_set_count: report.retained_set_count,
            epsilon: Real(report.epsilon),
            alpha: Real(report.alpha),
            high_risk_threshold: Real(report.high_risk_threshold),
            high_risk_count: report.high_risk_count(),
            high_risk_percent: Real(report.high_risk_percent()),
            summary: SummaryJson {
                min: Real(report.summary.min),
                max: Real(report.summary.max),
                mean: Real(report.summary.mean),
                median: Real(report.summary.median),
            },
            histogram: report
                .histogram
                .iter()
                .map(|b| BinJson {
                    lower: Real(b.lower),
                    upper: Real(b.upper),
                    count: b.count,
                })
                .collect(),
            high_risk: report
                .high_risk
                .iter()
                .map(|r| HighRiskJson {
                    record_index: r.record_index,
                    risk: Real(r.risk),
                    top_contributions: r
                        .top_contributions
                        .iter()
                        .map(|c| ContributionJson {
                            known_set: c
                                .known_set
                                .names(attribute_names)
                                .into_iter()
                                .map(str::to_string)
                                .collect(),
                            pk: Real(c.known_set.pk()),
                            likelihood: Real(c.likelihood),
                            consequence: Real(c.consequence),
                            term: Real(c.term),
                        })
                        .collect(),
                })
                .collect(),
            conventions: Conventions {
                known_set_source: match source {
                    KnownSetSource::Pruned => "pruned",
                    KnownSetSource::BruteForce => "brute_force",
                }
                .to_string(),
                retained_rule: "known sets with pk > epsilon".to_string(),
                retained_count_includes_empty_set: true,
                high_risk_rule: "risk > high_risk_threshold".to_string(),
                histogram_bins: format!(
                    "zero bin [0, 0], then (lower, upper] decades from 1e{min_exponent}"
                ),
                median: "lower middle element for even counts".to_string(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
