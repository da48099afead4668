//! Per-record disclosure risk.
//!
//! For every retained known set `S` a record contributes
//! `likelihood(S) * alpha * consequence(S)`, where the likelihood is the
//! probability of `S` being public divided by the size of the record's
//! equivalence class on `S`, and the consequence is the weighted sensitivity
//! of the record's values on the attributes outside `S`. The record's risk is
//! the sum of these terms, accumulated in canonical known-set order.

use crate::counts::{build_all_count_tables, CountTable};
use crate::enumerate::{brute_force_known_sets, enumerate_known_sets, KnownSet};
use crate::error::Result;
use crate::execution::Execution;
use crate::model::{resolve_value_weight, validate_config, Dataset, Record, RiskConfig};

pub const DEFAULT_TOP_CONTRIBUTIONS: usize = 10;

/// One known/unknown split's share of a record's risk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contribution {
    pub known_set: KnownSet,
    pub likelihood: f64,
    pub consequence: f64,
    /// `likelihood * alpha * consequence`
    pub term: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecordRisk {
    pub record_index: usize,
    pub risk: f64,
    /// Largest terms, descending; ties keep canonical known-set order.
    pub top_contributions: Vec<Contribution>,
}

/// Likelihood of identifying `record` through `ks`: `pk / count`.
pub fn likelihood(record: &Record<'_>, ks: &KnownSet, table: &CountTable) -> Result<f64> {
    debug_assert_eq!(table.known_set().mask(), ks.mask());
    let count = table.count_for(record)?;
    Ok(ks.pk() / count as f64)
}

/// Sensitivity revealed through the unknown set of `ks`: the sum over
/// attributes outside `ks` of `attr_weight * value_weight`.
pub fn consequence(record: &Record<'_>, ks: &KnownSet, config: &RiskConfig) -> Result<f64> {
    let m = config.n_attributes();
    let mut total = 0.0;
    for j in ks.unknown(m) {
        let attr = &config.attributes[j];
        total += attr.attr_weight * resolve_value_weight(attr, record.get(j))?;
    }
    Ok(total)
}

/// Risk of one record over the given retained sets.
///
/// `retained` must be in canonical order and built from the record's dataset.
pub fn record_risk(
    record: &Record<'_>,
    retained: &[CountTable],
    config: &RiskConfig,
    top_k: usize,
) -> Result<RecordRisk> {
    let weights = config
        .attributes
        .iter()
        .enumerate()
        .map(|(j, attr)| Ok(attr.attr_weight * resolve_value_weight(attr, record.get(j))?))
        .collect::<Result<Vec<f64>>>()?;
    evaluate(record, retained, config.alpha, &weights, top_k)
}

/// Shared accumulation for [`record_risk`] and the batch engine. `weights[j]`
/// is the record's `attr_weight * value_weight` on attribute `j`.
fn evaluate(
    record: &Record<'_>,
    retained: &[CountTable],
    alpha: f64,
    weights: &[f64],
    top_k: usize,
) -> Result<RecordRisk> {
    let m = weights.len();
    let mut risk = 0.0;
    let mut terms = Vec::new();
    for table in retained {
        let ks = table.known_set();
        let l = likelihood(record, ks, table)?;
        let c: f64 = ks.unknown(m).fold(0.0, |acc, j| acc + weights[j]);
        let term = l * alpha * c;
        risk += term;
        if top_k > 0 {
            terms.push(Contribution {
                known_set: *ks,
                likelihood: l,
                consequence: c,
                term,
            });
        }
    }
    if top_k > 0 {
        terms.sort_by(|a, b| b.term.total_cmp(&a.term));
        terms.truncate(top_k);
    }
    Ok(RecordRisk {
        record_index: record.index(),
        risk,
        top_contributions: terms,
    })
}

/// Which known sets enter the sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KnownSetSource {
    /// Depth-first pruned enumeration.
    #[default]
    Pruned,
    /// Filter over all `2^m` subsets; limited to small `m`.
    BruteForce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssessOptions {
    pub execution: Execution,
    pub source: KnownSetSource,
    /// How many of the largest terms to keep per record; 0 disables.
    pub top_contributions: usize,
}

impl Default for AssessOptions {
    fn default() -> Self {
        Self {
            execution: Execution::default(),
            source: KnownSetSource::Pruned,
            top_contributions: DEFAULT_TOP_CONTRIBUTIONS,
        }
    }
}

/// Retained known sets, their count tables and per-value weights for one
/// (dataset, config) pair. Immutable once prepared.
pub struct RiskModel<'a> {
    dataset: &'a Dataset,
    config: &'a RiskConfig,
    tables: Vec<CountTable>,
    /// `code_weights[j][code]` = `attr_weight * value_weight` of that value.
    code_weights: Vec<Vec<f64>>,
}

impl<'a> RiskModel<'a> {
    /// Validates, enumerates known sets and builds their count tables.
    pub fn prepare(
        dataset: &'a Dataset,
        config: &'a RiskConfig,
        source: KnownSetSource,
        execution: Execution,
    ) -> Result<Self> {
        validate_config(dataset, config)?;
        let sets = match source {
            KnownSetSource::Pruned => enumerate_known_sets(config),
            KnownSetSource::BruteForce => brute_force_known_sets(config)?,
        };
        let tables = build_all_count_tables(dataset, &sets, execution)?;
        let code_weights = config
            .attributes
            .iter()
            .enumerate()
            .map(|(j, attr)| {
                dataset
                    .distinct_values(j)
                    .iter()
                    .map(|v| Ok(attr.attr_weight * resolve_value_weight(attr, v)?))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dataset,
            config,
            tables,
            code_weights,
        })
    }

    pub fn known_sets(&self) -> Vec<KnownSet> {
        self.tables.iter().map(|t| *t.known_set()).collect()
    }

    pub fn tables(&self) -> &[CountTable] {
        &self.tables
    }

    pub fn dataset(&self) -> &Dataset {
        self.dataset
    }

    pub fn evaluate(&self, record_index: usize, top_k: usize) -> Result<RecordRisk> {
        let record = self.dataset.record(record_index);
        let weights: Vec<f64> = self
            .code_weights
            .iter()
            .enumerate()
            .map(|(j, w)| w[record.code(j) as usize])
            .collect();
        evaluate(&record, &self.tables, self.config.alpha, &weights, top_k)
    }

    /// Evaluates every record; output is in dataset order for any execution mode.
    pub fn evaluate_all(&self, top_k: usize, execution: Execution) -> Result<Vec<RecordRisk>> {
        execution
            .install(|| execution.map_range(self.dataset.n_records(), |i| self.evaluate(i, top_k)))?
            .into_iter()
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Assessment {
    pub known_sets: Vec<KnownSet>,
    pub records: Vec<RecordRisk>,
}

impl Assessment {
    pub fn risks(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.risk).collect()
    }
}

/// Scores every record of `dataset`: enumerate once, count once, then
/// evaluate each record independently.
pub fn assess_dataset(
    dataset: &Dataset,
    config: &RiskConfig,
    options: &AssessOptions,
) -> Result<Assessment> {
    let model = RiskModel::prepare(dataset, config, options.source, options.execution)?;
    let records = model.evaluate_all(options.top_contributions, options.execution)?;
    Ok(Assessment {
        known_sets: model.known_sets(),
        records,
    })
}
