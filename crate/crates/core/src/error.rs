use thiserror::Error;

use crate::model::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty dataset")]
    EmptyDataset,

    #[error("dataset has no attributes")]
    NoAttributes,

    #[error("attribute name at position {0} is empty")]
    EmptyAttributeName(usize),

    #[error("duplicate attribute name `{0}`")]
    DuplicateAttribute(String),

    #[error("row {row} has {found} cells, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("dataset has {found} attributes, at most {max} are supported")]
    TooManyAttributes { found: usize, max: usize },

    #[error("dataset has more than {max} rows")]
    TooManyRows { max: usize },

    #[error(transparent)]
    Validation(#[from] ValidationError),

    #[error("value `{value}` of sensitive attribute `{attribute}` has no sensitivity weight")]
    UnresolvableValue { attribute: String, value: String },

    #[error("brute force limited to m ≤ {limit} (got m = {m})")]
    BruteForceLimit { m: usize, limit: usize },

    #[error("count table and record come from different datasets")]
    DatasetMismatch,

    #[error("projection of record {record} is missing from the count table")]
    MissingProjection { record: usize },

    #[error("no risk values to report")]
    EmptyRisks,

    #[error("failed to start worker pool: {0}")]
    ThreadPool(String),
}

/// All violations found while checking a configuration against a dataset.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{}", render(.violations))]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

fn render(violations: &[Violation]) -> String {
    let mut out = format!("{} configuration violation(s)", violations.len());
    for v in violations {
        out.push_str("\n  - ");
        out.push_str(&v.to_string());
    }
    out
}
