//! Record-level disclosure risk for tabular microdata.
//!
//! Each record is scored against every split of the attributes into a set
//! an adversary knows and a set they would learn. A split contributes the
//! chance of identifying the record from the known attributes (how likely
//! they are public, divided by how many records share the record's values)
//! times the sensitivity of what the remaining attributes reveal.
//!
//! Splits whose known side is too unlikely to be public are pruned, along
//! with all their supersets, before any counting happens.
//!
//! ```
//! use microrisk::{assess_dataset, AssessOptions, AttributeConfig, Dataset, RiskConfig, ValueWeightMap};
//!
//! let data = Dataset::new(
//!     ["Gender", "Disease"],
//!     vec![vec!["F", "Flu"], vec!["M", "Cancer"], vec!["F", "Flu"]],
//! )?;
//! let config = RiskConfig::new(
//!     vec![
//!         AttributeConfig::new("Gender", 0.8, 0.0),
//!         AttributeConfig::new("Disease", 0.001, 1.0).with_values(
//!             ValueWeightMap::new().with_exact("Flu", 0.2).with_exact("Cancer", 1.0),
//!         ),
//!     ],
//!     100.0,
//!     0.01,
//! );
//! let assessment = assess_dataset(&data, &config, &AssessOptions::default())?;
//! assert_eq!(assessment.known_sets.len(), 2);
//! assert!(assessment.records[1].risk > assessment.records[0].risk);
//! # Ok::<(), microrisk::Error>(())
//! ```

pub mod counts;
pub mod enumerate;
mod error;
pub mod execution;
pub mod model;
pub mod report;
pub mod risk;
pub mod synthetic;

pub use counts::{build_all_count_tables, build_count_table, project, CountTable};
pub use enumerate::{
    brute_force_known_sets, enumerate_known_sets, known_set_probability, KnownSet,
    BRUTE_FORCE_LIMIT,
};
pub use error::{Error, Result, ValidationError};
pub use execution::Execution;
pub use model::{
    resolve_value_weight, validate_config, validate_parameters, AttributeConfig, Cell, Dataset,
    DatasetBuilder, Record, RiskConfig, ValueWeightMap, Violation, WeightRange,
};
pub use report::{build_report, BinSpec, HistogramBin, RiskReport, Summary};
pub use risk::{
    assess_dataset, consequence, likelihood, record_risk, AssessOptions, Assessment,
    Contribution, KnownSetSource, RecordRisk, RiskModel,
};
