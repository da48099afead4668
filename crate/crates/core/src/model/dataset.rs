use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

/// Largest supported attribute count; known sets are stored as `u64` masks.
pub const MAX_ATTRIBUTES: usize = 64;

static NEXT_DATASET_ID: AtomicU64 = AtomicU64::new(1);

/// One categorical cell. Values are opaque tokens; empty input becomes [`Cell::Missing`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Missing,
    Value(Box<str>),
}

impl Cell {
    /// Builds a cell from its textual form. The empty string is the missing marker.
    pub fn from_token(token: &str) -> Self {
        if token.is_empty() {
            Cell::Missing
        } else {
            Cell::Value(token.into())
        }
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }

    /// Token used for value-weight lookup. Missing cells map to `""`.
    pub fn token(&self) -> &str {
        match self {
            Cell::Missing => "",
            Cell::Value(v) => v,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Missing => f.write_str("<missing>"),
            Cell::Value(v) => f.write_str(v),
        }
    }
}

impl From<&str> for Cell {
    fn from(token: &str) -> Self {
        Cell::from_token(token)
    }
}

impl From<String> for Cell {
    fn from(token: String) -> Self {
        if token.is_empty() {
            Cell::Missing
        } else {
            Cell::Value(token.into_boxed_str())
        }
    }
}

/// Dictionary-encoded column: `codes[row]` indexes into `dictionary`.
#[derive(Debug, Clone)]
pub(crate) struct Column {
    pub(crate) dictionary: Vec<Cell>,
    pub(crate) codes: Vec<u32>,
}

/// Immutable table of `N` records over `m` categorical attributes.
///
/// Storage is column-major and dictionary-encoded, so equality of two cells
/// in the same column is equality of their codes.
#[derive(Debug, Clone)]
pub struct Dataset {
    id: u64,
    schema: Vec<String>,
    columns: Vec<Column>,
    n_records: usize,
}

impl Dataset {
    /// Builds a dataset from a header and fully materialized rows.
    pub fn new<S, R, C>(schema: impl IntoIterator<Item = S>, rows: R) -> Result<Self>
    where
        S: Into<String>,
        R: IntoIterator<Item = Vec<C>>,
        C: Into<Cell>,
    {
        let mut builder = DatasetBuilder::new(schema)?;
        for row in rows {
            builder.push_cells(row.into_iter().map(Into::into).collect())?;
        }
        builder.finish()
    }

    pub(crate) fn id(&self) -> u64 {
        self.id
    }

    pub fn schema(&self) -> &[String] {
        &self.schema
    }

    pub fn n_attributes(&self) -> usize {
        self.schema.len()
    }

    pub fn n_records(&self) -> usize {
        self.n_records
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.schema.iter().position(|s| s == name)
    }

    /// Distinct values of attribute `attr` in first-seen order.
    pub fn distinct_values(&self, attr: usize) -> &[Cell] {
        &self.columns[attr].dictionary
    }

    pub fn cell(&self, record: usize, attr: usize) -> &Cell {
        let col = &self.columns[attr];
        &col.dictionary[col.codes[record] as usize]
    }

    pub fn record(&self, index: usize) -> Record<'_> {
        assert!(index < self.n_records, "record index {index} out of bounds");
        Record {
            dataset: self,
            index,
        }
    }

    pub fn records(&self) -> impl ExactSizeIterator<Item = Record<'_>> + '_ {
        (0..self.n_records).map(move |index| Record {
            dataset: self,
            index,
        })
    }

    pub(crate) fn column(&self, attr: usize) -> &Column {
        &self.columns[attr]
    }
}

/// Borrowed view of one row.
#[derive(Clone, Copy)]
pub struct Record<'a> {
    dataset: &'a Dataset,
    index: usize,
}

impl<'a> Record<'a> {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn dataset(&self) -> &'a Dataset {
        self.dataset
    }

    pub fn get(&self, attr: usize) -> &'a Cell {
        self.dataset.cell(self.index, attr)
    }

    pub(crate) fn code(&self, attr: usize) -> u32 {
        self.dataset.columns[attr].codes[self.index]
    }

    pub fn values(&self) -> impl Iterator<Item = &'a Cell> + 'a {
        let (dataset, index) = (self.dataset, self.index);
        (0..dataset.n_attributes()).map(move |j| dataset.cell(index, j))
    }
}

impl fmt::Debug for Record<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Record")
            .field("index", &self.index)
            .field("values", &self.values().collect::<Vec<_>>())
            .finish()
    }
}

#[derive(Default, Clone)]
struct Interner {
    values: FxHashMap<Box<str>, u32>,
    missing: Option<u32>,
}

impl Interner {
    fn intern(&mut self, column: &mut Column, token: &str) -> u32 {
        let existing = if token.is_empty() {
            self.missing
        } else {
            self.values.get(token).copied()
        };
        if let Some(code) = existing {
            return code;
        }
        let code = column.dictionary.len() as u32;
        let cell = Cell::from_token(token);
        match &cell {
            Cell::Missing => self.missing = Some(code),
            Cell::Value(v) => {
                self.values.insert(v.clone(), code);
            }
        }
        column.dictionary.push(cell);
        code
    }
}

/// Incremental row-by-row construction with per-column value interning.
pub struct DatasetBuilder {
    schema: Vec<String>,
    columns: Vec<Column>,
    interners: Vec<Interner>,
    n_records: usize,
}

impl DatasetBuilder {
    pub fn new<S: Into<String>>(schema: impl IntoIterator<Item = S>) -> Result<Self> {
        let schema: Vec<String> = schema.into_iter().map(Into::into).collect();
        if schema.is_empty() {
            return Err(Error::NoAttributes);
        }
        if schema.len() > MAX_ATTRIBUTES {
            return Err(Error::TooManyAttributes {
                found: schema.len(),
                max: MAX_ATTRIBUTES,
            });
        }
        for (i, name) in schema.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::EmptyAttributeName(i));
            }
            if schema[..i].contains(name) {
                return Err(Error::DuplicateAttribute(name.clone()));
            }
        }
        let m = schema.len();
        Ok(Self {
            schema,
            columns: vec![
                Column {
                    dictionary: Vec::new(),
                    codes: Vec::new(),
                };
                m
            ],
            interners: vec![Interner::default(); m],
            n_records: 0,
        })
    }

    pub fn n_records(&self) -> usize {
        self.n_records
    }

    /// Appends a row of textual tokens (empty token = missing).
    pub fn push_row<I, S>(&mut self, row: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let m = self.schema.len();
        if self.n_records >= u32::MAX as usize {
            return Err(Error::TooManyRows {
                max: u32::MAX as usize,
            });
        }
        let mut found = 0;
        for token in row {
            if found < m {
                let code = self.interners[found].intern(&mut self.columns[found], token.as_ref());
                self.columns[found].codes.push(code);
            }
            found += 1;
        }
        if found != m {
            // roll back the partial row
            for column in &mut self.columns[..found.min(m)] {
                column.codes.pop();
            }
            return Err(Error::RaggedRow {
                row: self.n_records,
                expected: m,
                found,
            });
        }
        self.n_records += 1;
        Ok(())
    }

    pub fn push_cells(&mut self, cells: Vec<Cell>) -> Result<()> {
        self.push_row(cells.iter().map(Cell::token))
    }

    pub fn finish(self) -> Result<Dataset> {
        if self.n_records == 0 {
            return Err(Error::EmptyDataset);
        }
        Ok(Dataset {
            id: NEXT_DATASET_ID.fetch_add(1, Ordering::Relaxed),
            schema: self.schema,
            columns: self.columns,
            n_records: self.n_records,
        })
    }
}
