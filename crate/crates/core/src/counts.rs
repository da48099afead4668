//! Equivalence-class sizes: for one known set, how many records share each
//! projected value combination.

use rustc_hash::FxHashMap;

use crate::enumerate::KnownSet;
use crate::error::{Error, Result};
use crate::execution::Execution;
use crate::model::{Cell, Dataset, Record};

/// Values of `record` at the members of `ks`, in ascending attribute order.
pub fn project<'a>(record: &Record<'a>, ks: &KnownSet) -> Vec<&'a Cell> {
    ks.members().map(|j| record.get(j)).collect()
}

/// Maps a record's member codes to a hashable key.
///
/// When the product of the member columns' cardinalities fits in `u128` the
/// codes are packed as a mixed-radix number; otherwise the code sequence itself
/// is the key.
#[derive(Debug, Clone)]
enum Keying {
    Packed { strides: Vec<u128> },
    Wide,
}

#[derive(Debug, Clone)]
enum Counts {
    Packed(FxHashMap<u128, u32>),
    Wide(FxHashMap<Box<[u32]>, u32>),
}

/// Occurrence count of every projected value combination for one known set.
#[derive(Debug, Clone)]
pub struct CountTable {
    known_set: KnownSet,
    dataset_id: u64,
    n_records: usize,
    members: Vec<usize>,
    keying: Keying,
    counts: Counts,
}

impl CountTable {
    pub fn known_set(&self) -> &KnownSet {
        &self.known_set
    }

    /// Number of distinct projected tuples (equivalence classes).
    pub fn len(&self) -> usize {
        match &self.counts {
            Counts::Packed(m) => m.len(),
            Counts::Wide(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sum of all counts; equals the dataset size.
    pub fn total(&self) -> usize {
        self.counts_iter().map(|c| c as usize).sum()
    }

    pub fn min_count(&self) -> Option<u32> {
        self.counts_iter().min()
    }

    fn counts_iter(&self) -> Box<dyn Iterator<Item = u32> + '_> {
        match &self.counts {
            Counts::Packed(m) => Box::new(m.values().copied()),
            Counts::Wide(m) => Box::new(m.values().copied()),
        }
    }

    pub fn n_records(&self) -> usize {
        self.n_records
    }

    /// Size of the equivalence class `record` falls into.
    pub fn count_for(&self, record: &Record<'_>) -> Result<u32> {
        if record.dataset().id() != self.dataset_id {
            return Err(Error::DatasetMismatch);
        }
        let found = match (&self.keying, &self.counts) {
            (Keying::Packed { strides }, Counts::Packed(map)) => {
                map.get(&packed_key(record, &self.members, strides)).copied()
            }
            (Keying::Wide, Counts::Wide(map)) => {
                map.get(wide_key(record, &self.members).as_ref()).copied()
            }
            _ => unreachable!("keying and count storage always agree"),
        };
        found.ok_or(Error::MissingProjection {
            record: record.index(),
        })
    }

    /// Count for an explicit value tuple (ascending member order), `0` if absent.
    pub fn count_of_values(&self, dataset: &Dataset, values: &[Cell]) -> Result<u32> {
        if dataset.id() != self.dataset_id {
            return Err(Error::DatasetMismatch);
        }
        if values.len() != self.members.len() {
            return Ok(0);
        }
        let mut codes = Vec::with_capacity(values.len());
        for (&j, v) in self.members.iter().zip(values) {
            match dataset.distinct_values(j).iter().position(|d| d == v) {
                Some(code) => codes.push(code as u32),
                None => return Ok(0),
            }
        }
        Ok(match (&self.keying, &self.counts) {
            (Keying::Packed { strides }, Counts::Packed(map)) => {
                let key = codes
                    .iter()
                    .zip(strides)
                    .map(|(&c, &s)| c as u128 * s)
                    .sum::<u128>();
                map.get(&key).copied().unwrap_or(0)
            }
            (Keying::Wide, Counts::Wide(map)) => map.get(codes.as_slice()).copied().unwrap_or(0),
            _ => unreachable!("keying and count storage always agree"),
        })
    }

    /// All (tuple, count) entries, sorted by tuple.
    pub fn entries<'d>(&self, dataset: &'d Dataset) -> Result<Vec<(Vec<&'d Cell>, u32)>> {
        if dataset.id() != self.dataset_id {
            return Err(Error::DatasetMismatch);
        }
        let decode = |codes: &[u32]| -> Vec<&'d Cell> {
            self.members
                .iter()
                .zip(codes)
                .map(|(&j, &c)| &dataset.distinct_values(j)[c as usize])
                .collect()
        };
        let mut out: Vec<(Vec<&Cell>, u32)> = match (&self.keying, &self.counts) {
            (Keying::Packed { strides }, Counts::Packed(map)) => map
                .iter()
                .map(|(&key, &n)| {
                    let codes: Vec<u32> = strides
                        .iter()
                        .zip(&self.members)
                        .map(|(&s, &j)| {
                            let card = dataset.distinct_values(j).len() as u128;
                            ((key / s) % card) as u32
                        })
                        .collect();
                    (decode(&codes), n)
                })
                .collect(),
            (Keying::Wide, Counts::Wide(map)) => {
                map.iter().map(|(codes, &n)| (decode(codes), n)).collect()
            }
            _ => unreachable!("keying and count storage always agree"),
        };
        out.sort();
        Ok(out)
    }
}

#[inline]
fn packed_key(record: &Record<'_>, members: &[usize], strides: &[u128]) -> u128 {
    members
        .iter()
        .zip(strides)
        .map(|(&j, &s)| record.code(j) as u128 * s)
        .sum()
}

#[inline]
fn wide_key(record: &Record<'_>, members: &[usize]) -> Box<[u32]> {
    members.iter().map(|&j| record.code(j)).collect()
}

fn keying_for(dataset: &Dataset, members: &[usize]) -> Keying {
    let mut strides = Vec::with_capacity(members.len());
    let mut stride: u128 = 1;
    for &j in members {
        strides.push(stride);
        let card = dataset.distinct_values(j).len().max(1) as u128;
        match stride.checked_mul(card) {
            Some(s) => stride = s,
            None => return Keying::Wide,
        }
    }
    Keying::Packed { strides }
}

/// One pass over the dataset counting each projected tuple of `ks`.
pub fn build_count_table(dataset: &Dataset, ks: &KnownSet) -> CountTable {
    let members: Vec<usize> = ks.members().collect();
    debug_assert!(members.iter().all(|&j| j < dataset.n_attributes()));
    let keying = keying_for(dataset, &members);
    let counts = match &keying {
        Keying::Packed { strides } => {
            let mut map: FxHashMap<u128, u32> = FxHashMap::default();
            if members.is_empty() {
                map.insert(0, dataset.n_records() as u32);
            } else if members.len() == 1 {
                // single column: counts by code directly
                let col = dataset.column(members[0]);
                let mut by_code = vec![0u32; col.dictionary.len()];
                for &c in &col.codes {
                    by_code[c as usize] += 1;
                }
                map.extend(
                    by_code
                        .into_iter()
                        .enumerate()
                        .filter(|&(_, n)| n > 0)
                        .map(|(c, n)| (c as u128, n)),
                );
            } else {
                for record in dataset.records() {
                    *map.entry(packed_key(&record, &members, strides)).or_insert(0) += 1;
                }
            }
            Counts::Packed(map)
        }
        Keying::Wide => {
            let mut map: FxHashMap<Box<[u32]>, u32> = FxHashMap::default();
            for record in dataset.records() {
                *map.entry(wide_key(&record, &members)).or_insert(0) += 1;
            }
            Counts::Wide(map)
        }
    };
    CountTable {
        known_set: *ks,
        dataset_id: dataset.id(),
        n_records: dataset.n_records(),
        members,
        keying,
        counts,
    }
}

/// One table per known set, in input order. Tables are built concurrently
/// when `execution` is parallel.
pub fn build_all_count_tables(
    dataset: &Dataset,
    sets: &[KnownSet],
    execution: Execution,
) -> Result<Vec<CountTable>> {
    execution.install(|| execution.map(sets, |ks| build_count_table(dataset, ks)))
}
