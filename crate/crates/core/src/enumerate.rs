//! Known-set enumeration with monotone probability pruning.
//!
//! The publicly-known probability of a set is the product of its members'
//! probabilities, so it can only shrink as the set grows. A depth-first walk
//! of the subset tree, where each node is extended only by attributes with a
//! higher index than its current maximum, can therefore drop the whole
//! subtree below the first node whose probability is not above `epsilon`.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::RiskConfig;

/// Default cap on `m` for [`brute_force_known_sets`].
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// A set of attribute indices, stored as a bitmask (index 0 is the least
/// significant bit), together with its publicly-known probability.
///
/// The unknown set is the complement and is never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnownSet {
    mask: u64,
    pk: f64,
}

impl KnownSet {
    pub fn new(mask: u64, probs: &[f64]) -> Self {
        Self {
            mask,
            pk: mask_probability(probs, mask),
        }
    }

    pub fn from_indices(indices: &[usize], probs: &[f64]) -> Self {
        Self::new(indices_to_mask(indices), probs)
    }

    pub fn empty() -> Self {
        Self { mask: 0, pk: 1.0 }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn pk(&self) -> f64 {
        self.pk
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, attr: usize) -> bool {
        attr < 64 && self.mask >> attr & 1 == 1
    }

    pub fn is_subset_of(&self, other: &KnownSet) -> bool {
        self.mask & !other.mask == 0
    }

    /// Member indices in ascending order.
    pub fn members(&self) -> Members {
        Members(self.mask)
    }

    /// Indices in `0..m` not in the set, ascending.
    pub fn unknown(&self, m: usize) -> Members {
        Members(!self.mask & full_mask(m))
    }

    pub fn names<'a>(&self, names: &'a [impl AsRef<str>]) -> Vec<&'a str> {
        self.members().map(|j| names[j].as_ref()).collect()
    }
}

impl fmt::Display for KnownSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, j) in self.members().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}")?;
        }
        f.write_str("}")
    }
}

/// Ascending iterator over the set bits of a mask.
#[derive(Debug, Clone)]
pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let j = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(j)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

pub(crate) fn full_mask(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

fn indices_to_mask(indices: &[usize]) -> u64 {
    indices.iter().fold(0u64, |acc, &j| {
        assert!(j < 64, "attribute index {j} out of range");
        acc | 1 << j
    })
}

/// Product of `probs` over the set bits of `mask`, multiplied in ascending
/// index order starting from 1.
fn mask_probability(probs: &[f64], mask: u64) -> f64 {
    Members(mask).fold(1.0, |acc, j| acc * probs[j])
}

/// Publicly-known probability of the attribute set `indices`; the empty set has
/// probability 1.
pub fn known_set_probability(config: &RiskConfig, indices: &[usize]) -> f64 {
    let probs = config.public_probs();
    mask_probability(&probs, indices_to_mask(indices))
}

/// Every known set whose probability is strictly above `config.epsilon`,
/// sorted by mask.
///
/// Work is proportional to the number of retained sets times `m`; pruned
/// subtrees are never visited.
pub fn enumerate_known_sets(config: &RiskConfig) -> Vec<KnownSet> {
    enumerate_with(&config.public_probs(), config.epsilon)
}

pub(crate) fn enumerate_with(probs: &[f64], epsilon: f64) -> Vec<KnownSet> {
    let mut out = Vec::new();
    if 1.0 > epsilon {
        out.push(KnownSet::empty());
        // explicit stack of (set, next attribute to try)
        let mut stack: Vec<(KnownSet, usize)> = vec![(KnownSet::empty(), 0)];
        while let Some((set, next)) = stack.pop() {
            for j in (next..probs.len()).rev() {
                let pk = set.pk * probs[j];
                if pk > epsilon {
                    let child = KnownSet {
                        mask: set.mask | 1 << j,
                        pk,
                    };
                    out.push(child);
                    stack.push((child, j + 1));
                }
            }
        }
    }
    out.sort_by_key(KnownSet::mask);
    out
}

/// Reference enumeration: tests all `2^m` subsets. Refuses `m > BRUTE_FORCE_LIMIT`.
pub fn brute_force_known_sets(config: &RiskConfig) -> Result<Vec<KnownSet>> {
    brute_force_with(&config.public_probs(), config.epsilon, BRUTE_FORCE_LIMIT)
}

pub fn brute_force_with(probs: &[f64], epsilon: f64, limit: usize) -> Result<Vec<KnownSet>> {
    let m = probs.len();
    if m > limit || m >= 64 {
        return Err(Error::BruteForceLimit { m, limit });
    }
    Ok((0..1u64 << m)
        .map(|mask| KnownSet::new(mask, probs))
        .filter(|s| s.pk > epsilon)
        .collect())
}
