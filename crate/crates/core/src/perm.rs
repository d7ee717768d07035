//! Lexicographic indexing of the temporal order of `M` detections.
//!
//! The order of the chosen frames `k = (k_1, …, k_M)` is first reduced to its
//! rank pattern (the rank of each `k_i` among all chosen frames), and the rank
//! pattern is then mapped to its 1-based lexicographic position among all
//! permutations of `1..=M` through its Lehmer code. For `M = 4` the identity
//! `(1,2,3,4)` gets index 1, `(1,2,4,3)` index 2 and `(1,3,2,4)` index 3.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest supported number of templates; bounds the cost table to 8! entries.
pub const MAX_TEMPLATES: usize = 8;

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Permutation of `1..=M`: entry `i` is the rank of template `i`'s detection.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankPattern(Vec<usize>);

impl RankPattern {
    /// Validates that `ranks` is a permutation of `1..=len`.
    pub fn new(ranks: Vec<usize>) -> Result<Self> {
        let mut seen = alloc::vec![false; ranks.len()];
        for &r in &ranks {
            if r == 0 || r > ranks.len() || seen[r - 1] {
                return Err(Error::NotAPermutation);
            }
            seen[r - 1] = true;
        }
        Ok(RankPattern(ranks))
    }

    pub fn identity(m: usize) -> Self {
        RankPattern((1..=m).collect())
    }

    pub fn ranks(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &r)| r == i + 1)
    }
}

/// Rank of each chosen frame among all chosen frames: `1 + |{j : k_j < k_i}|`.
pub fn rank_pattern(frames: &[usize]) -> Result<RankPattern> {
    let mut order: Vec<usize> = (0..frames.len()).collect();
    order.sort_by_key(|&i| frames[i]);
    if let Some(w) = order.windows(2).find(|w| frames[w[0]] == frames[w[1]]) {
        return Err(Error::DuplicateIndex {
            index: frames[w[0]],
        });
    }
    let mut ranks = alloc::vec![0; frames.len()];
    for (rank, &i) in order.iter().enumerate() {
        ranks[i] = rank + 1;
    }
    Ok(RankPattern(ranks))
}

/// 1-based lexicographic rank of `pattern` among all permutations of its length.
pub fn perm_index(pattern: &RankPattern) -> usize {
    let ranks = pattern.ranks();
    let m = ranks.len();
    let mut index = 0;
    for i in 0..m {
        // Lehmer digit: later entries smaller than this one.
        let smaller = ranks[i + 1..].iter().filter(|&&r| r < ranks[i]).count();
        index += smaller * factorial(m - 1 - i);
    }
    index + 1
}

/// Inverse of [`perm_index`] for permutations of `1..=m`.
pub fn perm_unrank(index: usize, m: usize) -> Result<RankPattern> {
    let max = factorial(m);
    if index == 0 || index > max {
        return Err(Error::PermIndexOutOfRange { index, max });
    }
    let mut rest = index - 1;
    let mut pool: Vec<usize> = (1..=m).collect();
    let mut ranks = Vec::with_capacity(m);
    for i in 0..m {
        let f = factorial(m - 1 - i);
        ranks.push(pool.remove(rest / f));
        rest %= f;
    }
    Ok(RankPattern(ranks))
}

/// Index of the temporal order of `frames`; shorthand for `perm_index(rank_pattern(frames))`.
pub fn order_index(frames: &[usize]) -> Result<usize> {
    Ok(perm_index(&rank_pattern(frames)?))
}
