use serde::{Deserialize, Serialize};

use crate::config::Budget;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::word::{sub_multisets, MultisetWord};

/// `(2k+1)! / (k! (k+1)!)`, the number of (k+1)-subsets of 2k+1 letters.
pub fn order_for(k: usize) -> u64 {
    (0..k as u64).fold(1u64, |acc, i| acc * (2 * k as u64 + 1 - i) / (i + 1))
}

/// Shared index of (k+1)-subsets of the all-distinct word of length 2k+1,
/// in the word-order of [`sub_multisets`]. Subsets are also kept as bit
/// masks for fast lookups.
#[derive(Debug, Clone)]
pub struct SubsetIndex {
    pub k: usize,
    pub words: Vec<MultisetWord>,
    pub masks: Vec<u32>,
    position: Vec<u32>,
}

impl SubsetIndex {
    pub fn new(k: usize, budget: &Budget) -> Result<Self> {
        if k == 0 {
            return Err(Error::ParameterOutOfRange("k must be at least 1".into()));
        }
        let n = order_for(k);
        if n > budget.max_order as u64 || 2 * k + 1 > 31 {
            return Err(Error::Budget {
                what: format!("matrix order at k={k}"),
                required: n,
                limit: budget.max_order as u64,
            });
        }
        let words = sub_multisets(&MultisetWord::all_distinct(2 * k + 1), k + 1)?;
        let masks: Vec<u32> = words
            .iter()
            .map(|w| w.distinct_letters().fold(0u32, |m, l| m | 1 << l.id()))
            .collect();
        let mut position = vec![u32::MAX; 1 << (2 * k + 1)];
        for (i, &m) in masks.iter().enumerate() {
            position[m as usize] = i as u32;
        }
        Ok(Self {
            k,
            words,
            masks,
            position,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn full_mask(&self) -> u32 {
        (1u32 << (2 * self.k + 1)) - 1
    }

    pub fn index_of(&self, mask: u32) -> usize {
        let i = self.position[mask as usize];
        debug_assert!(i != u32::MAX, "mask {mask:b} is not a (k+1)-subset");
        i as usize
    }
}

pub(crate) fn bits(mask: u32) -> impl Iterator<Item = u32> {
    (0..32).filter(move |b| mask >> b & 1 == 1).map(|b| 1u32 << b)
}

/// The 0/1 matrix with `A[x][y] = 1` iff `y = a·(W/x)` for a letter `a` of `x`.
#[derive(Debug, Clone)]
pub struct AMatrix {
    pub index: SubsetIndex,
    /// Sorted column indices of the ones in each row.
    pub adjacency: Vec<Vec<usize>>,
}

impl AMatrix {
    pub fn k(&self) -> usize {
        self.index.k
    }

    pub fn order(&self) -> usize {
        self.index.len()
    }

    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_adjacency(self.order(), &self.adjacency).expect("adjacency is in range")
    }

    /// Trace of A², counted directly from the sparse rows.
    pub fn trace_square(&self) -> u64 {
        self.adjacency
            .iter()
            .enumerate()
            .map(|(x, row)| {
                row.iter()
                    .filter(|&&y| self.adjacency[y].binary_search(&x).is_ok())
                    .count() as u64
            })
            .sum()
    }

    pub fn structure(&self) -> StructuralReport {
        let n = self.order();
        let k = self.k();
        let symmetric = self
            .adjacency
            .iter()
            .enumerate()
            .all(|(x, row)| row.iter().all(|&y| self.adjacency[y].binary_search(&x).is_ok()));
        let zero_diagonal = self
            .adjacency
            .iter()
            .enumerate()
            .all(|(x, row)| row.binary_search(&x).is_err());
        let mut col_sums = vec![0usize; n];
        for row in &self.adjacency {
            for &y in row {
                col_sums[y] += 1;
            }
        }
        let row_sums_ok = self.adjacency.iter().all(|r| r.len() == k + 1);
        let col_sums_ok = col_sums.iter().all(|&c| c == k + 1);
        // y = a·(W/x) with a in x holds exactly when x and y share one letter
        let rule = (0..n).all(|x| {
            let mx = self.index.masks[x];
            let row = &self.adjacency[x];
            (0..n).all(|y| {
                let shares_one = (mx & self.index.masks[y]).count_ones() == 1;
                shares_one == row.binary_search(&y).is_ok()
            })
        });
        StructuralReport {
            k,
            order: n,
            symmetric,
            zero_diagonal,
            constant_line_sums: row_sums_ok && col_sums_ok,
            adjacency_rule: rule,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralReport {
    pub k: usize,
    pub order: usize,
    pub symmetric: bool,
    pub zero_diagonal: bool,
    /// Every row and column has exactly k+1 ones.
    pub constant_line_sums: bool,
    pub adjacency_rule: bool,
}

impl StructuralReport {
    pub fn all_hold(&self) -> bool {
        self.symmetric && self.zero_diagonal && self.constant_line_sums && self.adjacency_rule
    }
}

pub fn build_a(k: usize, budget: &Budget) -> Result<AMatrix> {
    let index = SubsetIndex::new(k, budget)?;
    let full = index.full_mask();
    let adjacency = index
        .masks
        .iter()
        .map(|&x| {
            let complement = full & !x;
            let mut row: Vec<usize> = bits(x).map(|a| index.index_of(complement | a)).collect();
            row.sort_unstable();
            row
        })
        .collect();
    Ok(AMatrix { index, adjacency })
}
