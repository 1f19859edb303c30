use serde::{Deserialize, Serialize};

use super::amatrix::{bits, build_a, AMatrix, SubsetIndex};
use crate::config::Budget;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeltaOrder {
    /// One letter of `x` swapped for one letter of its complement.
    Two,
    /// Two letters swapped for two letters of the complement.
    Four,
}

impl DeltaOrder {
    fn swapped(self) -> u32 {
        match self {
            DeltaOrder::Two => 1,
            DeltaOrder::Four => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DeltaMatrix {
    pub order: DeltaOrder,
    pub adjacency: Vec<Vec<usize>>,
}

impl DeltaMatrix {
    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_adjacency(self.adjacency.len(), &self.adjacency).expect("adjacency is in range")
    }

    pub fn row_sum(&self, x: usize) -> usize {
        self.adjacency[x].len()
    }

    pub fn trace(&self) -> usize {
        self.adjacency
            .iter()
            .enumerate()
            .filter(|(x, row)| row.binary_search(x).is_ok())
            .count()
    }
}

fn subsets_of_size(mask: u32, size: u32) -> Vec<u32> {
    let letters: Vec<u32> = bits(mask).collect();
    let mut out = Vec::new();
    match size {
        1 => out.extend(letters.iter().copied()),
        2 => {
            for (i, &a) in letters.iter().enumerate() {
                for &b in &letters[i + 1..] {
                    out.push(a | b);
                }
            }
        }
        _ => unreachable!("only single and double swaps are used"),
    }
    out
}

fn build_delta(index: &SubsetIndex, order: DeltaOrder) -> DeltaMatrix {
    let full = index.full_mask();
    let s = order.swapped();
    let adjacency = index
        .masks
        .iter()
        .map(|&x| {
            let complement = full & !x;
            let removed = subsets_of_size(x, s);
            let added = subsets_of_size(complement, s);
            let mut row: Vec<usize> = removed
                .iter()
                .flat_map(|&r| added.iter().map(move |&a| (x & !r) | a))
                .map(|z| index.index_of(z))
                .collect();
            row.sort_unstable();
            row.dedup();
            row
        })
        .collect();
    DeltaMatrix { order, adjacency }
}

pub fn build_deltas(k: usize, budget: &Budget) -> Result<(DeltaMatrix, DeltaMatrix)> {
    let index = SubsetIndex::new(k, budget)?;
    Ok((build_delta(&index, DeltaOrder::Two), build_delta(&index, DeltaOrder::Four)))
}

/// Result of one entrywise matrix identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    /// First offending `(x, z, lhs, rhs)` when the identity fails.
    pub first_mismatch: Option<(String, String, i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaAlgebraReport {
    pub k: usize,
    pub order: usize,
    pub delta2_row_sum: Option<usize>,
    pub delta4_row_sum: Option<usize>,
    pub traces_zero: bool,
    pub identities: Vec<IdentityCheck>,
}

impl DeltaAlgebraReport {
    pub fn all_hold(&self) -> bool {
        self.traces_zero && self.identities.iter().all(|c| c.holds)
    }
}

/// Row-major dense copy of a square matrix.
fn dense_square(m: &IntMatrix) -> Result<Vec<i64>> {
    let n = m.rows();
    let mut dense = vec![0i64; n * n];
    for i in 0..n {
        for (j, v) in m.row(i) {
            dense[i * n + j] = v;
        }
    }
    Ok(dense)
}

fn compare(
    name: &str,
    index: &SubsetIndex,
    lhs: &[i64],
    terms: &[(i64, &IntMatrix)],
    identity_coeff: i64,
) -> IdentityCheck {
    let n = index.len();
    let mut rhs = vec![0i64; n * n];
    for i in 0..n {
        rhs[i * n + i] += identity_coeff;
    }
    for &(c, m) in terms {
        for (i, j, v) in m.triplets() {
            rhs[i * n + j] += c * v;
        }
    }
    let first_mismatch = (0..n * n).find(|&p| lhs[p] != rhs[p]).map(|p| {
        let (x, z) = (p / n, p % n);
        (index.words[x].to_string(), index.words[z].to_string(), lhs[p], rhs[p])
    });
    IdentityCheck {
        name: name.to_string(),
        holds: first_mismatch.is_none(),
        first_mismatch,
    }
}

/// Checks entrywise
/// `A² = (k+1)I + Δ₂`,
/// `Δ₂² = k(k+1)I + (2k−1)Δ₂ + 4Δ₄`, and
/// `A⁴ = (k+1)(2k+1)I + (4k+1)Δ₂ + 4Δ₄`.
pub fn verify_delta_algebra(k: usize, budget: &Budget) -> Result<DeltaAlgebraReport> {
    let a: AMatrix = build_a(k, budget)?;
    let n = a.order();
    if n > budget.max_dense_order {
        return Err(Error::Budget {
            what: format!("dense products at k={k}"),
            required: n as u64,
            limit: budget.max_dense_order as u64,
        });
    }
    let (d2, d4) = build_deltas(k, budget)?;
    let (am, d2m, d4m) = (a.matrix(), d2.matrix(), d4.matrix());
    let kk = k as i64;

    let a2 = am.mul_dense(&dense_square(&am)?, n)?;
    let a4 = am.mul_dense(&am.mul_dense(&a2, n)?, n)?;
    let d2sq = d2m.mul_dense(&dense_square(&d2m)?, n)?;
    let d2d4 = d2m.mul_dense(&dense_square(&d4m)?, n)?;
    let d2d4_trace: i64 = (0..n).map(|i| d2d4[i * n + i]).sum();

    let identities = vec![
        compare("A^2 = (k+1)I + D2", &a.index, &a2, &[(1, &d2m)], kk + 1),
        compare(
            "D2^2 = k(k+1)I + (2k-1)D2 + 4D4",
            &a.index,
            &d2sq,
            &[(2 * kk - 1, &d2m), (4, &d4m)],
            kk * (kk + 1),
        ),
        compare(
            "A^4 = (k+1)(2k+1)I + (4k+1)D2 + 4D4",
            &a.index,
            &a4,
            &[(4 * kk + 1, &d2m), (4, &d4m)],
            (kk + 1) * (2 * kk + 1),
        ),
    ];
    let uniform = |d: &DeltaMatrix| {
        let s = d.row_sum(0);
        (0..n).all(|x| d.row_sum(x) == s).then_some(s)
    };
    Ok(DeltaAlgebraReport {
        k,
        order: n,
        delta2_row_sum: uniform(&d2),
        delta4_row_sum: uniform(&d4),
        traces_zero: d2.trace() == 0 && d4.trace() == 0 && d2d4_trace == 0,
        identities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force over all pairs: Δ_s connects x and z iff they share
    /// exactly k+1−s letters.
    fn brute_delta(k: usize, swapped: usize) -> Vec<Vec<usize>> {
        let index = SubsetIndex::new(k, &Budget::default()).unwrap();
        (0..index.len())
            .map(|x| {
                (0..index.len())
                    .filter(|&z| {
                        let shared = index.words[x]
                            .distinct_letters()
                            .filter(|l| index.words[z].count(*l) > 0)
                            .count();
                        shared == k + 1 - swapped
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn deltas_match_brute_force() {
        for k in 1..=4 {
            let (d2, d4) = build_deltas(k, &Budget::default()).unwrap();
            assert_eq!(d2.adjacency, brute_delta(k, 1), "k={k}");
            assert_eq!(d4.adjacency, brute_delta(k, 2), "k={k}");
        }
    }

    #[test]
    fn row_sums() {
        let (d2, d4) = build_deltas(1, &Budget::default()).unwrap();
        assert_eq!(d2.row_sum(0), 2);
        assert!(d4.adjacency.iter().all(Vec::is_empty));
        let (d2, d4) = build_deltas(2, &Budget::default()).unwrap();
        assert!((0..10).all(|x| d2.row_sum(x) == 6 && d4.row_sum(x) == 3));
        for k in 1..=5 {
            let (d2, d4) = build_deltas(k, &Budget::default()).unwrap();
            assert_eq!(d2.trace(), 0);
            assert_eq!(d4.trace(), 0);
            assert_eq!(d2.row_sum(0), (k + 1) * k);
            assert_eq!(d4.row_sum(0), ((k + 1) * k / 2) * (k * k.saturating_sub(1) / 2));
        }
    }

    #[test]
    fn k1_algebra_by_hand() {
        // A = J - I on 3 points, D2 = A, D4 = 0: A^2 = 2I + A and D2^2 = 2I + D2.
        let r = verify_delta_algebra(1, &Budget::default()).unwrap();
        assert!(r.all_hold(), "{r:?}");
        assert_eq!(r.delta2_row_sum, Some(2));
        assert_eq!(r.delta4_row_sum, Some(0));
    }

    #[test]
    fn mismatch_is_located() {
        let index = SubsetIndex::new(1, &Budget::default()).unwrap();
        let lhs = vec![1, 0, 0, 0, 1, 0, 0, 0, 2];
        let id = IntMatrix::identity(3).unwrap();
        let check = compare("I = I", &index, &lhs, &[], 1);
        assert!(!check.holds);
        assert_eq!(check.first_mismatch, Some(("bc".into(), "bc".into(), 2, 1)));
        assert!(compare("I = I", &index, &[1, 0, 0, 0, 1, 0, 0, 0, 1], &[(0, &id)], 1).holds);
    }

    #[test]
    fn dense_budget_enforced() {
        let b = Budget {
            max_dense_order: 100,
            ..Budget::default()
        };
        assert!(verify_delta_algebra(4, &b).unwrap_err().is_budget());
    }
}
