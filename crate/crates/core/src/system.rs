//! Linear systems of integral-moment identities for one combined word.
//!
//! For a combined word `W` and split length `k`, every (k+1)-sub-multiset
//! `w1` of `W` with complement `w2 = W/w1` yields the identity
//! `sum_a m_a(w1) · (w1/a ; a·w2) = 0` over the distinct letters `a` of
//! `w1`, where `m_a(w1)` is the multiplicity of `a`. The unknowns are the
//! moments `(u ; W/u)` for every k-sub-multiset `u`.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::nullspace::{apply, rational_echelon};
use crate::linalg::IntMatrix;
use crate::word::{canonical_pattern, partitions, quotient, remove_one, sub_multisets, MultisetWord, Pattern};

/// An integral moment `(left ; right)`: the coordinate monomial of `left`
/// integrated against the tensor component indexed by `right`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Moment {
    pub left: MultisetWord,
    pub right: MultisetWord,
}

impl Moment {
    pub fn new(left: MultisetWord, right: MultisetWord) -> Self {
        Self { left, right }
    }

    pub fn combined(&self) -> MultisetWord {
        self.left.concat(&self.right)
    }
}

impl fmt::Display for Moment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{})", self.left, self.right)
    }
}

/// Row label `<w1|w2>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowLabel {
    pub w1: MultisetWord,
    pub w2: MultisetWord,
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}|{}>", self.w1, self.w2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSystem {
    pub word: MultisetWord,
    pub pattern: Pattern,
    pub k: usize,
    pub unknowns: Vec<Moment>,
    pub rows: Vec<RowLabel>,
    /// `(row, column, coefficient)`, row-major.
    pub triplets: Vec<(usize, usize, i64)>,
}

impl EquationSystem {
    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_triplets(self.rows.len(), self.unknowns.len(), &self.triplets)
            .expect("generated triplets are in range")
    }

    pub fn column_of(&self, m: &Moment) -> Option<usize> {
        self.unknowns.binary_search(m).ok()
    }

    /// Coefficients of one row as `(column, coefficient)` pairs.
    pub fn row_entries(&self, row: usize) -> Vec<(usize, i64)> {
        self.triplets
            .iter()
            .filter(|t| t.0 == row)
            .map(|&(_, c, v)| (c, v))
            .collect()
    }

    pub fn row_index(&self, w1: &MultisetWord) -> Option<usize> {
        self.rows.iter().position(|r| &r.w1 == w1)
    }

    /// `[W] - k > k`: the right words are strictly longer than the left.
    pub fn conjecture_applicable(&self) -> bool {
        self.word.len() - self.k > self.k
    }
}

pub fn build_system(word: &MultisetWord, k: usize) -> Result<EquationSystem> {
    let len = word.len();
    if k + 1 > len {
        return Err(Error::SplitTooLarge {
            k_plus_one: k + 1,
            len,
        });
    }
    if len - k < 1 {
        return Err(Error::RightWordEmpty);
    }
    let pattern = canonical_pattern(word)?;
    let unknowns: Vec<Moment> = sub_multisets(word, k)?
        .into_iter()
        .map(|u| {
            let v = quotient(word, &u).expect("enumerated sub-multiset");
            Moment::new(u, v)
        })
        .collect();
    let mut rows = Vec::new();
    let mut triplets = Vec::new();
    for w1 in sub_multisets(word, k + 1)? {
        let w2 = quotient(word, &w1).expect("enumerated sub-multiset");
        let r = rows.len();
        for a in w1.distinct_letters() {
            let (left, mult) = remove_one(&w1, a)?;
            let unknown = Moment::new(left, w2.with_letter(a));
            let col = unknowns
                .binary_search(&unknown)
                .expect("every (w1/a ; a·w2) is an enumerated unknown");
            triplets.push((r, col, mult as i64));
        }
        rows.push(RowLabel { w1, w2 });
    }
    Ok(EquationSystem {
        word: word.clone(),
        pattern,
        k,
        unknowns,
        rows,
        triplets,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub rank: usize,
    pub nullity: usize,
    /// Basis of the solution space over the unknown ordering, each vector
    /// scaled so its first nonzero coordinate is 1.
    #[serde(with = "crate::serde_util::rational_vecs")]
    pub nullspace_basis: Vec<Vec<BigRational>>,
    pub conjecture_applicable: bool,
    pub all_moments_zero: bool,
}

/// Exact rank, nullity and nullspace of the homogeneous system.
pub fn solve_matrix(matrix: &IntMatrix, conjecture_applicable: bool) -> Verdict {
    let echelon = rational_echelon(matrix);
    let rank = echelon.rank();
    let nullspace_basis = echelon.nullspace();
    debug_assert!(nullspace_basis
        .iter()
        .all(|v| apply(matrix, v).iter().all(Zero::is_zero)));
    Verdict {
        rank,
        nullity: matrix.cols() - rank,
        all_moments_zero: nullspace_basis.is_empty(),
        nullspace_basis,
        conjecture_applicable,
    }
}

pub fn solve_system(sys: &EquationSystem) -> Verdict {
    solve_matrix(&sys.matrix(), sys.conjecture_applicable())
}

/// Whether every basis vector satisfies every equation exactly.
pub fn verdict_satisfies(matrix: &IntMatrix, verdict: &Verdict) -> bool {
    verdict
        .nullspace_basis
        .iter()
        .all(|v| v.len() == matrix.cols() && apply(matrix, v).iter().all(Zero::is_zero))
}

/// JSON document for one solved system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemReport {
    pub word: MultisetWord,
    pub pattern: Pattern,
    pub k: usize,
    pub unknowns: Vec<String>,
    pub rows: Vec<String>,
    pub triplets: Vec<(usize, usize, i64)>,
    pub rank: usize,
    pub nullity: usize,
    #[serde(with = "crate::serde_util::rational_vecs")]
    pub nullspace: Vec<Vec<BigRational>>,
    pub conjecture_applicable: bool,
    pub all_moments_zero: bool,
}

impl SystemReport {
    pub fn new(sys: &EquationSystem, verdict: &Verdict) -> Self {
        Self {
            word: sys.word.clone(),
            pattern: sys.pattern.clone(),
            k: sys.k,
            unknowns: sys.unknowns.iter().map(ToString::to_string).collect(),
            rows: sys.rows.iter().map(ToString::to_string).collect(),
            triplets: sys.triplets.clone(),
            rank: verdict.rank,
            nullity: verdict.nullity,
            nullspace: verdict.nullspace_basis.clone(),
            conjecture_applicable: verdict.conjecture_applicable,
            all_moments_zero: verdict.all_moments_zero,
        }
    }

    /// Human-readable listing: one equation per row, then the verdict.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "W = {} pattern {} k = {}: {} equations in {} unknowns\n",
            self.word,
            self.pattern,
            self.k,
            self.rows.len(),
            self.unknowns.len()
        );
        for (r, label) in self.rows.iter().enumerate() {
            let terms: Vec<String> = self
                .triplets
                .iter()
                .filter(|t| t.0 == r)
                .map(|&(_, c, v)| {
                    if v == 1 {
                        self.unknowns[c].clone()
                    } else {
                        format!("{v}{}", self.unknowns[c])
                    }
                })
                .collect();
            out.push_str(&format!("  {label} = {} = 0\n", terms.join(" + ")));
        }
        out.push_str(&format!(
            "rank {} nullity {}{}\n",
            self.rank,
            self.nullity,
            if self.all_moments_zero {
                ": all moments vanish"
            } else {
                ""
            }
        ));
        for v in &self.nullspace {
            let coords: Vec<String> = v.iter().map(ToString::to_string).collect();
            out.push_str(&format!("  free direction [{}]\n", coords.join(", ")));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub pattern: Pattern,
    pub word: MultisetWord,
    pub unknowns: usize,
    pub equations: usize,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub length: usize,
    pub k: usize,
    pub entries: Vec<SweepEntry>,
    /// Patterns where the conjecture applies but a moment is left free.
    pub counterexamples: Vec<Pattern>,
}

impl SweepReport {
    pub fn conjecture_holds(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("sweep [W] = {} k = {}\n", self.length, self.k);
        for e in &self.entries {
            out.push_str(&format!(
                "  {:<14} {:<10} {:>3} eq {:>3} unknowns  rank {:>3} nullity {}{}\n",
                e.pattern.to_string(),
                e.word.to_string(),
                e.equations,
                e.unknowns,
                e.verdict.rank,
                e.verdict.nullity,
                if e.verdict.conjecture_applicable { "" } else { "  (not applicable)" }
            ));
        }
        if self.conjecture_holds() {
            out.push_str("no counterexamples\n");
        } else {
            let list: Vec<String> = self.counterexamples.iter().map(ToString::to_string).collect();
            out.push_str(&format!("COUNTEREXAMPLES: {}\n", list.join(" ")));
        }
        out
    }
}

/// Solves one representative system for every pattern of the given length.
pub fn sweep_patterns(total_length: usize, k: usize) -> Result<SweepReport> {
    if total_length < k + 1 {
        return Err(Error::SplitTooLarge {
            k_plus_one: k + 1,
            len: total_length,
        });
    }
    let entries = partitions(total_length)
        .into_par_iter()
        .map(|pattern| {
            let word = pattern.representative();
            let sys = build_system(&word, k)?;
            Ok(SweepEntry {
                unknowns: sys.unknowns.len(),
                equations: sys.rows.len(),
                verdict: solve_system(&sys),
                word,
                pattern,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let counterexamples = entries
        .iter()
        .filter(|e| e.verdict.conjecture_applicable && e.verdict.nullity > 0)
        .map(|e| e.pattern.clone())
        .collect();
    Ok(SweepReport {
        length: total_length,
        k,
        entries,
        counterexamples,
    })
}
