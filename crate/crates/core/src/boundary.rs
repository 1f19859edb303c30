//! Where moments are related but not forced to vanish: right words no
//! longer than left words, and antisymmetric rank-2 tensors.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::system::{build_system, solve_matrix, solve_system, verdict_satisfies, Moment, Verdict};
use crate::word::{sub_multisets, Letter, MultisetWord};

/// Tensor symmetry imposed on the right word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
}

/// Moment with its two right letters in ascending order, times a sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedMoment {
    pub base: Moment,
    pub sign: i8,
}

impl SignedMoment {
    /// `(left ; T_{first second})` for an antisymmetric `T`. `None` when
    /// the two indices coincide, since then the component vanishes.
    pub fn antisymmetric(left: MultisetWord, first: Letter, second: Letter) -> Option<Self> {
        if first == second {
            return None;
        }
        let sign = if first < second { 1 } else { -1 };
        Some(Self {
            base: Moment::new(left, MultisetWord::from_letters([first, second])),
            sign,
        })
    }
}

impl fmt::Display for SignedMoment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-{}", self.base)
        } else {
            write!(f, "{}", self.base)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub word: MultisetWord,
    pub k: usize,
    pub tensor_rank: usize,
    pub symmetry: Symmetry,
    pub unknowns: Vec<String>,
    /// Moments removed because their antisymmetric indices repeat.
    pub vanishing: Vec<String>,
    pub equations: Vec<String>,
    pub verdict: Verdict,
    /// Every nullspace vector satisfies every equation exactly.
    pub nullspace_checked: bool,
}

impl BoundaryReport {
    pub fn degenerate(&self) -> bool {
        self.unknowns.is_empty()
    }

    /// Coordinates of the single free direction, keyed by unknown label.
    pub fn free_direction(&self) -> Option<Vec<(String, BigRational)>> {
        match self.verdict.nullspace_basis.as_slice() {
            [v] => Some(self.unknowns.iter().cloned().zip(v.iter().cloned()).collect()),
            _ => None,
        }
    }
}

/// Symmetric tensor whose rank is `[W] - k`; same system as the generic
/// case, read as a boundary of the conjecture when the rank is at most `k`.
pub fn rank_limited_system(word: &MultisetWord, k: usize) -> Result<BoundaryReport> {
    let sys = build_system(word, k)?;
    let m = sys.matrix();
    let verdict = solve_system(&sys);
    let equations = (0..sys.rows.len())
        .map(|r| {
            let mut entries = sys.row_entries(r);
            entries.sort_unstable();
            let terms: Vec<String> = entries
                .into_iter()
                .map(|(c, v)| term(v, &sys.unknowns[c].to_string()))
                .collect();
            format!("{} = {} = 0", sys.rows[r], join_terms(&terms))
        })
        .collect();
    Ok(BoundaryReport {
        word: word.clone(),
        k,
        tensor_rank: word.len() - k,
        symmetry: Symmetry::Symmetric,
        unknowns: sys.unknowns.iter().map(ToString::to_string).collect(),
        vanishing: Vec::new(),
        equations,
        nullspace_checked: verdict_satisfies(&m, &verdict),
        verdict,
    })
}

fn term(coeff: i64, name: &str) -> String {
    match coeff {
        1 => name.to_string(),
        -1 => format!("-{name}"),
        c => format!("{c}{name}"),
    }
}

fn join_terms(terms: &[String]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = terms[0].clone();
    for t in &terms[1..] {
        match t.strip_prefix('-') {
            Some(rest) => out.push_str(&format!(" - {rest}")),
            None => out.push_str(&format!(" + {t}")),
        }
    }
    out
}

/// Length-3 word, single-letter left words, antisymmetric rank-2 tensor.
/// Row `<w1|w2>` reads `sum_a m_a(w1) (w1/a ; T_{a w2}) = 0` with the
/// divergence index first.
pub fn antisymmetric_system(word: &MultisetWord) -> Result<BoundaryReport> {
    if word.len() != 3 {
        return Err(Error::ParameterOutOfRange(format!(
            "antisymmetric mode needs a word of length 3, got {}",
            word.len()
        )));
    }
    let k = 1;
    let mut unknowns: Vec<Moment> = Vec::new();
    let mut vanishing = Vec::new();
    for u in sub_multisets(word, k)? {
        let right = crate::word::quotient(word, &u)?;
        if right.distinct_count() == 2 {
            unknowns.push(Moment::new(u, right));
        } else {
            vanishing.push(Moment::new(u, right).to_string());
        }
    }
    let labels: Vec<String> = unknowns.iter().map(ToString::to_string).collect();

    let mut triplets = Vec::new();
    let mut equations = Vec::new();
    let w1s = sub_multisets(word, k + 1)?;
    for (r, w1) in w1s.iter().enumerate() {
        let w2 = crate::word::quotient(word, w1)?;
        let second = w2.letters().next().expect("right word has one letter");
        let mut row = Vec::new();
        for a in w1.distinct_letters() {
            let (left, mult) = crate::word::remove_one(w1, a)?;
            if let Some(sm) = SignedMoment::antisymmetric(left, a, second) {
                let col = unknowns.binary_search(&sm.base).expect("canonical moment is an unknown");
                let coeff = mult as i64 * sm.sign as i64;
                triplets.push((r, col, coeff));
                row.push((col, coeff));
            }
        }
        row.sort_unstable();
        let terms: Vec<String> = row.iter().map(|&(c, v)| term(v, &labels[c])).collect();
        equations.push(format!("<{w1}|{w2}> = {} = 0", join_terms(&terms)));
    }

    let (verdict, nullspace_checked) = if unknowns.is_empty() {
        let trivial = Verdict {
            rank: 0,
            nullity: 0,
            nullspace_basis: Vec::new(),
            conjecture_applicable: false,
            all_moments_zero: true,
        };
        (trivial, true)
    } else {
        let m = IntMatrix::from_triplets(w1s.len(), unknowns.len(), &triplets)?;
        let v = solve_matrix(&m, word.len() - k > k);
        let checked = verdict_satisfies(&m, &v);
        (v, checked)
    };
    Ok(BoundaryReport {
        word: word.clone(),
        k,
        tensor_rank: 2,
        symmetry: Symmetry::Antisymmetric,
        unknowns: labels,
        vanishing,
        equations,
        verdict,
        nullspace_checked,
    })
}

/// `(aa;bb) + 2(ab;ab) = 0` on every nullspace vector of the a²b² system,
/// with neither moment forced to zero.
pub fn relation_a2b2_holds(report: &BoundaryReport) -> bool {
    let idx = |name: &str| report.unknowns.iter().position(|u| u == name);
    let (Some(aabb), Some(abab)) = (idx("(aa;bb)"), idx("(ab;ab)")) else {
        return false;
    };
    let basis = &report.verdict.nullspace_basis;
    let two = BigRational::from_integer(2.into());
    !basis.is_empty()
        && basis.iter().all(|v| (&v[aabb] + &two * &v[abab]).is_zero())
        && basis.iter().any(|v| !v[aabb].is_zero())
        && basis.iter().any(|v| !v[abab].is_zero())
}

/// `(a;bc) = (b;ca) = (c;ab)` on the single free direction; `(b;ca)` is
/// `-(b;ac)` in sorted coordinates.
pub fn cyclic_equality_holds(report: &BoundaryReport) -> bool {
    let Some(dir) = report.free_direction() else {
        return false;
    };
    let get = |name: &str| dir.iter().find(|(n, _)| n == name).map(|(_, v)| v.clone());
    match (get("(a;bc)"), get("(b;ac)"), get("(c;ab)")) {
        (Some(a), Some(b), Some(c)) => !a.is_zero() && a == -b && a == c && a == BigRational::one(),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> MultisetWord {
        s.parse().unwrap()
    }

    #[test]
    fn rank_two_a2b2() {
        let r = rank_limited_system(&w("a2b2"), 2).unwrap();
        assert_eq!(r.tensor_rank, 2);
        assert_eq!(r.verdict.nullity, 1);
        assert!(!r.verdict.conjecture_applicable);
        assert!(r.nullspace_checked);
        assert!(relation_a2b2_holds(&r));
        assert!(r.equations.iter().any(|e| e.contains("(aa;bb) + 2(ab;ab)")), "{:?}", r.equations);
    }

    #[test]
    fn rank_limited_controls() {
        let r = rank_limited_system(&w("abc"), 1).unwrap();
        assert_eq!(r.verdict.nullity, 0);
        assert!(r.verdict.conjecture_applicable);
        let r = rank_limited_system(&w("a4"), 2).unwrap();
        assert_eq!(r.equations, vec!["<aaa|a> = 3(aa;aa) = 0"]);
        assert_eq!(r.verdict.nullity, 0);
    }

    #[test]
    fn antisymmetric_abc() {
        let r = antisymmetric_system(&w("abc")).unwrap();
        assert_eq!(r.unknowns, ["(a;bc)", "(b;ac)", "(c;ab)"]);
        assert_eq!(
            r.equations,
            [
                "<ab|c> = (a;bc) + (b;ac) = 0",
                "<ac|b> = -(a;bc) + (c;ab) = 0",
                "<bc|a> = -(b;ac) - (c;ab) = 0",
            ]
        );
        assert_eq!(r.verdict.nullity, 1);
        assert!(r.nullspace_checked);
        assert!(cyclic_equality_holds(&r));
    }

    #[test]
    fn antisymmetric_repeated_letter() {
        let r = antisymmetric_system(&w("aab")).unwrap();
        assert_eq!(r.unknowns, ["(a;ab)"]);
        assert_eq!(r.vanishing, ["(b;aa)"]);
        assert_eq!(r.equations, ["<aa|b> = 2(a;ab) = 0", "<ab|a> = -(a;ab) = 0"]);
        assert_eq!(r.verdict.nullity, 0);

        let r = antisymmetric_system(&w("aaa")).unwrap();
        assert!(r.degenerate());
        assert!(antisymmetric_system(&w("abcd")).is_err());
    }

    #[test]
    fn sign_canonicalization() {
        let l = w("a");
        let s = SignedMoment::antisymmetric(l.clone(), Letter(2), Letter(1)).unwrap();
        assert_eq!(s.to_string(), "-(a;bc)");
        assert!(SignedMoment::antisymmetric(l, Letter(1), Letter(1)).is_none());
    }
}
