//! Hand-derivable families of systems, solved a second way.
//!
//! Each case builds the generic system, checks that the generated rows have
//! the shape the recurrence predicts, solves the recurrence independently
//! (peeling or symbolic propagation), and compares the two verdicts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::{build_system, solve_system, EquationSystem, Moment, Verdict};
use crate::word::{Letter, MultisetWord};

const A: Letter = Letter(0);

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn factorial(n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, i| acc * i)
}

fn word(counts: &[u32]) -> MultisetWord {
    MultisetWord::from_counts(counts.to_vec())
}

/// Exact row shape: the `(column, coefficient)` pairs must match as sets.
fn row_is(sys: &EquationSystem, row: usize, expected: &[(Moment, i64)]) -> bool {
    let mut got = sys.row_entries(row);
    let mut want: Vec<(usize, i64)> = match expected
        .iter()
        .filter(|(_, c)| *c != 0)
        .map(|(m, c)| sys.column_of(m).map(|col| (col, *c)))
        .collect::<Option<Vec<_>>>()
    {
        Some(w) => w,
        None => return false,
    };
    got.sort_unstable();
    want.sort_unstable();
    got == want
}

/// Outcome of triangular propagation on a homogeneous system: repeatedly
/// pick a row with a single undetermined unknown; that unknown is then a
/// combination of already-vanishing ones and so vanishes itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelOutcome {
    /// Unknowns in the order they were forced to zero.
    pub order: Vec<String>,
    pub determined: usize,
    pub total: usize,
}

impl PeelOutcome {
    pub fn complete(&self) -> bool {
        self.determined == self.total
    }
}

pub fn peel(sys: &EquationSystem) -> PeelOutcome {
    let n = sys.unknowns.len();
    let rows: Vec<Vec<usize>> = (0..sys.rows.len())
        .map(|r| sys.row_entries(r).into_iter().map(|e| e.0).collect())
        .collect();
    let mut known = vec![false; n];
    let mut order = Vec::new();
    loop {
        let next = rows.iter().find_map(|cols| {
            let mut open = cols.iter().filter(|&&c| !known[c]);
            match (open.next(), open.next()) {
                (Some(&c), None) => Some(c),
                _ => None,
            }
        });
        match next {
            Some(c) => {
                known[c] = true;
                order.push(sys.unknowns[c].to_string());
            }
            None => break,
        }
    }
    PeelOutcome {
        determined: order.len(),
        order,
        total: n,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoLetterReport {
    pub k: usize,
    pub m: usize,
    pub word: MultisetWord,
    /// `(k+1-r, r)` for each row `r = 0..=m`.
    pub coefficient_pairs: Vec<(i64, i64)>,
    pub rows_match: bool,
    /// `Q(r)` as a multiple of `Q(0)` from the recurrence.
    #[serde(with = "crate::serde_util::rational_vec")]
    pub chain: Vec<BigRational>,
    pub recurrence_holds: bool,
    pub peel: PeelOutcome,
    pub verdict: Verdict,
    pub agrees: bool,
}

impl TwoLetterReport {
    pub fn passed(&self) -> bool {
        self.rows_match && self.recurrence_holds && self.peel.complete() && self.verdict.nullity == 0 && self.agrees
    }
}

/// `W = a^(2k+1-m) b^m`, split `k`: rows `<a^(k+1-r) b^r | ...>` carry
/// `(k+1-r)Q(r) + rQ(r-1)`.
pub fn two_letter_chain(k: usize, m: usize) -> Result<TwoLetterReport> {
    if k == 0 || m > k {
        return Err(Error::ParameterOutOfRange(format!("two-letter chain needs 0 <= m <= k, k >= 1 (k={k}, m={m})")));
    }
    let total = word(&[(2 * k + 1 - m) as u32, m as u32]);
    let sys = build_system(&total, k)?;
    let unknown = |r: usize| {
        let left = word(&[(k - r) as u32, r as u32]);
        let right = word(&[(k + 1 - m + r) as u32, (m - r) as u32]);
        Moment::new(left, right)
    };

    let mut coefficient_pairs = Vec::new();
    let mut rows_match = sys.rows.len() == m + 1 && sys.unknowns.len() == m + 1;
    for r in 0..=m {
        let (ca, cb) = ((k + 1 - r) as i64, r as i64);
        coefficient_pairs.push((ca, cb));
        let w1 = word(&[(k + 1 - r) as u32, r as u32]);
        let mut expected = vec![(unknown(r), ca)];
        if r > 0 {
            expected.push((unknown(r - 1), cb));
        }
        rows_match &= sys.row_index(&w1).is_some_and(|i| row_is(&sys, i, &expected));
    }

    let mut chain = vec![BigRational::one()];
    for r in 1..=m {
        let prev = chain[r - 1].clone();
        chain.push(-prev * q(r as i64, (k + 1 - r) as i64));
    }
    let recurrence_holds =
        (1..=m).all(|r| (&chain[r] * q((k + 1 - r) as i64, 1) + &chain[r - 1] * q(r as i64, 1)).is_zero());
    // Row r = 0 reads (k+1)Q(0) = 0, which kills the whole chain.
    let analytic_nullity = 0;

    let peel = peel(&sys);
    let verdict = solve_system(&sys);
    Ok(TwoLetterReport {
        k,
        m,
        word: total,
        coefficient_pairs,
        rows_match,
        chain,
        recurrence_holds,
        agrees: verdict.nullity == analytic_nullity,
        peel,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InductionReport {
    pub k: usize,
    pub tail: MultisetWord,
    pub word: MultisetWord,
    /// `<a^(k+1) | x_k>` is the single term `(k+1)(a^k; a x_k)`.
    pub top_row_ok: bool,
    /// Every `<a^k c | a (x_k/c)>` is `k(a^(k-1)c; ...) + (a^k; ...)`.
    pub first_rows_ok: bool,
    pub peel: PeelOutcome,
    pub verdict: Verdict,
    pub agrees: bool,
}

impl InductionReport {
    pub fn passed(&self) -> bool {
        self.top_row_ok && self.first_rows_ok && self.peel.complete() && self.verdict.nullity == 0 && self.agrees
    }
}

/// `W = a^(k+1) x_k` where `x_k` has length `k` and avoids `a`.
pub fn induction_case(k: usize, tail: &MultisetWord) -> Result<InductionReport> {
    if k == 0 {
        return Err(Error::ParameterOutOfRange("induction case needs k >= 1".into()));
    }
    if tail.len() != k {
        return Err(Error::ParameterOutOfRange(format!(
            "tail word {tail} has length {}, expected {k}",
            tail.len()
        )));
    }
    if tail.count(A) > 0 {
        return Err(Error::LetterInTail(A.as_char()));
    }
    let mut total = tail.clone();
    for _ in 0..=k {
        total = total.with_letter(A);
    }
    let sys = build_system(&total, k)?;
    let a_pow = |e: usize| word(&[e as u32]);
    let cat = |x: &MultisetWord, y: &MultisetWord| x.concat(y);

    let top = a_pow(k + 1);
    let top_row_ok = sys
        .row_index(&top)
        .is_some_and(|i| row_is(&sys, i, &[(Moment::new(a_pow(k), cat(&a_pow(1), tail)), (k + 1) as i64)]));

    let first_rows_ok = tail.distinct_letters().all(|c| {
        let single = MultisetWord::from_letters([c]);
        let rest = crate::word::remove_one(tail, c).expect("letter of tail").0;
        let w1 = cat(&a_pow(k), &single);
        let expected = [
            (Moment::new(cat(&a_pow(k - 1), &single), cat(&a_pow(2), &rest)), k as i64),
            (Moment::new(a_pow(k), cat(&a_pow(1), tail)), 1),
        ];
        sys.row_index(&w1).is_some_and(|i| row_is(&sys, i, &expected))
    });

    let peel = peel(&sys);
    let verdict = solve_system(&sys);
    Ok(InductionReport {
        k,
        tail: tail.clone(),
        word: total,
        top_row_ok,
        first_rows_ok,
        agrees: peel.complete() == (verdict.nullity == 0),
        peel,
        verdict,
    })
}

/// A value carried as an exact combination `c0·P0 + c1·Q0`.
pub type Sym = [BigRational; 2];

fn sym(p: BigRational, q: BigRational) -> Sym {
    [p, q]
}

fn scale(s: &Sym, c: &BigRational) -> Sym {
    [&s[0] * c, &s[1] * c]
}

fn add(x: &Sym, y: &Sym) -> Sym {
    [&x[0] + &y[0], &x[1] + &y[1]]
}

fn is_zero(s: &Sym) -> bool {
    s[0].is_zero() && s[1].is_zero()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AkBkCReport {
    pub k: usize,
    pub word: MultisetWord,
    /// `P_r = (a^(k-r) b^r ; a^r b^(k-r) c)`, r = 0..=k, in units of (P0, Q0).
    #[serde(with = "crate::serde_util::sym_vec")]
    pub p: Vec<Sym>,
    /// `Q_r = (a^(k-r-1) b^r c ; a^(r+1) b^(k-r))`, r = 0..k.
    #[serde(with = "crate::serde_util::sym_vec")]
    pub q: Vec<Sym>,
    /// `k Q0 + P0` and `k Q_(k-1) + P_k` as rows over (P0, Q0).
    #[serde(with = "crate::serde_util::sym_vec")]
    pub boundary: Vec<Sym>,
    pub checks: Vec<NamedCheck>,
    /// Dimension of the (P0, Q0) solutions left by the boundary rows.
    pub analytic_nullity: usize,
    pub verdict: Verdict,
}

impl AkBkCReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds) && self.analytic_nullity == 0 && self.verdict.nullity == 0
    }
}

fn sign(r: usize) -> i64 {
    if r.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `(-1)^r r!(k-r)!/k!` times `P0`.
fn p_closed(k: usize, r: usize) -> Sym {
    let c = BigRational::new(factorial(r) * factorial(k - r) * sign(r), factorial(k));
    sym(c, BigRational::zero())
}

/// `(-1)^r r!(k-r-1)!/(k-1)!` times `(-r P0/k + Q0)`.
fn q_closed(k: usize, r: usize) -> Sym {
    let c = BigRational::new(factorial(r) * factorial(k - r - 1) * sign(r), factorial(k - 1));
    scale(&sym(q(-(r as i64), k as i64), BigRational::one()), &c)
}

/// `W = a^k b^k c`, split `k`.
pub fn akbkc_closed_forms(k: usize) -> Result<AkBkCReport> {
    if k == 0 {
        return Err(Error::ParameterOutOfRange("a^k b^k c needs k >= 1".into()));
    }
    let kk = k as u32;
    let total = word(&[kk, kk, 1]);
    let sys = build_system(&total, k)?;
    let p_moment = |r: usize| Moment::new(word(&[kk - r as u32, r as u32]), word(&[r as u32, kk - r as u32, 1]));
    let q_moment =
        |r: usize| Moment::new(word(&[kk - r as u32 - 1, r as u32, 1]), word(&[r as u32 + 1, kk - r as u32]));

    // (k-r) P_(r+1) + (r+1) P_r = 0
    let mut p = vec![sym(BigRational::one(), BigRational::zero())];
    for r in 0..k {
        let next = scale(&p[r], &q(-(r as i64 + 1), (k - r) as i64));
        p.push(next);
    }
    // (k-r) Q_r + r Q_(r-1) + P_r = 0 for 0 < r < k
    let mut qv = vec![sym(BigRational::zero(), BigRational::one())];
    for r in 1..k {
        let rhs = add(&scale(&qv[r - 1], &q(r as i64, 1)), &p[r]);
        qv.push(scale(&rhs, &q(-1, (k - r) as i64)));
    }

    let p_rule = |vals: &[Sym]| {
        (0..k).all(|r| {
            is_zero(&add(
                &scale(&vals[r + 1], &q((k - r) as i64, 1)),
                &scale(&vals[r], &q(r as i64 + 1, 1)),
            ))
        })
    };
    let q_rule = |qs: &[Sym], ps: &[Sym]| {
        (1..k).all(|r| {
            let lhs = add(
                &add(&scale(&qs[r], &q((k - r) as i64, 1)), &scale(&qs[r - 1], &q(r as i64, 1))),
                &ps[r],
            );
            is_zero(&lhs)
        })
    };
    let p_cf: Vec<Sym> = (0..=k).map(|r| p_closed(k, r)).collect();
    let q_cf: Vec<Sym> = (0..k).map(|r| q_closed(k, r)).collect();

    let kq = q(k as i64, 1);
    let low = add(&scale(&qv[0], &kq), &p[0]);
    let high = add(&scale(&qv[k - 1], &kq), &p[k]);
    let high_expected = scale(&sym(kq.clone(), -kq.clone()), &q(sign(k), 1));

    // Generated rows must be exactly the two recurrences.
    let mut rows_match = sys.rows.len() == 2 * k + 1 && sys.unknowns.len() == 2 * k + 1;
    for r in 0..k {
        let w1 = word(&[kk - r as u32, r as u32 + 1]);
        let expected = [(p_moment(r + 1), (k - r) as i64), (p_moment(r), r as i64 + 1)];
        rows_match &= sys.row_index(&w1).is_some_and(|i| row_is(&sys, i, &expected));
    }
    for r in 0..=k {
        let w1 = word(&[kk - r as u32, r as u32, 1]);
        let mut expected = vec![(p_moment(r), 1)];
        if r < k {
            expected.push((q_moment(r), (k - r) as i64));
        }
        if r > 0 {
            expected.push((q_moment(r - 1), r as i64));
        }
        rows_match &= sys.row_index(&w1).is_some_and(|i| row_is(&sys, i, &expected));
    }

    // Substituting the symbolic solution into the generated system leaves
    // only the two boundary rows.
    let mut value = vec![sym(BigRational::zero(), BigRational::zero()); sys.unknowns.len()];
    for (r, v) in p.iter().enumerate() {
        value[sys.column_of(&p_moment(r)).expect("P unknown")] = v.clone();
    }
    for (r, v) in qv.iter().enumerate() {
        value[sys.column_of(&q_moment(r)).expect("Q unknown")] = v.clone();
    }
    let residuals: Vec<Sym> = (0..sys.rows.len())
        .map(|row| {
            sys.row_entries(row).into_iter().fold(sym(BigRational::zero(), BigRational::zero()), |acc, (c, v)| {
                add(&acc, &scale(&value[c], &q(v, 1)))
            })
        })
        .collect();
    let nonzero: Vec<&Sym> = residuals.iter().filter(|s| !is_zero(s)).collect();
    let substitution_ok = nonzero.len() == 2 && nonzero.contains(&&low) && nonzero.contains(&&high);

    let det = &low[0] * &high[1] - &low[1] * &high[0];
    let analytic_nullity = if !det.is_zero() {
        0
    } else if is_zero(&low) && is_zero(&high) {
        2
    } else {
        1
    };

    let checks = vec![
        NamedCheck {
            name: "generated rows are the P and Q recurrences".into(),
            holds: rows_match,
        },
        NamedCheck {
            name: "P_r closed form".into(),
            holds: p == p_cf,
        },
        NamedCheck {
            name: "Q_r closed form".into(),
            holds: qv == q_cf,
        },
        NamedCheck {
            name: "closed P_r satisfies the P recurrence".into(),
            holds: p_rule(&p_cf),
        },
        NamedCheck {
            name: "closed Q_r satisfies the Q recurrence".into(),
            holds: q_rule(&q_cf, &p_cf),
        },
        NamedCheck {
            name: "k Q0 + P0 = 0 at r = 0".into(),
            holds: low == sym(BigRational::one(), kq.clone()),
        },
        NamedCheck {
            name: "k Q_(k-1) + P_k = (-1)^k (k P0 - k Q0)".into(),
            holds: high == high_expected,
        },
        NamedCheck {
            name: "substitution leaves only the boundary rows".into(),
            holds: substitution_ok,
        },
        NamedCheck {
            name: "boundary rows force P0 = Q0 = 0".into(),
            holds: det.abs() > BigRational::zero(),
        },
    ];

    let verdict = solve_system(&sys);
    Ok(AkBkCReport {
        k,
        word: total,
        p,
        q: qv,
        boundary: vec![low, high],
        checks,
        analytic_nullity,
        verdict,
    })
}
