use serde::{Deserialize, Serialize};

use super::amatrix::{build_a, AMatrix};
use crate::config::Budget;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracePower {
    pub r: u32,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleCheck {
    pub name: String,
    pub r: u32,
    pub computed: i64,
    pub expected: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    pub k: usize,
    pub order: usize,
    pub traces: Vec<TracePower>,
    pub rules: Vec<RuleCheck>,
}

impl TraceReport {
    pub fn all_hold(&self) -> bool {
        self.rules.iter().all(|r| r.holds)
    }

    pub fn trace(&self, r: u32) -> Option<i64> {
        self.traces.iter().find(|t| t.r == r).map(|t| t.value)
    }
}

/// `Trace(A^r)` for `r = 1..=max_r` by repeated sparse-dense products.
pub fn trace_powers(a: &AMatrix, max_r: u32, budget: &Budget) -> Result<Vec<TracePower>> {
    let n = a.order();
    if n > budget.max_dense_order {
        return Err(Error::Budget {
            what: format!("dense matrix powers at k={}", a.k()),
            required: n as u64,
            limit: budget.max_dense_order as u64,
        });
    }
    if max_r > budget.max_power {
        return Err(Error::Budget {
            what: "matrix power".into(),
            required: max_r as u64,
            limit: budget.max_power as u64,
        });
    }
    let m = a.matrix();
    let mut power = vec![0i64; n * n];
    for i in 0..n {
        power[i * n + i] = 1;
    }
    let mut out = Vec::with_capacity(max_r as usize);
    for r in 1..=max_r {
        power = m.mul_dense(&power, n)?;
        let trace = (0..n).try_fold(0i64, |acc, i| {
            acc.checked_add(power[i * n + i]).ok_or(Error::Overflow("trace"))
        })?;
        out.push(TracePower { r, value: trace });
    }
    Ok(out)
}

/// Closed forms for the even power sums, as a function of k and N.
pub fn closed_form(k: usize, r: u32) -> Option<i64> {
    let n = super::amatrix::order_for(k) as i64;
    let k = k as i64;
    let value = match r {
        2 => n * (k + 1),
        4 => n * (k + 1) * (2 * k + 1),
        6 => n * ((k + 1).pow(2) * (2 * k + 1) + (4 * k + 1) * k * (k + 1)),
        8 => {
            n * ((k + 1).pow(2) * (2 * k + 1).pow(2)
                + (4 * k + 1).pow(2) * k * (k + 1)
                + 4 * (k + 1) * k * k * (k - 1))
        }
        _ => return None,
    };
    Some(value)
}

/// Compares direct traces with the even closed forms and checks that odd
/// traces vanish for every odd `r < 2k+1`. Traces are computed up to
/// `max(8, 2k+1)` so the first nonvanishing odd trace is reported too.
pub fn trace_sum_rules(k: usize, budget: &Budget) -> Result<TraceReport> {
    let a = build_a(k, budget)?;
    let max_r = (2 * k as u32 + 1).max(8);
    let traces = trace_powers(&a, max_r, budget)?;
    let mut rules = Vec::new();
    for t in &traces {
        if let Some(expected) = closed_form(k, t.r) {
            rules.push(RuleCheck {
                name: format!("Sigma_{} closed form", t.r),
                r: t.r,
                computed: t.value,
                expected,
                holds: t.value == expected,
            });
        } else if t.r % 2 == 1 && (t.r as usize) < 2 * k + 1 {
            rules.push(RuleCheck {
                name: format!("Sigma_{} odd trace vanishes", t.r),
                r: t.r,
                computed: t.value,
                expected: 0,
                holds: t.value == 0,
            });
        }
    }
    Ok(TraceReport {
        k,
        order: a.order(),
        traces,
        rules,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_values() {
        let r = trace_sum_rules(2, &Budget::default()).unwrap();
        assert_eq!(r.trace(2), Some(30));
        assert_eq!(r.trace(4), Some(150));
        assert_eq!(r.trace(6), Some(990));
        assert!(r.all_hold(), "{r:?}");
    }

    #[test]
    fn k1_odd_trace_caveat() {
        let r = trace_sum_rules(1, &Budget::default()).unwrap();
        // 2^3 + 2 * (-1)^3
        assert_eq!(r.trace(3), Some(6));
        assert_eq!(r.trace(1), Some(0));
        assert!(r.rules.iter().all(|c| c.r != 3));
    }

    #[test]
    fn k3_second_power() {
        let r = trace_sum_rules(3, &Budget::default()).unwrap();
        assert_eq!(r.trace(2), Some(140));
        assert!(r.all_hold());
    }
}
