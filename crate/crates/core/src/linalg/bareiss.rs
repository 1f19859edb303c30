use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Exact determinant by fraction-free (Bareiss) elimination. Every
/// intermediate value is an exact integer: the division by the previous
/// pivot is always exact.
pub fn bareiss_determinant(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut a: Vec<Vec<BigInt>> = m
        .to_dense()
        .into_iter()
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for c in 0..n {
        let Some(pivot) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Ok(BigInt::zero());
        };
        if pivot != c {
            a.swap(pivot, c);
            sign = -sign;
        }
        let (head, tail) = a.split_at_mut(c + 1);
        let pivot_row = &head[c];
        for row in tail.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..n {
                let v = &row[j] * &pivot_row[c] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[c][c].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if sign < 0 { -det } else { det })
}

/// `log10 |x|` for arbitrarily large integers; `-inf` for zero.
pub fn log10_abs(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let x = x.abs();
    let bits = x.bits();
    if bits <= 1000 {
        let (_, digits) = x.to_u64_digits();
        let v = digits
            .iter()
            .rev()
            .fold(0f64, |acc, &d| acc * 18_446_744_073_709_551_616.0 + d as f64);
        return v.log10();
    }
    let shift = bits - 64;
    let top: BigInt = &x >> shift;
    let (_, digits) = top.to_u64_digits();
    (digits[0] as f64).log10() + shift as f64 * std::f64::consts::LOG10_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        let m = IntMatrix::from_dense(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]).unwrap();
        assert_eq!(bareiss_determinant(&m).unwrap(), BigInt::from(4));
        let swap = IntMatrix::from_dense(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(bareiss_determinant(&swap).unwrap(), BigInt::from(-1));
        let singular = IntMatrix::from_dense(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(bareiss_determinant(&singular).unwrap().is_zero());
        let rect = IntMatrix::zeros(2, 3).unwrap();
        assert!(matches!(bareiss_determinant(&rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn log10_of_large_integers() {
        assert_eq!(log10_abs(&BigInt::from(1000)), 3.0);
        assert!(log10_abs(&BigInt::zero()).is_infinite());
        let big = num_traits::pow(BigInt::from(10), 2300) * 3;
        assert!((log10_abs(&big) - (2300.0 + 3f64.log10())).abs() < 1e-9);
        let mid = -num_traits::pow(BigInt::from(7), 300);
        assert!((log10_abs(&mid) - 300.0 * 7f64.log10()).abs() < 1e-9);
    }
}
