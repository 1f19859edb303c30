use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Pivots smaller than this (relative to the largest entry) count as zero.
const SINGULAR_TOLERANCE: f64 = 1e-9;

/// `(sign, log10 |det|)` by LU with partial pivoting in `f64`, accumulating
/// pivot magnitudes in log space so the result never overflows.
pub fn lu_log10_determinant(m: &IntMatrix) -> Result<(i8, f64)> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut a = vec![0f64; n * n];
    let mut scale = 0f64;
    for i in 0..n {
        for (j, v) in m.row(i) {
            a[i * n + j] = v as f64;
            scale = scale.max((v as f64).abs());
        }
    }
    if scale == 0.0 {
        return Ok((0, f64::NEG_INFINITY));
    }
    let mut sign = 1i8;
    let mut log10 = 0f64;
    for c in 0..n {
        let (pivot, magnitude) = (c..n)
            .map(|r| (r, a[r * n + c].abs()))
            .fold((c, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if magnitude <= SINGULAR_TOLERANCE * scale {
            return Ok((0, f64::NEG_INFINITY));
        }
        if pivot != c {
            let (lo, hi) = a.split_at_mut(pivot * n);
            lo[c * n..(c + 1) * n].swap_with_slice(&mut hi[..n]);
            sign = -sign;
        }
        let pv = a[c * n + c];
        if pv < 0.0 {
            sign = -sign;
        }
        log10 += pv.abs().log10();
        let (head, tail) = a.split_at_mut((c + 1) * n);
        let pivot_row = &head[c * n + c..(c + 1) * n];
        for row in tail.chunks_exact_mut(n) {
            let f = row[c] / pv;
            if f != 0.0 {
                for (t, &s) in row[c..].iter_mut().zip(pivot_row) {
                    *t -= f * s;
                }
            }
        }
    }
    Ok((sign, log10))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_small_exact_values() {
        let m = IntMatrix::from_dense(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        let (s, l) = lu_log10_determinant(&m).unwrap();
        assert_eq!(s, 1);
        assert!((l - 2f64.log10()).abs() < 1e-12);
        let neg = IntMatrix::from_dense(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(lu_log10_determinant(&neg).unwrap().0, -1);
        let singular = IntMatrix::from_dense(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(lu_log10_determinant(&singular).unwrap().0, 0);
    }
}
