use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::linalg::IntMatrix;

/// Reduced row echelon form over the rationals.
#[derive(Debug, Clone)]
pub struct RationalEchelon {
    pub rows: Vec<Vec<BigRational>>,
    pub pivot_cols: Vec<usize>,
    pub cols: usize,
}

impl RationalEchelon {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    /// Nullspace basis, one vector per free column, each scaled so its
    /// first nonzero coordinate is 1.
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let mut is_pivot = vec![false; self.cols];
        for &c in &self.pivot_cols {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![BigRational::zero(); self.cols];
            v[free] = BigRational::one();
            for (row, &pc) in self.rows.iter().zip(&self.pivot_cols) {
                v[pc] = -row[free].clone();
            }
            let lead = v.iter().find(|x| !x.is_zero()).cloned().expect("free coordinate is 1");
            for x in v.iter_mut() {
                *x = &*x / &lead;
            }
            basis.push(v);
        }
        basis
    }
}

pub fn rational_echelon(m: &IntMatrix) -> RationalEchelon {
    let cols = m.cols();
    let mut a: Vec<Vec<BigRational>> = m
        .to_dense()
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| BigRational::from_integer(BigInt::from(v)))
                .collect()
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &f * p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    a.truncate(r);
    RationalEchelon {
        rows: a,
        pivot_cols,
        cols,
    }
}

/// Basis of the exact rational nullspace of `m`; empty iff trivial.
pub fn rational_nullspace(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    rational_echelon(m).nullspace()
}

/// Exact `m * v`.
pub fn apply(m: &IntMatrix, v: &[BigRational]) -> Vec<BigRational> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .fold(BigRational::zero(), |acc, (j, c)| acc + &v[j] * BigInt::from(c))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn single_relation() {
        let m = IntMatrix::from_dense(&[vec![1, 2]]).unwrap();
        let basis = rational_nullspace(&m);
        assert_eq!(basis, vec![vec![q(1, 1), q(-1, 2)]]);
    }

    #[test]
    fn identity_has_trivial_nullspace() {
        assert!(rational_nullspace(&IntMatrix::identity(4).unwrap()).is_empty());
    }

    #[test]
    fn basis_vectors_are_annihilated() {
        let m = IntMatrix::from_dense(&[vec![1, 2, 0, 3], vec![2, 4, 1, 1], vec![3, 6, 1, 4]]).unwrap();
        let e = rational_echelon(&m);
        assert_eq!(e.rank(), 2);
        let basis = e.nullspace();
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(apply(&m, v).iter().all(Zero::is_zero));
            assert!(v.iter().find(|x| !x.is_zero()).unwrap().is_one());
        }
    }
}
