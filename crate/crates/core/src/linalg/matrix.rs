use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer matrix in compressed sparse row form.
///
/// Every matrix the engine builds has small integer entries, so storage is
/// `i64`; kernels that need more range (Bareiss, CRT) promote internally.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<i64>,
}

impl IntMatrix {
    /// Builds from `(row, col, value)` triplets. Duplicate positions are
    /// summed and zeros dropped.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, i64)]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty {rows}x{cols} matrix")));
        }
        let mut sorted = triplets.to_vec();
        for &(r, c, _) in &sorted {
            if r >= rows || c >= cols {
                return Err(Error::Dimension(format!(
                    "triplet ({r}, {c}) outside {rows}x{cols}"
                )));
            }
        }
        sorted.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(sorted.len());
        let mut values: Vec<i64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        let mut row_of = Vec::with_capacity(sorted.len());
        for (r, c, v) in sorted {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_of.push(r);
                last = Some((r, c));
            }
        }
        let keep: Vec<usize> = (0..values.len()).filter(|&i| values[i] != 0).collect();
        let col_idx: Vec<usize> = keep.iter().map(|&i| col_idx[i]).collect();
        let row_of: Vec<usize> = keep.iter().map(|&i| row_of[i]).collect();
        let values: Vec<i64> = keep.iter().map(|&i| values[i]).collect();
        for &r in &row_of {
            row_ptr[r + 1] += 1;
        }
        for r in 0..rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Ok(Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn from_dense(data: &[Vec<i64>]) -> Result<Self> {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        if data.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let triplets: Vec<_> = data
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(move |(j, &v)| (i, j, v))
            })
            .collect();
        Self::from_triplets(rows, cols, &triplets)
    }

    /// 0/1 matrix from sorted per-row column lists.
    pub fn from_adjacency(cols: usize, adjacency: &[Vec<usize>]) -> Result<Self> {
        let triplets: Vec<_> = adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&j| (i, j, 1)))
            .collect();
        Self::from_triplets(adjacency.len(), cols, &triplets)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let triplets: Vec<_> = (0..n).map(|i| (i, i, 1)).collect();
        Self::from_triplets(n, n, &triplets)
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::from_triplets(rows, cols, &[])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Nonzero `(col, value)` pairs of row `i`, ascending by column.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[span.clone()].binary_search(&j) {
            Ok(pos) => self.values[span.start + pos],
            Err(_) => 0,
        }
    }

    pub fn triplets(&self) -> Vec<(usize, usize, i64)> {
        (0..self.rows)
            .flat_map(|i| self.row(i).map(move |(j, v)| (i, j, v)))
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0i64; self.cols]; self.rows];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        out
    }

    /// `self - shift * I`.
    pub fn shifted(&self, shift: i64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut t = self.triplets();
        t.extend((0..self.rows).map(|i| (i, i, -shift)));
        Self::from_triplets(self.rows, self.cols, &t)
    }

    pub fn transpose(&self) -> Self {
        let t: Vec<_> = self.triplets().into_iter().map(|(i, j, v)| (j, i, v)).collect();
        Self::from_triplets(self.cols, self.rows, &t).expect("transpose keeps valid dimensions")
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn trace(&self) -> i64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// `P * self * Q` where `row_perm[i]` is the source row placed at row `i`
    /// and `col_perm[j]` the source column placed at column `j`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<Self> {
        if row_perm.len() != self.rows || col_perm.len() != self.cols {
            return Err(Error::Dimension("permutation length".into()));
        }
        let mut row_inv = vec![0; self.rows];
        for (i, &r) in row_perm.iter().enumerate() {
            row_inv[r] = i;
        }
        let mut col_inv = vec![0; self.cols];
        for (j, &c) in col_perm.iter().enumerate() {
            col_inv[c] = j;
        }
        let t: Vec<_> = self
            .triplets()
            .into_iter()
            .map(|(i, j, v)| (row_inv[i], col_inv[j], v))
            .collect();
        Self::from_triplets(self.rows, self.cols, &t)
    }

    /// `self * x` for a dense vector.
    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        (0..self.rows)
            .map(|i| self.row(i).map(|(j, v)| v * x[j]).sum())
            .collect()
    }

    /// `self * dense`, with overflow checks. `dense` is row-major `cols x width`.
    pub fn mul_dense(&self, dense: &[i64], width: usize) -> Result<Vec<i64>> {
        if dense.len() != self.cols * width {
            return Err(Error::Dimension("dense operand shape".into()));
        }
        let mut out = vec![0i64; self.rows * width];
        for i in 0..self.rows {
            let target = &mut out[i * width..(i + 1) * width];
            for (j, v) in self.row(i) {
                let src = &dense[j * width..(j + 1) * width];
                for (t, &s) in target.iter_mut().zip(src) {
                    *t = v
                        .checked_mul(s)
                        .and_then(|p| t.checked_add(p))
                        .ok_or(Error::Overflow("sparse-dense product"))?;
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let m = IntMatrix::from_triplets(2, 3, &[(0, 1, 2), (0, 1, 3), (1, 2, 4), (1, 2, -4)]).unwrap();
        assert_eq!(m.get(0, 1), 5);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.to_dense(), vec![vec![0, 5, 0], vec![0, 0, 0]]);
    }

    #[test]
    fn out_of_range_triplet_rejected() {
        assert!(IntMatrix::from_triplets(2, 2, &[(2, 0, 1)]).is_err());
        assert!(IntMatrix::from_triplets(0, 2, &[]).is_err());
    }

    #[test]
    fn shift_transpose_permute() {
        let m = IntMatrix::from_dense(&[vec![0, 1], vec![2, 0]]).unwrap();
        assert_eq!(m.shifted(3).unwrap().to_dense(), vec![vec![-3, 1], vec![2, -3]]);
        assert_eq!(m.transpose().to_dense(), vec![vec![0, 2], vec![1, 0]]);
        assert!(!m.is_symmetric());
        let p = m.permuted(&[1, 0], &[0, 1]).unwrap();
        assert_eq!(p.to_dense(), vec![vec![2, 0], vec![0, 1]]);
    }
}
