//! Dense Gaussian elimination over GF(p) for word-size primes below 2^31.
//!
//! Rows are stored as `u32` residues. Row updates use a precomputed Shoup
//! quotient for the multiplier, so the inner loop needs only 32x32->64
//! multiplies and vectorizes.

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Default confirmation primes for finite-field ranks (both > 2^30).
pub const DEFAULT_RANK_PRIMES: [u64; 2] = [2_147_483_647, 2_147_483_629];

const MAX_MODULUS: u64 = 1 << 31;

/// Deterministic Miller-Rabin, exact for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes below 2^31, descending.
pub fn primes_below_2_31(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = MAX_MODULUS - 1;
    while out.len() < count && n > 2 {
        if is_prime(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct Modulus {
    p: u32,
}

impl Modulus {
    pub fn new(p: u64) -> Result<Self> {
        if p <= 2 || p >= MAX_MODULUS {
            return Err(Error::ModulusRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    pub fn value(self) -> u64 {
        self.p as u64
    }

    pub fn reduce_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn inv(self, a: u32) -> u32 {
        // Fermat: a^(p-2)
        let mut e = self.p - 2;
        let mut b = a;
        let mut r = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Signed representative in `(-p/2, p/2]`.
    pub fn to_signed(self, a: u32) -> i64 {
        let p = self.p as i64;
        let a = a as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }
}

/// `target[t] -= f * source[t]` for every `t`, all residues mod `p`.
#[inline]
fn sub_mul_row(target: &mut [u32], source: &[u32], f: u32, p: u32) {
    // Shoup: f_q = floor(f * 2^32 / p), so x*f - ((x*f_q) >> 32)*p lies in [0, 2p).
    let f_q = (((f as u64) << 32) / p as u64) as u32;
    for (t, &x) in target.iter_mut().zip(source) {
        let q = ((x as u64 * f_q as u64) >> 32) as u32;
        let prod = x.wrapping_mul(f).wrapping_sub(q.wrapping_mul(p));
        let prod = prod.min(prod.wrapping_sub(p));
        let d = t.wrapping_sub(prod);
        *t = d.min(d.wrapping_add(p));
    }
}

/// Dense residue matrix used as elimination workspace.
pub struct ResidueMatrix {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl ResidueMatrix {
    pub fn from_int(m: &IntMatrix, modulus: Modulus) -> Self {
        let (rows, cols) = (m.rows(), m.cols());
        let mut data = vec![0u32; rows * cols];
        for i in 0..rows {
            for (j, v) in m.row(i) {
                data[i * cols + j] = modulus.reduce_i64(v);
            }
        }
        Self {
            modulus,
            rows,
            cols,
            data,
        }
    }

    /// Row echelon reduction in place. Returns the rank and, for square
    /// input, the determinant residue.
    pub fn eliminate(&mut self) -> (usize, u32) {
        let (rows, cols) = (self.rows, self.cols);
        let md = self.modulus;
        let p = md.p;
        let mut rank = 0usize;
        let mut det = 1u32;
        let mut negate = false;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&r| self.data[r * cols + c] != 0) else {
                det = 0;
                continue;
            };
            if pivot != rank {
                let (lo, hi) = self.data.split_at_mut(pivot * cols);
                lo[rank * cols..(rank + 1) * cols].swap_with_slice(&mut hi[..cols]);
                negate = !negate;
            }
            let pv = self.data[rank * cols + c];
            det = md.mul(det, pv);
            let inv = md.inv(pv);
            let (head, tail) = self.data.split_at_mut((rank + 1) * cols);
            let pivot_row = &head[rank * cols + c..(rank + 1) * cols];
            for row in tail.chunks_exact_mut(cols) {
                let lead = row[c];
                if lead != 0 {
                    sub_mul_row(&mut row[c..], pivot_row, md.mul(lead, inv), p);
                }
            }
            rank += 1;
        }
        if rank < rows.min(cols) || rows != cols {
            det = 0;
        }
        if negate && det != 0 {
            det = p - det;
        }
        (rank, det)
    }
}

/// Rank of `m` over GF(p).
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> Result<usize> {
    let modulus = Modulus::new(p)?;
    Ok(ResidueMatrix::from_int(m, modulus).eliminate().0)
}

/// Determinant residue of a square matrix mod `p`.
pub fn det_mod_p(m: &IntMatrix, p: u64) -> Result<u32> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let modulus = Modulus::new(p)?;
    Ok(ResidueMatrix::from_int(m, modulus).eliminate().1)
}

/// Rank computed modulo two primes; disagreement signals an unlucky prime.
pub fn confirmed_rank(m: &IntMatrix, primes: [u64; 2]) -> Result<usize> {
    let (ra, rb) = rayon::join(|| rank_mod_p(m, primes[0]), || rank_mod_p(m, primes[1]));
    let (ra, rb) = (ra?, rb?);
    if ra != rb {
        return Err(Error::UnluckyPrime {
            p_a: primes[0],
            rank_a: ra,
            p_b: primes[1],
            rank_b: rb,
        });
    }
    Ok(ra)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(1_000_003));
        assert!(is_prime(2_147_483_647));
        assert!(is_prime(2_147_483_629));
        assert!(!is_prime(2_147_483_649));
        assert!(!is_prime(561));
        assert!(!is_prime(3_215_031_751));
        let ps = primes_below_2_31(3);
        assert_eq!(ps, [2_147_483_647, 2_147_483_629, 2_147_483_587]);
    }

    #[test]
    fn row_update_matches_naive() {
        let p = 2_147_483_629u32;
        let source: Vec<u32> = (0..64).map(|i| (i * 97_003_121u64 % p as u64) as u32).collect();
        let mut target: Vec<u32> = (0..64).map(|i| ((i + 5) * 1_234_567u64 % p as u64) as u32).collect();
        let expect: Vec<u32> = target
            .iter()
            .zip(&source)
            .map(|(&t, &s)| {
                let prod = (s as u64 * 1_999_999_999u64) % p as u64;
                ((t as u64 + p as u64 - prod) % p as u64) as u32
            })
            .collect();
        sub_mul_row(&mut target, &source, 1_999_999_999, p);
        assert_eq!(target, expect);
    }

    #[test]
    fn rank_and_det_small() {
        let zero = IntMatrix::zeros(4, 4).unwrap();
        assert_eq!(rank_mod_p(&zero, 1_000_003).unwrap(), 0);
        let m = IntMatrix::from_dense(&[vec![2, 1], vec![1, 3]]).unwrap();
        assert_eq!(det_mod_p(&m, 1_000_003).unwrap(), 5);
        let swap = IntMatrix::from_dense(&[vec![0, 1], vec![1, 0]]).unwrap();
        let p = 1_000_003;
        assert_eq!(Modulus::new(p).unwrap().to_signed(det_mod_p(&swap, p).unwrap()), -1);
        let singular = IntMatrix::from_dense(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(rank_mod_p(&singular, p).unwrap(), 1);
        assert_eq!(det_mod_p(&singular, p).unwrap(), 0);
    }

    #[test]
    fn bad_moduli_rejected() {
        let m = IntMatrix::identity(2).unwrap();
        assert_eq!(rank_mod_p(&m, 1_000_001), Err(Error::NotPrime(1_000_001)));
        assert_eq!(rank_mod_p(&m, 4_294_967_311), Err(Error::ModulusRange(4_294_967_311)));
    }
}
