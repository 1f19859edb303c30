use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::modp::{det_mod_p, primes_below_2_31};
use crate::linalg::IntMatrix;

/// Upper bound on `log2 |det m|` from Hadamard's inequality.
pub fn hadamard_log2(m: &IntMatrix) -> f64 {
    (0..m.rows())
        .map(|i| {
            let norm2: f64 = m.row(i).map(|(_, v)| (v as f64) * (v as f64)).sum();
            if norm2 == 0.0 {
                0.0
            } else {
                0.5 * norm2.log2()
            }
        })
        .sum()
}

/// Number of bits the prime product must exceed to recover a signed
/// determinant: Hadamard bound plus sign and rounding slack.
pub fn required_bits(m: &IntMatrix) -> u64 {
    hadamard_log2(m).ceil() as u64 + 2
}

/// Default CRT prime list for `m`: the largest primes below 2^31, as many
/// as the Hadamard bound requires.
pub fn default_crt_primes(m: &IntMatrix) -> Vec<u64> {
    let bits = required_bits(m);
    // each prime contributes just under 31 bits
    primes_below_2_31((bits / 30 + 1) as usize)
}

/// Exact determinant from residues modulo `primes`, combined by the Chinese
/// remainder theorem into the symmetric range.
pub fn crt_determinant(m: &IntMatrix, primes: &[u64]) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let needed = required_bits(m);
    let available: f64 = primes.iter().map(|&p| (p as f64).log2()).sum();
    if available < needed as f64 {
        return Err(Error::NotEnoughPrimes {
            needed_bits: needed,
            available_bits: available.floor() as u64,
        });
    }
    let residues: Vec<u32> = primes
        .par_iter()
        .map(|&p| det_mod_p(m, p))
        .collect::<Result<_>>()?;
    let mut value = BigInt::zero();
    let mut modulus = BigInt::one();
    for (&p, &r) in primes.iter().zip(&residues) {
        let p_big = BigInt::from(p);
        // value + modulus * t ≡ r (mod p)
        let current = value.mod_floor(&p_big);
        let diff = (BigInt::from(r) - current).mod_floor(&p_big);
        let inv = modulus
            .mod_floor(&p_big)
            .modpow(&BigInt::from(p - 2), &p_big);
        let t = (diff * inv).mod_floor(&p_big);
        value += &modulus * t;
        modulus *= p_big;
    }
    let half: BigInt = &modulus >> 1;
    if value > half {
        value -= &modulus;
    }
    Ok(value)
}
