use serde::{Deserialize, Serialize};

use crate::linalg::DEFAULT_RANK_PRIMES;

/// Size limits and prime lists shared by every computation. The defaults
/// admit the full reproduction run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest admissible order of the A matrix (6435 admits k = 7).
    pub max_order: usize,
    /// Largest order for which dense matrix powers are formed (462 is k = 5).
    pub max_dense_order: usize,
    /// Highest matrix power formed for trace sum rules.
    pub max_power: u32,
    /// Two primes used to confirm finite-field ranks.
    pub rank_primes: [u64; 2],
    /// CRT primes for determinants; `None` selects enough primes below 2^31
    /// for the Hadamard bound.
    pub crt_primes: Option<Vec<u64>>,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_order: 6435,
            max_dense_order: 462,
            max_power: 16,
            rank_primes: DEFAULT_RANK_PRIMES,
            crt_primes: None,
        }
    }
}
