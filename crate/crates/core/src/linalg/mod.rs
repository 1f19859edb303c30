//! Exact linear algebra kernels shared by the moment solver and the
//! spectral analysis.

pub mod bareiss;
pub mod crt;
pub mod lu;
mod matrix;
pub mod modp;
pub mod nullspace;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use matrix::IntMatrix;
pub use modp::{confirmed_rank, rank_mod_p, DEFAULT_RANK_PRIMES};
pub use nullspace::rational_nullspace;

/// Largest order handled by Bareiss when the method is chosen automatically.
pub const BAREISS_MAX_ORDER: usize = 200;
/// Largest order handled by modular CRT when chosen automatically; larger
/// matrices fall back to floating LU.
pub const CRT_MAX_ORDER: usize = 1716;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetMethod {
    Bareiss,
    ModularCrt,
    FloatLu,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetResult {
    #[serde(with = "crate::serde_util::bigint_opt")]
    pub exact: Option<BigInt>,
    #[serde(with = "crate::serde_util::log10")]
    pub log10_abs: f64,
    pub sign: i8,
    pub method: DetMethod,
}

impl DetResult {
    fn from_exact(det: BigInt, method: DetMethod) -> Self {
        let sign = match det.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        };
        Self {
            log10_abs: bareiss::log10_abs(&det),
            exact: Some(det),
            sign,
            method,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.sign == 0
    }
}

pub fn bareiss_det(m: &IntMatrix) -> Result<DetResult> {
    Ok(DetResult::from_exact(bareiss::bareiss_determinant(m)?, DetMethod::Bareiss))
}

/// Determinant by the requested method. CRT uses the default prime list.
pub fn det_log10(m: &IntMatrix, method: DetMethod) -> Result<DetResult> {
    match method {
        DetMethod::Bareiss => bareiss_det(m),
        DetMethod::ModularCrt => crt_det(m, &crt::default_crt_primes(m)),
        DetMethod::FloatLu => {
            let (sign, log10_abs) = lu::lu_log10_determinant(m)?;
            Ok(DetResult {
                exact: None,
                log10_abs,
                sign,
                method: DetMethod::FloatLu,
            })
        }
    }
}

pub fn crt_det(m: &IntMatrix, primes: &[u64]) -> Result<DetResult> {
    Ok(DetResult::from_exact(
        crt::crt_determinant(m, primes)?,
        DetMethod::ModularCrt,
    ))
}

/// Picks the method by order: Bareiss, then CRT, then floating LU.
pub fn auto_method(order: usize) -> DetMethod {
    if order <= BAREISS_MAX_ORDER {
        DetMethod::Bareiss
    } else if order <= CRT_MAX_ORDER {
        DetMethod::ModularCrt
    } else {
        DetMethod::FloatLu
    }
}

/// Determinant with the automatic strategy; `crt_primes` overrides the
/// default prime list when the CRT route is taken.
pub fn det_auto(m: &IntMatrix, crt_primes: Option<&[u64]>) -> Result<DetResult> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    match (auto_method(m.rows()), crt_primes) {
        (DetMethod::ModularCrt, Some(primes)) => crt_det(m, primes),
        (method, _) => det_log10(m, method),
    }
}

/// `|a - b|` for two log-determinants, treating equal infinities as equal.
pub fn log10_distance(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs()
    }
}

/// Checks the exact/log consistency a [`DetResult`] promises.
pub fn det_consistent(d: &DetResult) -> bool {
    match &d.exact {
        Some(x) => {
            let sign_ok = match d.sign {
                0 => x.sign() == num_bigint::Sign::NoSign,
                s => (s > 0) == x.is_positive(),
            };
            sign_ok && log10_distance(bareiss::log10_abs(x), d.log10_abs) < 1e-9
        }
        None => true,
    }
}
