//! Exact coefficient arithmetic.
//!
//! Every q-power is written in the variable u with q = u^4, so quarter-integer
//! exponents of q (and square roots of half-integer powers) stay polynomial.
//! [`QLaurent`] is Q[u, u^-1], [`GroupAlgebraElement`] is the lattice group
//! algebra over it, and [`RationalFunction`] its fraction field.

mod group_algebra;
mod modgcd;
pub(crate) mod poly;
mod qlaurent;
mod rational_function;

use num::{BigInt, BigRational, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use group_algebra::{exact_div, ga_mul, GroupAlgebraElement, QLaurentPoint};
pub use qlaurent::{q_exponent_to_u, qlp_arith, ArithOp, QLaurent};
pub use rational_function::{rf_normalize, RationalFunction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("no exact quotient exists")]
    NotDivisible,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("q-exponent {0} is not in (1/4)Z")]
    NotQuarterInteger(String),
}

/// `[uexp, num, den]` as stored in JSON.
#[derive(Serialize, Deserialize)]
pub(crate) struct CoeffRow(
    i64,
    #[serde(with = "crate::exact::bigint")] BigInt,
    #[serde(with = "crate::exact::bigint")] BigInt,
);

impl CoeffRow {
    pub(crate) fn new(e: i64, c: &BigRational) -> Self {
        CoeffRow(e, c.numer().clone(), c.denom().clone())
    }

    pub(crate) fn into_parts(self) -> Result<(i64, BigRational), LaurentError> {
        if self.2.is_zero() {
            return Err(LaurentError::ZeroDenominator);
        }
        Ok((self.0, BigRational::new(self.1, self.2)))
    }
}
