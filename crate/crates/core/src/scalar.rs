//! Real scalar fields the algebra can be built over.
//!
//! Two instances exist: `f64` for the default orthonormal path and
//! [`BigRational`] for the exact path, where the basis is left
//! unnormalized and every contraction carries inverse-Gram weights.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

pub trait Scalar:
    Clone + Debug + PartialEq + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    /// Whether values are exact. Exact scalars compare with `==`.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `|self - target| <= rel_tol * max(1, |target|)`; exact scalars ignore
    /// the tolerance.
    fn close_to(&self, target: &Self, rel_tol: f64) -> bool;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn close_to(&self, target: &Self, rel_tol: f64) -> bool {
        f64::abs(self - target) <= rel_tol * f64::abs(*target).max(1.0)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn close_to(&self, target: &Self, _rel_tol: f64) -> bool {
        self == target
    }
}

/// Largest absolute value in an iterator, zero when empty.
pub fn max_abs<S: Scalar>(values: impl IntoIterator<Item = S>) -> S {
    values
        .into_iter()
        .map(|v| v.abs())
        .fold(S::zero(), |acc, v| if v > acc { v } else { acc })
}
