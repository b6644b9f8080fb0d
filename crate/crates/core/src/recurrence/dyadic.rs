//! Scaled-integer arithmetic for the convolution hot path.
//!
//! Every quantity in the coefficient recurrences is a dyadic rational
//! `mantissa / 2^exp` (the defining recurrences only ever divide by 2 or 4),
//! so the O(n^2) convolutions run on plain big integers with no gcd work.
//! Values convert to canonical [`Rational`]s at the table interface.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::numerics::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Dyadic {
    mant: BigInt,
    exp: u64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Self { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Self { mant: BigInt::one(), exp: 0 }
    }

    /// `n / 2^exp`, normalized.
    pub fn new(mant: BigInt, exp: u64) -> Self {
        Self { mant, exp }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0).min(self.exp);
        if tz > 0 {
            self.mant >>= tz;
            self.exp -= tz;
        }
        self
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn mul(&self, other: &Self) -> Self {
        // mantissas may be even when their exponent is zero, so the product
        // must renormalize
        Self {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
        .normalized()
    }

    pub fn add(&self, other: &Self) -> Self {
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        Self {
            mant: &hi.mant + (&lo.mant << (hi.exp - lo.exp)),
            exp: hi.exp,
        }
        .normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&Self {
            mant: -other.mant.clone(),
            exp: other.exp,
        })
    }

    /// Division by `2^k` is exact: just raise the exponent.
    pub fn half(&self) -> Self {
        if self.mant.is_zero() {
            return Self::zero();
        }
        Self { mant: self.mant.clone(), exp: self.exp + 1 }.normalized()
    }

    pub fn double(&self) -> Self {
        if self.exp > 0 {
            Self { mant: self.mant.clone(), exp: self.exp - 1 }
        } else {
            Self { mant: &self.mant << 1, exp: 0 }
        }
    }

    /// `(mantissa, exponent)` with the value `mantissa / 2^exponent`.
    pub fn into_parts(self) -> (BigInt, u64) {
        (self.mant, self.exp)
    }

    pub fn to_rational(&self) -> Rational {
        // normalized form has odd mantissa or exp == 0, so this is canonical
        Rational::new_raw(self.mant.clone(), BigInt::one() << self.exp)
    }
}
