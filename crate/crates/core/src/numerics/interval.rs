//! Closed intervals with exact rational endpoints.
//!
//! The containment contract: for every operation `op` and all `x in X`,
//! `y in Y`, the exact value `x op y` lies in `X op Y`. Endpoint arithmetic
//! is exact rational arithmetic, so the basic operations need no rounding at
//! all; [`RatInterval::compress`] optionally rounds endpoints *outward* to
//! dyadic rationals to keep bit growth bounded inside long enclosure
//! pipelines.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{NumericsError, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    lo: Rational,
    hi: Rational,
}

/// Operation selector for [`interval_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Dispatching form of the four basic interval operations.
pub fn interval_arith(
    a: &RatInterval,
    b: &RatInterval,
    op: IntervalOp,
) -> Result<RatInterval, NumericsError> {
    match op {
        IntervalOp::Add => Ok(a.add(b)),
        IntervalOp::Sub => Ok(a.sub(b)),
        IntervalOp::Mul => Ok(a.mul(b)),
        IntervalOp::Div => a.div(b),
    }
}

impl RatInterval {
    /// Panics if `lo > hi`; the invariant is a programming contract.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi }
    }

    pub fn point(value: Rational) -> Self {
        Self { lo: value.clone(), hi: value }
    }

    pub fn from_endpoints_unordered(a: Rational, b: Rational) -> Self {
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / super::rat_int(2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().expect("nonempty").clone();
        let hi = products.into_iter().max().expect("nonempty");
        Self { lo, hi }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let a = &self.lo * factor;
        let b = &self.hi * factor;
        Self::from_endpoints_unordered(a, b)
    }

    pub fn recip(&self) -> Result<Self, NumericsError> {
        if self.lo.is_negative() == self.hi.is_negative() && !self.lo.is_zero() && !self.hi.is_zero()
        {
            Ok(Self {
                lo: self.hi.recip(),
                hi: self.lo.recip(),
            })
        } else {
            Err(NumericsError::DivisionByZeroInterval)
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self, NumericsError> {
        Ok(self.mul(&other.recip()?))
    }

    /// Exact integer power. For negative exponents the interval must not
    /// contain zero.
    pub fn pow_i(&self, exponent: i64) -> Result<Self, NumericsError> {
        if exponent < 0 {
            return self.pow_i(-exponent)?.recip();
        }
        let mut result = Self::point(Rational::one());
        let mut base = self.clone();
        let mut e = exponent as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    /// Integer power with outward compression after every squaring; keeps
    /// endpoint bit lengths near `bits` through large exponents.
    pub(crate) fn pow_i_compressed(&self, exponent: u64, bits: u32) -> Self {
        let mut result = Self::point(Rational::one());
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).compress(bits);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).compress(bits);
            }
        }
        result
    }

    /// Rounds endpoints outward to dyadic rationals with denominator
    /// `2^bits`. Containment is preserved; width grows by at most `2^(1-bits)`.
    pub fn compress(&self, bits: u32) -> Self {
        Self {
            lo: dyadic_floor(&self.lo, bits),
            hi: dyadic_ceil(&self.hi, bits),
        }
    }
}

fn dyadic_floor(r: &Rational, bits: u32) -> Rational {
    let scaled = (r.numer() << bits).div_floor(r.denom());
    Rational::new(scaled, BigInt::one() << bits)
}

fn dyadic_ceil(r: &Rational, bits: u32) -> Rational {
    let scaled = (r.numer() << bits).div_ceil(r.denom());
    Rational::new(scaled, BigInt::one() << bits)
}

#[cfg(test)]
mod tests {
    use super::super::{rat, rat_int};
    use super::*;
    use proptest::prelude::*;

    fn ri(a: (i64, i64), b: (i64, i64)) -> RatInterval {
        RatInterval::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn monotone_positive_product() {
        let product = ri((1, 1), (2, 1)).mul(&ri((3, 1), (4, 1)));
        assert_eq!(product, ri((3, 1), (8, 1)));
    }

    #[test]
    fn sign_spanning_product() {
        let product = ri((-1, 1), (1, 1)).mul(&ri((-1, 1), (1, 1)));
        assert_eq!(product, ri((-1, 1), (1, 1)));
    }

    #[test]
    fn degenerate_division() {
        let q = ri((1, 1), (1, 1)).div(&ri((2, 1), (2, 1))).unwrap();
        assert_eq!(q, RatInterval::point(rat(1, 2)));
    }

    #[test]
    fn division_by_zero_interval_rejected() {
        let a = ri((1, 1), (2, 1));
        assert_eq!(
            a.div(&ri((-1, 1), (1, 1))),
            Err(NumericsError::DivisionByZeroInterval)
        );
        assert_eq!(
            interval_arith(&a, &ri((0, 1), (1, 1)), IntervalOp::Div),
            Err(NumericsError::DivisionByZeroInterval)
        );
    }

    #[test]
    fn compress_is_outward() {
        let x = RatInterval::point(rat(1, 3));
        let c = x.compress(8);
        assert!(c.contains_interval(&x));
        assert!(c.width() <= rat(1, 128));
    }

    #[test]
    fn negative_integer_power() {
        let x = ri((2, 1), (3, 1));
        assert_eq!(x.pow_i(-2).unwrap(), ri((1, 9), (1, 4)));
        assert_eq!(x.pow_i(0).unwrap(), RatInterval::point(rat_int(1)));
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-200i64..200, 1i64..40).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_interval_with_point() -> impl Strategy<Value = (RatInterval, Rational)> {
        (arb_rational(), arb_rational(), 0u8..=16).prop_map(|(a, b, t)| {
            let iv = RatInterval::from_endpoints_unordered(a, b);
            // convex combination lo + t/16 * (hi - lo), always inside
            let lambda = rat(i64::from(t), 16);
            let point = iv.lo() + lambda * iv.width();
            (iv, point)
        })
    }

    proptest! {
        // Containment soundness: x in X, y in Y implies x op y in X op Y.
        #[test]
        fn containment_soundness(
            (x_iv, x) in arb_interval_with_point(),
            (y_iv, y) in arb_interval_with_point(),
        ) {
            prop_assert!(x_iv.add(&y_iv).contains(&(&x + &y)));
            prop_assert!(x_iv.sub(&y_iv).contains(&(&x - &y)));
            prop_assert!(x_iv.mul(&y_iv).contains(&(&x * &y)));
            if !y_iv.contains(&Rational::zero()) {
                prop_assert!(x_iv.div(&y_iv).unwrap().contains(&(&x / &y)));
            }
            prop_assert!(x_iv.compress(24).contains(&x));
        }

        #[test]
        fn pow_containment((x_iv, x) in arb_interval_with_point(), e in 0u32..6) {
            let mut expected = Rational::one();
            for _ in 0..e {
                expected *= &x;
            }
            prop_assert!(x_iv.pow_i(i64::from(e)).unwrap().contains(&expected));
        }
    }
}
