//! Exact rational arithmetic and rigorous interval enclosures.
//!
//! `Rational` is an arbitrary-precision fraction kept in canonical form
//! (positive denominator, reduced) by every operation. [`RatInterval`] is a
//! closed interval with rational endpoints; all operations are
//! outward-inclusive, so a value proven to lie in an input interval provably
//! lies in the output. Enclosures of pi, Gamma, and rational powers are
//! produced by series with explicit truncation remainder bounds evaluated in
//! interval arithmetic, never by floating point.

mod bernoulli;
mod enclose;
mod interval;

pub use enclose::{gamma_enclosure, pi_enclosure, rational_power_enclosure, sin_enclosure};
pub use interval::{interval_arith, IntervalOp, RatInterval};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational in canonical form. All arithmetic is exact.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumericsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("division by an interval containing zero")]
    DivisionByZeroInterval,
}

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders a rational as `numerator/denominator`, e.g. `169/160` or `1/1`.
/// This is the exact wire format used by every JSON and CSV interface.
pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, a plain integer, or a decimal literal (`1.05` -> `21/20`)
/// into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, NumericsError> {
    let s = s.trim();
    let invalid = || NumericsError::Domain(format!("invalid rational literal: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let numer: BigInt = n.trim().parse().map_err(|_| invalid())?;
        let denom: BigInt = d.trim().parse().map_err(|_| invalid())?;
        if denom.is_zero() {
            return Err(NumericsError::Domain(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(numer, denom));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        let negative = int_part.starts_with('-');
        let int: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().map_err(|_| invalid())?
        };
        let frac: BigInt = frac_part.parse().map_err(|_| invalid())?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let magnitude = int.abs() * &scale + frac;
        let signed = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(signed, scale));
    }
    let int: BigInt = s.parse().map_err(|_| invalid())?;
    Ok(Rational::from_integer(int))
}

/// Decimal rendering of a rational with `digits` places after the point,
/// truncated toward zero. Used only for human-facing output; the exact value
/// always travels as `p/q`.
pub fn decimal_string(r: &Rational, digits: usize) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (r.numer().abs() * &scale) / r.denom();
    let (int_part, frac_part) = (&scaled / &scale, &scaled % &scale);
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!("{sign}{int_part}.{frac_part:0>width$}", width = digits)
}

/// `2^-bits` as an exact rational, the standard width tolerance.
pub fn pow2_inv(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits)
}
