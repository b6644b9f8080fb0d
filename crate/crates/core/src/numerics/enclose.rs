//! Rigorous enclosures of the transcendental constants entering the Stokes
//! formulas: pi, Gamma at rational arguments, rational powers, and the sine
//! needed by the reflection cross-check.
//!
//! Every enclosure comes from a series with an explicit truncation remainder
//! bound, evaluated in exact rational interval arithmetic:
//!
//! * pi: Machin's formula `pi = 16 atan(1/5) - 4 atan(1/239)`, alternating
//!   series bracketed by consecutive partial sums.
//! * ln: `ln s = 2 atanh((s-1)/(s+1))` after reducing the argument to
//!   `[3/4, 3/2)` by an exact power of two, tail bounded geometrically.
//! * exp: Taylor series on `[0, 1/16)` after splitting off the integer part,
//!   which is handled by binary powers of an enclosure of `e`.
//! * Gamma: upward argument shift `Gamma(x) = Gamma(x+j) / prod (x+i)` until
//!   the Stirling series at `x+j` has remainder below target; the Stirling
//!   remainder after K terms is bounded in absolute value by the first
//!   omitted term, valid for real positive arguments.
//!
//! The `precision` parameter is in bits of relative width: the returned
//! interval has width at most `2^-precision * max(1, value)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::bernoulli::bernoulli_upto;
use super::interval::RatInterval;
use super::{pow2_inv, NumericsError, Rational};

const MIN_PRECISION: u32 = 8;

/// Enclosure of pi with width at most `2^-precision`.
pub fn pi_enclosure(precision: u32) -> RatInterval {
    let p = precision.max(MIN_PRECISION);
    let wp = p + 12;
    let atan5 = atan_recip(5, wp);
    let atan239 = atan_recip(239, wp);
    let pi = atan5
        .scale(&super::rat_int(16))
        .sub(&atan239.scale(&super::rat_int(4)))
        .compress(p + 4);
    debug_assert!(pi.width() <= pow2_inv(p));
    pi
}

/// Enclosure of `Gamma(x)` for rational `x > 0`, width at most
/// `2^-precision * max(1, Gamma(x))`.
pub fn gamma_enclosure(x: &Rational, precision: u32) -> Result<RatInterval, NumericsError> {
    let p = precision.max(MIN_PRECISION);
    if !x.is_positive() {
        return Err(NumericsError::Domain(format!(
            "gamma requires a positive argument, got {x}"
        )));
    }
    if x.is_integer() && *x <= super::rat_int(20_000) {
        let n = x.to_integer().to_u64().expect("bounded above");
        return Ok(RatInterval::point(factorial(n - 1)));
    }

    // Shift to y = x + j with y >= p/4 + 10 so the Stirling tail can reach
    // the target width.
    let m_target = super::rat_int(i64::from(p.div_ceil(4) + 10));
    let shift = if *x >= m_target {
        BigInt::zero()
    } else {
        (&m_target - x).ceil().to_integer()
    };
    let j = shift.to_u64().expect("small shift");
    let y = x + Rational::from_integer(shift);
    let mut shift_product = Rational::one();
    for i in 0..j {
        shift_product *= x + super::rat_int(i as i64);
    }

    let y_mag = (y.numer().bits().saturating_sub(y.denom().bits())) as u32 + 4;
    for attempt in 0..6 {
        let wp = p + 28 + y_mag + attempt * 32;
        let ln_gamma_y = stirling_ln_gamma(&y, wp)?;
        let gamma_y = exp_interval(&ln_gamma_y, wp);
        let gamma_x = gamma_y.scale(&shift_product.recip()).compress(p + 16);
        if width_contract_met(&gamma_x, p) {
            return Ok(gamma_x);
        }
    }
    Err(NumericsError::Domain(
        "gamma enclosure failed to reach requested width".into(),
    ))
}

/// Enclosure of `base^exponent` for a strictly positive interval base.
/// Integer exponents are exact; fractional exponents go through exp/ln.
pub fn rational_power_enclosure(
    base: &RatInterval,
    exponent: &Rational,
    precision: u32,
) -> Result<RatInterval, NumericsError> {
    let p = precision.max(MIN_PRECISION);
    if !base.lo().is_positive() {
        return Err(NumericsError::Domain(format!(
            "power requires a strictly positive base, got lower endpoint {}",
            base.lo()
        )));
    }
    if exponent.is_integer() {
        let e = exponent
            .to_integer()
            .to_i64()
            .ok_or_else(|| NumericsError::Domain("integer exponent too large".into()))?;
        // lo > 0 makes x^e monotone in x, so endpoint powers are exact.
        return base.pow_i(e).map_err(|_| {
            NumericsError::Domain("interval power of interval containing zero".into())
        });
    }

    let exp_mag = (exponent.numer().bits().saturating_sub(exponent.denom().bits())) as u32;
    let base_mag = (base.hi().numer().bits() as i64 - base.hi().denom().bits() as i64)
        .unsigned_abs() as u32;
    for attempt in 0..6 {
        let wp = p + 32 + exp_mag + base_mag.min(64) + attempt * 32;
        let ln_base = ln_interval(base, wp)?;
        let product = ln_base.scale(exponent);
        let result = exp_interval(&product, wp).compress(p + 16);
        if width_contract_met(&result, p) {
            return Ok(result);
        }
    }
    Err(NumericsError::Domain(
        "power enclosure failed to reach requested width".into(),
    ))
}

/// Enclosure of `sin(x)` for an interval `x` inside `[0, 2]`, by the
/// alternating Taylor series with the first omitted term as remainder.
pub fn sin_enclosure(x: &RatInterval, precision: u32) -> Result<RatInterval, NumericsError> {
    let p = precision.max(MIN_PRECISION);
    if x.lo().is_negative() || *x.hi() > super::rat_int(2) {
        return Err(NumericsError::Domain(
            "sin enclosure implemented for arguments within [0, 2]".into(),
        ));
    }
    let wp = p + 16;
    let target = pow2_inv(wp);
    let x_sq = x.mul(x);
    let mut power = x.clone(); // x^(2k+1)
    let mut factorial_odd = Rational::one(); // (2k+1)!
    let mut sum = RatInterval::point(Rational::zero());
    let mut k = 0u32;
    loop {
        let term = power.scale(&factorial_odd.clone().recip());
        sum = if k.is_multiple_of(2) { sum.add(&term) } else { sum.sub(&term) };
        // magnitude of the next term at the upper endpoint
        let next_factorial = &factorial_odd
            * super::rat_int(i64::from(2 * k + 2))
            * super::rat_int(i64::from(2 * k + 3));
        let bound = x.hi().pow(2 * (k as i32) + 3) / &next_factorial;
        if bound <= target {
            let remainder = RatInterval::new(-bound.clone(), bound);
            return Ok(sum.add(&remainder).compress(p + 8));
        }
        power = power.mul(&x_sq);
        factorial_odd = next_factorial;
        k += 1;
    }
}

fn width_contract_met(result: &RatInterval, p: u32) -> bool {
    let reference = Rational::one().max(result.lo().clone());
    result.width() <= pow2_inv(p) * reference
}

fn factorial(n: u64) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Rational::from_integer(acc)
}

/// arctan(1/q) bracketed by consecutive partial sums of its alternating
/// series; requires q >= 2.
fn atan_recip(q: i64, wp: u32) -> RatInterval {
    let target = pow2_inv(wp);
    let q_sq = super::rat_int(q * q);
    let mut term_base = super::rat(1, q); // 1/q^(2k+1)
    let mut partial = Rational::zero();
    let mut k = 0i64;
    loop {
        let term = &term_base / super::rat_int(2 * k + 1);
        let previous = partial.clone();
        if k % 2 == 0 {
            partial += &term;
        } else {
            partial -= &term;
        }
        if term <= target && k > 0 {
            return RatInterval::from_endpoints_unordered(previous, partial);
        }
        term_base /= &q_sq;
        k += 1;
    }
}

/// atanh(u) for |u| <= 1/3 + epsilon, with the geometric tail bound
/// `|tail| <= |u|^(2K+3) / ((2K+3)(1 - u^2))`.
fn atanh_enclosure(u: &Rational, wp: u32) -> RatInterval {
    debug_assert!(u.abs() < super::rat(1, 2));
    let target = pow2_inv(wp);
    let u_sq = u * u;
    let one_minus_usq = Rational::one() - &u_sq;
    let mut power = u.clone(); // u^(2k+1)
    let mut sum = Rational::zero();
    let mut k = 0i64;
    loop {
        sum += &power / super::rat_int(2 * k + 1);
        power *= &u_sq;
        let bound = power.abs() / (super::rat_int(2 * k + 3) * &one_minus_usq);
        if bound <= target {
            let (lo, hi) = if u.is_negative() {
                (&sum - &bound, sum.clone())
            } else {
                (sum.clone(), &sum + &bound)
            };
            return RatInterval::new(lo, hi);
        }
        k += 1;
    }
}

/// ln 2 = 2 atanh(1/3).
fn ln2_enclosure(wp: u32) -> RatInterval {
    atanh_enclosure(&super::rat(1, 3), wp + 2).scale(&super::rat_int(2))
}

/// ln of a positive rational: reduce to `s in [3/4, 3/2)` by a power of two,
/// then `ln x = g ln 2 + 2 atanh((s-1)/(s+1))`.
fn ln_rat(x: &Rational, wp: u32) -> Result<RatInterval, NumericsError> {
    if !x.is_positive() {
        return Err(NumericsError::Domain(format!(
            "log requires a positive argument, got {x}"
        )));
    }
    let mut g = x.numer().bits() as i64 - x.denom().bits() as i64;
    let mut s = scale_by_pow2(x, -g);
    if s >= super::rat(3, 2) {
        g += 1;
        s = scale_by_pow2(&s, -1);
    } else if s < super::rat(3, 4) {
        g -= 1;
        s = scale_by_pow2(&s, 1);
    }
    let u = (&s - Rational::one()) / (&s + Rational::one());
    let ln_s = atanh_enclosure(&u, wp + 4).scale(&super::rat_int(2));
    let result = if g == 0 {
        ln_s
    } else {
        ln_s.add(&ln2_enclosure(wp + 8).scale(&super::rat_int(g)))
    };
    Ok(result.compress(wp))
}

fn ln_interval(x: &RatInterval, wp: u32) -> Result<RatInterval, NumericsError> {
    let lo = ln_rat(x.lo(), wp)?;
    let hi = ln_rat(x.hi(), wp)?;
    Ok(RatInterval::new(lo.lo().clone(), hi.hi().clone()))
}

fn scale_by_pow2(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        Rational::new(x.numer() << e, x.denom().clone())
    } else {
        Rational::new(x.numer().clone(), x.denom() << (-e))
    }
}

/// Enclosure of e by its Taylor series; tail after K terms is below
/// `1/(K! * K)`.
fn e_enclosure(wp: u32) -> RatInterval {
    let target = pow2_inv(wp);
    let mut factorial = Rational::one();
    let mut sum = Rational::one(); // k = 0 term
    let mut k = 1i64;
    loop {
        factorial *= super::rat_int(k);
        sum += factorial.recip();
        let tail = (factorial.clone() * super::rat_int(k)).recip();
        if k >= 2 && tail <= target {
            return RatInterval::new(sum.clone(), sum + tail);
        }
        k += 1;
    }
}

/// exp of an exact rational: integer part by binary powers of the
/// e-enclosure, fractional part by the Taylor series at `f/16`.
fn exp_rat(t: &Rational, wp: u32) -> RatInterval {
    let floor = t.floor().to_integer();
    let frac = t - Rational::from_integer(floor.clone());
    let q = floor.magnitude().to_u64().expect("moderate exponent");
    let negative = floor.is_negative();
    // e^|q| needs |q|.bits() extra relative bits; a reciprocal of a huge
    // value additionally needs absolute grid fine enough for the tiny result.
    let q_bits = 64 - q.leading_zeros();
    let grid = if negative { wp + 8 + 2 * (q as u32).min(4000) } else { wp + 8 + q_bits };

    let reduced = frac / super::rat_int(16);
    let target = pow2_inv(wp + 6);
    let mut sum = Rational::one();
    let mut term = Rational::one();
    let mut k = 1i64;
    loop {
        term = term * &reduced / super::rat_int(k);
        sum += &term;
        // tail <= term * (f/16) / (k+1) * (k+2)/(k+2 - f/16) with f/16 < 1
        let tail = &term * &reduced / super::rat_int(k + 1)
            * (super::rat_int(k + 2) / (super::rat_int(k + 2) - &reduced));
        if tail <= target {
            let exp_frac = RatInterval::new(sum.clone(), sum + tail)
                .pow_i_compressed(16, grid);
            if q == 0 {
                return exp_frac.compress(wp + 4);
            }
            let e_pow = e_enclosure(grid + q_bits).pow_i_compressed(q, grid + q_bits);
            let combined = if negative {
                exp_frac.mul(&e_pow.recip().expect("e power is positive"))
            } else {
                exp_frac.mul(&e_pow)
            };
            return combined.compress(grid);
        }
        k += 1;
    }
}

fn exp_interval(t: &RatInterval, wp: u32) -> RatInterval {
    let lo = exp_rat(t.lo(), wp);
    let hi = exp_rat(t.hi(), wp);
    RatInterval::new(lo.lo().clone(), hi.hi().clone())
}

/// ln Gamma(y) for rational y (callers shift so that y is large enough):
/// `(y - 1/2) ln y - y + ln(2 pi)/2 + sum B_2k / ((2k-1)(2k) y^(2k-1))`,
/// remainder bounded by the first omitted term.
fn stirling_ln_gamma(y: &Rational, wp: u32) -> Result<RatInterval, NumericsError> {
    let y_bits = (y.numer().bits().saturating_sub(y.denom().bits())) as u32 + 2;
    let ln_y = ln_rat(y, wp + y_bits + 8)?;
    let main = ln_y
        .scale(&(y - super::rat(1, 2)))
        .sub(&RatInterval::point(y.clone()));

    let pi = pi_enclosure(wp + 8);
    let ln_2pi = ln2_enclosure(wp + 8).add(&ln_interval(&pi, wp + 8)?);
    let half_ln_2pi = ln_2pi.scale(&super::rat(1, 2));

    let target = pow2_inv(wp + 2);
    let y_sq = y * y;
    let mut bernoulli = bernoulli_upto(32);
    let mut inv_power = y.recip(); // y^-(2k-1)
    let mut series = Rational::zero();
    let mut k = 1usize;
    loop {
        if bernoulli.len() <= 2 * k + 2 {
            bernoulli = bernoulli_upto(2 * k + 16);
        }
        series += &bernoulli[2 * k] * &inv_power
            / super::rat_int((2 * k - 1) as i64)
            / super::rat_int(2 * k as i64);
        let next_inv_power = &inv_power / &y_sq;
        let bound = bernoulli[2 * k + 2].abs() * &next_inv_power
            / super::rat_int((2 * k + 1) as i64)
            / super::rat_int((2 * k + 2) as i64);
        if bound <= target {
            let tail = RatInterval::new(-bound.clone(), bound);
            let correction = RatInterval::point(series).add(&tail);
            return Ok(main.add(&half_ln_2pi).add(&correction).compress(wp));
        }
        if k > 300 {
            return Err(NumericsError::Domain(
                "stirling series cannot reach requested width at this argument".into(),
            ));
        }
        inv_power = next_inv_power;
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, rat_int};
    use super::*;

    #[test]
    fn pi_bracketed_by_classical_bounds() {
        let pi = pi_enclosure(8);
        assert!(pi.width() <= rat(1, 256));
        assert!(*pi.lo() > rat(223, 71));
        assert!(*pi.hi() < rat(22, 7));
    }

    #[test]
    fn pi_width_contract_at_64_bits() {
        let pi = pi_enclosure(64);
        assert!(pi.width() <= pow2_inv(64));
        // still contains the 8-bit enclosure's midpoint region
        assert!(pi_enclosure(8).contains_interval(&pi));
    }

    #[test]
    fn gamma_of_one_is_one() {
        let g = gamma_enclosure(&rat_int(1), 64).unwrap();
        assert_eq!(g, RatInterval::point(rat_int(1)));
    }

    #[test]
    fn gamma_of_six_is_120() {
        let g = gamma_enclosure(&rat_int(6), 32).unwrap();
        assert!(g.contains(&rat_int(120)));
        assert_eq!(g.width(), rat_int(0));
    }

    #[test]
    fn gamma_half_squared_contains_pi() {
        let g = gamma_enclosure(&rat(1, 2), 96).unwrap();
        let g_sq = g.mul(&g);
        let pi = pi_enclosure(96);
        assert!(g_sq.intersects(&pi));
        // both enclose the same constant to ~2^-90, so the overlap is tight
        assert!(g_sq.width() <= pow2_inv(90));
    }

    #[test]
    fn gamma_recurrence_overlap() {
        // Gamma(x+1) = x Gamma(x) at x = 3/7
        let x = rat(3, 7);
        let gx = gamma_enclosure(&x, 80).unwrap();
        let gx1 = gamma_enclosure(&(&x + rat_int(1)), 72).unwrap();
        let product = gx.scale(&x);
        assert!(gx1.intersects(&product));
    }

    #[test]
    fn gamma_reflection_at_one_seventh() {
        // Gamma(1/7) Gamma(6/7) = pi / sin(pi/7)
        let p = 96;
        let lhs = gamma_enclosure(&rat(1, 7), p)
            .unwrap()
            .mul(&gamma_enclosure(&rat(6, 7), p).unwrap());
        let pi = pi_enclosure(p);
        let sin = sin_enclosure(&pi.scale(&rat(1, 7)), p).unwrap();
        let rhs = pi.div(&sin).unwrap();
        assert!(lhs.intersects(&rhs));
    }

    #[test]
    fn gamma_against_frozen_references() {
        // 50-digit reference values computed with an independent
        // arbitrary-precision package
        let cases = [
            (
                rat(1, 7),
                "65480629402478244377140933494289962626211351873841/10000000000000000000000000000000000000000000000000",
            ),
            (
                rat(3, 7),
                "20675117265602293530246124063088269435592142114923/10000000000000000000000000000000000000000000000000",
            ),
            (
                rat(15, 14),
                "9635096521624335217935290685984976808045884718906/10000000000000000000000000000000000000000000000000",
            ),
        ];
        for (x, reference) in cases {
            let g = gamma_enclosure(&x, 128).unwrap();
            let reference = super::super::parse_rational(reference).unwrap();
            // the reference is truncated, so the true value lies within
            // 10^-49 above it; both intervals contain the true value
            let pad = rat(1, 10i64.pow(18)).pow(2) * rat(1, 10i64.pow(9));
            let band = RatInterval::new(reference.clone(), reference + pad);
            assert!(g.intersects(&band), "gamma({x}) vs frozen reference");
        }
    }

    #[test]
    fn gamma_width_contract() {
        for (num, den, p) in [(1i64, 7i64, 64u32), (3, 7, 64), (1, 2, 128), (57, 14, 96)] {
            let g = gamma_enclosure(&rat(num, den), p).unwrap();
            let reference = Rational::one().max(g.lo().clone());
            assert!(g.width() <= pow2_inv(p) * reference, "width contract at {num}/{den}");
        }
    }

    #[test]
    fn gamma_large_argument() {
        // Gamma(801/14) against the exact recurrence from Gamma(801/14 - 57)
        let x = rat(801, 14);
        let g = gamma_enclosure(&x, 64).unwrap();
        assert!(g.is_strictly_positive());
        let mut product = Rational::one();
        let mut arg = rat(3, 14);
        while arg < x {
            product *= &arg;
            arg += rat_int(1);
        }
        let expected = gamma_enclosure(&rat(3, 14), 80).unwrap().scale(&product);
        assert!(g.intersects(&expected));
    }

    #[test]
    fn gamma_rejects_nonpositive() {
        assert!(matches!(
            gamma_enclosure(&rat_int(0), 32),
            Err(NumericsError::Domain(_))
        ));
        assert!(matches!(
            gamma_enclosure(&rat(-3, 2), 32),
            Err(NumericsError::Domain(_))
        ));
    }

    #[test]
    fn power_exact_square_root_of_four() {
        let r = rational_power_enclosure(&RatInterval::point(rat_int(4)), &rat(1, 2), 80).unwrap();
        assert!(r.contains(&rat_int(2)));
        assert!(r.width() <= pow2_inv(78));
    }

    #[test]
    fn power_two_to_13_14ths() {
        let r = rational_power_enclosure(&RatInterval::point(rat_int(2)), &rat(13, 14), 96).unwrap();
        // raise back to the 14th power: must contain 2^13
        let back = r.pow_i(14).unwrap();
        assert!(back.contains(&rat_int(8192)));
        assert!(back.width() <= pow2_inv(80));
    }

    #[test]
    fn power_identity_base_one() {
        let one = RatInterval::point(rat_int(1));
        let r = rational_power_enclosure(&one, &rat(-13, 14), 64).unwrap();
        assert!(r.contains(&rat_int(1)));
        assert!(r.width() <= pow2_inv(60));
    }

    #[test]
    fn power_integer_exponents_exact() {
        let base = RatInterval::new(rat_int(2), rat_int(3));
        let r = rational_power_enclosure(&base, &rat_int(3), 64).unwrap();
        assert_eq!(r, RatInterval::new(rat_int(8), rat_int(27)));
        let inv = rational_power_enclosure(&base, &rat_int(-1), 64).unwrap();
        assert_eq!(inv, RatInterval::new(rat(1, 3), rat(1, 2)));
    }

    #[test]
    fn power_rejects_nonpositive_base() {
        let base = RatInterval::new(rat_int(-1), rat_int(2));
        assert!(matches!(
            rational_power_enclosure(&base, &rat(1, 2), 64),
            Err(NumericsError::Domain(_))
        ));
    }

    #[test]
    fn power_negative_fractional_exponent() {
        // 500^(-13/14), checked against the reciprocal of 500^(13/14)
        let base = RatInterval::point(rat_int(500));
        let neg = rational_power_enclosure(&base, &rat(-13, 14), 80).unwrap();
        let pos = rational_power_enclosure(&base, &rat(13, 14), 80).unwrap();
        assert!(neg.mul(&pos).contains(&rat_int(1)));
    }

    #[test]
    fn sin_of_small_angle() {
        // sin(pi/7) ~ 0.4338837391
        let pi = pi_enclosure(80);
        let s = sin_enclosure(&pi.scale(&rat(1, 7)), 80).unwrap();
        assert!(*s.lo() > rat(4338, 10000));
        assert!(*s.hi() < rat(4339, 10000));
    }

    #[test]
    fn sin_rejects_out_of_range() {
        let x = RatInterval::point(rat_int(3));
        assert!(matches!(sin_enclosure(&x, 32), Err(NumericsError::Domain(_))));
    }

    #[test]
    fn exp_ln_round_trip() {
        let x = rat(7, 3);
        let ln = ln_rat(&x, 128).unwrap();
        let back = exp_interval(&ln, 128);
        assert!(back.contains(&x));
        assert!(back.width() <= pow2_inv(100));
    }

    #[test]
    fn exp_of_negative() {
        // e^-3 * e^3 contains 1
        let pos = exp_rat(&rat_int(3), 96);
        let neg = exp_rat(&rat_int(-3), 96);
        assert!(pos.mul(&neg).contains(&Rational::one()));
        assert!(neg.is_strictly_positive());
    }

    #[test]
    fn ln_of_large_and_small() {
        for x in [rat_int(844), rat(1, 844), rat(3, 4), rat(3, 2)] {
            let ln = ln_rat(&x, 96).unwrap();
            let back = exp_interval(&ln, 96);
            assert!(back.contains(&x), "round trip at {x}");
        }
    }
}
