//! Independent truncated-series cross-validation of the recurrence engine.
//!
//! Three separate derivations of the same coefficients, each solved term by
//! term from its own defining equation with a generic residual-driven
//! solver, never from the closed recurrence:
//!
//! * [`solve_v_series`]: the original equation in cleared polynomial form
//!   `2 v'' v^2 - t v^2 + 1 = 0`, expanded in `w = t^(-7/2)`.
//! * [`solve_u_series`]: the normalized equation
//!   `u'' = u + u'/(7x) - 12u/(49x^2) - (3u^2+2u^3)/(2(1+u)^2) - 12/(49x^2)`
//!   expanded in `1/x`, cleared of its denominator.
//! * [`solve_system_series`]: the diagonalized first-order system with data
//!   [`NormalFormSystem`], solved component-wise.
//!
//! Exact equality of all three (`c_n` = v-series, `(16/49)^n c_n` = `u_{2n}`
//! = sum of the system components) is the strongest correctness check in
//! the crate. The module also provides the coefficient-level Borel maps
//! `x^-n -> p^(n-1)/Gamma(n)` and their inverse.

mod solvers;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{parse_rational, rational_to_string, Rational};

pub use solvers::{
    normal_form, run_cross_checks, run_cross_checks_corrupted, run_cross_checks_with_series,
    solve_system_series, solve_system_series_with, solve_u_series, solve_v_series,
    verify_diagonalization, verify_diagonalization_of, verify_diagonalization_with,
    CrossCheckReport, NormalFormSystem,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("domain error: {0}")]
    Domain(String),
}

/// Expansion variable of a [`TruncatedSeries`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VariableTag {
    /// powers of 1/x
    InvX,
    /// powers of t^(-7/2)
    InvT7Half,
    /// powers of the Borel variable p
    BorelP,
}

impl VariableTag {
    fn name(self) -> &'static str {
        match self {
            VariableTag::InvX => "inv_x",
            VariableTag::InvT7Half => "inv_t_7half",
            VariableTag::BorelP => "borel_p",
        }
    }
}

/// Finite power series with exact rational coefficients, truncated at
/// `order` (coefficient indices 0..=order are meaningful).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    tag: VariableTag,
    coeffs: Vec<Rational>,
    order: usize,
}

impl TruncatedSeries {
    pub fn zero(tag: VariableTag, order: usize) -> Self {
        Self {
            tag,
            coeffs: vec![Rational::zero(); order + 1],
            order,
        }
    }

    pub fn constant(tag: VariableTag, value: Rational, order: usize) -> Self {
        let mut s = Self::zero(tag, order);
        s.coeffs[0] = value;
        s
    }

    pub fn monomial(tag: VariableTag, coeff: Rational, power: usize, order: usize) -> Self {
        let mut s = Self::zero(tag, order);
        if power <= order {
            s.coeffs[power] = coeff;
        }
        s
    }

    pub fn tag(&self) -> VariableTag {
        self.tag
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, power: usize) -> &Rational {
        static ZERO: std::sync::OnceLock<Rational> = std::sync::OnceLock::new();
        self.coeffs
            .get(power)
            .unwrap_or_else(|| ZERO.get_or_init(Rational::zero))
    }

    pub fn set_coeff(&mut self, power: usize, value: Rational) {
        assert!(power <= self.order, "power beyond truncation order");
        self.coeffs[power] = value;
    }

    pub fn is_zero_through(&self, order: usize) -> bool {
        (0..=order.min(self.order)).all(|j| self.coeffs[j].is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.tag, other.tag, "variable mismatch in series add");
        let order = self.order.min(other.order);
        let mut out = Self::zero(self.tag, order);
        for j in 0..=order {
            out.coeffs[j] = self.coeff(j) + other.coeff(j);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.tag, other.tag, "variable mismatch in series sub");
        let order = self.order.min(other.order);
        let mut out = Self::zero(self.tag, order);
        for j in 0..=order {
            out.coeffs[j] = self.coeff(j) - other.coeff(j);
        }
        out
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= factor;
        }
        out
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.tag, other.tag, "variable mismatch in series mul");
        let order = self.order.min(other.order);
        let mut out = Self::zero(self.tag, order);
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                let c = other.coeff(j);
                if !c.is_zero() {
                    out.coeffs[i + j] += self.coeff(i) * c;
                }
            }
        }
        out
    }

    /// Derivative with respect to the expansion variable itself.
    pub fn deriv_var(&self) -> Self {
        let order = self.order.saturating_sub(1);
        let mut out = Self::zero(self.tag, order);
        for j in 0..=order {
            out.coeffs[j] = self.coeff(j + 1) * Rational::from_integer(BigInt::from(j + 1));
        }
        out
    }

    /// d/dx of a series in z = 1/x: maps `z^j` to `-j z^(j+1)`. The result
    /// is valid one order deeper than the input.
    pub fn deriv_x(&self) -> Self {
        assert_eq!(self.tag, VariableTag::InvX, "x-derivative needs a 1/x series");
        let order = self.order + 1;
        let mut out = Self::zero(self.tag, order);
        for j in 1..=self.order {
            out.coeffs[j + 1] = self.coeff(j) * Rational::from_integer(BigInt::from(-(j as i64)));
        }
        out
    }

    /// Restriction to a lower truncation order.
    pub fn truncated(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self {
            tag: self.tag,
            coeffs: self.coeffs[..=order].to_vec(),
            order,
        }
    }

    /// Zero-extends to a higher truncation order. Only meaningful when the
    /// series is an exact polynomial (as the solvers' partial solutions
    /// are); for a genuinely truncated series this would fabricate zeros.
    pub fn padded_to(&self, order: usize) -> Self {
        let mut out = Self::zero(self.tag, order.max(self.order));
        for (j, c) in self.coeffs.iter().enumerate() {
            out.coeffs[j] = c.clone();
        }
        out
    }

    /// Multiplication by the expansion variable to the k-th power.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut out = Self::zero(self.tag, self.order);
        if k <= self.order {
            for j in 0..=(self.order - k) {
                out.coeffs[j + k] = self.coeffs[j].clone();
            }
        }
        out
    }

    /// Multiplicative inverse; requires unit leading term.
    pub fn invert(&self) -> Result<Self, OracleError> {
        if !self.coeffs[0].is_one() {
            return Err(OracleError::Domain(
                "series inversion requires unit leading term".into(),
            ));
        }
        let mut out = Self::zero(self.tag, self.order);
        out.coeffs[0] = Rational::one();
        for m in 1..=self.order {
            let mut acc = Rational::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &out.coeffs[m - k];
                }
            }
            out.coeffs[m] = -acc;
        }
        Ok(out)
    }

    pub fn equal_through(&self, other: &Self, order: usize) -> bool {
        (0..=order).all(|j| self.coeff(j) == other.coeff(j))
    }
}

/// Borel coefficient map: `sum_{n>=2} a_n x^-n  ->  sum a_n p^(n-1)/Gamma(n)`.
/// The input must have no constant or `1/x` term.
pub fn borel_map(series: &TruncatedSeries) -> Result<TruncatedSeries, OracleError> {
    if series.tag != VariableTag::InvX {
        return Err(OracleError::Domain("borel map expects a 1/x series".into()));
    }
    if !series.coeff(0).is_zero() || !series.coeff(1).is_zero() {
        return Err(OracleError::Domain(
            "borel map requires zero coefficients at powers 0 and 1".into(),
        ));
    }
    let order = series.order.saturating_sub(1);
    let mut out = TruncatedSeries::zero(VariableTag::BorelP, order);
    let mut factorial = Rational::one(); // (n-1)! at n = 2
    for n in 2..=series.order {
        factorial *= Rational::from_integer(BigInt::from(n - 1));
        out.coeffs[n - 1] = series.coeff(n) / &factorial;
    }
    Ok(out)
}

/// Inverse of [`borel_map`]: coefficient of `p^(n-1)` times `Gamma(n)` back
/// to the coefficient of `x^-n`.
pub fn inverse_borel_map(series: &TruncatedSeries) -> Result<TruncatedSeries, OracleError> {
    if series.tag != VariableTag::BorelP {
        return Err(OracleError::Domain(
            "inverse borel map expects a p series".into(),
        ));
    }
    if !series.coeff(0).is_zero() {
        return Err(OracleError::Domain(
            "inverse borel map requires zero constant term".into(),
        ));
    }
    let order = series.order + 1;
    let mut out = TruncatedSeries::zero(VariableTag::InvX, order);
    let mut factorial = Rational::one();
    for n in 2..=order {
        factorial *= Rational::from_integer(BigInt::from(n - 1));
        out.coeffs[n] = series.coeff(n - 1) * &factorial;
    }
    Ok(out)
}

/// `r`-th derivative at zero: `r! * [p^r]`.
pub fn derivative_at_zero(series: &TruncatedSeries, r: usize) -> Rational {
    let mut factorial = Rational::one();
    for k in 2..=r {
        factorial *= Rational::from_integer(BigInt::from(k));
    }
    series.coeff(r) * factorial
}

/// JSON form of a series: exact `p/q` coefficient strings plus variable and
/// order metadata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub variable: String,
    pub order: usize,
    pub coefficients: Vec<String>,
}

impl From<&TruncatedSeries> for SeriesJson {
    fn from(s: &TruncatedSeries) -> Self {
        Self {
            variable: s.tag.name().to_string(),
            order: s.order,
            coefficients: s.coeffs.iter().map(rational_to_string).collect(),
        }
    }
}

impl SeriesJson {
    pub fn to_series(&self) -> Result<TruncatedSeries, OracleError> {
        let tag = match self.variable.as_str() {
            "inv_x" => VariableTag::InvX,
            "inv_t_7half" => VariableTag::InvT7Half,
            "borel_p" => VariableTag::BorelP,
            other => {
                return Err(OracleError::Domain(format!("unknown variable tag {other:?}")))
            }
        };
        let mut coeffs = Vec::with_capacity(self.coefficients.len());
        for c in &self.coefficients {
            coeffs.push(parse_rational(c).map_err(|e| OracleError::Domain(e.to_string()))?);
        }
        if coeffs.len() != self.order + 1 {
            return Err(OracleError::Domain("coefficient count does not match order".into()));
        }
        Ok(TruncatedSeries { tag, coeffs, order: self.order })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, rat_int};
    use proptest::prelude::*;

    #[test]
    fn series_mul_and_invert() {
        // (1 + z)^-1 = 1 - z + z^2 - ...
        let mut one_plus = TruncatedSeries::zero(VariableTag::InvX, 6);
        one_plus.set_coeff(0, rat_int(1));
        one_plus.set_coeff(1, rat_int(1));
        let inv = one_plus.invert().unwrap();
        for j in 0..=6 {
            assert_eq!(*inv.coeff(j), if j % 2 == 0 { rat_int(1) } else { rat_int(-1) });
        }
        let product = one_plus.mul(&inv);
        assert!(product.sub(&TruncatedSeries::constant(VariableTag::InvX, rat_int(1), 6))
            .is_zero_through(6));
        // inversion without unit leading term is rejected
        let bad = TruncatedSeries::monomial(VariableTag::InvX, rat_int(2), 0, 4);
        assert!(bad.invert().is_err());
    }

    #[test]
    fn x_derivative_power_rule() {
        // d/dx (a z^3) = -3 a z^4
        let s = TruncatedSeries::monomial(VariableTag::InvX, rat(5, 7), 3, 5);
        let ds = s.deriv_x();
        assert_eq!(*ds.coeff(4), rat(-15, 7));
        assert!(ds.coeff(3).is_zero() && ds.coeff(5).is_zero());
    }

    #[test]
    fn borel_single_term() {
        // a x^-3 -> (a/2) p^2
        let s = TruncatedSeries::monomial(VariableTag::InvX, rat(9, 4), 3, 5);
        let mapped = borel_map(&s).unwrap();
        assert_eq!(*mapped.coeff(2), rat(9, 8));
        assert!(mapped.coeff(1).is_zero() && mapped.coeff(3).is_zero());
    }

    #[test]
    fn borel_zero_series_and_rejections() {
        let zero = TruncatedSeries::zero(VariableTag::InvX, 8);
        assert!(borel_map(&zero).unwrap().is_zero_through(7));
        let with_const = TruncatedSeries::monomial(VariableTag::InvX, rat_int(1), 0, 4);
        assert!(borel_map(&with_const).is_err());
        let with_inv_x = TruncatedSeries::monomial(VariableTag::InvX, rat_int(1), 1, 4);
        assert!(borel_map(&with_inv_x).is_err());
    }

    #[test]
    fn derivative_at_zero_recovers_coefficients() {
        let s = TruncatedSeries::monomial(VariableTag::InvX, rat(7, 2), 4, 6);
        let mapped = borel_map(&s).unwrap();
        // U^(r)(0) = r! [p^r] = original coefficient at x^-(r+1)
        assert_eq!(derivative_at_zero(&mapped, 3), rat(7, 2));
        assert!(derivative_at_zero(&mapped, 2).is_zero());
    }

    #[test]
    fn series_json_round_trip() {
        let mut s = TruncatedSeries::zero(VariableTag::BorelP, 3);
        s.set_coeff(1, rat(12, 49));
        s.set_coeff(3, rat(-4056, 2401));
        let dto = SeriesJson::from(&s);
        let text = serde_json::to_string(&dto).unwrap();
        let parsed: SeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.to_series().unwrap(), s);
    }

    fn arb_tail_series() -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec((-50i64..50, 1i64..20), 0..8).prop_map(|pairs| {
            let order = pairs.len() + 1;
            let mut s = TruncatedSeries::zero(VariableTag::InvX, order);
            for (j, (n, d)) in pairs.into_iter().enumerate() {
                s.set_coeff(j + 2, rat(n, d));
            }
            s
        })
    }

    proptest! {
        // round trip: inverse_borel(borel(s)) == s for series starting at x^-2
        #[test]
        fn borel_round_trip(s in arb_tail_series()) {
            let back = inverse_borel_map(&borel_map(&s).unwrap()).unwrap();
            prop_assert!(back.equal_through(&s, s.order()));
        }
    }
}
