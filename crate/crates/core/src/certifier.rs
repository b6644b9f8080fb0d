//! Machine verification of the quantitative bounds on the normalized
//! coefficients, and the resulting rigorous enclosure of `b = lim b_n`.
//!
//! The certified chain has three layers, each checked pointwise in exact
//! arithmetic with the lowest failing index reported:
//!
//! 1. **Increment bounds** ([`check_q_bounds`]): under the hypothesis
//!    `A_1 <= b_k <= A_2` for all `k < n`, the increments satisfy
//!    `|Q_n| <= B / n^2` with `B = 0.6 A_2^2 + 0.0144 A_2^3`, together with
//!    the intermediate inequalities that prove it:
//!    `0 < T'_k <= 0.24 A_2^2 d_k / k^2`, `0 < Q_n^+ <= 0.24 alpha A_2 / n^2`
//!    (`alpha = 2 A_2 + 0.06 A_2^2`), and `0 < Q_n^- <= 0.12 A_2^2 / n^2`.
//! 2. **Sandwich** ([`certify_bounds`]): the base cases
//!    `A_1 <= b_k < A_2` for `k <= 7` exactly, the anchor
//!    `A_1 + B/8 <= b_8 <= A_2 - B/8`, and the sandwich
//!    `A_1 + B/k <= b_k <= A_2 - B/k` for every `9 <= k <= n_max`, the
//!    direct pointwise analogue of the induction, which is additionally
//!    backed by the exact arithmetic identity `1/(k-1) - 1/k^2 >= 1/k`.
//!    Both candidate constants are carried: the formula value `B(A_2)` and
//!    the literal `10787/10000`; the certificate records both outcomes.
//! 3. **Limit enclosure** ([`enclose_limit`]): `|Q_k| <= B/k^2` for all
//!    `k > N` gives `|b - b_N| <= sum_{k>N} B/k^2 < B/N`, so
//!    `[b_N - B/N, b_N + B/N]` encloses the limit; width is exactly `2B/N`.
//!
//! The convolution bound `D_N <= E(N_0)/N^2` that feeds layer 1 is verified
//! by [`check_d_convolution_bounds`] through the same majorization used to
//! prove it: the interior products `d_i d_{N-i}` are unimodal with maximum
//! at `i = 2`, so `D_N d_N <= 2 d_1 d_{N-1} + (N-3) d_2 d_{N-2}`, which is
//! compared exactly against `E(N_0) d_N / N^2`.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{rat, rat_int, parse_rational, rational_to_string, RatInterval, Rational};
use crate::recurrence::{compute_dn_convolution, compute_e, d_edge_majorant, CoefficientTable, RecurrenceError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertifierError {
    /// The `b_k in [A_1, A_2]` hypothesis fails; nothing downstream of it
    /// may be trusted.
    #[error("hypothesis A1 <= b_k <= A2 fails first at k = {index} (b_k = {value})")]
    Hypothesis { index: usize, value: String },
    #[error("certificate check `{check}` fails first at k = {index}")]
    Certificate { check: &'static str, index: usize },
    #[error("domain error: {0}")]
    Domain(String),
}

impl From<RecurrenceError> for CertifierError {
    fn from(e: RecurrenceError) -> Self {
        CertifierError::Domain(e.to_string())
    }
}

/// Which constant `B` drives the sandwich and the limit enclosure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BConstantMode {
    /// `B = 0.6 A_2^2 + 0.0144 A_2^3`, the constant produced by the
    /// increment-bound derivation; this is the proven choice.
    Formula,
    /// The literal constant `10787/10000` from the classical statement of
    /// the sandwich. At `A_2 = 331/250` the formula gives ~1.0852, not
    /// 1.0787; both satisfy every anchor inequality, so both are carried.
    Literal,
    /// Require the sandwich under both constants; the enclosure uses the
    /// formula value.
    #[default]
    Both,
}

/// `B = 0.6 A_2^2 + 0.0144 A_2^3`, exactly `(3/5) a2^2 + (9/625) a2^3`.
pub fn b_constant(a2: &Rational) -> Rational {
    assert!(a2.is_positive(), "B(A_2) requires A_2 > 0");
    rat(3, 5) * a2 * a2 + rat(9, 625) * a2 * a2 * a2
}

/// `alpha = 2 A_2 + 0.06 A_2^2`, exactly `2 a2 + (3/50) a2^2`.
pub fn alpha_constant(a2: &Rational) -> Rational {
    rat_int(2) * a2 + rat(3, 50) * a2 * a2
}

/// The literal sandwich constant `10787/10000`.
pub fn literal_b_constant() -> Rational {
    rat(10_787, 10_000)
}

// The bound checks below compare products of rationals with very large
// components; forming the products as `Rational`s would trigger big-integer
// gcd reductions on every operation, so they are cross-multiplied directly.

/// `a0 a1 <= b0 b1`, by cross-multiplication (canonical inputs assumed).
fn product_le(a0: &Rational, a1: &Rational, b0: &Rational, b1: &Rational) -> bool {
    (a0.numer() * a1.numer()) * (b0.denom() * b1.denom())
        <= (b0.numer() * b1.numer()) * (a0.denom() * a1.denom())
}

/// `|x| * scale <= bound` for an integer scale, by cross-multiplication.
fn abs_scaled_le(x: &Rational, scale: &BigInt, bound: &Rational) -> bool {
    (x.numer().abs() * scale) * bound.denom() <= bound.numer() * x.denom()
}

/// Checks `|Q_n| <= B/n^2` for every `n` in `range` (all `n >= 5`), plus the
/// intermediate inequalities on `T'_k`, `Q_n^+`, `Q_n^-` listed above, under
/// the hypothesis `A_1 <= b_k <= A_2` for all `k` below the top of the range.
///
/// Returns `Ok(true)` when every inequality holds, `Ok(false)` if some bound
/// fails, and `Err(Hypothesis)` at the lowest `k` violating the hypothesis.
pub fn check_q_bounds(
    table: &CoefficientTable,
    a1: &Rational,
    a2: &Rational,
    range: std::ops::RangeInclusive<usize>,
) -> Result<bool, CertifierError> {
    let (lo, hi) = (*range.start(), *range.end());
    if lo < 5 {
        return Err(CertifierError::Domain(format!(
            "increment bounds hold from n = 5; requested start {lo}"
        )));
    }
    if hi > table.n_max() {
        return Err(CertifierError::Domain(format!(
            "table extends to {}, requested {hi}",
            table.n_max()
        )));
    }
    for k in 0..hi {
        let b_k = table.b(k);
        if b_k < a1 || b_k > a2 {
            return Err(CertifierError::Hypothesis {
                index: k,
                value: rational_to_string(b_k),
            });
        }
    }

    let b = b_constant(a2);
    let alpha = alpha_constant(a2);
    let a2_sq = a2 * a2;
    let tprime_coeff = rat(6, 25) * &a2_sq; // 0.24 A2^2
    let qplus_coeff = rat(6, 25) * &alpha * a2; // 0.24 alpha A2
    let qminus_coeff = rat(3, 25) * &a2_sq; // 0.12 A2^2

    for k in 2..hi {
        let k_sq = rat_int((k * k) as i64);
        let t_prime = table.t_prime(k);
        if !t_prime.is_positive() || !product_le(t_prime, &k_sq, &tprime_coeff, table.d(k)) {
            return Ok(false);
        }
    }
    for n in lo..=hi {
        let n_sq = BigInt::from(n * n);
        let q_plus = table.q_plus(n);
        let q_minus = table.q_minus(n);
        if !q_plus.is_positive() || !abs_scaled_le(q_plus, &n_sq, &qplus_coeff) {
            return Ok(false);
        }
        if !q_minus.is_positive() || !abs_scaled_le(q_minus, &n_sq, &qminus_coeff) {
            return Ok(false);
        }
        if !abs_scaled_le(table.q(n), &n_sq, &b) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verifies `D_N N^2 <= E(n0)` for every `N` in `range`, through the exact
/// majorization `D_N d_N <= 2 d_1 d_{N-1} + (N-3) d_2 d_{N-2}` (`N >= 5`).
/// The unimodality premise is checked as exact integer inequalities, and the
/// small cases `N <= 4` are evaluated by the exact convolution.
pub fn check_d_convolution_bounds(
    table: &CoefficientTable,
    range: std::ops::RangeInclusive<usize>,
    n0: usize,
) -> Result<bool, CertifierError> {
    let e_n0 = compute_e(&rat_int(n0 as i64))?;
    for n in range {
        if n <= 4 {
            let exact = compute_dn_convolution(table, n)?;
            if !abs_scaled_le(&exact, &BigInt::from(n * n), &e_n0) {
                return Ok(false);
            }
            continue;
        }
        // d_i d_{N-i} is non-increasing on 2 <= i <= floor(N/2) exactly when
        // the step ratios (7i+1)(7i+3) / ((7(N-i)-6)(7(N-i)-4)) stay <= 1;
        // the upper half i > N/2 is its mirror image.
        let nn = n as i64;
        for i in 2..(nn / 2) {
            let lhs = (7 * i + 1) * (7 * i + 3);
            let rhs = (7 * (nn - i) - 6) * (7 * (nn - i) - 4);
            if lhs > rhs {
                return Ok(false);
            }
        }
        let majorant = d_edge_majorant(table, n)?;
        if !product_le(&majorant, &rat_int((n * n) as i64), &e_n0, table.d(n)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The `k = 2, 3, 4` edge cases: `k^2 D_k < 11/50` exactly.
pub fn check_d_edge_cases(table: &CoefficientTable) -> Result<bool, CertifierError> {
    for k in 2..=4usize {
        let d_k = compute_dn_convolution(table, k)?;
        // strict: k^2 D_k < 11/50
        let bound = rat(11, 50);
        let lhs = d_k.numer() * BigInt::from(k * k) * bound.denom();
        if lhs >= bound.numer() * d_k.denom() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Certificate of the full bound chain. Serializes to a flat JSON object
/// with rationals as `p/q` strings (see [`CertificateJson`]).
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCertificate {
    pub a1: Rational,
    pub a2: Rational,
    /// the active `B` (per [`BConstantMode`]) used for the enclosure
    pub b_const: Rational,
    pub alpha: Rational,
    pub n_checked: usize,
    pub base_cases_ok: bool,
    pub induction_ok: bool,
    /// outcome of [`check_q_bounds`] over `[5, n_checked]`
    pub q_bounds_ok: bool,
    /// sandwich outcome under the formula constant `B(A_2)`
    pub sandwich_formula_ok: bool,
    /// sandwich outcome under the literal constant `10787/10000`
    pub sandwich_literal_ok: bool,
    pub limit_enclosure: RatInterval,
    /// enclosure lies within `[1, 331/250]`
    pub upper_bound_tight_ok: bool,
    /// enclosure lies within `[1, 49/37]` (the weaker candidate bound)
    pub upper_bound_loose_ok: bool,
}

/// Verifies base cases, anchor, and sandwich through `n_max` under both
/// candidate constants, runs the increment-bound check, and assembles the
/// limit enclosure intersected with `[A_1, A_2]`.
///
/// Fails with `Certificate { check, index }` at the lowest failing index of
/// whichever required inequality breaks first.
pub fn certify_bounds(
    table: &CoefficientTable,
    n_max: usize,
    a1: &Rational,
    a2: &Rational,
    mode: BConstantMode,
) -> Result<BoundCertificate, CertifierError> {
    if n_max < 8 {
        return Err(CertifierError::Certificate {
            check: "anchor requires n_max >= 8",
            index: n_max,
        });
    }
    if n_max > table.n_max() {
        return Err(CertifierError::Domain(format!(
            "table extends to {}, requested {n_max}",
            table.n_max()
        )));
    }
    if !a1.is_positive() || a1 >= a2 {
        return Err(CertifierError::Domain(format!(
            "constants must satisfy 0 < A1 < A2, got A1 = {a1}, A2 = {a2}"
        )));
    }

    for k in 0..=7usize {
        let b_k = table.b(k);
        if b_k < a1 {
            return Err(CertifierError::Certificate { check: "base case lower bound", index: k });
        }
        if b_k >= a2 {
            return Err(CertifierError::Certificate { check: "base case upper bound", index: k });
        }
    }
    let base_cases_ok = true;

    let b_formula = b_constant(a2);
    let b_literal = literal_b_constant();
    let required: &[&Rational] = match mode {
        BConstantMode::Formula => &[&b_formula],
        BConstantMode::Literal => &[&b_literal],
        BConstantMode::Both => &[&b_formula, &b_literal],
    };
    for b in required {
        sandwich_check(table, n_max, a1, a2, b).map_err(|index| {
            CertifierError::Certificate { check: "sandwich", index }
        })?;
    }
    let sandwich_formula_ok = sandwich_check(table, n_max, a1, a2, &b_formula).is_ok();
    let sandwich_literal_ok = sandwich_check(table, n_max, a1, a2, &b_literal).is_ok();

    // the arithmetic fact behind the inductive step: 1/(k-1) - 1/k^2 >= 1/k
    for k in 9..=n_max {
        let k_r = rat_int(k as i64);
        let k_prev = rat_int(k as i64 - 1);
        if k_prev.recip() - (&k_r * &k_r).recip() < k_r.recip() {
            return Err(CertifierError::Certificate { check: "induction step arithmetic", index: k });
        }
    }
    let induction_ok = true;

    let q_bounds_ok = check_q_bounds(table, a1, a2, 5..=n_max)?;
    if !q_bounds_ok {
        return Err(CertifierError::Certificate { check: "increment bound", index: n_max });
    }

    let active_b = match mode {
        BConstantMode::Literal => b_literal,
        _ => b_formula,
    };
    let raw = enclose_limit(table, n_max, &active_b)?;
    let hypothesis_box = RatInterval::new(a1.clone(), a2.clone());
    let limit_enclosure = raw
        .intersect(&hypothesis_box)
        .ok_or(CertifierError::Certificate { check: "limit enclosure intersection", index: n_max })?;

    let tight = RatInterval::new(rat_int(1), rat(331, 250));
    let loose = RatInterval::new(rat_int(1), rat(49, 37));
    Ok(BoundCertificate {
        a1: a1.clone(),
        a2: a2.clone(),
        alpha: alpha_constant(a2),
        n_checked: n_max,
        base_cases_ok,
        induction_ok,
        q_bounds_ok,
        sandwich_formula_ok,
        sandwich_literal_ok,
        upper_bound_tight_ok: tight.contains_interval(&limit_enclosure),
        upper_bound_loose_ok: loose.contains_interval(&limit_enclosure),
        limit_enclosure,
        b_const: active_b,
    })
}

fn sandwich_check(
    table: &CoefficientTable,
    n_max: usize,
    a1: &Rational,
    a2: &Rational,
    b: &Rational,
) -> Result<(), usize> {
    for k in 8..=n_max {
        let margin = b / rat_int(k as i64);
        let b_k = table.b(k);
        if *b_k < a1 + &margin || *b_k > a2 - &margin {
            return Err(k);
        }
    }
    Ok(())
}

/// `[b_N - B/N, b_N + B/N]`: the Cauchy tail bound
/// `|b - b_N| <= sum_{k>N} B/k^2 < B/N`. Requires `|Q_n| <= B/n^2` verified
/// exactly on `[5, N]`; the tail beyond the table is covered by the
/// sandwich argument, which holds for every k once its base and increment
/// bounds are certified.
pub fn enclose_limit(
    table: &CoefficientTable,
    n: usize,
    b_const: &Rational,
) -> Result<RatInterval, CertifierError> {
    if n < 8 || n > table.n_max() {
        return Err(CertifierError::Domain(format!(
            "enclosure point must satisfy 8 <= N <= {}, got {n}",
            table.n_max()
        )));
    }
    for k in 5..=n {
        if !abs_scaled_le(table.q(k), &BigInt::from(k * k), b_const) {
            return Err(CertifierError::Hypothesis {
                index: k,
                value: rational_to_string(table.q(k)),
            });
        }
    }
    let margin = b_const / rat_int(n as i64);
    let b_n = table.b(n);
    Ok(RatInterval::new(b_n - &margin, b_n + &margin))
}

/// Flat JSON form of [`BoundCertificate`]; rationals as `p/q` strings,
/// enclosure endpoints as `limit_lo` / `limit_hi`. Round-trips exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub a1: String,
    pub a2: String,
    pub b_const: String,
    pub alpha: String,
    pub n_checked: usize,
    pub base_cases_ok: bool,
    pub induction_ok: bool,
    pub q_bounds_ok: bool,
    pub sandwich_formula_ok: bool,
    pub sandwich_literal_ok: bool,
    pub limit_lo: String,
    pub limit_hi: String,
    pub upper_bound_tight_ok: bool,
    pub upper_bound_loose_ok: bool,
}

impl From<&BoundCertificate> for CertificateJson {
    fn from(c: &BoundCertificate) -> Self {
        Self {
            a1: rational_to_string(&c.a1),
            a2: rational_to_string(&c.a2),
            b_const: rational_to_string(&c.b_const),
            alpha: rational_to_string(&c.alpha),
            n_checked: c.n_checked,
            base_cases_ok: c.base_cases_ok,
            induction_ok: c.induction_ok,
            q_bounds_ok: c.q_bounds_ok,
            sandwich_formula_ok: c.sandwich_formula_ok,
            sandwich_literal_ok: c.sandwich_literal_ok,
            limit_lo: rational_to_string(c.limit_enclosure.lo()),
            limit_hi: rational_to_string(c.limit_enclosure.hi()),
            upper_bound_tight_ok: c.upper_bound_tight_ok,
            upper_bound_loose_ok: c.upper_bound_loose_ok,
        }
    }
}

impl CertificateJson {
    pub fn to_certificate(&self) -> Result<BoundCertificate, CertifierError> {
        let p = |s: &str| {
            parse_rational(s).map_err(|e| CertifierError::Domain(e.to_string()))
        };
        Ok(BoundCertificate {
            a1: p(&self.a1)?,
            a2: p(&self.a2)?,
            b_const: p(&self.b_const)?,
            alpha: p(&self.alpha)?,
            n_checked: self.n_checked,
            base_cases_ok: self.base_cases_ok,
            induction_ok: self.induction_ok,
            q_bounds_ok: self.q_bounds_ok,
            sandwich_formula_ok: self.sandwich_formula_ok,
            sandwich_literal_ok: self.sandwich_literal_ok,
            limit_enclosure: RatInterval::new(p(&self.limit_lo)?, p(&self.limit_hi)?),
            upper_bound_tight_ok: self.upper_bound_tight_ok,
            upper_bound_loose_ok: self.upper_bound_loose_ok,
        })
    }
}
