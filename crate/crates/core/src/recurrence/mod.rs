//! Exact computation of the coefficient sequences.
//!
//! `v(t) = sum c_k t^(-7k/2 - 1/2)` solves `2v''v^2 - t v^2 + 1 = 0` term by
//! term, which gives the three-part recurrence
//!
//! ```text
//! c_n = (7n-6)(7n-4)/4 c_{n-1}
//!       + 1/2 sum_{k=1}^{n-1} (7(n-k)-6)(7(n-k)-4)/2 c_{n-k-1} s_k
//!       - 1/2 sum_{k=1}^{n-1} c_k c_{n-k},          s_k = sum_{i=0}^k c_i c_{k-i}
//! ```
//!
//! with `c_0 = 1`. The comparison sequence `d_n = (7n-6)(7n-4)/4 d_{n-1}`
//! normalizes it: `b_n = c_n / d_n`, and the increment splits as
//! `b_n - b_{n-1} = Q_n^+ - Q_n^-` with
//!
//! ```text
//! Q_n^+ = 1/(2 d_n) sum_{k=1}^{n-1} (7(n-k)-6)(7(n-k)-4)/2 b_{n-k-1} d_{n-k-1} T_k
//! Q_n^- = T'_n / (2 d_n),   T_k = 2 d_k b_k + T'_k,
//! T'_k  = sum_{i=1}^{k-1} b_i b_{k-i} d_i d_{k-i}
//! ```
//!
//! The split is stored redundantly: the exact identity
//! `b_n - b_{n-1} = Q_n^+ - Q_n^-` is the module's self-test, and the
//! certifier consumes `Q_n` directly.
//!
//! The double convolution is evaluated through the incrementally maintained
//! self-convolution `s_k` (note `T_k = s_k` and `T'_k = s_k - 2 c_k`), which
//! makes a full table O(n^2) big-integer multiplications. The hot path runs
//! on dyadic scaled integers (the recurrences only divide by 2 and 4);
//! everything is converted to canonical rationals at the interface.

mod dyadic;
mod reduce;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::numerics::{rat, rat_int, Rational};
use dyadic::Dyadic;
use reduce::DenominatorFactors;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecurrenceError {
    #[error("domain error: {0}")]
    Domain(String),
}

/// Append-only table of the sequences `c_n`, `d_n`, `b_n`, `T'_n`, `Q_n`.
///
/// Extending the table never changes existing entries. Completed tables are
/// immutable values and freely shareable across threads.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    c_dyadic: Vec<Dyadic>,
    d_dyadic: Vec<Dyadic>,
    /// self-convolution s_k = sum_{i=0}^k c_i c_{k-i}; equals T_k for k >= 1
    self_conv: Vec<Dyadic>,
    /// weighted[j] = (7j-6)(7j-4)/2 * c_{j-1}, the reusable factor of the
    /// double convolution
    weighted: Vec<Dyadic>,
    d_factors: DenominatorFactors,
    c: Vec<Rational>,
    d: Vec<Rational>,
    b: Vec<Rational>,
    tprime: Vec<Rational>,
    qplus: Vec<Rational>,
    qminus: Vec<Rational>,
    q: Vec<Rational>,
}

impl Default for CoefficientTable {
    fn default() -> Self {
        Self::new()
    }
}

impl CoefficientTable {
    /// Seed table holding row 0: `c_0 = d_0 = b_0 = 1`, `T'_0 = 0`.
    pub fn new() -> Self {
        Self {
            c_dyadic: vec![Dyadic::one()],
            d_dyadic: vec![Dyadic::one()],
            self_conv: vec![Dyadic::one()],
            weighted: vec![Dyadic::zero()],
            d_factors: DenominatorFactors::default(),
            c: vec![Rational::one()],
            d: vec![Rational::one()],
            b: vec![Rational::one()],
            tprime: vec![Rational::from_integer(0.into())],
            qplus: vec![Rational::from_integer(0.into())],
            qminus: vec![Rational::from_integer(0.into())],
            q: vec![Rational::from_integer(0.into())],
        }
    }

    /// Table filled through `n_target` in one call.
    pub fn up_to(n_target: usize) -> Self {
        let mut table = Self::new();
        table.extend_to(n_target);
        table
    }

    pub fn n_max(&self) -> usize {
        self.c.len() - 1
    }

    /// Fills all sequences through `n_target`. A target at or below the
    /// current extent is a no-op; existing entries are never modified.
    pub fn extend_to(&mut self, n_target: usize) {
        for n in (self.n_max() + 1)..=n_target {
            self.push_row(n);
        }
    }

    fn push_row(&mut self, n: usize) {
        self.d_factors.push_row(n);
        self.weighted
            .push(half_factor(n).mul(&self.c_dyadic[n - 1]));

        let lead_factor = row_factor(n); // (7n-6)(7n-4)/4
        let lead = self.c_dyadic[n - 1].mul(&lead_factor);

        // sum_k (7(n-k)-6)(7(n-k)-4)/2 * c_{n-k-1} * s_k, via the cached
        // weighted factors
        let mut double_sum = Dyadic::zero();
        for k in 1..n {
            double_sum = double_sum.add(&self.weighted[n - k].mul(&self.self_conv[k]));
        }
        // sum_{k=1}^{n-1} c_k c_{n-k}, folded by symmetry
        let mut interior = Dyadic::zero();
        for k in 1..=(n - 1) / 2 {
            interior = interior.add(&self.c_dyadic[k].mul(&self.c_dyadic[n - k]));
        }
        interior = interior.double();
        if n.is_multiple_of(2) && n >= 2 {
            let mid = &self.c_dyadic[n / 2];
            interior = interior.add(&mid.mul(mid));
        }

        let c_n = lead.add(&double_sum.half()).sub(&interior.half());
        let d_n = self.d_dyadic[n - 1].mul(&lead_factor);
        debug_assert!(c_n.is_positive() && d_n.is_positive());

        // s_n = 2 c_0 c_n + interior
        self.self_conv.push(interior.add(&c_n.double()));

        self.b.push(self.ratio_over_d(&c_n, &d_n));
        self.tprime.push(interior.to_rational());
        let q_plus_half = double_sum.half();
        let q_minus_half = interior.half();
        // Q_n = (double_sum - interior) / (2 d_n), stored canonically so
        // readers never pay for the subtraction again
        self.q
            .push(self.ratio_over_d(&q_plus_half.sub(&q_minus_half), &d_n));
        self.qplus.push(self.ratio_over_d(&q_plus_half, &d_n));
        self.qminus.push(self.ratio_over_d(&q_minus_half, &d_n));
        self.c.push(c_n.to_rational());
        self.d.push(d_n.to_rational());
        self.c_dyadic.push(c_n);
        self.d_dyadic.push(d_n);
    }

    /// Canonical `num / d` using the known small-prime factorization of the
    /// denominator instead of a general big-integer gcd.
    fn ratio_over_d(&self, num: &Dyadic, d: &Dyadic) -> Rational {
        let (mut numer, num_exp) = num.clone().into_parts();
        if numer.is_zero() {
            return Rational::zero();
        }
        let (mut denom, den_exp) = d.clone().into_parts();
        let shared = self.d_factors.strip_common(&mut numer);
        denom /= shared;
        // place the net power of two on the appropriate side
        let net = den_exp as i64 - num_exp as i64;
        if net >= 0 {
            numer <<= net as u64;
        } else {
            denom <<= (-net) as u64;
        }
        let v2 = numer
            .trailing_zeros()
            .unwrap_or(0)
            .min(denom.trailing_zeros().unwrap_or(0));
        Rational::new_raw(numer >> v2, denom >> v2)
    }

    pub fn c(&self, n: usize) -> &Rational {
        &self.c[n]
    }

    pub fn d(&self, n: usize) -> &Rational {
        &self.d[n]
    }

    pub fn b(&self, n: usize) -> &Rational {
        &self.b[n]
    }

    /// `T'_n`; zero for n = 0, 1 (empty sums).
    pub fn t_prime(&self, n: usize) -> &Rational {
        &self.tprime[n]
    }

    /// `T_n = 2 d_n b_n + T'_n`.
    pub fn t(&self, n: usize) -> Rational {
        rat_int(2) * &self.d[n] * &self.b[n] + &self.tprime[n]
    }

    /// `Q_n^+`, defined for n >= 1.
    pub fn q_plus(&self, n: usize) -> &Rational {
        assert!(n >= 1, "Q_n is defined for n >= 1");
        &self.qplus[n]
    }

    /// `Q_n^-`, defined for n >= 1.
    pub fn q_minus(&self, n: usize) -> &Rational {
        assert!(n >= 1, "Q_n is defined for n >= 1");
        &self.qminus[n]
    }

    /// `Q_n = Q_n^+ - Q_n^-`, stored at build time.
    pub fn q(&self, n: usize) -> &Rational {
        assert!(n >= 1, "Q_n is defined for n >= 1");
        &self.q[n]
    }

    /// Exact self-test: `b_n - b_{n-1} = Q_n^+ - Q_n^-` for every stored row.
    /// Verified by cross-multiplication, which avoids re-canonicalizing the
    /// differences.
    pub fn verify_increment_identity(&self) -> Result<(), RecurrenceError> {
        for n in 1..=self.n_max() {
            // (bn/bd - pn/pd) == (un/ud - vn/vd), cross-multiplied
            let (bn, bd) = (self.b[n].numer(), self.b[n].denom());
            let (pn, pd) = (self.b[n - 1].numer(), self.b[n - 1].denom());
            let (un, ud) = (self.qplus[n].numer(), self.qplus[n].denom());
            let (vn, vd) = (self.qminus[n].numer(), self.qminus[n].denom());
            let lhs = (bn * pd - pn * bd) * (ud * vd);
            let rhs = (un * vd - vn * ud) * (bd * pd);
            if lhs != rhs {
                return Err(RecurrenceError::Domain(format!(
                    "increment identity fails at n = {n}"
                )));
            }
            let (qn, qd) = (self.q[n].numer(), self.q[n].denom());
            if (un * vd - vn * ud) * qd != qn * (ud * vd) {
                return Err(RecurrenceError::Domain(format!(
                    "stored Q_n disagrees with Q_n^+ - Q_n^- at n = {n}"
                )));
            }
        }
        Ok(())
    }
}

fn row_factor(n: usize) -> Dyadic {
    let n = n as i64;
    Dyadic::new(BigInt::from((7 * n - 6) * (7 * n - 4)), 2)
}

fn half_factor(j: usize) -> Dyadic {
    let j = j as i64;
    Dyadic::new(BigInt::from((7 * j - 6) * (7 * j - 4)), 1)
}

/// Closed form `d_n = prod_{k=1}^n (7k-6)(7k-4)/4`, the rationalized
/// Gamma-ratio product; must equal the recurrence value exactly.
pub fn dn_closed_form(n: usize) -> Rational {
    let mut numer = BigInt::one();
    for k in 1..=(n as i64) {
        numer *= BigInt::from((7 * k - 6) * (7 * k - 4));
    }
    Rational::new(numer, BigInt::one() << (2 * n))
}

/// `2 d_1 d_{N-1} + (N-3) d_2 d_{N-2}`, the exact edge majorant of
/// `D_N d_N`; evaluated dyadically so no reduction is needed.
pub fn d_edge_majorant(table: &CoefficientTable, n: usize) -> Result<Rational, RecurrenceError> {
    if n < 5 {
        return Err(RecurrenceError::Domain(format!(
            "edge majorant applies for N >= 5, got {n}"
        )));
    }
    assert!(n <= table.n_max(), "table not extended through N = {n}");
    let edge = table.d_dyadic[1].mul(&table.d_dyadic[n - 1]).double();
    let middle = table.d_dyadic[2]
        .mul(&table.d_dyadic[n - 2])
        .mul(&Dyadic::new(BigInt::from(n as i64 - 3), 0));
    Ok(edge.add(&middle).to_rational())
}

/// `D_N = (1/d_N) sum_{i=1}^{N-1} d_i d_{N-i}`, exact.
pub fn compute_dn_convolution(table: &CoefficientTable, n: usize) -> Result<Rational, RecurrenceError> {
    if n < 2 {
        return Err(RecurrenceError::Domain(format!(
            "D_N requires N >= 2, got {n}"
        )));
    }
    assert!(n <= table.n_max(), "table not extended through N = {n}");
    let mut sum = Dyadic::zero();
    for i in 1..n {
        sum = sum.add(&table.d_dyadic[i].mul(&table.d_dyadic[n - i]));
    }
    Ok(sum.to_rational() / &table.d[n])
}

/// `E(N) = (6/49) N^2 / ((N-6/7)(N-4/7))
///        + (240/49^2) N^2 / ((N-4/7)(N-11/7)(N-13/7))`,
/// defined for N > 13/7 (all pole locations lie at or below 13/7).
pub fn compute_e(n: &Rational) -> Result<Rational, RecurrenceError> {
    if *n <= rat(13, 7) {
        return Err(RecurrenceError::Domain(format!(
            "E(N) requires N > 13/7, got {n}"
        )));
    }
    let n_sq = n * n;
    let first = rat(6, 49) * &n_sq / ((n - rat(6, 7)) * (n - rat(4, 7)));
    let second =
        rat(240, 2401) * &n_sq / ((n - rat(4, 7)) * (n - rat(11, 7)) * (n - rat(13, 7)));
    Ok(first + second)
}

/// `u_{2n} = (16/49)^n c_n`, the coefficient of `x^(-2n)` in the normalized
/// equation's series solution; strictly positive for n >= 1.
pub fn u_coefficient(table: &CoefficientTable, n: usize) -> Result<Rational, RecurrenceError> {
    if n == 0 {
        return Err(RecurrenceError::Domain(
            "u has no constant term; n must be >= 1".into(),
        ));
    }
    assert!(n <= table.n_max(), "table not extended through n = {n}");
    Ok(rat(16, 49).pow(n as i32) * &table.c[n])
}
