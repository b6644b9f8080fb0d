//! Exact Bernoulli numbers for the Stirling series.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Rational;

/// `B_0 .. B_m` (convention `B_1 = -1/2`), computed exactly from
/// `sum_{j=0}^{m} C(m+1, j) B_j = 0`.
pub(crate) fn bernoulli_upto(m: usize) -> Vec<Rational> {
    let mut b = Vec::with_capacity(m + 1);
    b.push(Rational::one());
    for n in 1..=m {
        if n > 1 && n % 2 == 1 {
            b.push(Rational::zero());
            continue;
        }
        let mut acc = Rational::zero();
        let mut binom = BigInt::one(); // C(n+1, 0)
        for (j, bj) in b.iter().enumerate().take(n) {
            if !bj.is_zero() {
                acc += Rational::from_integer(binom.clone()) * bj;
            }
            // C(n+1, j+1) = C(n+1, j) * (n+1-j) / (j+1)
            binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / Rational::from_integer(BigInt::from(n + 1)));
    }
    b
}
