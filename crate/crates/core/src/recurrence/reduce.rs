//! Fast canonicalization for ratios whose denominator is a `d_n` value.
//!
//! `d_n = prod (7k-6)(7k-4) / 4^n`, so the odd part of its mantissa factors
//! entirely into primes below `7n`. Canonicalizing `x / d_n` therefore needs
//! no general big-integer gcd: it is enough to strip, from the numerator,
//! the primes known to divide the denominator. The primes are screened in
//! u64-sized product chunks, one big-integer remainder per chunk, so rows
//! where nothing cancels (the common case) cost a few hundred cheap mods.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Incrementally maintained factorization of `prod (7k-6)(7k-4)`.
#[derive(Clone, Debug, Default)]
pub(crate) struct DenominatorFactors {
    exponents: BTreeMap<u64, u32>,
    /// distinct primes packed into products that still fit in u64
    chunks: Vec<Chunk>,
}

#[derive(Clone, Debug)]
struct Chunk {
    modulus: u64,
    primes: Vec<u64>,
}

impl DenominatorFactors {
    /// Multiplies the factorization by `(7n-6)(7n-4)`.
    pub fn push_row(&mut self, n: usize) {
        let n = n as u64;
        for value in [7 * n - 6, 7 * n - 4] {
            for (p, e) in factor_u64(value) {
                if p == 2 {
                    continue; // two-powers live in the dyadic exponents
                }
                if !self.exponents.contains_key(&p) {
                    self.add_prime_to_chunks(p);
                }
                *self.exponents.entry(p).or_insert(0) += e;
            }
        }
    }

    fn add_prime_to_chunks(&mut self, p: u64) {
        if let Some(last) = self.chunks.last_mut() {
            if let Some(product) = last.modulus.checked_mul(p) {
                last.modulus = product;
                last.primes.push(p);
                return;
            }
        }
        self.chunks.push(Chunk { modulus: p, primes: vec![p] });
    }

    /// Divides out of `numer` every prime power shared with the tracked
    /// denominator, returning the cofactor to divide out of the denominator.
    pub fn strip_common(&self, numer: &mut BigInt) -> BigInt {
        let mut shared = BigInt::from(1u32);
        for chunk in &self.chunks {
            let residue = (&*numer % chunk.modulus)
                .to_u64()
                .expect("residue below u64 modulus");
            for &p in &chunk.primes {
                if !residue.is_multiple_of(p) {
                    continue;
                }
                let cap = self.exponents[&p];
                let mut v = 0u32;
                while v < cap {
                    let (q, r) = num_integer::Integer::div_rem(&*numer, &BigInt::from(p));
                    if !r.is_zero() {
                        break;
                    }
                    *numer = q;
                    v += 1;
                }
                if v > 0 {
                    shared *= BigInt::from(p).pow(v);
                }
            }
        }
        shared
    }
}

fn factor_u64(mut value: u64) -> Vec<(u64, u32)> {
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p * p <= value {
        if value.is_multiple_of(p) {
            let mut e = 0;
            while value.is_multiple_of(p) {
                value /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if value > 1 {
        factors.push((value, 1));
    }
    factors
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization_basics() {
        assert_eq!(factor_u64(80), vec![(2, 4), (5, 1)]);
        assert_eq!(factor_u64(97), vec![(97, 1)]);
        assert_eq!(factor_u64(1), vec![]);
    }

    #[test]
    fn strips_exactly_the_shared_part() {
        let mut factors = DenominatorFactors::default();
        for n in 1..=5 {
            factors.push_row(n);
        }
        // numer = 3^2 * 5 * 17 * 2^4 * 101; the tracked primes include 3, 5, 17
        let mut numer = BigInt::from(9 * 5 * 17 * 16 * 101u64);
        let shared = factors.strip_common(&mut numer);
        // 3 divides d (k=1 gives 1*3), 5 divides (k=2 gives 8*10), 17 (k=3: 15*17)
        assert_eq!(shared, BigInt::from(9 * 5 * 17u64));
        assert_eq!(numer, BigInt::from(16 * 101u64));
    }
}
