//! Prime-factorization encoding of Cantor normal forms.
//!
//! With `p_1 = 2, p_2 = 3, ...` the code of an ordinal is
//! `M(0) = 1` and `M(sum w^ei*ci) = prod p_{M(ei)}^{ci}`. Strictly decreasing
//! exponents map to distinct primes, so this is a bijection between the
//! ordinals below epsilon_0 and the positive integers.

use alloc::vec::Vec;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::Ordinal;

/// Growing prime table; primality by trial division against earlier primes,
/// which is plenty at census scale.
struct PrimeTable {
    primes: Vec<u64>,
}

impl PrimeTable {
    fn new() -> Self {
        PrimeTable { primes: alloc::vec![2, 3, 5, 7, 11, 13] }
    }

    fn grow(&mut self) {
        let mut cand = self.primes.last().unwrap() + 2;
        loop {
            let mut composite = false;
            for &p in &self.primes {
                if p * p > cand {
                    break;
                }
                if cand % p == 0 {
                    composite = true;
                    break;
                }
            }
            if !composite {
                self.primes.push(cand);
                return;
            }
            cand += 2;
        }
    }

    /// 1-indexed: `nth(1) = 2`.
    fn nth(&mut self, i: usize) -> u64 {
        assert!(i >= 1, "prime index is 1-based");
        while self.primes.len() < i {
            self.grow();
        }
        self.primes[i - 1]
    }

    /// 1-based index of `p`, growing the table as needed; `None` when `p`
    /// is not prime.
    fn index_of(&mut self, p: u64) -> Option<usize> {
        while *self.primes.last().unwrap() < p {
            self.grow();
        }
        self.primes.binary_search(&p).ok().map(|i| i + 1)
    }
}

/// Encoder/decoder sharing one prime table; cheaper than the free functions
/// when coding many values.
pub struct MatulaCoder {
    table: PrimeTable,
}

impl Default for MatulaCoder {
    fn default() -> Self {
        Self::new()
    }
}

impl MatulaCoder {
    pub fn new() -> Self {
        MatulaCoder { table: PrimeTable::new() }
    }

    pub fn encode(&mut self, x: &Ordinal) -> BigUint {
        let mut out = BigUint::one();
        for (exponent, coefficient) in x.terms() {
            let code = self.encode(exponent);
            let index = code
                .to_usize()
                .expect("exponent code too large for a prime lookup");
            let p = BigUint::from(self.table.nth(index));
            out *= p.pow(u32::try_from(coefficient).expect("coefficient too large"));
        }
        out
    }

    /// Inverse of [`MatulaCoder::encode`]; `n` must be positive.
    pub fn decode(&mut self, n: &BigUint) -> Ordinal {
        assert!(!n.is_zero(), "codes start at 1");
        let n = n
            .to_u64()
            .expect("code too large for trial-division decoding");
        self.decode_u64(n)
    }

    pub fn decode_u64(&mut self, n: u64) -> Ordinal {
        let pairs: Vec<(Ordinal, u64)> = self
            .factor_indices(n)
            .into_iter()
            .map(|(idx, mult)| (self.decode_u64(idx), mult))
            .collect();
        Ordinal::from_terms(pairs)
    }

    /// Factorization of `n` as `(1-based prime index, multiplicity)` pairs.
    pub(crate) fn factor_indices(&mut self, mut n: u64) -> Vec<(u64, u64)> {
        assert!(n > 0, "codes start at 1");
        let mut pairs: Vec<(u64, u64)> = Vec::new();
        let mut i = 1usize;
        loop {
            if n == 1 {
                break;
            }
            let p = self.table.nth(i);
            if p * p > n {
                // remainder is prime
                let idx = self.table.index_of(n).expect("trial division remainder");
                pairs.push((idx as u64, 1));
                break;
            }
            if n % p == 0 {
                let mut mult = 0u64;
                while n % p == 0 {
                    n /= p;
                    mult += 1;
                }
                pairs.push((i as u64, mult));
            }
            i += 1;
        }
        pairs
    }
}

/// One-shot encode; see [`MatulaCoder`] for batch use.
pub fn matula_encode(x: &Ordinal) -> BigUint {
    MatulaCoder::new().encode(x)
}

/// One-shot decode; see [`MatulaCoder`] for batch use.
pub fn matula_decode(n: &BigUint) -> Ordinal {
    MatulaCoder::new().decode(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn enc(s: &str) -> u64 {
        matula_encode(&ord(s)).to_u64().unwrap()
    }

    #[test]
    fn small_codes() {
        assert_eq!(enc("0"), 1);
        assert_eq!(enc("1"), 2);
        assert_eq!(enc("2"), 4);
        assert_eq!(enc("w"), 3);
        assert_eq!(enc("w+1"), 6);
        assert_eq!(enc("w*2"), 9);
        assert_eq!(enc("w^2"), 7);
        assert_eq!(enc("w^w"), 5);
    }

    #[test]
    fn decode_small() {
        let mut coder = MatulaCoder::new();
        assert_eq!(coder.decode_u64(1), ord("0"));
        assert_eq!(coder.decode_u64(2), ord("1"));
        assert_eq!(coder.decode_u64(3), ord("w"));
        assert_eq!(coder.decode_u64(4), ord("2"));
        assert_eq!(coder.decode_u64(5), ord("w^w"));
        assert_eq!(coder.decode_u64(6), ord("w+1"));
        assert_eq!(coder.decode_u64(7), ord("w^2"));
        assert_eq!(coder.decode_u64(12), ord("w+2"));
    }

    #[test]
    fn round_trip_first_codes() {
        let mut coder = MatulaCoder::new();
        for n in 1u64..=4096 {
            let x = coder.decode_u64(n);
            assert_eq!(coder.encode(&x).to_u64().unwrap(), n, "code {}", n);
        }
    }

    #[test]
    fn round_trip_ordinals() {
        let mut coder = MatulaCoder::new();
        for s in ["0", "5", "w^2*2+3", "w^w", "w^(w+1)*2+w^3+4", "w^(w^w)+w"] {
            let x = ord(s);
            let n = coder.encode(&x);
            assert_eq!(coder.decode(&n), x, "{}", s);
        }
    }
}
