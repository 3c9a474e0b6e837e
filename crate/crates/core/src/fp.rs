//! Arithmetic context for the prime field GF(p).
//!
//! The prime is a runtime parameter (default 12347). Elements are residues
//! in `[0, p)` stored as `u64`; products are reduced after 64-bit
//! multiplication. The primes supported are word-sized and odd; everything
//! downstream additionally assumes `p < 2^15` so that dense elimination can
//! defer reductions (see [`crate::matrix`]).

use serde::{Deserialize, Serialize};

/// Default field characteristic used by the model constructions.
pub const DEFAULT_PRIME: u64 = 12347;

/// Context carrying the prime `p`. All scalar values are residues mod `p`
/// and are passed around as bare `u64`; the context owns the arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpCtx {
    p: u64,
}

impl FpCtx {
    /// Creates a context, checking once that `p` is prime.
    ///
    /// Panics if `p` is not an odd prime below `2^15` (the lazy-reduction
    /// bound used by the matrix kernels), except for `p = 2` which is
    /// allowed for the characteristic-hazard tests.
    pub fn new(p: u64) -> FpCtx {
        assert!(is_prime(p), "{p} is not prime");
        assert!(p < (1 << 15), "prime {p} too large for lazy reduction");
        FpCtx { p }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u64 {
        a % self.p
    }

    #[inline]
    pub fn reduce_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    /// `a + b*c` in one reduction.
    #[inline]
    pub fn mul_add(&self, a: u64, b: u64, c: u64) -> u64 {
        (a + b * c) % self.p
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "division by zero in GF({})", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn div(&self, a: u64, b: u64) -> u64 {
        self.mul(a, self.inv(b))
    }

    /// Falling factorial `n (n-1) ... (n-k+1)` reduced mod p, used by formal
    /// derivatives.
    pub fn falling(&self, n: u64, k: u64) -> u64 {
        let mut acc = 1u64;
        for i in 0..k {
            if i > n {
                return 0;
            }
            acc = self.mul(acc, (n - i) % self.p);
        }
        acc
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_arithmetic() {
        let f = FpCtx::new(7);
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.sub(2, 5), 4);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(2), 4);
        assert_eq!(f.div(3, 2), f.mul(3, 4));
        assert_eq!(f.pow(3, 6), 1);
    }

    #[test]
    fn default_prime_is_prime() {
        let f = FpCtx::new(DEFAULT_PRIME);
        assert_eq!(f.prime(), 12347);
    }

    #[test]
    #[should_panic]
    fn composite_rejected() {
        FpCtx::new(91);
    }

    #[test]
    fn inverses_over_small_field() {
        let f = FpCtx::new(101);
        for a in 1..101 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }
}
