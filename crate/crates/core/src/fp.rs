//! The prime field F_p at a runtime prime p.
//!
//! Scalars are stored as canonical residues in `0..p`. Every other ring in
//! the crate (Laurent polynomials in the uniformizer, multivariate
//! polynomials) reduces its coefficients through a [`PrimeCtx`].

use crate::error::{Error, Result};

/// Runtime prime context. All arithmetic downstream reduces modulo `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeCtx {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeCtx {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(PrimeCtx { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        let m = n.rem_euclid(self.p as i64);
        m as u64
    }

    pub fn reduce_u64(&self, n: u64) -> u64 {
        n % self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat; panics on zero (caller invariant).
    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, self.p - 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_gate() {
        assert!(PrimeCtx::new(2).is_ok());
        assert!(PrimeCtx::new(3).is_ok());
        assert!(PrimeCtx::new(7).is_ok());
        assert_eq!(PrimeCtx::new(1), Err(Error::NotPrime(1)));
        assert_eq!(PrimeCtx::new(4), Err(Error::NotPrime(4)));
        assert_eq!(PrimeCtx::new(9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn field_ops() {
        let f = PrimeCtx::new(7).unwrap();
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.sub(2, 5), 4);
        assert_eq!(f.neg(0), 0);
        assert_eq!(f.mul(4, 5), 6);
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        assert_eq!(f.reduce_i64(-1), 6);
        assert_eq!(f.reduce_i64(-14), 0);
    }
}
