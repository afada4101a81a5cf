//! Prime-field arithmetic on `u64` residues.
//!
//! Moduli are kept below 2^32 so that a product of two residues fits in a
//! `u64` without widening.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime modulus below 2^32.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(q: u64) -> Result<Self> {
        if q >= 1 << 32 {
            return Err(Error::ModulusTooLarge(q));
        }
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(Prime(q))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    /// Reduces a signed integer into `0..q`.
    pub fn reduce_i128(self, v: i128) -> u64 {
        v.rem_euclid(self.0 as i128) as u64
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(q: u64) -> Result<Self> {
        Prime::new(q)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Trial division; moduli here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
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

/// The smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// `base^exp` as `u128`, or `None` on overflow.
pub fn checked_pow(base: u64, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u128)?;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert_eq!(Prime::new(9), Err(Error::NotPrime(9)));
        assert_eq!(Prime::new(1), Err(Error::NotPrime(1)));
        assert!(matches!(Prime::new(1 << 33), Err(Error::ModulusTooLarge(_))));
        assert_eq!(next_prime(13), 17);
        assert_eq!(next_prime(1), 2);
    }

    #[test]
    fn residues() {
        let p = Prime::new(7).unwrap();
        assert_eq!(p.add(5, 4), 2);
        assert_eq!(p.mul(5, 4), 6);
        assert_eq!(p.reduce_i128(-1), 6);
        assert_eq!(p.reduce_i128(-15), 6);
    }

    #[test]
    fn serde_rejects_composites() {
        assert!(serde_json::from_str::<Prime>("11").is_ok());
        assert!(serde_json::from_str::<Prime>("12").is_err());
    }
}
