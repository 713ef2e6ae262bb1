//! Small integer helpers shared by the group constructors and linear algebra.

use num_integer::Integer;

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

pub fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp).ok_or(Error::EncodingOverflow)
}

/// True when `n` is `p^k` for some `k >= 0`.
pub fn is_p_power(n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

/// Exponent `k` with `n = p^k`, if there is one.
pub fn p_log(n: u64, p: u64) -> Option<u32> {
    if !is_p_power(n, p) {
        return None;
    }
    let mut m = n;
    let mut k = 0;
    while m > 1 {
        m /= p;
        k += 1;
    }
    Some(k)
}

/// Smallest power of `p` strictly greater than `bound`.
pub fn next_p_power_above(p: u64, bound: u64) -> u64 {
    let mut s = 1;
    while s <= bound {
        s *= p;
    }
    s
}

pub fn valuation(n: u64, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut m = n;
    let mut v = 0;
    while m.is_multiple_of(p) {
        m /= p;
        v += 1;
    }
    v
}

pub fn checked_lcm(a: u64, b: u64) -> Result<u64> {
    let g = a.gcd(&b);
    (a / g).checked_mul(b).ok_or(Error::OrderOverflow)
}

/// Inverse of a unit modulo `m`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}
