use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The modulus `p^alpha` with `p` prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    p: u64,
    alpha: u32,
    modulus: u64,
}

impl PrimePower {
    pub fn new(p: u64, alpha: u32) -> Result<Self> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        if alpha == 0 {
            return invalid("exponent alpha must be at least 1");
        }
        let mut modulus: u64 = 1;
        for _ in 0..alpha {
            modulus = match modulus.checked_mul(p) {
                Some(m) if m < (1u64 << 62) => m,
                _ => return invalid(format!("{p}^{alpha} does not fit in 62 bits")),
            };
        }
        Ok(PrimePower { p, alpha, modulus })
    }

    /// Parses the literal form `p^a`; a bare prime means `a = 1`.
    pub fn parse(s: &str) -> Result<Self> {
        let (p, a) = match s.split_once('^') {
            Some((p, a)) => (p.trim(), a.trim()),
            None => (s.trim(), "1"),
        };
        let p: u64 = p.parse().or_else(|_| invalid(format!("bad prime in {s:?}")))?;
        let a: u32 = a.parse().or_else(|_| invalid(format!("bad exponent in {s:?}")))?;
        PrimePower::new(p, a)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The same prime with a different exponent.
    pub fn with_alpha(&self, alpha: u32) -> Result<Self> {
        PrimePower::new(self.p, alpha)
    }

    pub fn reduce_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.modulus as i64) as u64
    }

    pub fn reduce_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    pub fn reduce_big(&self, x: &BigInt) -> u64 {
        let m = BigInt::from(self.modulus);
        x.mod_floor(&m).to_u64().unwrap()
    }

    /// Reduces a rational whose denominator is a unit mod p.
    pub fn reduce_ratio(&self, num: &BigInt, den: &BigInt) -> Option<u64> {
        let d = self.reduce_big(den);
        let di = self.inv(d)?;
        Some(self.mul(self.reduce_big(num), di))
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        let (g, x, _) = ext_gcd(a as i128, self.modulus as i128);
        debug_assert_eq!(g, 1);
        Some(self.reduce_i128(x))
    }

    /// p-adic valuation of a residue, capped at alpha for zero.
    pub fn valuation(&self, mut a: u64) -> u32 {
        a %= self.modulus;
        if a == 0 {
            return self.alpha;
        }
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    /// Signed representative in (-modulus/2, modulus/2].
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.modulus / 2 {
            a as i64 - self.modulus as i64
        } else {
            a as i64
        }
    }

    pub fn scalar(&self, x: i64) -> ModScalar {
        ModScalar { value: self.reduce_i64(x), modulus: self.modulus }
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.alpha)
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// A residue modulo some `p^alpha`, carrying its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModScalar {
    pub value: u64,
    pub modulus: u64,
}

impl ModScalar {
    pub fn new(value: u64, ring: &PrimePower) -> Self {
        ModScalar { value: value % ring.modulus(), modulus: ring.modulus() }
    }
}

impl fmt::Display for ModScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for ModScalar {
    type Output = ModScalar;
    fn add(self, o: ModScalar) -> ModScalar {
        debug_assert_eq!(self.modulus, o.modulus);
        ModScalar { value: ((self.value as u128 + o.value as u128) % self.modulus as u128) as u64, modulus: self.modulus }
    }
}

impl Sub for ModScalar {
    type Output = ModScalar;
    fn sub(self, o: ModScalar) -> ModScalar {
        self + (-o)
    }
}

impl Neg for ModScalar {
    type Output = ModScalar;
    fn neg(self) -> ModScalar {
        ModScalar { value: (self.modulus - self.value) % self.modulus, modulus: self.modulus }
    }
}

impl Mul for ModScalar {
    type Output = ModScalar;
    fn mul(self, o: ModScalar) -> ModScalar {
        debug_assert_eq!(self.modulus, o.modulus);
        ModScalar { value: ((self.value as u128 * o.value as u128) % self.modulus as u128) as u64, modulus: self.modulus }
    }
}

/// Euler's totient.
pub fn totient(mut n: u64) -> u64 {
    let mut r = n;
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            while n.is_multiple_of(q) {
                n /= q;
            }
            r -= r / q;
        }
        q += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

/// Positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Exact binomial coefficient with the zero convention for out-of-range lower arguments.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::from(1);
    for i in 0..k {
        r *= n - i;
        r /= i + 1;
    }
    r
}

/// Binomial with arbitrary integer upper argument, `C(n, k) = n(n-1)...(n-k+1)/k!`.
pub fn binomial_general(n: &BigInt, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if !n.is_negative() {
        if let Some(nn) = n.to_i64() {
            return binomial(nn, k);
        }
    }
    let mut r = BigInt::from(1);
    for i in 0..k {
        r *= n - i;
        r /= i + 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }

    #[test]
    fn prime_power_basics() {
        let r = PrimePower::new(3, 4).unwrap();
        assert_eq!(r.modulus(), 81);
        assert_eq!(r.inv(2), Some(41));
        assert_eq!(r.inv(3), None);
        assert_eq!(r.valuation(27), 3);
        assert_eq!(r.valuation(0), 4);
        assert!(PrimePower::new(4, 2).is_err());
        assert!(PrimePower::new(3, 0).is_err());
        assert_eq!(PrimePower::parse("7^3").unwrap().modulus(), 343);
    }

    #[test]
    fn number_theory_helpers() {
        assert_eq!(totient(30), 8);
        assert_eq!(divisors(30), vec![1, 2, 3, 5, 6, 10, 15, 30]);
        assert_eq!(binomial(18, 1), BigInt::from(18));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial_general(&BigInt::from(-2), 3), BigInt::from(-4));
    }
}
