use std::fmt;

use super::modular::{ModScalar, PrimePower};

/// Laurent polynomial in `z` over `Z/p^alpha`, stored densely from its lowest exponent.
///
/// The zero polynomial has an empty coefficient vector; otherwise the first and
/// last stored coefficients are non-zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    ring: PrimePower,
    low: i64,
    coeffs: Vec<u64>,
}

impl LaurentPoly {
    pub fn zero(ring: PrimePower) -> Self {
        LaurentPoly { ring, low: 0, coeffs: Vec::new() }
    }

    pub fn constant(ring: PrimePower, c: i64) -> Self {
        Self::monomial(ring, c, 0)
    }

    pub fn monomial(ring: PrimePower, c: i64, exp: i64) -> Self {
        Self::from_raw(ring, exp, vec![ring.reduce_i64(c)])
    }

    /// `z^low * (c_0 + c_1 z + ...)`, with entries reduced and trimmed.
    pub fn from_raw(ring: PrimePower, low: i64, coeffs: Vec<u64>) -> Self {
        let m = ring.modulus();
        let coeffs = coeffs.into_iter().map(|c| c % m).collect();
        let mut p = LaurentPoly { ring, low, coeffs };
        p.trim();
        p
    }

    pub fn from_terms(ring: PrimePower, terms: &[(i64, i64)]) -> Self {
        let mut p = Self::zero(ring);
        for &(exp, c) in terms {
            p = p.add(&Self::monomial(ring, c, exp));
        }
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
    }

    pub fn ring(&self) -> PrimePower {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a non-zero coefficient (0 for the zero polynomial).
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Highest exponent with a non-zero coefficient (`low - 1` for zero).
    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn raw(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: i64) -> u64 {
        let i = exp - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            0
        } else {
            self.coeffs[i as usize]
        }
    }

    pub fn coeff_scalar(&self, exp: i64) -> ModScalar {
        ModScalar { value: self.coeff(exp), modulus: self.ring.modulus() }
    }

    /// Non-zero terms as `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.low + i as i64, c))
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let high = self.high().max(o.high());
        let mut c = vec![0u64; (high - low + 1) as usize];
        for (i, &a) in self.coeffs.iter().enumerate() {
            c[(self.low - low) as usize + i] = a;
        }
        for (i, &b) in o.coeffs.iter().enumerate() {
            let k = (o.low - low) as usize + i;
            c[k] = self.ring.add(c[k], b);
        }
        let mut p = LaurentPoly { ring: self.ring, low, coeffs: c };
        p.trim();
        p
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            ring: self.ring,
            low: self.low,
            coeffs: self.coeffs.iter().map(|&c| self.ring.neg(c)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.ring);
        }
        let m = self.ring.modulus() as u128;
        let n = self.coeffs.len() + o.coeffs.len() - 1;
        let mut acc = vec![0u128; n];
        // Accumulate in u128 and reduce periodically; modulus < 2^62 keeps products below 2^124.
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                let t = &mut acc[i + j];
                *t += a as u128 * b as u128;
                if *t >= (1u128 << 125) {
                    *t %= m;
                }
            }
        }
        let coeffs = acc.into_iter().map(|t| (t % m) as u64).collect();
        let mut p = LaurentPoly { ring: self.ring, low: self.low + o.low, coeffs };
        p.trim();
        p
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.ring.modulus();
        let mut p = LaurentPoly {
            ring: self.ring,
            low: self.low,
            coeffs: self.coeffs.iter().map(|&a| self.ring.mul(a, c)).collect(),
        };
        p.trim();
        p
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        self.scale(self.ring.reduce_i64(c))
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { ring: self.ring, low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn derivative(&self) -> Self {
        let mut c = Vec::with_capacity(self.coeffs.len());
        for (i, &a) in self.coeffs.iter().enumerate() {
            let e = self.low + i as i64;
            c.push(self.ring.mul(a, self.ring.reduce_i64(e)));
        }
        let mut p = LaurentPoly { ring: self.ring, low: self.low - 1, coeffs: c };
        p.trim();
        p
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::constant(self.ring, 1);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Largest `k <= ring.alpha` such that `p^k` divides every coefficient.
    pub fn p_valuation(&self) -> u32 {
        self.coeffs.iter().map(|&c| self.ring.valuation(c)).min().unwrap_or(self.ring.alpha())
    }

    /// Divides every coefficient by `p^k`; coefficients must be divisible.
    pub fn div_p_pow(&self, k: u32) -> Option<Self> {
        let d = self.ring.p().pow(k);
        let mut c = Vec::with_capacity(self.coeffs.len());
        for &a in &self.coeffs {
            if a % d != 0 {
                return None;
            }
            c.push(a / d);
        }
        Some(Self::from_raw(self.ring, self.low, c))
    }

    /// Same integer representatives read in another power of the same prime.
    pub fn change_ring(&self, ring: PrimePower) -> Self {
        Self::from_raw(ring, self.low, self.coeffs.clone())
    }

    pub fn max_abs_exponent(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.low.abs().max(self.high().abs())
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "z")?,
                1 => write!(f, "{c}z")?,
                _ if c == 1 => write!(f, "z^{e}")?,
                _ => write!(f, "{c}z^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r81() -> PrimePower {
        PrimePower::new(3, 4).unwrap()
    }

    #[test]
    fn arithmetic_and_trimming() {
        let r = r81();
        let a = LaurentPoly::from_terms(r, &[(-1, 2), (0, 1), (3, 80)]);
        let b = LaurentPoly::from_terms(r, &[(-1, 79), (3, 1)]);
        let s = a.add(&b);
        assert_eq!(s, LaurentPoly::constant(r, 1));
        let one_plus = LaurentPoly::from_terms(r, &[(0, 1), (1, 1)]);
        let one_minus = LaurentPoly::from_terms(r, &[(0, 1), (1, -1)]);
        assert_eq!(one_plus.mul(&one_minus), LaurentPoly::from_terms(r, &[(0, 1), (2, -1)]));
        assert_eq!(LaurentPoly::monomial(r, 1, 3).derivative(), LaurentPoly::monomial(r, 3, 2));
        assert_eq!(LaurentPoly::monomial(r, 1, -2).derivative(), LaurentPoly::monomial(r, -2, -3));
    }

    #[test]
    fn valuation_and_division() {
        let r = r81();
        let a = LaurentPoly::from_terms(r, &[(0, 9), (2, 18)]);
        assert_eq!(a.p_valuation(), 2);
        assert_eq!(a.div_p_pow(2).unwrap(), LaurentPoly::from_terms(r, &[(0, 1), (2, 2)]));
        assert!(a.div_p_pow(3).is_none());
    }
}
