use std::fmt;

use super::laurent::LaurentPoly;
use super::modular::{binomial, ModScalar, PrimePower};
use super::series::TruncatedSeries;
use crate::error::{invalid, Result};

/// The polynomial `Y(z) = z^(p-1) - (N+1)^(-1)`, or the constant 1 when `N + 1`
/// is not a unit or `p = 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YPoly {
    ring: PrimePower,
    n: u64,
    /// `(N+1)^(-1) mod p^alpha` in the proper case.
    cinv: Option<u64>,
}

impl YPoly {
    /// `n` is `N = mu / (p - 1)`.
    pub fn new(ring: PrimePower, n: u64) -> Self {
        let p = ring.p();
        let mu_mod_p = ((p - 1) % p * (n % p)) % p;
        let cinv = if p >= 3 && mu_mod_p != 0 && mu_mod_p != 1 {
            ring.inv(ring.reduce_i64((n + 1) as i64))
        } else {
            None
        };
        YPoly { ring, n, cinv }
    }

    pub fn ring(&self) -> PrimePower {
        self.ring
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn is_trivial(&self) -> bool {
        self.cinv.is_none()
    }

    /// `(N+1)^(-1) mod p^alpha` when Y is proper.
    pub fn cinv(&self) -> Option<u64> {
        self.cinv
    }

    /// Degree of Y in z (0 when trivial).
    pub fn degree(&self) -> i64 {
        if self.is_trivial() {
            0
        } else {
            self.ring.p() as i64 - 1
        }
    }

    /// The same Y read in another power of the same prime.
    pub fn change_ring(&self, ring: PrimePower) -> Self {
        YPoly::new(ring, self.n)
    }

    pub fn as_laurent(&self) -> LaurentPoly {
        match self.cinv {
            None => LaurentPoly::constant(self.ring, 1),
            Some(c) => LaurentPoly::from_raw(self.ring, 0, {
                let d = self.degree() as usize;
                let mut v = vec![0u64; d + 1];
                v[0] = self.ring.neg(c);
                v[d] = 1;
                v
            }),
        }
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        self.as_laurent().pow(k)
    }

    /// Exact quotient by Y if Y divides the polynomial (z being a unit modulo Y).
    pub fn div_exact(&self, a: &LaurentPoly) -> Option<LaurentPoly> {
        let c = self.cinv?;
        if a.is_zero() {
            return Some(a.clone());
        }
        let d = self.degree() as usize;
        let mut r: Vec<u64> = a.raw().to_vec();
        if r.len() <= d {
            return None;
        }
        let mut q = vec![0u64; r.len() - d];
        for i in (d..r.len()).rev() {
            let t = r[i];
            if t == 0 {
                continue;
            }
            q[i - d] = t;
            r[i - d] = self.ring.add(r[i - d], self.ring.mul(c, t));
            r[i] = 0;
        }
        if r[..d].iter().any(|&x| x != 0) {
            return None;
        }
        Some(LaurentPoly::from_raw(self.ring, a.low(), q))
    }

    /// Power series of `Y^(-e)` to `order` terms from the closed binomial form.
    pub fn expand_inverse(&self, e: u32, order: usize) -> Result<TruncatedSeries<ModScalar>> {
        let sample = self.ring.scalar(0);
        if e == 0 {
            return Ok(TruncatedSeries::constant(self.ring.scalar(1), order));
        }
        if self.is_trivial() {
            return invalid("Y is trivial; negative powers are not part of the ring");
        }
        let d = self.degree() as usize;
        let np1 = self.ring.reduce_i64(self.n as i64 + 1);
        let sign = if e % 2 == 1 { self.ring.neg(1) } else { 1 };
        let mut out = TruncatedSeries::zeros(order, &sample);
        let mut k = 0usize;
        while k * d < order {
            let b = self.ring.reduce_big(&binomial((e as usize + k - 1) as i64, k as i64));
            let v = self.ring.mul(sign, self.ring.mul(self.ring.pow(np1, (e as usize + k) as u64), b));
            out.set(k * d, ModScalar { value: v, modulus: self.ring.modulus() });
            k += 1;
        }
        Ok(out)
    }
}

/// Element `num / Y^e` of `(Z/p^alpha)[z, 1/z, 1/Y]` in canonical form:
/// Y does not divide `num` unless `e = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct YFraction {
    num: LaurentPoly,
    e: u32,
}

impl YFraction {
    pub fn canonicalize(num: LaurentPoly, e: u32, y: &YPoly) -> Self {
        let (mut num, mut e) = (num, e);
        if num.is_zero() {
            return YFraction { num, e: 0 };
        }
        while e > 0 {
            match y.div_exact(&num) {
                Some(q) => {
                    num = q;
                    e -= 1;
                }
                None => break,
            }
        }
        YFraction { num, e }
    }

    pub fn from_laurent(num: LaurentPoly) -> Self {
        YFraction { num, e: 0 }
    }

    pub fn zero(ring: PrimePower) -> Self {
        YFraction { num: LaurentPoly::zero(ring), e: 0 }
    }

    pub fn constant(ring: PrimePower, c: i64) -> Self {
        YFraction { num: LaurentPoly::constant(ring, c), e: 0 }
    }

    pub fn monomial(ring: PrimePower, c: i64, exp: i64) -> Self {
        YFraction { num: LaurentPoly::monomial(ring, c, exp), e: 0 }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn y_exponent(&self) -> u32 {
        self.e
    }

    pub fn ring(&self) -> PrimePower {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn lifted_num(&self, e: u32, y: &YPoly) -> LaurentPoly {
        if e == self.e {
            self.num.clone()
        } else {
            self.num.mul(&y.pow(e - self.e))
        }
    }

    pub fn add(&self, o: &Self, y: &YPoly) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.e.max(o.e);
        Self::canonicalize(self.lifted_num(e, y).add(&o.lifted_num(e, y)), e, y)
    }

    pub fn neg(&self) -> Self {
        YFraction { num: self.num.neg(), e: self.e }
    }

    pub fn sub(&self, o: &Self, y: &YPoly) -> Self {
        self.add(&o.neg(), y)
    }

    /// Sum of many fractions with a single canonicalization.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a YFraction>, y: &YPoly) -> Self {
        let items: Vec<&YFraction> = items.into_iter().filter(|f| !f.is_zero()).collect();
        if items.is_empty() {
            return Self::zero(y.ring());
        }
        let e = items.iter().map(|f| f.e).max().unwrap();
        let mut acc = LaurentPoly::zero(y.ring());
        for f in items {
            acc = acc.add(&f.lifted_num(e, y));
        }
        Self::canonicalize(acc, e, y)
    }

    pub fn mul(&self, o: &Self, y: &YPoly) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.ring());
        }
        // Zero divisors mod p^alpha mean a product can become divisible by Y.
        Self::canonicalize(self.num.mul(&o.num), self.e + o.e, y)
    }

    pub fn mul_laurent(&self, l: &LaurentPoly, y: &YPoly) -> Self {
        Self::canonicalize(self.num.mul(l), self.e, y)
    }

    pub fn scale(&self, c: u64, y: &YPoly) -> Self {
        Self::canonicalize(self.num.scale(c), self.e, y)
    }

    pub fn shift(&self, k: i64) -> Self {
        YFraction { num: self.num.shift(k), e: self.e }
    }

    pub fn derivative(&self, y: &YPoly) -> Self {
        if self.e == 0 {
            return YFraction { num: self.num.derivative(), e: 0 };
        }
        let yl = y.as_laurent();
        let dy = yl.derivative();
        let num = self.num.derivative().mul(&yl).sub(&self.num.mul(&dy).scale_i64(self.e as i64));
        Self::canonicalize(num, self.e + 1, y)
    }

    /// Minimal p-adic valuation of the numerator coefficients.
    pub fn p_valuation(&self) -> u32 {
        self.num.p_valuation()
    }

    pub fn div_p_pow(&self, k: u32) -> Option<Self> {
        Some(YFraction { num: self.num.div_p_pow(k)?, e: self.e })
    }

    /// Reinterprets integer representatives modulo a different power of p.
    pub fn change_ring(&self, ring: PrimePower, y: &YPoly) -> Self {
        Self::canonicalize(self.num.change_ring(ring), self.e, y)
    }

    /// Laurent-series coefficients of the element for exponents `from..to`.
    pub fn expand(&self, from: i64, to: i64, y: &YPoly) -> Result<Vec<u64>> {
        let ring = self.ring();
        let mut out = vec![0u64; (to - from).max(0) as usize];
        if self.is_zero() || to <= from {
            return Ok(out);
        }
        let len = (to - self.num.low()).max(0) as usize;
        let inv = y.expand_inverse(self.e, len)?;
        for (j, c) in self.num.terms() {
            for (k, s) in inv.coeffs().iter().enumerate() {
                if s.value == 0 {
                    continue;
                }
                let exp = j + k as i64;
                if exp >= to {
                    break;
                }
                if exp >= from {
                    let slot = &mut out[(exp - from) as usize];
                    *slot = ring.add(*slot, ring.mul(c, s.value));
                }
            }
        }
        Ok(out)
    }

    pub fn max_abs_exponent(&self) -> i64 {
        self.num.max_abs_exponent()
    }
}

impl fmt::Display for YFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/Y^{}", self.num, self.e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h7() -> (PrimePower, YPoly) {
        let r = PrimePower::new(7, 3).unwrap();
        (r, YPoly::new(r, 1))
    }

    #[test]
    fn y_shape() {
        let (r, y) = h7();
        assert!(!y.is_trivial());
        // (N+1)^(-1) = 2^(-1) = 172 mod 343.
        assert_eq!(y.cinv(), Some(172));
        assert_eq!(y.as_laurent(), LaurentPoly::from_terms(r, &[(0, -172), (6, 1)]));
        let r81 = PrimePower::new(3, 4).unwrap();
        assert!(YPoly::new(r81, 6).is_trivial());
        assert!(YPoly::new(PrimePower::new(2, 4).unwrap(), 19).is_trivial());
    }

    #[test]
    fn cancellation() {
        let (r, y) = h7();
        let z = LaurentPoly::monomial(r, 1, 1);
        let f = YFraction::canonicalize(y.as_laurent().mul(&z), 1, &y);
        assert_eq!(f, YFraction::from_laurent(z.clone()));
        let g = YFraction::canonicalize(z.clone(), 0, &y);
        assert_eq!(g.y_exponent(), 0);
    }

    #[test]
    fn displayed_denominator_is_minus_two_y() {
        // 1 - 2 z^6 = -2 Y, so (1 - 2z^6)^3 * 5z over Y^3 is 5z * (-2)^3.
        let (r, y) = h7();
        let base = LaurentPoly::from_terms(r, &[(0, 1), (6, -2)]);
        let num = base.pow(3).mul(&LaurentPoly::monomial(r, 5, 1));
        let f = YFraction::canonicalize(num.clone(), 3, &y);
        assert_eq!(f, YFraction::from_laurent(LaurentPoly::monomial(r, -40, 1)));
        let raw = YFraction { num, e: 3 };
        assert_eq!(raw.expand(0, 30, &y).unwrap(), f.expand(0, 30, &y).unwrap());
    }

    #[test]
    fn inverse_expansion_mod_7() {
        let r = PrimePower::new(7, 1).unwrap();
        let y = YPoly::new(r, 1);
        let s = y.expand_inverse(1, 25).unwrap();
        let got: Vec<u64> = (0..4).map(|k| s.coeff(6 * k).value).collect();
        // -2^(k+1) mod 7
        assert_eq!(got, vec![5, 3, 6, 5]);
        assert_eq!(s.coeff(1).value, 0);
    }
}
