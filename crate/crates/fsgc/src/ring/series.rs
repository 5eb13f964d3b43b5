use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::modular::ModScalar;
use crate::error::{invalid, Result};

/// Coefficient domain for truncated series. Constructors take a sample element
/// so that residues can carry their modulus.
pub trait Scalar: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn int_like(&self, n: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Scalar for ModScalar {
    fn zero_like(&self) -> Self {
        ModScalar { value: 0, modulus: self.modulus }
    }
    fn int_like(&self, n: i64) -> Self {
        ModScalar { value: n.rem_euclid(self.modulus as i64) as u64, modulus: self.modulus }
    }
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub(&self, o: &Self) -> Self {
        *self - *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl Scalar for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn int_like(&self, n: i64) -> Self {
        BigInt::from(n)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn int_like(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Power series `sum c_n z^n` known for `0 <= n < order`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> TruncatedSeries<T> {
    pub fn zeros(order: usize, sample: &T) -> Self {
        TruncatedSeries { coeffs: vec![sample.zero_like(); order] }
    }

    /// Pads with zeros or truncates to `order`.
    pub fn from_coeffs(mut coeffs: Vec<T>, order: usize, sample: &T) -> Self {
        coeffs.resize(order, sample.zero_like());
        TruncatedSeries { coeffs }
    }

    pub fn constant(c: T, order: usize) -> Self {
        let mut s = Self::zeros(order, &c);
        if order > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &T {
        &self.coeffs[n]
    }

    pub fn set(&mut self, n: usize, c: T) {
        if n < self.coeffs.len() {
            self.coeffs[n] = c;
        }
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.order() != o.order() {
            return invalid(format!("series truncations differ: {} vs {}", self.order(), o.order()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(TruncatedSeries { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect() })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(TruncatedSeries { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(b)).collect() })
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let t = self.order();
        if t == 0 {
            return Ok(self.clone());
        }
        let mut out = vec![self.coeffs[0].zero_like(); t];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs[..t - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    pub fn scale(&self, c: &T) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    /// Termwise derivative; the top coefficient becomes unknown and is dropped,
    /// so the result has order `order - 1`.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c.mul(&c.int_like(n as i64)))
            .collect();
        TruncatedSeries { coeffs }
    }

    /// Multiplication by `z^k`, keeping the truncation order.
    pub fn shift(&self, k: usize) -> Self {
        let t = self.order();
        if t == 0 {
            return self.clone();
        }
        let mut coeffs = vec![self.coeffs[0].zero_like(); t];
        let keep = t.saturating_sub(k);
        coeffs[k.min(t)..].clone_from_slice(&self.coeffs[..keep]);
        TruncatedSeries { coeffs }
    }

    pub fn truncate(&self, order: usize) -> Self {
        TruncatedSeries { coeffs: self.coeffs[..order.min(self.order())].to_vec() }
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let sample = self.coeffs.first().cloned();
        let one = match sample {
            Some(s) => s.int_like(1),
            None => return Ok(self.clone()),
        };
        let mut r = Self::constant(one, self.order());
        for _ in 0..e {
            r = r.mul(self)?;
        }
        Ok(r)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first non-zero coefficient.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

impl TruncatedSeries<BigInt> {
    pub fn one(order: usize) -> Self {
        Self::constant(BigInt::one(), order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i64], t: usize) -> TruncatedSeries<BigInt> {
        TruncatedSeries::from_coeffs(v.iter().map(|&x| BigInt::from(x)).collect(), t, &BigInt::zero())
    }

    #[test]
    fn product_and_derivative() {
        assert_eq!(s(&[1, 1], 3).mul(&s(&[1, -1], 3)).unwrap(), s(&[1, 0, -1], 3));
        assert_eq!(s(&[0, 0, 0, 1], 5).derivative(), s(&[0, 0, 3], 4));
        assert!(s(&[1], 3).add(&s(&[1], 4)).is_err());
    }
}
