//! The quotient algebra `R[Phi]/(Phi - z (Phi^(p-1) - 1)^N)` over
//! `R = (Z/p^alpha)[z, 1/z, 1/Y]`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::matrix::solve_linearizer;
use crate::error::{internal, invalid, Result};
use crate::ring::modular::{binomial, ModScalar, PrimePower};
use crate::ring::padic::FactorialTable;
use crate::ring::series::TruncatedSeries;
use crate::ring::{LaurentPoly, YFraction, YPoly};

/// `[z^n] Phi^m = (-1)^(((mu-1)n + m)/(p-1)) (m/n) C(Nn, (n-m)/(p-1))`, zero unless `p-1 | n-m`.
pub fn phi_power_coefficient(m: u64, n: u64, p: u64, big_n: u64) -> BigInt {
    if m == 0 {
        return BigInt::from((n == 0) as i64);
    }
    if n < m || !(n - m).is_multiple_of(p - 1) {
        return BigInt::zero();
    }
    let mu = (p - 1) * big_n;
    let b = binomial((big_n * n) as i64, ((n - m) / (p - 1)) as i64) * m;
    let (v, r) = b.div_rem(&BigInt::from(n));
    debug_assert!(r.is_zero(), "coefficients of Phi^m are integral");
    if (((mu - 1) * n + m) / (p - 1)) % 2 == 1 {
        -v
    } else {
        v
    }
}

/// The same coefficient reduced mod `p^alpha` from a factorial table covering `N n`.
pub fn phi_power_coefficient_mod(t: &FactorialTable, ring: &PrimePower, m: u64, n: u64, big_n: u64) -> u64 {
    let p = ring.p();
    if m == 0 {
        return (n == 0) as u64 % ring.modulus();
    }
    if n < m || !(n - m).is_multiple_of(p - 1) {
        return 0;
    }
    let k = ((n - m) / (p - 1)) as usize;
    let top = (big_n * n) as usize;
    let v = t
        .factorial(top)
        .div(&t.factorial(k), ring)
        .div(&t.factorial(top - k), ring)
        .mul_i64(m as i64, ring)
        .div_i64(n as i64, ring);
    let mu = (p - 1) * big_n;
    let r = v.residue(ring).expect("coefficients of Phi^m are integral");
    if (((mu - 1) * n + m) / (p - 1)) % 2 == 1 {
        ring.neg(r)
    } else {
        r
    }
}

/// `sum_i a_i Phi^i` with `i < mu`, coefficients canonical in R.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhiElement {
    coeffs: Vec<YFraction>,
}

impl PhiElement {
    pub fn coeffs(&self) -> &[YFraction] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &YFraction {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn max_y_exponent(&self) -> u32 {
        self.coeffs.iter().map(|c| c.y_exponent()).max().unwrap_or(0)
    }

    /// Largest `|exponent|` of z over all numerators.
    pub fn max_abs_exponent(&self) -> i64 {
        self.coeffs.iter().map(|c| c.max_abs_exponent()).max().unwrap_or(0)
    }

    /// Minimal p-adic valuation of all numerator coefficients (`alpha` for zero).
    pub fn p_valuation(&self) -> u32 {
        self.coeffs.iter().filter(|c| !c.is_zero()).map(|c| c.p_valuation()).min().unwrap_or(u32::MAX)
    }
}

impl fmt::Display for PhiElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c}) Phi")?,
                _ => write!(f, "({c}) Phi^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Structure data for a fixed `(p, N, p^alpha)`: Y, the inverse of the linearizer and `Phi'`.
#[derive(Clone, Debug)]
pub struct PhiAlgebra {
    ring: PrimePower,
    n: u64,
    mu: usize,
    y: YPoly,
    d_inv: YFraction,
    linv: PhiElement,
    dphi: PhiElement,
}

impl PhiAlgebra {
    /// Requires `mu = (p-1) N >= 2`.
    pub fn new(ring: PrimePower, n: u64) -> Result<Self> {
        let p = ring.p();
        let mu = ((p - 1) * n) as usize;
        if mu < 2 {
            return invalid(format!("the Phi-algebra needs mu >= 2, got {mu}"));
        }
        let y = YPoly::new(ring, n);
        let zero = PhiElement { coeffs: vec![YFraction::zero(ring); mu] };
        let mut alg = PhiAlgebra { ring, n, mu, y, d_inv: YFraction::zero(ring), linv: zero.clone(), dphi: zero };
        alg.d_inv = alg.invert_d()?;
        let (nums, _) = solve_linearizer(p, n);
        // b_i = num_i(1/z) z^(p-1) / D(z).
        let coeffs = nums
            .iter()
            .map(|num| {
                let l = LaurentPoly::from_raw(
                    ring,
                    0,
                    num.coeffs().iter().map(|c| ring.reduce_big(c)).collect(),
                );
                let rev = reverse_in_w(&l).shift(p as i64 - 1);
                alg.d_inv.mul_laurent(&rev, &alg.y)
            })
            .collect();
        alg.linv = PhiElement { coeffs };
        let check = alg.mul(&alg.linearizer(), &alg.linv);
        if check != alg.one() {
            return internal("linearizer times its computed inverse is not 1");
        }
        alg.dphi = alg.mul(&alg.phi_power(1).mul_z(-1), &alg.linv);
        Ok(alg)
    }

    pub fn ring(&self) -> PrimePower {
        self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn y(&self) -> &YPoly {
        &self.y
    }

    /// `D(z)^(-1)` in R.
    pub fn d_inverse(&self) -> &YFraction {
        &self.d_inv
    }

    /// `(1 - z N (p-1) Phi^(p-2) (Phi^(p-1) - 1)^(N-1))^(-1)`.
    pub fn linearizer_inverse(&self) -> &PhiElement {
        &self.linv
    }

    /// `Phi'(z)` as an element of the algebra.
    pub fn phi_derivative(&self) -> &PhiElement {
        &self.dphi
    }

    pub fn zero(&self) -> PhiElement {
        PhiElement { coeffs: vec![YFraction::zero(self.ring); self.mu] }
    }

    pub fn one(&self) -> PhiElement {
        self.constant(YFraction::constant(self.ring, 1))
    }

    pub fn constant(&self, c: YFraction) -> PhiElement {
        let mut e = self.zero();
        e.coeffs[0] = c;
        e
    }

    /// `Phi^i` for `i < mu`.
    pub fn phi_power(&self, i: usize) -> PhiElement {
        assert!(i < self.mu);
        let mut e = self.zero();
        e.coeffs[i] = YFraction::constant(self.ring, 1);
        e
    }

    /// Builds an element from canonicalized coefficients; missing entries are zero.
    pub fn element(&self, coeffs: Vec<YFraction>) -> Result<PhiElement> {
        if coeffs.len() > self.mu {
            return invalid(format!("{} coefficients exceed the degree bound {}", coeffs.len(), self.mu));
        }
        let mut e = self.zero();
        for (i, c) in coeffs.into_iter().enumerate() {
            e.coeffs[i] = YFraction::canonicalize(c.numerator().clone(), c.y_exponent(), &self.y);
        }
        Ok(e)
    }

    pub fn add(&self, a: &PhiElement, b: &PhiElement) -> PhiElement {
        PhiElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.add(y, &self.y)).collect() }
    }

    pub fn sub(&self, a: &PhiElement, b: &PhiElement) -> PhiElement {
        PhiElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.sub(y, &self.y)).collect() }
    }

    pub fn neg(&self, a: &PhiElement) -> PhiElement {
        PhiElement { coeffs: a.coeffs.iter().map(|x| x.neg()).collect() }
    }

    pub fn scale(&self, a: &PhiElement, c: u64) -> PhiElement {
        PhiElement { coeffs: a.coeffs.iter().map(|x| x.scale(c, &self.y)).collect() }
    }

    pub fn mul_coeff(&self, a: &PhiElement, c: &YFraction) -> PhiElement {
        PhiElement { coeffs: a.coeffs.iter().map(|x| x.mul(c, &self.y)).collect() }
    }

    /// Numerators over the common denominator `Y^e`.
    fn common(&self, a: &PhiElement) -> (Vec<LaurentPoly>, u32) {
        let e = a.max_y_exponent();
        let nums = a
            .coeffs
            .iter()
            .map(|c| if c.y_exponent() == e { c.numerator().clone() } else { c.numerator().mul(&self.y.pow(e - c.y_exponent())) })
            .collect();
        (nums, e)
    }

    /// Rewrites `sum_(i < len) c_i Phi^i` below `Phi^mu` and canonicalizes over `Y^e`.
    fn reduce(&self, mut c: Vec<LaurentPoly>, e: u32) -> PhiElement {
        let (p, n, mu) = (self.p() as usize, self.n, self.mu);
        let ring = self.ring;
        let rel: Vec<(usize, u64)> = (0..n)
            .map(|k| {
                // Phi^mu contributes -C(N,k)(-1)^(N-k) Phi^((p-1)k).
                let b = ring.reduce_big(&binomial(n as i64, k as i64));
                let s = if (n - k) % 2 == 0 { ring.neg(b) } else { b };
                ((p - 1) * k as usize, s)
            })
            .collect();
        for top in (mu..c.len()).rev() {
            let t = std::mem::replace(&mut c[top], LaurentPoly::zero(ring));
            if t.is_zero() {
                continue;
            }
            let t_off = top - mu;
            c[t_off + 1] = c[t_off + 1].add(&t.shift(-1));
            for &(idx, s) in &rel {
                if s != 0 {
                    c[idx + t_off] = c[idx + t_off].add(&t.scale(s));
                }
            }
        }
        c.truncate(mu);
        c.resize(mu, LaurentPoly::zero(ring));
        PhiElement { coeffs: c.into_iter().map(|num| YFraction::canonicalize(num, e, &self.y)).collect() }
    }

    pub fn mul(&self, a: &PhiElement, b: &PhiElement) -> PhiElement {
        let (an, ae) = self.common(a);
        let (bn, be) = self.common(b);
        let mut c = vec![LaurentPoly::zero(self.ring); 2 * self.mu - 1];
        for (i, x) in an.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bn.iter().enumerate() {
                if !y.is_zero() {
                    c[i + j] = c[i + j].add(&x.mul(y));
                }
            }
        }
        self.reduce(c, ae + be)
    }

    pub fn pow(&self, a: &PhiElement, mut e: u32) -> PhiElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `1 - z N (p-1) Phi^(p-2) (Phi^(p-1) - 1)^(N-1)`.
    pub fn linearizer(&self) -> PhiElement {
        let p = self.p() as usize;
        let phi_pm1 = self.sub(&self.pow(&self.phi_power(1), (p - 1) as u32), &self.one());
        let t = self.mul(&self.pow(&self.phi_power(1), (p - 2) as u32), &self.pow(&phi_pm1, (self.n - 1) as u32));
        let k = self.ring.reduce_i64(self.n as i64 * (p as i64 - 1));
        let zt = self.mul_coeff(&t, &YFraction::monomial(self.ring, k as i64, 1));
        self.sub(&self.one(), &zt)
    }

    /// `d/dz sum a_i Phi^i = sum a_i' Phi^i + (sum i a_i Phi^(i-1)) Phi'`.
    pub fn differentiate(&self, a: &PhiElement) -> PhiElement {
        let direct = PhiElement { coeffs: a.coeffs.iter().map(|c| c.derivative(&self.y)).collect() };
        let mut inner = self.zero();
        for i in 1..self.mu {
            inner.coeffs[i - 1] = a.coeffs[i].scale(self.ring.reduce_i64(i as i64), &self.y);
        }
        self.add(&direct, &self.mul(&inner, &self.dphi))
    }

    /// Coefficients reduced mod `p^alpha`, then reread in `ring` (a power of the same prime).
    pub fn change_ring(&self, a: &PhiElement, alg: &PhiAlgebra) -> PhiElement {
        PhiElement { coeffs: a.coeffs.iter().map(|c| c.change_ring(alg.ring, &alg.y)).collect() }
    }

    /// Divides every numerator by `p^k`; `None` if some coefficient is not divisible.
    pub fn div_p_pow(&self, a: &PhiElement, k: u32) -> Option<PhiElement> {
        let coeffs = a
            .coeffs
            .iter()
            .map(|c| c.div_p_pow(k).map(|d| YFraction::canonicalize(d.numerator().clone(), d.y_exponent(), &self.y)))
            .collect::<Option<Vec<_>>>()?;
        Some(PhiElement { coeffs })
    }

    /// `Phi^i` as power series mod `p^alpha` to `order` terms, `i = 0..mu`.
    pub fn phi_power_series(&self, order: usize) -> Result<Vec<TruncatedSeries<ModScalar>>> {
        let ring = self.ring;
        let sample = ring.scalar(0);
        let phi: Vec<ModScalar> = (0..order)
            .map(|n| {
                let c = if n == 0 { BigInt::zero() } else { phi_power_coefficient(1, n as u64, ring.p(), self.n) };
                ModScalar::new(ring.reduce_big(&c), &ring)
            })
            .collect();
        let phi = TruncatedSeries::from_coeffs(phi, order, &sample);
        let mut out = vec![TruncatedSeries::constant(ring.scalar(1), order)];
        for i in 1..self.mu {
            out.push(out[i - 1].mul(&phi)?);
        }
        Ok(out)
    }

    /// Laurent-series coefficients of the element for exponents `0..order`.
    pub fn to_series(&self, a: &PhiElement, order: usize) -> Result<Vec<u64>> {
        let powers = self.phi_power_series(order + series_slack(a))?;
        self.to_series_with(a, order, &powers)
    }

    /// As `to_series`, reusing powers of Phi with at least `order + series_slack(a)` terms.
    pub fn to_series_with(&self, a: &PhiElement, order: usize, powers: &[TruncatedSeries<ModScalar>]) -> Result<Vec<u64>> {
        let ring = self.ring;
        let slack = series_slack(a);
        let mut buf = vec![0u64; order + slack];
        for (i, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let low = c.numerator().low();
            let coeffs = c.expand(low, order as i64, &self.y)?;
            let ph = powers[i].coeffs();
            for (off, &cv) in coeffs.iter().enumerate() {
                if cv == 0 {
                    continue;
                }
                let j = low + off as i64;
                for (n, s) in ph.iter().enumerate() {
                    let e = j + n as i64;
                    if e >= order as i64 {
                        break;
                    }
                    if s.value != 0 {
                        let k = (e + slack as i64) as usize;
                        buf[k] = ring.add(buf[k], ring.mul(cv, s.value));
                    }
                }
            }
        }
        if buf[..slack].iter().any(|&x| x != 0) {
            return invalid("element has a non-zero principal part");
        }
        Ok(buf.split_off(slack))
    }

    /// `u` with `D - u = 0 (mod p)` and `D^(-1) = u^(-1) sum_(j<alpha) (-(D - u)/u)^j`.
    fn invert_d(&self) -> Result<YFraction> {
        let ring = self.ring;
        let p = ring.p() as i64;
        let mu = self.mu as u32;
        let a_big = BigInt::from(mu).pow(mu) * if mu.is_multiple_of(2) { 1 } else { -1 };
        let b_big = BigInt::from(mu - 1).pow(mu - 1);
        let (a, b) = (ring.reduce_big(&a_big), ring.reduce_big(&b_big));
        let d = LaurentPoly::from_raw(ring, 0, {
            let mut v = vec![0u64; p as usize];
            v[0] = b;
            v[p as usize - 1] = ring.add(v[p as usize - 1], a);
            v
        });
        let pbig = BigInt::from(p);
        let (a_unit, b_unit) = (!(a_big.mod_floor(&pbig)).is_zero(), !(b_big.mod_floor(&pbig)).is_zero());
        let (u, u_inv) = match (a_unit, b_unit) {
            (false, true) => {
                let inv = ring.inv(b).expect("unit");
                (YFraction::constant(ring, b as i64), YFraction::constant(ring, inv as i64))
            }
            (true, false) => {
                let inv = ring.inv(a).expect("unit");
                (YFraction::monomial(ring, a as i64, p - 1), YFraction::monomial(ring, inv as i64, 1 - p))
            }
            (true, true) if !self.y.is_trivial() => {
                let inv = ring.inv(a).expect("unit");
                let u = YFraction::from_laurent(self.y.as_laurent().scale(a));
                (u, YFraction::canonicalize(LaurentPoly::constant(ring, inv as i64), 1, &self.y))
            }
            _ => return internal("D(z) is not a unit of R modulo p"),
        };
        let rest = YFraction::from_laurent(d.clone()).sub(&u, &self.y);
        if rest.p_valuation() < 1 && !rest.is_zero() {
            return internal("D(z) minus its unit part is not divisible by p");
        }
        let q = rest.mul(&u_inv, &self.y).neg();
        let mut term = YFraction::constant(ring, 1);
        let mut sum = YFraction::constant(ring, 1);
        for _ in 1..ring.alpha() {
            term = term.mul(&q, &self.y);
            sum = sum.add(&term, &self.y);
        }
        let inv = sum.mul(&u_inv, &self.y);
        let check = inv.mul_laurent(&d, &self.y);
        if check != YFraction::constant(ring, 1) {
            return internal("computed inverse of D(z) does not invert it");
        }
        Ok(inv)
    }
}

/// Number of negative z-exponents that can appear while expanding `a`.
fn series_slack(a: &PhiElement) -> usize {
    a.coeffs.iter().filter(|c| !c.is_zero()).map(|c| (-c.numerator().low()).max(0) as usize).max().unwrap_or(0)
}

/// `sum c_k w^k` with `w = 1/z` as a Laurent polynomial in z.
fn reverse_in_w(l: &LaurentPoly) -> LaurentPoly {
    if l.is_zero() {
        return l.clone();
    }
    let mut v: Vec<u64> = l.raw().to_vec();
    v.reverse();
    LaurentPoly::from_raw(l.ring(), -l.high(), v)
}

impl PhiElement {
    /// Multiplies every coefficient by `z^k`.
    pub fn mul_z(&self, k: i64) -> PhiElement {
        PhiElement { coeffs: self.coeffs.iter().map(|c| c.shift(k)).collect() }
    }
}

/// Exact integer helper for tests and reports: the value of `[z^n] Phi^m` as i64 when it fits.
pub fn phi_power_coefficient_i64(m: u64, n: u64, p: u64, big_n: u64) -> Option<i64> {
    let v = phi_power_coefficient(m, n, p, big_n);
    if v.abs() > BigInt::from(i64::MAX) {
        None
    } else {
        v.to_i64()
    }
}
