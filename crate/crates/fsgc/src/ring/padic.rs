use super::modular::PrimePower;

/// Factorials split as `n! = p^val(n) * unit(n)` with `unit(n)` reduced mod p^alpha.
#[derive(Clone, Debug)]
pub struct FactorialTable {
    ring: PrimePower,
    unit: Vec<u64>,
    val: Vec<u64>,
}

impl FactorialTable {
    pub fn new(ring: PrimePower, n_max: usize) -> Self {
        let mut t = FactorialTable { ring, unit: vec![1 % ring.modulus()], val: vec![0] };
        t.extend(n_max);
        t
    }

    pub fn len(&self) -> usize {
        self.unit.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unit.is_empty()
    }

    pub fn extend(&mut self, n_max: usize) {
        let p = self.ring.p();
        while self.unit.len() <= n_max {
            let n = self.unit.len() as u64;
            let (v, u) = split(n, p);
            let last = self.unit.len() - 1;
            self.unit.push(self.ring.mul(self.unit[last], u % self.ring.modulus()));
            self.val.push(self.val[last] + v as u64);
        }
    }

    /// `n!` as `p^val * unit`.
    pub fn factorial(&self, n: usize) -> PadicNum {
        assert!(n < self.unit.len(), "factorial table too short for {n}");
        PadicNum { val: self.val[n] as i64, unit: self.unit[n] }
    }

    /// `C(n, k) mod p^alpha`, zero outside `0 <= k <= n`.
    pub fn binomial(&self, n: i64, k: i64) -> u64 {
        if n < 0 || k < 0 || k > n {
            return 0;
        }
        let (n, k) = (n as usize, k as usize);
        assert!(n < self.unit.len(), "factorial table too short for {n}");
        let v = self.val[n] - self.val[k] - self.val[n - k];
        if v >= self.ring.alpha() as u64 {
            return 0;
        }
        let r = &self.ring;
        let den = r.mul(self.unit[k], self.unit[n - k]);
        let u = r.mul(self.unit[n], r.inv(den).expect("unit part"));
        r.mul(u, r.pow(r.p(), v))
    }
}

/// `n = p^v * u` with `p` not dividing `u`; `n` must be non-zero.
pub fn split(mut n: u64, p: u64) -> (u32, u64) {
    debug_assert!(n != 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    (v, n)
}

/// Non-zero p-adic number `±p^val * unit`, the unit known modulo p^alpha.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PadicNum {
    pub val: i64,
    pub unit: u64,
}

impl PadicNum {
    pub fn one(ring: &PrimePower) -> Self {
        PadicNum { val: 0, unit: 1 % ring.modulus() }
    }

    /// A non-zero integer.
    pub fn from_i64(ring: &PrimePower, n: i64) -> Self {
        assert!(n != 0, "p-adic zero is not tracked");
        let (v, u) = split(n.unsigned_abs(), ring.p());
        let mut unit = u % ring.modulus();
        if n < 0 {
            unit = ring.neg(unit);
        }
        PadicNum { val: v as i64, unit }
    }

    pub fn mul(&self, o: &Self, ring: &PrimePower) -> Self {
        PadicNum { val: self.val + o.val, unit: ring.mul(self.unit, o.unit) }
    }

    pub fn div(&self, o: &Self, ring: &PrimePower) -> Self {
        let inv = ring.inv(o.unit).expect("p-adic unit");
        PadicNum { val: self.val - o.val, unit: ring.mul(self.unit, inv) }
    }

    pub fn mul_i64(&self, n: i64, ring: &PrimePower) -> Self {
        self.mul(&Self::from_i64(ring, n), ring)
    }

    pub fn div_i64(&self, n: i64, ring: &PrimePower) -> Self {
        self.div(&Self::from_i64(ring, n), ring)
    }

    pub fn neg(&self, ring: &PrimePower) -> Self {
        PadicNum { val: self.val, unit: ring.neg(self.unit) }
    }

    /// The residue mod p^alpha; `None` when the number is not p-integral.
    pub fn residue(&self, ring: &PrimePower) -> Option<u64> {
        if self.val < 0 {
            return None;
        }
        if self.val >= ring.alpha() as i64 {
            return Some(0);
        }
        Some(ring.mul(self.unit, ring.pow(ring.p(), self.val as u64)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::modular::binomial;

    #[test]
    fn table_matches_exact_binomials() {
        let r = PrimePower::new(3, 4).unwrap();
        let t = FactorialTable::new(r, 120);
        for n in 0..120i64 {
            for k in 0..=n {
                assert_eq!(t.binomial(n, k), r.reduce_big(&binomial(n, k)), "C({n},{k})");
            }
        }
        assert_eq!(t.binomial(5, 7), 0);
    }

    #[test]
    fn padic_ratio_products() {
        let r = PrimePower::new(7, 3).unwrap();
        // 14 * 5 / 35 = 2
        let x = PadicNum::from_i64(&r, 14).mul_i64(5, &r).div_i64(35, &r);
        assert_eq!(x.residue(&r), Some(2));
        let y = PadicNum::one(&r).div_i64(7, &r);
        assert_eq!(y.residue(&r), None);
        assert_eq!(PadicNum::from_i64(&r, -343).residue(&r), Some(0));
    }
}
