//! The polynomial differential equation satisfied by `F(z) = m z G'(z)/G(z)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::oracle::ThetaCoeffs;
use crate::ring::modular::{binomial, PrimePower};
use crate::ring::series::TruncatedSeries;

/// `prod_j (F^(j))^e_j`, stored as exponents indexed by derivative order with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DerivMonomial(Vec<u32>);

impl DerivMonomial {
    pub fn one() -> Self {
        DerivMonomial(Vec::new())
    }

    /// `(F^(j))^e`.
    pub fn power(j: usize, e: u32) -> Self {
        let mut v = vec![0; j + 1];
        v[j] = e;
        DerivMonomial(v).trimmed()
    }

    pub fn from_exponents(v: Vec<u32>) -> Self {
        DerivMonomial(v).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, j: usize) -> u32 {
        self.0.get(j).copied().unwrap_or(0)
    }

    /// Total degree in F and its derivatives.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Highest derivative present (`None` for the empty product).
    pub fn order(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// `sum_j j e_j`; the z-weight of a term.
    pub fn weight(&self) -> u32 {
        self.0.iter().enumerate().map(|(j, &e)| j as u32 * e).sum()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        DerivMonomial((0..n).map(|j| self.exponent(j) + o.exponent(j)).collect())
    }

    /// Product rule: `d/dz` as a list of `(multiplicity, monomial)`.
    pub fn derivative(&self) -> Vec<(u32, DerivMonomial)> {
        let mut out = Vec::new();
        for (j, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mut v = self.0.clone();
            v[j] -= 1;
            if v.len() <= j + 1 {
                v.resize(j + 2, 0);
            }
            v[j + 1] += 1;
            out.push((e, DerivMonomial(v).trimmed()));
        }
        out
    }
}

/// `sum c * z^a * monomial = 0` with integer coefficients (or residues stored as integers).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NonlinearODE {
    terms: BTreeMap<(DerivMonomial, i64), BigInt>,
}

impl NonlinearODE {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, c: impl Into<BigInt>, z_power: i64, mono: DerivMonomial) {
        let c = c.into();
        if c.is_zero() {
            return;
        }
        let key = (mono, z_power);
        let v = self.terms.entry(key.clone()).or_insert_with(BigInt::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DerivMonomial, i64, &BigInt)> {
        self.terms.iter().map(|((m, a), c)| (m, *a, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &DerivMonomial, z_power: i64) -> BigInt {
        self.terms.get(&(mono.clone(), z_power)).cloned().unwrap_or_default()
    }

    /// Highest derivative order appearing.
    pub fn order(&self) -> usize {
        self.terms.keys().filter_map(|(m, _)| m.order()).max().unwrap_or(0)
    }

    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |a, c| a.gcd(c))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, a, c) in o.terms() {
            r.add_term(c.clone(), a, m.clone());
        }
        r
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut r = Self::new();
        for (m, a, c) in self.terms() {
            r.add_term(c * k, a, m.clone());
        }
        r
    }

    pub fn shift(&self, k: i64) -> Self {
        NonlinearODE { terms: self.terms.iter().map(|((m, a), c)| ((m.clone(), a + k), c.clone())).collect() }
    }

    /// Coefficients reduced to `[0, modulus)`, zero terms dropped.
    pub fn reduce(&self, modulus: &BigInt) -> Self {
        let mut r = Self::new();
        for (m, a, c) in self.terms() {
            r.add_term(c.mod_floor(modulus), a, m.clone());
        }
        r
    }

    /// Divides all coefficients by their content, making the first coefficient positive.
    pub fn primitive(&self) -> Self {
        let g = self.content();
        if g.is_zero() {
            return self.clone();
        }
        let g = if self.terms.values().next().is_some_and(|c| c.is_negative()) { -g } else { g };
        NonlinearODE { terms: self.terms.iter().map(|(k, c)| (k.clone(), c / &g)).collect() }
    }

    /// Terms in display order: descending total F-degree, then descending derivative order,
    /// then descending z-power.
    pub fn sorted_terms(&self) -> Vec<(&DerivMonomial, i64, &BigInt)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|x, y| {
            (y.0.degree(), y.0.order(), y.0, y.1).cmp(&(x.0.degree(), x.0.order(), x.0, x.1))
        });
        v
    }

    /// `E(F)` for a series `F`, using `conv` to map coefficients into the scalar domain.
    ///
    /// The result is multiplied by `z^s` where `s = max(0, -min z-power)`; only the first
    /// `T - order` coefficients are meaningful for an input of order `T`.
    pub fn residual<T: crate::ring::Scalar>(&self, f: &TruncatedSeries<T>, conv: impl Fn(&BigInt) -> T) -> Result<TruncatedSeries<T>> {
        let order = f.order();
        let sample = f.coeff(0).clone();
        let mut derivs = vec![f.clone()];
        for j in 1..=self.order() {
            let mut d = derivs[j - 1].derivative();
            d = TruncatedSeries::from_coeffs(d.into_coeffs(), order, &sample);
            derivs.push(d);
        }
        let mut powers: BTreeMap<(usize, u32), TruncatedSeries<T>> = BTreeMap::new();
        let s = -self.terms.keys().map(|(_, a)| *a).min().unwrap_or(0).min(0);
        let mut acc = TruncatedSeries::zeros(order, &sample);
        for (m, a, c) in self.terms() {
            let mut t = TruncatedSeries::constant(conv(c), order);
            for (j, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if let std::collections::btree_map::Entry::Vacant(slot) = powers.entry((j, e)) {
                    slot.insert(derivs[j].pow(e)?);
                }
                t = t.mul(&powers[&(j, e)])?;
            }
            acc = acc.add(&t.shift((a + s) as usize))?;
        }
        Ok(acc)
    }
}

fn fmt_monomial(m: &DerivMonomial, out: &mut Vec<String>) {
    for (j, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        let d = match j {
            0 => String::from("F"),
            1 => String::from("F'"),
            2 => String::from("F''"),
            _ => format!("F^{{({j})}}"),
        };
        match (j, e) {
            (_, 1) => out.push(format!("{d}(z)")),
            (0, _) => out.push(format!("F^{{{e}}}(z)")),
            _ => out.push(format!("({d}(z))^{{{e}}}")),
        }
    }
}

impl fmt::Display for NonlinearODE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0 = 0");
        }
        for (i, (m, a, c)) in terms.into_iter().enumerate() {
            let mut parts = Vec::new();
            let mag = c.abs();
            let bare = m.degree() > 0 || a != 0;
            if !(bare && mag.is_one()) {
                parts.push(mag.to_string());
            }
            match a {
                0 => {}
                1 => parts.push("z".into()),
                _ => parts.push(format!("z^{{{a}}}")),
            }
            fmt_monomial(m, &mut parts);
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            write!(f, "{}", parts.join(" "))?;
        }
        write!(f, " = 0")
    }
}

/// Substitutes `G'/G = F/(mz)` into `sum theta_j z^j G^(j) - m G' = 0`, clears denominators by
/// `m^mu z` and returns the primitive part.
///
/// With `s_j = (mz)^j G^(j)/G`: `s_0 = 1`, `s_(j+1) = m z s_j' - j m s_j + F s_j`, and the
/// equation reads `sum_j theta_j m^(mu-j) z s_j - m^mu s_1 = 0`.
pub fn derive_f_equation(th: &ThetaCoeffs) -> NonlinearODE {
    let m = BigInt::from(th.m);
    let mu = th.mu;
    let mut s: Vec<NonlinearODE> = Vec::with_capacity(mu + 1);
    let mut s0 = NonlinearODE::new();
    s0.add_term(1, 0, DerivMonomial::one());
    s.push(s0);
    for j in 0..mu {
        let mut next = NonlinearODE::new();
        for (mono, a, c) in s[j].terms() {
            // m z d/dz (c z^a mono)
            next.add_term(&m * c * a, a, mono.clone());
            for (k, dm) in mono.derivative() {
                next.add_term(&m * c * k, a + 1, dm);
            }
            next.add_term(-(&m * c * j), a, mono.clone());
            next.add_term(c.clone(), a, mono.mul(&DerivMonomial::power(0, 1)));
        }
        s.push(next);
    }
    let mut eq = NonlinearODE::new();
    for (j, sj) in s.iter().enumerate() {
        let k = &th.theta[j] * m.pow((mu - j) as u32);
        for (mono, a, c) in sj.terms() {
            eq.add_term(c * &k, a + 1, mono.clone());
        }
    }
    for (mono, a, c) in s[1].terms() {
        eq.add_term(-(c * m.pow(mu as u32)), a, mono.clone());
    }
    eq.primitive()
}

/// Coefficients reduced mod `p^alpha`.
pub fn reduce_equation(e: &NonlinearODE, pp: &PrimePower) -> NonlinearODE {
    e.reduce(&BigInt::from(pp.modulus()))
}

/// `F - z (F^(p-1) - 1)^N`.
pub fn base_shape(p: u64, n: u64) -> NonlinearODE {
    let mut e = NonlinearODE::new();
    e.add_term(1, 0, DerivMonomial::power(0, 1));
    for k in 0..=n {
        let sign = if (n - k).is_multiple_of(2) { -1 } else { 1 };
        e.add_term(binomial(n as i64, k as i64) * sign, 1, DerivMonomial::power(0, ((p - 1) * k) as u32));
    }
    e
}

/// The equation rescaled to `F - z (F^(p-1) - 1)^N - pP = 0 (mod p^alpha)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedEq {
    pub ring: PrimePower,
    pub n: u64,
    /// The rescaled equation, coefficients in `[0, p^alpha)`.
    pub full: NonlinearODE,
    /// `pP`: every coefficient divisible by p.
    pub p_part: NonlinearODE,
    /// The unit `c` and shift `k` with `e = c z^k (F - z(F^(p-1)-1)^N) mod p`.
    pub unit: u64,
    pub shift: i64,
}

/// Finds `c z^k` with `e = c z^k (F - z(F^(p-1) - 1)^N) (mod p)` and divides it out mod `p^alpha`.
pub fn normalize_equation(e: &NonlinearODE, pp: &PrimePower, n: u64) -> Result<NormalizedEq> {
    let p = BigInt::from(pp.p());
    let modulus = BigInt::from(pp.modulus());
    let modp = e.reduce(&p);
    let f1 = DerivMonomial::power(0, 1);
    let hits: Vec<(i64, &BigInt)> = modp.terms().filter(|(m, _, _)| **m == f1).map(|(_, a, c)| (a, c)).collect();
    let Some(&(k, c)) = hits.first() else {
        return Err(Error::Hypothesis(format!("equation has no unit multiple of F modulo {}", pp.p())));
    };
    let shape = base_shape(pp.p(), n);
    let target = shape.shift(k).scale(c).reduce(&p);
    let diff = modp.add(&target.scale(&BigInt::from(-1))).reduce(&p);
    if !diff.is_empty() {
        let listed: Vec<String> = diff
            .sorted_terms()
            .iter()
            .take(6)
            .map(|(m, a, c)| {
                let mut one = NonlinearODE::new();
                one.add_term((*c).clone(), *a, (*m).clone());
                one.to_string().trim_end_matches(" = 0").to_string()
            })
            .collect();
        return Err(Error::Hypothesis(format!(
            "equation modulo {} is not a unit multiple of F - z(F^{} - 1)^{}; residual terms: {}",
            pp.p(),
            pp.p() - 1,
            n,
            listed.join(", ")
        )));
    }
    let cu = c.to_u64().expect("residue mod p fits");
    let cinv = pp.inv(cu).expect("nonzero residue mod p is a unit");
    let full = e.scale(&BigInt::from(cinv)).shift(-k).reduce(&modulus);
    let p_part = shape.add(&full.scale(&BigInt::from(-1))).reduce(&modulus);
    if p_part.terms().any(|(_, _, c)| !(c % &p).is_zero()) {
        return Err(Error::Internal("normalized remainder is not divisible by p".into()));
    }
    Ok(NormalizedEq { ring: *pp, n, full, p_part, unit: cu, shift: k })
}

/// The unit `u` of `Z/p^alpha` with `a = u * b (mod p^alpha)`, if one exists.
pub fn unit_multiple(a: &NonlinearODE, b: &NonlinearODE, pp: &PrimePower) -> Option<u64> {
    let modulus = BigInt::from(pp.modulus());
    let (a, b) = (a.reduce(&modulus), b.reduce(&modulus));
    let (m, z, cb) = b.terms().find(|(_, _, c)| pp.is_unit(c.to_u64().unwrap()))?;
    let cb = cb.to_u64().unwrap();
    let ca = a.coeff(m, z).to_u64().unwrap();
    let u = pp.mul(ca, pp.inv(cb)?);
    if !pp.is_unit(u) {
        return None;
    }
    (b.scale(&BigInt::from(u)).reduce(&modulus) == a).then_some(u)
}

/// Parses equations written as `c z^a F^e(z) F'(z) (F''(z))^2 F^{(3)}(z) + ... = 0`,
/// tolerating TeX spacing commands, `\big(`/`\big)` and line breaks.
pub fn parse_equation(text: &str) -> Result<NonlinearODE> {
    let mut s = text.to_string();
    for pat in ["\\big(", "\\big)", "\\left(", "\\right)"] {
        let rep = if pat.ends_with('(') { "(" } else { ")" };
        s = s.replace(pat, rep);
    }
    for pat in ["\\\\", "\\quad", "\\,", "\\!", "\\;", "&"] {
        s = s.replace(pat, " ");
    }
    let s = match s.find('=') {
        Some(i) => {
            let rhs = s[i + 1..].trim();
            if rhs != "0" && !rhs.starts_with("0 ") && !rhs.starts_with("0.") {
                return invalid(format!("right-hand side must be 0, got {rhs:?}"));
            }
            s[..i].to_string()
        }
        None => s,
    };
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser { c: &chars, i: 0 };
    let mut eq = NonlinearODE::new();
    while p.i < chars.len() {
        let (c, a, m) = p.term()?;
        eq.add_term(c, a, m);
    }
    Ok(eq)
}

struct Parser<'a> {
    c: &'a [char],
    i: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.c.get(self.i).copied()
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        for ch in lit.chars() {
            if !self.eat(ch) {
                return invalid(format!("expected {lit:?} at position {}", self.i));
            }
        }
        Ok(())
    }

    fn int(&mut self) -> Option<BigInt> {
        let start = self.i;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        if start == self.i {
            return None;
        }
        self.c[start..self.i].iter().collect::<String>().parse().ok()
    }

    /// `^k` or `^{k}`.
    fn exponent(&mut self) -> Result<u32> {
        if !self.eat('^') {
            return Ok(1);
        }
        let braced = self.eat('{');
        let v = self.int().ok_or_else(|| Error::InvalidInput(format!("missing exponent at {}", self.i)))?;
        if braced {
            self.expect("}")?;
        }
        v.to_u32().ok_or_else(|| Error::InvalidInput("exponent too large".into()))
    }

    /// `F`, `F'`, `F''`, `F^{(k)}` or `F^e` followed by `(z)` and an optional `^e`.
    fn f_factor(&mut self) -> Result<DerivMonomial> {
        self.expect("F")?;
        let mut j = 0usize;
        let mut e = 1u32;
        while self.eat('\'') {
            j += 1;
        }
        if j == 0 && self.peek() == Some('^') {
            if self.c.get(self.i + 1) == Some(&'{') && self.c.get(self.i + 2) == Some(&'(') {
                self.i += 3;
                j = self.int().and_then(|v| v.to_usize()).ok_or_else(|| Error::InvalidInput("bad derivative order".into()))?;
                self.expect(")}")?;
            } else {
                e = self.exponent()?;
            }
        }
        self.expect("(z)")?;
        if self.peek() == Some('^') {
            e *= self.exponent()?;
        }
        Ok(DerivMonomial::power(j, e))
    }

    fn term(&mut self) -> Result<(BigInt, i64, DerivMonomial)> {
        let mut sign = BigInt::one();
        if self.eat('-') {
            sign = -sign;
        } else {
            self.eat('+');
        }
        let mut c = self.int().unwrap_or_else(BigInt::one);
        self.eat('*');
        let mut a = 0i64;
        let mut m = DerivMonomial::one();
        loop {
            match self.peek() {
                Some('z') => {
                    self.i += 1;
                    a += self.exponent()? as i64;
                }
                Some('F') => m = m.mul(&self.f_factor()?),
                Some('(') => {
                    self.i += 1;
                    let inner = self.f_factor()?;
                    self.expect(")")?;
                    let e = self.exponent()?;
                    let mut v = DerivMonomial::one();
                    for _ in 0..e {
                        v = v.mul(&inner);
                    }
                    m = m.mul(&v);
                }
                Some('*') => self.i += 1,
                Some('+') | Some('-') | None => break,
                Some(ch) if ch.is_ascii_digit() => c *= self.int().expect("digits"),
                Some(ch) => return invalid(format!("unexpected character {ch:?} at position {}", self.i)),
            }
        }
        Ok((c * sign, a, m))
    }
}
