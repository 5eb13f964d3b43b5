//! Coefficient extraction from a lifted representation: single values, closed forms per
//! residue class mod `p-1`, and the constant-coefficient recurrence.

pub mod closed;
pub mod ratpoly;
pub mod recurrence;

pub use closed::{closed_form, closed_form_with_mode, evaluate_closed_form, CongruenceForm, ConstantTerm, Mode, PhiTerm};
pub use ratpoly::RatPoly;
pub use recurrence::{derive_recurrence, recurrence_coefficients, run_recurrence, InhomogeneousPart, RecurrenceSpec};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::lift::LiftedRep;
use crate::phi::phi_power_coefficient_mod;
use crate::ring::modular::binomial;
use crate::ring::{FactorialTable, PrimePower};

/// One summand `c z^t Y^(-e) Phi^i` of the representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepTerm {
    pub i: usize,
    pub t: i64,
    pub e: u32,
    pub c: u64,
}

/// The non-zero summands, ordered by Phi-power then z-exponent.
pub fn rep_terms(rep: &LiftedRep) -> Vec<RepTerm> {
    let mut out = Vec::new();
    for (i, a) in rep.coeffs().iter().enumerate() {
        for (t, c) in a.numerator().terms() {
            if c != 0 {
                out.push(RepTerm { i, t, e: a.y_exponent(), c });
            }
        }
    }
    out
}

/// `[z^((p-1)k)] Y^(-e) = (-1)^e M^(e+k) C(e+k-1, k)` with `M = N + 1`.
pub fn y_weight_exact(e: u32, k: i64, m_base: u64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if e == 0 {
        return if k == 0 { BigInt::one() } else { BigInt::zero() };
    }
    let v = BigInt::from(m_base).pow(e + k as u32) * binomial(e as i64 + k - 1, k);
    if e % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Coefficient extraction mod `p^alpha` backed by a growing factorial table.
#[derive(Clone, Debug)]
pub struct Extractor {
    ring: PrimePower,
    n: u64,
    m_base: u64,
    terms: Vec<RepTerm>,
    table: FactorialTable,
}

impl Extractor {
    pub fn new(rep: &LiftedRep) -> Self {
        let ring = rep.ring();
        Extractor { ring, n: rep.n(), m_base: rep.n() + 1, terms: rep_terms(rep), table: FactorialTable::new(ring, 64) }
    }

    pub fn ring(&self) -> PrimePower {
        self.ring
    }

    pub fn terms(&self) -> &[RepTerm] {
        &self.terms
    }

    fn ensure(&mut self, lambda: u64) {
        let tmin = self.terms.iter().map(|t| t.t).min().unwrap_or(0).min(0);
        let top = (lambda as i64 - tmin) as usize;
        let emax = self.terms.iter().map(|t| t.e as usize).max().unwrap_or(0);
        let need = (self.n as usize * top).max(top + emax) + 1;
        if self.table.len() <= need {
            self.table.extend(need);
        }
    }

    /// `y_weight_exact` reduced mod `p^alpha`.
    pub fn y_weight(&mut self, e: u32, k: i64) -> u64 {
        let r = self.ring;
        if k < 0 {
            return 0;
        }
        if e == 0 {
            return (k == 0) as u64 % r.modulus();
        }
        let need = e as usize + k as usize;
        if self.table.len() <= need {
            self.table.extend(need);
        }
        let b = self.table.binomial(e as i64 + k - 1, k);
        let v = r.mul(r.pow(self.m_base % r.modulus(), e as u64 + k as u64), b);
        if e % 2 == 1 {
            r.neg(v)
        } else {
            v
        }
    }

    /// `[z^n] Phi^i mod p^alpha`.
    pub fn phi_coefficient(&mut self, i: usize, n: i64) -> u64 {
        if n < 0 {
            return 0;
        }
        self.ensure(n as u64);
        phi_power_coefficient_mod(&self.table, &self.ring, i as u64, n as u64, self.n)
    }

    /// `[z^lambda]` of one summand.
    pub fn term_coefficient(&mut self, term: &RepTerm, lambda: i64) -> u64 {
        let r = self.ring;
        let p1 = r.p() as i64 - 1;
        let rest = lambda - term.t;
        if term.i == 0 {
            if rest < 0 || rest % p1 != 0 {
                return 0;
            }
            return r.mul(term.c, self.y_weight(term.e, rest / p1));
        }
        if (rest - term.i as i64).rem_euclid(p1) != 0 {
            return 0;
        }
        let kmax = if term.e == 0 { 0 } else { (rest - term.i as i64).div_euclid(p1) };
        let mut acc = 0;
        for k in 0..=kmax {
            let n = rest - p1 * k;
            if n < term.i as i64 {
                break;
            }
            let y = self.y_weight(term.e, k);
            if y == 0 {
                continue;
            }
            let ph = self.phi_coefficient(term.i, n);
            acc = r.add(acc, r.mul(y, ph));
        }
        r.mul(term.c, acc)
    }

    /// `f_lambda mod p^alpha`.
    pub fn coefficient(&mut self, lambda: u64) -> u64 {
        self.ensure(lambda);
        let terms = self.terms.clone();
        let mut acc = 0;
        for t in &terms {
            let v = self.term_coefficient(t, lambda as i64);
            acc = self.ring.add(acc, v);
        }
        acc
    }

    /// The contribution of the `Phi^0` coefficient alone.
    pub fn constant_part(&mut self, lambda: u64) -> u64 {
        let terms: Vec<RepTerm> = self.terms.iter().filter(|t| t.i == 0).copied().collect();
        let mut acc = 0;
        for t in &terms {
            let v = self.term_coefficient(t, lambda as i64);
            acc = self.ring.add(acc, v);
        }
        acc
    }
}

/// `f_lambda mod p^alpha` read off the representation.
pub fn coefficient_at(rep: &LiftedRep, lambda: u64) -> Result<u64> {
    if lambda == 0 {
        return invalid("lambda must be positive");
    }
    Ok(Extractor::new(rep).coefficient(lambda))
}

/// `f_from, ..., f_to mod p^alpha` sharing one factorial table.
pub fn coefficients(rep: &LiftedRep, from: u64, to: u64) -> Result<Vec<u64>> {
    if from == 0 {
        return invalid("lambda must be positive");
    }
    let mut ex = Extractor::new(rep);
    ex.ensure(to);
    Ok((from..=to).map(|l| ex.coefficient(l)).collect())
}
