//! Constant-coefficient recurrence for the binomial-sum part of a closed form.
//!
//! With `S(L) = sum_x value(x, L)` and every summand of the shape `M^(L-x) A(x, L) f(x)`,
//! `A` of degree `d` in `L`, the operator `(E - M)^(d+1)` kills the bulk of the sum and leaves
//! finitely many boundary summands, each a hypergeometric term in `L`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::closed::{CongruenceForm, Mode, PhiTerm};
use crate::error::{invalid, Result};
use crate::phi::phi_power_coefficient_mod;
use crate::ring::modular::binomial;
use crate::ring::{FactorialTable, PrimePower};

/// `weight * value(L + x_shift, L + l_shift)` for one Phi-term of the form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InhomogeneousPart {
    pub term: usize,
    pub x_shift: i64,
    pub l_shift: i64,
    pub weight: BigInt,
}

#[derive(Clone, Debug)]
pub struct RecurrenceSpec {
    pub form: CongruenceForm,
    pub d: usize,
    pub m_base: u64,
    /// Coefficients of `S(L+d+1), S(L+d), ..., S(L)`.
    pub weights: Vec<BigInt>,
    pub inhomogeneity: Vec<InhomogeneousPart>,
    pub start: i64,
    /// `S(start), ..., S(start + d)` mod `p^alpha`.
    pub initial: Vec<u64>,
}

/// `(E - M)^(d+1) S = g` for a binomial-sum form.
pub fn derive_recurrence(form: &CongruenceForm) -> Result<RecurrenceSpec> {
    if form.mode != Mode::BinomialSum {
        return invalid("a recurrence is derived only for binomial-sum forms");
    }
    let d = form.terms.iter().filter(|t| t.e >= 1).map(|t| t.e as usize - 1).max().unwrap_or(0);
    let m = BigInt::from(form.m_base);
    let order = d + 1;
    // (E - M)^(d+1) = sum_j C(d+1, j) (-M)^(d+1-j) E^j
    let coeff = |j: usize| -> BigInt { binomial(order as i64, j as i64) * (-&m).pow((order - j) as u32) };
    let weights = (0..=order).rev().map(coeff).collect();
    let mut inhomogeneity = Vec::new();
    for (idx, term) in form.terms.iter().enumerate() {
        if term.e >= 1 {
            for j in 1..=order {
                for xs in 1..=j as i64 {
                    inhomogeneity.push(InhomogeneousPart { term: idx, x_shift: xs, l_shift: j as i64, weight: coeff(j) });
                }
            }
        } else {
            for j in 0..=order {
                inhomogeneity.push(InhomogeneousPart { term: idx, x_shift: j as i64, l_shift: j as i64, weight: coeff(j) });
            }
        }
    }
    let ring = form.ring();
    let start = 0;
    let initial = (start..=start + d as i64)
        .map(|l| {
            let v = form.sum_value(l);
            ring.reduce_ratio(v.numer(), v.denom()).expect("p-integral sum")
        })
        .collect();
    Ok(RecurrenceSpec { form: form.clone(), d, m_base: form.m_base, weights, inhomogeneity, start, initial })
}

impl RecurrenceSpec {
    pub fn order(&self) -> usize {
        self.d + 1
    }

    pub fn weights_i64(&self) -> Vec<i64> {
        self.weights.iter().map(|w| i64::try_from(w).expect("small weight")).collect()
    }

    pub fn part_value_exact(&self, part: &InhomogeneousPart, l: i64) -> BigRational {
        let term = &self.form.terms[part.term];
        self.form.term_value(term, l + part.x_shift, l + part.l_shift) * BigRational::from_integer(part.weight.clone())
    }

    /// `g(L)` summed exactly.
    pub fn inhomogeneity_exact(&self, l: i64) -> BigRational {
        self.inhomogeneity.iter().map(|p| self.part_value_exact(p, l)).fold(BigRational::zero(), |a, b| a + b)
    }

    /// The weights applied to directly summed `S` values.
    pub fn apply_weights_exact(&self, l: i64) -> BigRational {
        let order = self.order() as i64;
        self.weights
            .iter()
            .enumerate()
            .map(|(i, w)| self.form.sum_value(l + order - i as i64) * BigRational::from_integer(w.clone()))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// `part(L+1)/part(L)` from the binomial shape of `[z^n] Phi^i`; `None` where the part vanishes.
    pub fn part_ratio(&self, part: &InhomogeneousPart, l: i64) -> Option<BigRational> {
        let form = &self.form;
        let term = &form.terms[part.term];
        let x = l + part.x_shift;
        let p1 = form.p as i64 - 1;
        let n = p1 * x + form.r as i64 - term.t;
        let i = term.i as i64;
        if n < i || n <= 0 || (n - i) % p1 != 0 {
            return None;
        }
        let k = (n - i) / p1;
        let a = form.n as i64 * n;
        let mu = form.mu as i64;
        let mut num = BigInt::from(n);
        let mut den = BigInt::from(n + p1) * (k + 1);
        for j in 1..=mu {
            num *= a + j;
        }
        for j in 1..mu {
            den *= a - k + j;
        }
        if (mu - 1) % 2 == 1 {
            num = -num;
        }
        Some(BigRational::new(num, den))
    }

    /// Iterates mod `p^alpha` and returns `S(start), ..., S(l_end)`.
    pub fn run(&self, l_end: i64) -> Vec<u64> {
        let mut ev = ModEvaluator::new(&self.form, l_end + self.order() as i64);
        let ring = ev.ring;
        let order = self.order();
        let w: Vec<u64> = self.weights.iter().map(|x| ring.reduce_big(x)).collect();
        let pw: Vec<u64> = self.inhomogeneity.iter().map(|p| ring.reduce_big(&p.weight)).collect();
        let mut s = self.initial.clone();
        let mut l = self.start;
        while (s.len() as i64) < l_end - self.start + 1 {
            let mut g = 0;
            for (part, &wt) in self.inhomogeneity.iter().zip(&pw) {
                let term = &self.form.terms[part.term];
                let v = ev.term_value(term, l + part.x_shift, l + part.l_shift);
                g = ring.add(g, ring.mul(wt, v));
            }
            let base = s.len() - order;
            for (j, &wj) in w.iter().enumerate().skip(1) {
                g = ring.sub(g, ring.mul(wj, s[base + order - j]));
            }
            s.push(g);
            l += 1;
        }
        s.truncate((l_end - self.start + 1).max(0) as usize);
        s
    }
}

/// `S(start..=l_end)` mod `p^alpha`.
pub fn run_recurrence(spec: &RecurrenceSpec, l_end: i64) -> Vec<u64> {
    spec.run(l_end)
}

/// `f_((p-1)L + r)` for `L = 0..=l_end` via the recurrence; entry 0 is meaningless when `r = 0`.
pub fn recurrence_coefficients(spec: &RecurrenceSpec, l_end: i64) -> Vec<u64> {
    let s = spec.run(l_end);
    let ring = spec.form.ring();
    let mut ev = ModEvaluator::new(&spec.form, l_end);
    (0..=l_end).map(|l| ring.add(ev.constant_value(l), s[(l - spec.start) as usize])).collect()
}

/// Mod-`p^alpha` evaluation of form summands from one factorial table.
struct ModEvaluator<'a> {
    form: &'a CongruenceForm,
    ring: PrimePower,
    table: FactorialTable,
}

impl<'a> ModEvaluator<'a> {
    fn new(form: &'a CongruenceForm, l_max: i64) -> Self {
        let ring = form.ring();
        let emax = form.terms.iter().map(|t| t.e).chain(form.constant_terms.iter().map(|c| c.e)).max().unwrap_or(0) as i64;
        let tmin = form.terms.iter().map(|t| t.t).min().unwrap_or(0).min(0);
        let top = (form.p as i64 - 1) * (l_max + 2) + form.r as i64 - tmin;
        let need = (form.n as i64 * top).max(l_max + emax + 2).max(0) as usize + 1;
        ModEvaluator { form, ring, table: FactorialTable::new(ring, need) }
    }

    fn y_weight(&mut self, e: u32, k: i64) -> u64 {
        let r = self.ring;
        if k < 0 {
            return 0;
        }
        if e == 0 {
            return (k == 0) as u64 % r.modulus();
        }
        if self.table.len() <= e as usize + k as usize {
            self.table.extend(e as usize + k as usize);
        }
        let v = r.mul(r.pow(self.form.m_base % r.modulus(), e as u64 + k as u64), self.table.binomial(e as i64 + k - 1, k));
        if e % 2 == 1 {
            r.neg(v)
        } else {
            v
        }
    }

    fn term_value(&mut self, term: &PhiTerm, x: i64, l: i64) -> u64 {
        let y = self.y_weight(term.e, l - x);
        if y == 0 {
            return 0;
        }
        let n = (self.form.p as i64 - 1) * x + self.form.r as i64 - term.t;
        if n < term.i as i64 || n <= 0 {
            return 0;
        }
        if self.table.len() <= self.form.n as usize * n as usize {
            self.table.extend(self.form.n as usize * n as usize);
        }
        let ph = phi_power_coefficient_mod(&self.table, &self.ring, term.i as u64, n as u64, self.form.n);
        let r = self.ring;
        r.mul(r.mul(term.c, y), ph)
    }

    fn constant_value(&mut self, l: i64) -> u64 {
        let p1 = self.form.p as i64 - 1;
        let r = self.ring;
        let mut acc = 0;
        for c in self.form.constant_terms.clone() {
            let k = l + (self.form.r as i64 - c.t) / p1;
            acc = r.add(acc, r.mul(c.c, self.y_weight(c.e, k)));
        }
        acc
    }
}

/// `g(L) / C(mu L + N r, L)`, exact; a rational function of `L` since every part is a
/// rational multiple of a shift of the reference binomial.
pub fn normalized_inhomogeneity(spec: &RecurrenceSpec, l: i64) -> BigRational {
    let b = spec.form.reference_binomial(l);
    if b.is_zero() {
        return BigRational::zero();
    }
    spec.inhomogeneity_exact(l) / BigRational::from_integer(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::{closed_form, coefficients};
    use crate::group::compute_type;
    use crate::io::parse_order_graph;
    use crate::lift::{lift_group, LiftedRep};

    fn hecke7() -> LiftedRep {
        lift_group(&compute_type(&parse_order_graph(include_str!("../../fixtures/hecke7.json")).unwrap()), 7, 3).unwrap()
    }

    #[test]
    fn hecke7_weights_and_values() {
        let rep = hecke7();
        let form = closed_form(&rep, 0).unwrap();
        let spec = derive_recurrence(&form).unwrap();
        assert_eq!(spec.weights_i64(), [1, -6, 12, -8]);
        assert_eq!(spec.m_base, 2);
        let f = recurrence_coefficients(&spec, 50);
        let want = coefficients(&rep, 1, 300).unwrap();
        for l in 1..=50 {
            assert_eq!(f[l], want[6 * l - 1], "L={l}");
        }
    }

    #[test]
    fn weights_isolate_inhomogeneity() {
        let rep = hecke7();
        for r in [0, 1, 5] {
            let spec = derive_recurrence(&closed_form(&rep, r).unwrap()).unwrap();
            for l in 0..=20 {
                assert_eq!(spec.apply_weights_exact(l), spec.inhomogeneity_exact(l), "r={r} L={l}");
                for part in &spec.inhomogeneity {
                    let (a, b) = (spec.part_value_exact(part, l), spec.part_value_exact(part, l + 1));
                    if let Some(q) = spec.part_ratio(part, l) {
                        if !a.is_zero() {
                            assert_eq!(b, a * q);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_single_binomial_form() {
        let rep = lift_group(&compute_type(&parse_order_graph(include_str!("../../fixtures/gamma1.json")).unwrap()), 3, 4).unwrap();
        assert_eq!(derive_recurrence(&closed_form(&rep, 1).unwrap()).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn hecke7_constant_part() {
        let rep = hecke7();
        let ring = rep.ring();
        let form = closed_form(&rep, 0).unwrap();
        for l in 1..=20i64 {
            let want = BigRational::new(BigInt::from(7 * (49 * l * l - 7 * l + 4)) * BigInt::from(2).pow(l as u32), BigInt::from(4));
            let want = ring.reduce_ratio(want.numer(), want.denom()).unwrap();
            let got = form.constant_value(l);
            assert_eq!(ring.reduce_ratio(got.numer(), got.denom()).unwrap(), want, "L={l}");
            let poly = form.constant_polynomial().eval_i64(l) * BigRational::from_integer(BigInt::from(2).pow(l as u32));
            assert_eq!(ring.reduce_ratio(poly.numer(), poly.denom()).unwrap(), want, "L={l}");
        }
    }
}
