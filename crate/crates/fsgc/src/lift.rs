//! Lifting `F = Phi (mod p)` to a polynomial in Phi solving the functional equation mod `p^alpha`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{internal, Error, Result};
use crate::group::GroupType;
use crate::ode::{derive_f_equation, normalize_equation, DerivMonomial, NonlinearODE, NormalizedEq};
use crate::oracle::{f_direct, theta_coeffs};
use crate::phi::{PhiAlgebra, PhiElement};
use crate::ring::{LaurentPoly, ModScalar, PrimePower, TruncatedSeries, YFraction};

/// Default bound on `|exponent|` of z in any coefficient during lifting.
pub const DEFAULT_EXPONENT_CAP: i64 = 10_000;

/// Largest `lambda` compared against the exact oracle during verification.
pub const ORACLE_CHECK_BOUND: usize = 256;

/// `max(256, 8 mu alpha)`.
pub fn default_truncation(mu: usize, alpha: u32) -> usize {
    256.max(8 * mu * alpha as usize)
}

/// `FSGC_TRUNCATION` if set, else the default.
pub fn truncation_from_env(mu: usize, alpha: u32) -> Result<usize> {
    match std::env::var("FSGC_TRUNCATION") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(t),
            _ => Err(Error::InvalidInput(format!("FSGC_TRUNCATION = {v:?} is not a positive integer"))),
        },
        Err(_) => Ok(default_truncation(mu, alpha)),
    }
}

/// `F_alpha = sum_i a_i Phi^i` together with the data needed to reuse it.
#[derive(Clone, Debug)]
pub struct LiftedRep {
    pub m: u64,
    pub algebra: PhiAlgebra,
    pub f: PhiElement,
    /// FNV-1a hash of the normalized equation's text form.
    pub equation_hash: Option<String>,
    /// Truncation order used by the last successful verification.
    pub truncation: Option<usize>,
}

impl LiftedRep {
    pub fn ring(&self) -> PrimePower {
        self.algebra.ring()
    }

    pub fn p(&self) -> u64 {
        self.algebra.p()
    }

    pub fn n(&self) -> u64 {
        self.algebra.n()
    }

    pub fn mu(&self) -> usize {
        self.algebra.mu()
    }

    /// Coefficients of `Phi^0, ..., Phi^(mu-1)`.
    pub fn coeffs(&self) -> &[YFraction] {
        self.f.coeffs()
    }

    /// Power series of F to `order` terms; coefficient `lambda` is `f_lambda mod p^alpha`.
    pub fn to_series(&self, order: usize) -> Result<Vec<u64>> {
        self.algebra.to_series(&self.f, order)
    }

    /// The Phi^1 coefficient is 1 and all others vanish mod p.
    pub fn check_mod_p_shape(&self) -> bool {
        let ring = self.ring();
        self.coeffs().iter().enumerate().all(|(i, c)| {
            let want = YFraction::constant(ring, (i == 1) as i64);
            let d = c.sub(&want, self.algebra.y());
            d.is_zero() || d.p_valuation() >= 1
        })
    }
}

pub fn fnv1a(text: &str) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in text.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

/// Evaluates `sum c z^a prod_j (F^(j))^e_j` at an element of the algebra.
pub fn evaluate_equation(alg: &PhiAlgebra, eq: &NonlinearODE, f: &PhiElement) -> PhiElement {
    let ring = alg.ring();
    let modulus = BigInt::from(ring.modulus());
    let mut grouped: BTreeMap<DerivMonomial, LaurentPoly> = BTreeMap::new();
    for (mono, a, c) in eq.terms() {
        let c = c.mod_floor(&modulus).to_u64().expect("reduced");
        if c == 0 {
            continue;
        }
        let t = LaurentPoly::monomial(ring, 1, a).scale(c);
        let slot = grouped.entry(mono.clone()).or_insert_with(|| LaurentPoly::zero(ring));
        *slot = slot.add(&t);
    }
    let mut derivs = vec![f.clone()];
    for _ in 0..eq.order() {
        let next = alg.differentiate(derivs.last().unwrap());
        derivs.push(next);
    }
    let mut powers: HashMap<(usize, u32), PhiElement> = HashMap::new();
    let mut total = alg.zero();
    for (mono, c) in grouped {
        if c.is_zero() {
            continue;
        }
        let mut prod = alg.constant(YFraction::canonicalize(c, 0, alg.y()));
        for (j, &e) in mono.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let pw = powers.entry((j, e)).or_insert_with(|| alg.pow(&derivs[j], e)).clone();
            prod = alg.mul(&prod, &pw);
        }
        total = alg.add(&total, &prod);
    }
    total
}

/// Runs the lifting loop on a normalized equation.
pub fn lift(ne: &NormalizedEq, m: u64) -> Result<LiftedRep> {
    lift_with_cap(ne, m, DEFAULT_EXPONENT_CAP)
}

pub fn lift_with_cap(ne: &NormalizedEq, m: u64, cap: i64) -> Result<LiftedRep> {
    let ring = ne.ring;
    let alg = PhiAlgebra::new(ring, ne.n).map_err(|e| match e {
        Error::InvalidInput(s) => Error::Hypothesis(s),
        other => other,
    })?;
    let mut f = alg.phi_power(1);
    for beta in 1..ring.alpha() {
        let rho = evaluate_equation(&alg, &ne.full, &f);
        if !rho.is_zero() && rho.p_valuation() < beta {
            return internal(format!("residual at step {beta} is not divisible by p^{beta}"));
        }
        let Some(q) = alg.div_p_pow(&rho, beta) else {
            return internal(format!("residual at step {beta} is not divisible by p^{beta}"));
        };
        let b = alg.neg(&alg.mul(alg.linearizer_inverse(), &q));
        let pb = ring.pow(ring.p(), beta as u64);
        f = alg.add(&f, &alg.scale(&b, pb));
        let growth = f.max_abs_exponent();
        if growth > cap {
            return internal(format!("Laurent support grew to |exponent| = {growth}, above the cap {cap}"));
        }
    }
    let rho = evaluate_equation(&alg, &ne.full, &f);
    if !rho.is_zero() {
        return internal("final residual does not vanish mod p^alpha");
    }
    if alg.y().is_trivial() && f.max_y_exponent() > 0 {
        return internal("negative powers of Y appeared although Y = 1");
    }
    Ok(LiftedRep { m, algebra: alg, f, equation_hash: Some(fnv1a(&ne.full.to_string())), truncation: None })
}

/// Full pipeline from a group type: hypothesis checks, equation, normalization, lift.
pub fn lift_group(t: &GroupType, p: u64, alpha: u32) -> Result<LiftedRep> {
    let ring = PrimePower::new(p, alpha)?;
    let mu = t.free_rank();
    if mu < 2 {
        return Err(Error::Hypothesis(format!("free rank mu = {mu} is below 2")));
    }
    let mup = t.p_rank(p);
    if mup != 0 {
        return Err(Error::Hypothesis(format!("mu_{p} = {mup} is not zero")));
    }
    let n = mu as u64 / (p - 1);
    let eq = derive_f_equation(&theta_coeffs(t)?);
    let ne = normalize_equation(&eq, &ring, n)?;
    lift(&ne, t.m())
}

/// Outcome of checking a representation against the oracle and the equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub truncation: usize,
    /// First `lambda` where the series differs from the oracle.
    pub oracle_mismatch: Option<usize>,
    /// First power of z where the equation residual is non-zero.
    pub residual_mismatch: Option<usize>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.oracle_mismatch.is_none() && self.residual_mismatch.is_none()
    }
}

/// Compares the first `order` series coefficients with the oracle and checks the residual of `eq`.
pub fn verify_lift(rep: &LiftedRep, t: &GroupType, eq: &NonlinearODE, order: usize) -> Result<VerifyReport> {
    verify_lift_with(rep, t, eq, order, order)
}

/// As `verify_lift`, with the oracle comparison stopped at `oracle_order`.
pub fn verify_lift_with(rep: &LiftedRep, t: &GroupType, eq: &NonlinearODE, order: usize, oracle_order: usize) -> Result<VerifyReport> {
    let ring = rep.ring();
    let series = rep.to_series(order + 1)?;
    let oracle_order = oracle_order.min(order);
    let oracle = f_direct(t, oracle_order)?;
    let oracle_mismatch = (1..=oracle_order).find(|&l| ring.reduce_big(&oracle.f[l]) != series[l]).or_else(|| (series[0] != 0).then_some(0));
    let sample = ring.scalar(0);
    let fs = TruncatedSeries::from_coeffs(series.iter().map(|&v| ModScalar::new(v, &ring)).collect(), order + 1, &sample);
    let res = eq.residual(&fs, |c| ModScalar::new(ring.reduce_big(c), &ring))?;
    let residual_mismatch = res.coeffs().iter().position(|c| c.value != 0);
    Ok(VerifyReport { truncation: order, oracle_mismatch, residual_mismatch })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::compute_type;
    use crate::io::parse_order_graph;

    fn gamma1() -> GroupType {
        compute_type(&parse_order_graph(include_str!("../fixtures/gamma1.json")).unwrap())
    }

    #[test]
    fn gamma1_mod_81() {
        let t = gamma1();
        let rep = lift_group(&t, 3, 4).unwrap();
        let ring = rep.ring();
        let want: [(i64, i64); 12] =
            [(15, 0), (27, 1), (69, 0), (9, 0), (42, 0), (27, 0), (39, 0), (27, 0), (66, 0), (72, 0), (12, 0), (0, 0)];
        for (i, &(a, b)) in want.iter().enumerate() {
            let e = YFraction::from_laurent(LaurentPoly::from_terms(ring, &[(1, a), (0, b)]));
            assert_eq!(rep.coeffs()[i], e, "coefficient of Phi^{i}");
        }
        assert!(rep.check_mod_p_shape());
        let eq = crate::ode::reduce_equation(&derive_f_equation(&theta_coeffs(&t).unwrap()), &ring);
        let report = verify_lift(&rep, &t, &eq, 60).unwrap();
        assert!(report.ok(), "{report:?}");
    }

    #[test]
    fn corrupted_rep_is_caught() {
        let t = gamma1();
        let mut rep = lift_group(&t, 3, 4).unwrap();
        let ring = rep.ring();
        let mut coeffs = rep.coeffs().to_vec();
        coeffs[3] = coeffs[3].add(&YFraction::monomial(ring, 27, 2), rep.algebra.y());
        rep.f = rep.algebra.element(coeffs).unwrap();
        let eq = crate::ode::reduce_equation(&derive_f_equation(&theta_coeffs(&t).unwrap()), &ring);
        let report = verify_lift(&rep, &t, &eq, 60).unwrap();
        assert!(report.oracle_mismatch.is_some_and(|l| l <= 60));
    }

    #[test]
    fn gamma2_and_hecke7() {
        let t = compute_type(&parse_order_graph(include_str!("../fixtures/gamma2.json")).unwrap());
        let rep = lift_group(&t, 2, 4).unwrap();
        let ring = rep.ring();
        let mut want = vec![(0i64, 0i64); 19];
        for (i, a, b) in [(0, 4, 0), (1, 0, 5), (2, 12, 2), (3, 0, 8), (4, 0, 12), (5, 0, 8), (8, 8, 0), (10, 8, 0), (16, 4, 0), (18, 12, 0)] {
            want[i] = (a, b);
        }
        for (i, &(a, b)) in want.iter().enumerate() {
            let e = YFraction::from_laurent(LaurentPoly::from_terms(ring, &[(1, a), (0, b)]));
            assert_eq!(rep.coeffs()[i], e, "coefficient of Phi^{i}");
        }
        let eq = crate::ode::reduce_equation(&derive_f_equation(&theta_coeffs(&t).unwrap()), &ring);
        assert!(verify_lift(&rep, &t, &eq, 60).unwrap().ok());
        let t = compute_type(&parse_order_graph(include_str!("../fixtures/hecke7.json")).unwrap());
        let rep = lift_group(&t, 7, 3).unwrap();
        assert_eq!(rep.mu(), 6);
        assert!(rep.f.max_y_exponent() > 0);
        let eq = crate::ode::reduce_equation(&derive_f_equation(&theta_coeffs(&t).unwrap()), &rep.ring());
        assert!(verify_lift(&rep, &t, &eq, 60).unwrap().ok());
    }

    #[test]
    fn hypothesis_failures() {
        let t = gamma1();
        assert_eq!(lift_group(&t, 5, 2).unwrap_err().exit_code(), 3);
        // C2 * C2 has mu = 1.
        let t2 = GroupType::new(2, [(1, 1), (2, -1)].into_iter().collect()).unwrap();
        assert_eq!(t2.free_rank(), 1);
        assert_eq!(lift_group(&t2, 2, 2).unwrap_err().exit_code(), 3);
        // The modular group has mu = 2 and mu_2 = 0, so it lifts.
        let t3 = compute_type(&crate::group::hecke_graph(3).unwrap());
        assert!(lift_group(&t3, 2, 3).is_ok());
    }
}
