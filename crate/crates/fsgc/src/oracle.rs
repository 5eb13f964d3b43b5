//! Exact rational computation of `theta`, `g_lambda` and `f_lambda` from a group type.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{internal, Result};
use crate::group::GroupType;
use crate::ring::modular::{binomial, gcd};

/// Coefficients of `sum_i theta_i z^i G^(i) - m G' = 0`; equivalently
/// `sum_i theta_i lambda^(i falling) = h(lambda)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaCoeffs {
    pub m: u64,
    pub mu: usize,
    pub theta: Vec<BigInt>,
}

impl ThetaCoeffs {
    /// `sum_i theta_i * lambda (lambda - 1) ... (lambda - i + 1)`.
    pub fn falling_sum(&self, lambda: i64) -> BigInt {
        let mut acc = BigInt::zero();
        let mut ff = BigInt::one();
        for (i, th) in self.theta.iter().enumerate() {
            acc += th * &ff;
            ff *= lambda - i as i64;
        }
        acc
    }
}

/// `g_0, g_1, ...` and `f_1, f_2, ...`; `f[0]` is a zero placeholder.
#[derive(Clone, Debug)]
pub struct HyperSequences {
    pub g: Vec<BigRational>,
    pub f: Vec<BigInt>,
}

/// `h(j) = m(j+1) prod_{kappa | m} prod_{gcd(m,k) = kappa} (jm + k)^zeta_kappa`.
///
/// The only possible negative power is `(jm + m)^-1`, which cancels `m(j+1)`.
pub fn h_value(t: &GroupType, j: i64) -> BigInt {
    let m = t.m();
    let mut acc = BigInt::one();
    let zm = t.zeta_at(m);
    if zm >= 0 {
        acc *= BigInt::from(m as i64 * (j + 1)).pow(zm as u32 + 1);
    }
    for k in 1..m {
        let z = t.zeta_at(gcd(m, k));
        if z > 0 {
            acc *= BigInt::from(j * m as i64 + k as i64).pow(z as u32);
        }
    }
    acc
}

/// Newton coefficients of `h`: `theta_i = Delta^i h(0) / i!`, of length `mu + 1`.
pub fn theta_coeffs(t: &GroupType) -> Result<ThetaCoeffs> {
    let mu = t.free_rank();
    if mu < 0 {
        return internal(format!("negative free rank {mu}"));
    }
    let mu = mu as usize;
    let mut diffs: Vec<BigInt> = (0..=mu as i64).map(|j| h_value(t, j)).collect();
    let mut theta = Vec::with_capacity(mu + 1);
    let mut fact = BigInt::one();
    for i in 0..=mu {
        if i > 0 {
            fact *= i;
            for j in 0..diffs.len() - 1 {
                diffs[j] = &diffs[j + 1] - &diffs[j];
            }
            diffs.pop();
        }
        let (q, r) = diffs[0].div_rem(&fact);
        if !r.is_zero() {
            return internal(format!("theta_{i} is not integral"));
        }
        theta.push(q);
    }
    // h has degree mu, so one more difference must vanish.
    let tail = h_value(t, mu as i64 + 1);
    let th = ThetaCoeffs { m: t.m(), mu, theta };
    if th.falling_sum(mu as i64 + 1) != tail {
        return internal("h is not a polynomial of degree mu");
    }
    Ok(th)
}

/// `g_0 = 1`, `m (lambda + 1) g_(lambda+1) = (sum theta_i lambda^(i falling)) g_lambda`.
pub fn g_sequence(th: &ThetaCoeffs, bound: usize) -> Vec<BigRational> {
    let mut g = vec![BigRational::one()];
    for l in 0..bound as i64 {
        let num = th.falling_sum(l);
        let den = BigInt::from(th.m as i64 * (l + 1));
        let next = &g[l as usize] * BigRational::new(num, den);
        g.push(next);
    }
    g
}

/// `f_lambda = m lambda g_lambda - sum_{1 <= k < lambda} g_k f_(lambda-k)` for `lambda <= bound`.
///
/// Works over integers: `G_l = g_l * m^l * l!` is integral and all divisions are exact.
pub fn f_direct(t: &GroupType, bound: usize) -> Result<HyperSequences> {
    let th = theta_coeffs(t)?;
    let m = BigInt::from(t.m());
    let mut big_g = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for l in 0..bound {
        big_g.push(&big_g[l] * th.falling_sum(l as i64));
        den.push(&den[l] * &m * (l + 1));
    }
    let mut f = vec![BigInt::zero()];
    for l in 1..=bound {
        // D_l / D_k = m^(l-k) l!/k!, built up from k = l downwards.
        let mut acc = &m * l * &big_g[l];
        let mut ratio = BigInt::one();
        for k in (1..l).rev() {
            ratio *= &m * (k + 1);
            acc -= &big_g[k] * &ratio * &f[l - k];
        }
        let (q, r) = acc.div_rem(&den[l]);
        if !r.is_zero() {
            return internal(format!("f_{l} is not integral"));
        }
        if q.is_negative() {
            return internal(format!("f_{l} is negative"));
        }
        f.push(q);
    }
    let g = big_g
        .into_iter()
        .zip(den)
        .map(|(a, d)| BigRational::new(a, d))
        .collect();
    Ok(HyperSequences { g, f })
}

/// Prediction of `f_lambda mod p` in the regime `mu_p = 0`:
/// `(-1)^(((mu-1) lambda + 1)/(p-1)) (1/lambda) C(mu lambda/(p-1), (lambda-1)/(p-1))`,
/// zero when the lower argument is not an integer.
pub fn mod_p_prediction(mu: u64, p: u64, lambda: u64) -> BigInt {
    let q = p - 1;
    if !(lambda - 1).is_multiple_of(q) {
        return BigInt::zero();
    }
    let n = mu / q;
    let b = binomial((n * lambda) as i64, ((lambda - 1) / q) as i64);
    let (v, r) = b.div_rem(&BigInt::from(lambda));
    debug_assert!(r.is_zero());
    if (((mu - 1) * lambda + 1) / q) % 2 == 1 {
        -v
    } else {
        v
    }
}
